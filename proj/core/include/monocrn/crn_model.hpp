#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "monocrn/linalg.hpp"
#include "monocrn/types.hpp"

namespace monocrn {

struct Species {
    std::string name;
    std::size_t index = 0;
};

/// Species index and its positive stoichiometric coefficient.
struct Term {
    std::size_t species = 0;
    int coeff = 1;

    friend bool operator==(const Term&, const Term&) = default;
};

/// One mass-action reaction. A reversible arrow is a single reaction whose
/// rate is the forward monomial minus the reverse monomial; k_reverse == 0
/// means irreversible.
struct Reaction {
    std::vector<Term> reactants;
    std::vector<Term> products;
    double k_forward = 1.0;
    double k_reverse = 0.0;
    bool reversible = false;

    bool irreversible() const noexcept { return !reversible; }
};

class ReactionNetwork {
public:
    /// Validates species/reaction invariants and builds the stoichiometry matrix.
    ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions);

    std::size_t n() const noexcept { return species_.size(); }
    std::size_t m() const noexcept { return reactions_.size(); }

    const std::vector<Species>& species() const noexcept { return species_; }
    const std::vector<Reaction>& reactions() const noexcept { return reactions_; }

    /// n x m, column j = products - reactants of reaction j.
    const Eigen::MatrixXi& gamma() const noexcept { return gamma_; }
    const Mat& gamma_real() const noexcept { return gamma_real_; }
    RationalMatrix gamma_exact() const { return RationalMatrix::from_integers(gamma_); }

    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Rate constants are named k<j> (forward) and k-<j> (reverse) with j the
    /// 1-based reaction index, e.g. k1, k-1, k2 for the futile cycle.
    std::vector<std::pair<std::string, double>> rate_constants() const;
    ReactionNetwork with_rate_constant(std::string_view name, double value) const;

    /// Text in the network file format that parses back to this network.
    std::string to_text() const;

private:
    std::vector<Species> species_;
    std::vector<Reaction> reactions_;
    Eigen::MatrixXi gamma_;
    Mat gamma_real_;
};

/// Parses the line-oriented network format:
///
///     # comment
///     species: P, Q, E          (optional; fixes the leading species order)
///     E + P <-> C ; kf=1, kr=1
///     C -> E + Q ; k=1
///     2 A -> B ; k=0.5
///
/// Species not listed in a `species:` line are appended in order of first
/// appearance. A side may be empty or `0` (creation/outflow).
ReactionNetwork parse_network(std::string_view text);

/// R_j(S) = kf * prod S_i^a_i - kr * prod S_i^b_i. Throws on negative
/// entries or a length mismatch.
Vec mass_action_rates(const ReactionNetwork& net, const Vec& s);

/// m x n matrix of partial derivatives dR_j/dS_i.
Mat rate_jacobian(const ReactionNetwork& net, const Vec& s);

/// Unchecked variants used inside vector fields, where integrator stages may
/// graze slightly outside the orthant.
namespace detail {
Vec rates_unchecked(const ReactionNetwork& net, const Vec& s);
Mat rate_jacobian_unchecked(const ReactionNetwork& net, const Vec& s);
}  // namespace detail

/// Exact basis of the left kernel of gamma (primitive integer vectors).
std::vector<RationalVector> conservation_laws(const ReactionNetwork& net);

/// Minimal semi-positive conservation laws (c >= 0, c'gamma = 0), the extreme
/// rays of the cone of nonnegative left-kernel vectors, computed by
/// Farkas/Fourier-Motzkin elimination.
std::vector<RationalVector> semipositive_conservation_laws(const ReactionNetwork& net);

/// Species bounded because some semi-positive conservation law covers them.
/// If every entry is true, every solution of dS/dt = gamma R(S) is bounded.
std::vector<bool> bounded_by_conservation(const ReactionNetwork& net);

}  // namespace monocrn
