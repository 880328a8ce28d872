#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monocrn/crn_model.hpp"
#include "monocrn/ode.hpp"
#include "monocrn/sampling.hpp"
#include "monocrn/vector_field.hpp"

namespace monocrn {

/// Concentrations in (-kBoundarySlack, 0) count as on the orthant boundary.
inline constexpr double kBoundarySlack = 1e-12;

/// Species dynamics S' = gamma R(S) on the nonnegative orthant. Accepted
/// integrator states have rounding-level negatives clamped to 0.
VectorField species_field(const ReactionNetwork& net);

/// Extent-of-reaction coordinates for a fixed base point sigma:
/// x' = f_sigma(x) = R(sigma + gamma x) on X_sigma = {x : sigma + gamma x >= 0}.
class ExtentSystem {
public:
    ExtentSystem(ReactionNetwork net, Vec sigma);

    const ReactionNetwork& network() const noexcept { return net_; }
    const Vec& sigma() const noexcept { return sigma_; }
    const VectorField& field() const noexcept { return field_; }
    Eigen::Index dimension() const noexcept { return field_.dimension; }

    /// sigma + gamma x.
    Vec species_state(const Vec& x) const;
    bool in_domain(const Vec& x) const { return field_.in_domain(x); }
    /// sigma + gamma x > 0 in every species that is not forced to zero on
    /// the whole class (relative interior).
    bool in_interior(const Vec& x) const;

    /// Species i with c'sigma = 0 for some semi-positive conservation law c
    /// having c_i > 0; they vanish on all of X_sigma.
    const std::vector<bool>& vanishing_species() const noexcept { return vanishing_; }

    /// Exact right kernel of gamma (translation directions).
    const std::vector<RationalVector>& kernel() const noexcept { return kernel_; }
    /// Positive unit vector spanning ker(gamma), when that kernel is a line
    /// through the positive orthant.
    const std::optional<Vec>& translation_direction() const noexcept { return direction_; }

    /// Box around 0 of half-width 0.5 * max(1, max sigma), projected onto
    /// {x : (gamma x)_i = 0 for vanishing species i} and intersected with the
    /// domain (or its relative interior).
    SamplingRegion sampling_region(bool interior = false) const;

private:
    ReactionNetwork net_;
    Vec sigma_;
    VectorField field_;
    std::vector<RationalVector> kernel_;
    std::optional<Vec> direction_;
    std::vector<bool> vanishing_;
    Mat face_projector_;
};

ExtentSystem build_extent_system(const ReactionNetwork& net, const Vec& sigma);

struct TranslationInvarianceCheck {
    bool verdict = false;
    double max_jv = 0.0;     // max |J(x) v|
    double max_shift = 0.0;  // max |f(x + lambda v) - f(x)|
    std::size_t samples = 0;
    std::size_t skipped = 0;  // translated point left the domain
    std::optional<Vec> witness;
};

/// Samples the region and measures J(x)v and f(x + lambda v) - f(x) for
/// lambda in [-2, 2]. Passes iff both are <= 1e-8 (1 + |f(x)|) everywhere.
TranslationInvarianceCheck check_translation_invariance(const VectorField& field, const Vec& v,
                                                        const SamplingRegion& region, std::size_t n_samples,
                                                        std::uint64_t seed);
TranslationInvarianceCheck check_translation_invariance(const ExtentSystem& sys, const Vec& v,
                                                        std::size_t n_samples, std::uint64_t seed);

struct CooperativityCheck {
    bool verdict = false;
    double worst_entry = 0.0;  // most negative off-diagonal entry seen
    std::size_t samples = 0;
    std::optional<Vec> witness;
};

/// Passes iff every off-diagonal Jacobian entry is >= -1e-10 at all samples.
CooperativityCheck check_cooperativity(const VectorField& field, const SamplingRegion& region,
                                       std::size_t n_samples, std::uint64_t seed);
/// Samples the relative interior of X_sigma.
CooperativityCheck check_cooperativity(const ExtentSystem& sys, std::size_t n_samples, std::uint64_t seed);

/// Digraph with an edge i -> j whenever |J_ij| > tol, i != j, is strongly
/// connected. A 1x1 matrix is vacuously irreducible.
bool is_irreducible(const Mat& jac, double tol = 1e-10);

struct IrreducibilityCheck {
    bool verdict = false;
    double fraction = 0.0;  // share of samples with a strongly connected digraph
    std::size_t samples = 0;
    std::optional<double> witness_time;  // first failing sample
    std::optional<Vec> witness;
};

/// Evaluates the Jacobian at `n_samples` evenly spaced times of `traj`.
/// Passes iff the sign digraph is strongly connected at >= 99% of them.
IrreducibilityCheck check_irreducibility(const VectorField& field, const Trajectory& traj, std::size_t n_samples);
IrreducibilityCheck check_irreducibility(const ExtentSystem& sys, const Trajectory& traj, std::size_t n_samples);

struct HypothesisOptions {
    std::size_t n_samples = 200;
    double horizon = 20.0;
    std::uint64_t seed = 42;
    IntegratorConfig integrator;
};

/// The hypotheses under which extent trajectories converge modulo v:
/// one-dimensional positive kernel, translation invariance along it,
/// cooperativity, irreducibility along a trajectory from x = 0, and
/// boundedness of species solutions by semi-positive conservation laws.
struct HypothesisReport {
    bool kernel_ok = false;
    std::size_t rank = 0;
    std::vector<RationalVector> kernel;
    std::optional<Vec> v;
    std::vector<RationalVector> conservation_laws;
    std::vector<RationalVector> semipositive_laws;
    std::vector<bool> species_bounded;
    bool bounded = false;
    std::optional<TranslationInvarianceCheck> translation;
    CooperativityCheck cooperative;
    IrreducibilityCheck irreducible;
    bool strongly_monotone = false;
    std::vector<std::string> notes;

    bool all_hold() const;
};

HypothesisReport analyze_hypotheses(const ExtentSystem& sys, const HypothesisOptions& opts = {});

}  // namespace monocrn
