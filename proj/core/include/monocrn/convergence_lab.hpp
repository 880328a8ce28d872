#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "monocrn/cone_order.hpp"
#include "monocrn/crn_model.hpp"
#include "monocrn/extent_system.hpp"
#include "monocrn/ode.hpp"
#include "monocrn/report.hpp"
#include "monocrn/sampling.hpp"
#include "monocrn/vector_field.hpp"

namespace monocrn {

/// The product field (x1, x2)' = (f(x1), f(x2)), so both members of a pair
/// share one step sequence. The domain requires both halves to be admissible.
VectorField pair_field(const VectorField& field);

/// Integrates a pair jointly and splits the result per sample time.
struct PairTrajectory {
    Trajectory joint;
    std::vector<Vec> first;
    std::vector<Vec> second;
};
PairTrajectory integrate_pair(const VectorField& field, const Vec& xi1, const Vec& xi2, double horizon,
                              const IntegratorConfig& cfg);

/// Checks phi_t(xi1) >= phi_t(xi2) at every stored time, and, for strictly
/// ordered pairs, phi_t(xi1) >> phi_t(xi2) (margin 1e-9) for
/// t >= strong_from_fraction * horizon.
VerificationReport verify_order_preservation(const VectorField& field, const OrthantOrder& order,
                                             const std::vector<PairSample>& pairs, double horizon,
                                             const IntegratorConfig& cfg, double strong_from_fraction = 0.1);
VerificationReport verify_order_preservation(const VectorField& field, const OrthantOrder& order,
                                             const SamplingRegion& region, std::size_t n_pairs, double horizon,
                                             const IntegratorConfig& cfg, std::uint64_t seed);

enum class Monotonicity { nonincreasing, nondecreasing };

struct GaugeCheckOptions {
    /// nonincreasing for a strongly monotone flow, nondecreasing for a flow
    /// that is strongly monotone in reverse time.
    Monotonicity direction = Monotonicity::nonincreasing;
    /// Slack = slack_factor * rel_tol * (1 + max |xi|).
    double slack_factor = 10.0;
    /// Required V(0) - V(horizon) for pairs whose difference is not along v
    /// (only checked for the nonincreasing direction).
    double min_gap = 1e-7;
    /// Pairs differing by lambda*v must keep V constant within this.
    double constant_tol = 1e-9;
    /// Stopping on the domain boundary is expected (reverse time).
    bool allow_domain_exit = false;
};

/// Tracks t -> V(phi_t(xi1) - phi_t(xi2)) on jointly integrated pairs.
VerificationReport verify_v_gauge_decrease(const VectorField& field, const OrthantOrder& order,
                                           const std::vector<PairSample>& pairs, double horizon,
                                           const IntegratorConfig& cfg, const GaugeCheckOptions& opts = {});

/// max over stored times of |phi_t(xi + lambda v) - phi_t(xi) - lambda v|,
/// compared with 100 (rel_tol |x(t)| + abs_tol).
VerificationReport verify_translation_flow(const VectorField& field, const Vec& v,
                                           const std::vector<std::pair<Vec, double>>& samples, double horizon,
                                           const IntegratorConfig& cfg);
VerificationReport verify_translation_flow(const VectorField& field, const Vec& v, const SamplingRegion& region,
                                           std::size_t n_samples, double horizon, const IntegratorConfig& cfg,
                                           std::uint64_t seed);

struct BoundednessResult {
    bool bounded = false;
    double sup_norm = 0.0;         // sup |pi_v x(t)|
    double growth_fraction = 0.0;  // (sup over all - sup over first half) / sup over all
    double trend_slope = 0.0;      // least-squares slope of |pi_v x(t)| on the last half
};

/// Heuristic: bounded iff the running sup of |pi_v x(t)| grows by < 1% over
/// the last half of the horizon.
BoundednessResult bounded_modulo_v(const Trajectory& traj, const Vec& v);

struct EquilibriumOptions {
    double max_time = 1e4;
    double stall_threshold = 1e-8;
    double stall_window = 5.0;
    double certify_tol = 1e-10;
    std::size_t max_newton_iterations = 50;
};

/// Projected equilibrium xi in v-perp with f(xi) = r v.
struct EquilibriumCertificate {
    Vec start;
    Vec xi;
    double r = 0.0;
    std::optional<Vec> zeta;  // sigma + gamma xi, for extent systems
    double projected_residual = 0.0;  // |(I - vv') f(xi)|
    double span_residual = 0.0;       // |f(xi) - r v|
    double stall_time = 0.0;
    std::size_t newton_iterations = 0;
};

/// Integrates the projected field from pi_v x0 until it stalls, then polishes
/// with Newton on v-perp (orthonormal basis, m-1 unknowns). Throws
/// NumericalError when no stall occurs or Newton fails to certify.
EquilibriumCertificate find_projected_equilibrium(const VectorField& field, const Vec& v, const Vec& x0,
                                                  const IntegratorConfig& cfg, const EquilibriumOptions& opts = {});
EquilibriumCertificate find_projected_equilibrium(const ExtentSystem& sys, const Vec& x0,
                                                  const IntegratorConfig& cfg, const EquilibriumOptions& opts = {});

/// Certifies each start and checks pairwise agreement (distance <= tol).
VerificationReport verify_unique_equilibrium(const VectorField& field, const Vec& v, const std::vector<Vec>& starts,
                                             const IntegratorConfig& cfg, const EquilibriumOptions& opts = {},
                                             double agreement_tol = 1e-6,
                                             std::vector<EquilibriumCertificate>* certificates = nullptr);

/// Starts drawn from the region and projected onto v-perp.
std::vector<Vec> draw_projected_starts(const SamplingRegion& region, const Vec& v, std::size_t count,
                                       std::uint64_t seed);

/// At a certified equilibrium: components of f(xi)/v agree within
/// `span_tol` relative, and the unprojected orbit is affine,
/// phi_t(xi) = xi + t f(xi) within `orbit_tol` over [0, horizon].
VerificationReport verify_equilibrium_orbit(const VectorField& field, const Vec& v, const EquilibriumCertificate& cert,
                                            double horizon, const IntegratorConfig& cfg, double span_tol = 1e-8,
                                            double orbit_tol = 1e-7);

/// Integrates S' = gamma R(S) from sigma + gamma x0 and x' = f_sigma(x) from x0
/// independently and compares S(t) with sigma + gamma x(t).
VerificationReport verify_extent_species_consistency(const ReactionNetwork& net, const Vec& sigma, const Vec& x0,
                                                     double horizon, const IntegratorConfig& cfg);

/// True when rho - sigma lies in the image of gamma (least-squares residual
/// at most 1e-9 max(1, |rho - sigma|)).
bool in_stoichiometric_class(const ReactionNetwork& net, const Vec& sigma, const Vec& rho);

struct ClassConvergenceOptions {
    double max_time = 1e4;
    double stall_threshold = 1e-8;
    double stall_window = 5.0;
    double agreement_tol = 1e-5;
    EquilibriumOptions equilibrium;
};

/// Simulates the species system from each rho in the class of sigma and
/// compares the terminal states with zeta = sigma + gamma xi. Throws
/// PreconditionError for rho outside the class or with negative entries.
VerificationReport stoichiometric_class_convergence(const ReactionNetwork& net, const Vec& sigma,
                                                    const std::vector<Vec>& rhos, const IntegratorConfig& cfg,
                                                    const ClassConvergenceOptions& opts = {},
                                                    EquilibriumCertificate* certificate = nullptr);

/// rho = sigma + gamma a for `count` random small a keeping rho >= 0.
std::vector<Vec> draw_class_members(const ReactionNetwork& net, const Vec& sigma, std::size_t count,
                                    std::uint64_t seed, double scale = 0.2);

/// Futile-cycle network outside the strongly monotone set (E + C = 0 or
/// F + D = 0): the species trajectory must stall, and P (resp. Q) must be
/// nondecreasing within 1e-10 per step. Requires species P, Q, E, F, C, D.
VerificationReport degenerate_case_convergence(const ReactionNetwork& net, const Vec& sigma,
                                               const IntegratorConfig& cfg, const ClassConvergenceOptions& opts = {});

}  // namespace monocrn
