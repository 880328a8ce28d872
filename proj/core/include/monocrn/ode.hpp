#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monocrn/types.hpp"
#include "monocrn/vector_field.hpp"

namespace monocrn {

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double min_step = 1e-12;
    std::size_t max_steps = 1'000'000;
    /// 0 selects the initial step automatically.
    double initial_step = 0.0;
    /// Equilibrium stall: |f(x(t))| <= stall_threshold for stall_window time units.
    double stall_window = 1.0;
    double stall_threshold = 1e-9;
    /// Stop integrating as soon as a stall is observed.
    bool stop_at_stall = false;

    /// Throws PreconditionError when an invariant is violated.
    void validate() const;
};

/// Constant step h (the final step is shortened to land on t_end): the
/// tolerances are set so that no step is ever rejected for error.
IntegratorConfig fixed_step_config(double h);

enum class TrajectoryStatus { completed, stalled_at_equilibrium, step_failure, left_domain };

std::string_view to_string(TrajectoryStatus s);

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t domain_rejections = 0;
    std::size_t evaluations = 0;
};

/// Accepted integrator steps with a continuous (dense) interpolant.
///
/// For reverse-time integration `times` are elapsed backward time, so they
/// are increasing in both directions.
class Trajectory {
public:
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<Vec>& states() const noexcept { return states_; }
    std::size_t size() const noexcept { return times_.size(); }
    Eigen::Index dimension() const noexcept { return states_.empty() ? 0 : states_.front().size(); }

    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    const Vec& front() const { return states_.front(); }
    const Vec& back() const { return states_.back(); }

    TrajectoryStatus status() const noexcept { return status_; }
    const std::string& message() const noexcept { return message_; }
    const IntegrationStats& stats() const noexcept { return stats_; }

    /// Dense evaluation; exact at stored times. Throws outside [t_begin, t_end].
    Vec at(double t) const;

private:
    friend Trajectory integrate(const VectorField&, const Vec&, double, const IntegratorConfig&);

    // Dormand-Prince continuous extension coefficients for one step.
    struct Segment {
        double h;
        std::array<Vec, 5> rcont;
    };

    std::vector<double> times_;
    std::vector<Vec> states_;
    std::vector<Segment> segments_;
    TrajectoryStatus status_ = TrajectoryStatus::completed;
    std::string message_;
    IntegrationStats stats_;
};

/// Dormand-Prince 5(4) with PI step-size control and dense output.
///
/// Steps whose endpoint fails the field's domain test are retried with a
/// halved step; below `min_step` the trajectory ends with status left_domain.
/// `t_end` may be 0, which yields the single initial sample.
Trajectory integrate(const VectorField& field, const Vec& x0, double t_end, const IntegratorConfig& cfg = {});

/// Integrates x' = -f(x) for `t_back` time units.
Trajectory integrate_reverse(const VectorField& field, const Vec& x0, double t_back,
                             const IntegratorConfig& cfg = {});

struct EquilibriumStall {
    double time;
    Vec state;
};

/// First time t* after which |f(x(t))| <= stall_threshold over a whole
/// stall_window (checked at stored samples, crossing refined by bisection on
/// the dense output). The returned state is x(t* + stall_window).
std::optional<EquilibriumStall> detect_equilibrium(const Trajectory& traj, const VectorField& field,
                                                   const IntegratorConfig& cfg);

/// Writes a header `t,<columns>` (default x1,...,xd) followed by one row per
/// sample (%.17g). Each entry of `comments` becomes a leading `# ...` line.
void write_csv(std::ostream& out, const std::vector<double>& times, const std::vector<Vec>& states,
               const std::vector<std::string>& comments = {}, const std::vector<std::string>& columns = {});
void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& comments = {},
               const std::vector<std::string>& columns = {});

}  // namespace monocrn
