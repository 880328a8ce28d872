#include "monocrn/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace monocrn {

namespace {

// Dormand & Prince (1980) 5(4) tableau; continuous extension from Hairer,
// Norsett & Wanner, "Solving ODEs I", dopri5.
namespace dp {
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;

constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // largest shrink: h / 5
constexpr double kFacMax = 10.0;  // largest growth: 10 h
constexpr double kBeta = 0.04;

bool all_finite(const Vec& x) { return x.allFinite(); }

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const IntegratorConfig& cfg) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = err(i) / sk;
        sum += r * r;
    }
    return err.size() ? std::sqrt(sum / static_cast<double>(err.size())) : 0.0;
}

double initial_step(const VectorField& f, const Vec& y0, const Vec& f0, double hmax,
                    const IntegratorConfig& cfg, std::size_t& evals) {
    double dnf = 0.0, dny = 0.0;
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0(i));
        dnf += (f0(i) / sk) * (f0(i) / sk);
        dny += (y0(i) / sk) * (y0(i) / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);
    const Vec f1 = f(y0 + h * f0);
    ++evals;
    double der2 = 0.0;
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
        const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0(i));
        der2 += ((f1(i) - f0(i)) / sk) * ((f1(i) - f0(i)) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, hmax});
}

}  // namespace

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw PreconditionError("IntegratorConfig: tolerances must be positive");
    if (!(min_step > 0.0) || !(min_step <= max_step))
        throw PreconditionError("IntegratorConfig: require 0 < min_step <= max_step");
    if (max_steps == 0) throw PreconditionError("IntegratorConfig: max_steps must be positive");
    if (initial_step < 0.0) throw PreconditionError("IntegratorConfig: initial_step must be nonnegative");
    if (!(stall_window >= 0.0) || !(stall_threshold >= 0.0))
        throw PreconditionError("IntegratorConfig: stall settings must be nonnegative");
}

std::string_view to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::completed: return "completed";
        case TrajectoryStatus::stalled_at_equilibrium: return "stalled-at-equilibrium";
        case TrajectoryStatus::step_failure: return "step-failure";
        case TrajectoryStatus::left_domain: return "left-domain";
    }
    return "unknown";
}

Vec Trajectory::at(double t) const {
    if (times_.empty() || t < times_.front() || t > times_.back())
        throw PreconditionError("Trajectory::at: time outside the integrated range");
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const auto k = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
    if (t == times_[k]) return states_[k];
    const Segment& seg = segments_[k];
    const double theta = (t - times_[k]) / seg.h;
    const double theta1 = 1.0 - theta;
    const auto& rc = seg.rcont;
    return rc[0] + theta * (rc[1] + theta1 * (rc[2] + theta * (rc[3] + theta1 * rc[4])));
}

Trajectory integrate(const VectorField& field, const Vec& x0, double t_end, const IntegratorConfig& cfg) {
    cfg.validate();
    require_size(x0.size(), field.dimension, "integrate");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw PreconditionError("integrate: t_end must be finite and >= 0");
    if (!field.in_domain(x0)) throw PreconditionError("integrate: initial state outside the domain");

    Trajectory traj;
    traj.times_.push_back(0.0);
    traj.states_.push_back(x0);
    auto& stats = traj.stats_;

    const auto f = [&](const Vec& x) {
        ++stats.evaluations;
        return field.eval(x);
    };

    Vec y = x0;
    Vec k1 = f(y);
    double t = 0.0;
    if (t_end == 0.0) return traj;

    const double hmax = std::min(cfg.max_step, t_end);
    double h = cfg.initial_step > 0.0 ? std::min(cfg.initial_step, hmax)
                                      : initial_step(field, y, k1, hmax, cfg, stats.evaluations);
    h = std::max(h, cfg.min_step);

    double facold = 1e-4;
    bool last_rejected = false;
    // Start time of the current run of small |f|; negative when not stalling.
    double stall_start = k1.norm() <= cfg.stall_threshold ? 0.0 : -1.0;

    const auto finish = [&](TrajectoryStatus s, std::string msg) {
        traj.status_ = s;
        traj.message_ = std::move(msg);
        return traj;
    };

    Vec k2, k3, k4, k5, k6, k7, y1, ytmp, err;
    while (t < t_end) {
        if (stats.accepted >= cfg.max_steps) {
            return finish(TrajectoryStatus::step_failure, "max_steps exceeded at t=" + std::to_string(t));
        }
        bool last = false;
        if (t + h >= t_end || t + 1.01 * h >= t_end) {
            h = t_end - t;
            last = true;
        }

        ytmp = y + h * dp::a21 * k1;
        k2 = f(ytmp);
        ytmp = y + h * (dp::a31 * k1 + dp::a32 * k2);
        k3 = f(ytmp);
        ytmp = y + h * (dp::a41 * k1 + dp::a42 * k2 + dp::a43 * k3);
        k4 = f(ytmp);
        ytmp = y + h * (dp::a51 * k1 + dp::a52 * k2 + dp::a53 * k3 + dp::a54 * k4);
        k5 = f(ytmp);
        ytmp = y + h * (dp::a61 * k1 + dp::a62 * k2 + dp::a63 * k3 + dp::a64 * k4 + dp::a65 * k5);
        k6 = f(ytmp);
        y1 = y + h * (dp::a71 * k1 + dp::a73 * k3 + dp::a74 * k4 + dp::a75 * k5 + dp::a76 * k6);
        k7 = f(y1);
        err = h * (dp::e1 * k1 + dp::e3 * k3 + dp::e4 * k4 + dp::e5 * k5 + dp::e6 * k6 + dp::e7 * k7);

        double errn = all_finite(y1) && all_finite(k7) ? error_norm(err, y, y1, cfg)
                                                       : std::numeric_limits<double>::infinity();
        if (std::isnan(errn)) errn = std::numeric_limits<double>::infinity();

        const double fac11 = std::isfinite(errn) ? std::pow(errn, 0.2 - kBeta * 0.75) : kFacMax;

        if (errn > 1.0) {
            ++stats.rejected;
            h /= std::min(1.0 / kFacMin, fac11 / kSafety);
            last_rejected = true;
            if (h < cfg.min_step) {
                return finish(TrajectoryStatus::step_failure,
                              "step size below min_step with unacceptable error at t=" + std::to_string(t));
            }
            continue;
        }

        if (!field.in_domain(y1)) {
            ++stats.domain_rejections;
            h *= 0.5;
            last_rejected = true;
            if (h < cfg.min_step) {
                return finish(TrajectoryStatus::left_domain, "trajectory reached the domain boundary at t=" +
                                                                 std::to_string(t));
            }
            continue;
        }

        // Accepted.
        ++stats.accepted;
        Trajectory::Segment seg;
        seg.h = h;
        const Vec ydiff = y1 - y;
        const Vec bspl = h * k1 - ydiff;
        seg.rcont[0] = y;
        seg.rcont[1] = ydiff;
        seg.rcont[2] = bspl;
        seg.rcont[3] = ydiff - h * k7 - bspl;
        seg.rcont[4] = h * (dp::d1 * k1 + dp::d3 * k3 + dp::d4 * k4 + dp::d5 * k5 + dp::d6 * k6 + dp::d7 * k7);

        const double t_new = last ? t_end : t + h;
        if (field.clamp) {
            const Vec before = y1;
            field.clamp(y1);
            if (y1 != before) k7 = f(y1);
        }
        traj.segments_.push_back(std::move(seg));
        traj.times_.push_back(t_new);
        traj.states_.push_back(y1);
        y = y1;
        k1 = k7;
        t = t_new;

        if (k1.norm() <= cfg.stall_threshold) {
            if (stall_start < 0.0) stall_start = t;
            if (cfg.stop_at_stall && t - stall_start >= cfg.stall_window) {
                return finish(TrajectoryStatus::stalled_at_equilibrium, "");
            }
        } else {
            stall_start = -1.0;
        }

        double fac = fac11 / std::pow(facold, kBeta);
        fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
        double h_new = h / fac;
        facold = std::max(errn, 1e-4);
        if (last_rejected) h_new = std::min(h_new, h);
        last_rejected = false;
        h = std::clamp(h_new, cfg.min_step, hmax);
    }
    return finish(TrajectoryStatus::completed, "");
}

IntegratorConfig fixed_step_config(double h) {
    if (!(h > 0.0)) throw PreconditionError("fixed_step_config: step must be positive");
    IntegratorConfig c;
    c.rel_tol = 1e300;
    c.abs_tol = 1e300;
    c.initial_step = h;
    c.max_step = h;
    c.min_step = std::min(c.min_step, h);
    return c;
}

Trajectory integrate_reverse(const VectorField& field, const Vec& x0, double t_back, const IntegratorConfig& cfg) {
    return integrate(field.negated(), x0, t_back, cfg);
}

std::optional<EquilibriumStall> detect_equilibrium(const Trajectory& traj, const VectorField& field,
                                                   const IntegratorConfig& cfg) {
    const auto& ts = traj.times();
    const auto& xs = traj.states();
    if (ts.empty()) return std::nullopt;

    std::vector<char> below(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) below[k] = field.eval(xs[k]).norm() <= cfg.stall_threshold;

    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (!below[k]) continue;
        if (ts[k] + cfg.stall_window > traj.t_end()) return std::nullopt;
        std::size_t j = k;
        while (j < ts.size() && ts[j] <= ts[k] + cfg.stall_window && below[j]) ++j;
        if (j < ts.size() && ts[j] <= ts[k] + cfg.stall_window) {
            k = j;  // a sample in the window is above threshold; resume after it
            continue;
        }
        // Refine the entry time between the previous (above) sample and k.
        double t_star = ts[k];
        if (k > 0) {
            double lo = ts[k - 1], hi = ts[k];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (field.eval(traj.at(mid)).norm() <= cfg.stall_threshold) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            t_star = hi;
        }
        const double t_final = std::min(t_star + cfg.stall_window, traj.t_end());
        return EquilibriumStall{t_star, traj.at(t_final)};
    }
    return std::nullopt;
}

void write_csv(std::ostream& out, const std::vector<double>& times, const std::vector<Vec>& states,
               const std::vector<std::string>& comments, const std::vector<std::string>& columns) {
    if (times.size() != states.size()) throw PreconditionError("write_csv: times/states size mismatch");
    const Eigen::Index d = states.empty() ? static_cast<Eigen::Index>(columns.size()) : states.front().size();
    if (!columns.empty() && static_cast<Eigen::Index>(columns.size()) != d)
        throw PreconditionError("write_csv: column count does not match the state dimension");
    for (const auto& c : comments) out << "# " << c << '\n';
    out << 't';
    for (Eigen::Index i = 0; i < d; ++i) {
        if (columns.empty()) out << ",x" << i + 1;
        else out << ',' << columns[static_cast<std::size_t>(i)];
    }
    out << '\n';
    char buf[32];
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", times[k]);
        out << buf;
        for (Eigen::Index i = 0; i < d; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", states[k](i));
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& comments,
               const std::vector<std::string>& columns) {
    write_csv(out, traj.times(), traj.states(), comments, columns);
}

}  // namespace monocrn
