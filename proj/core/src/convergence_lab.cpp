#include "monocrn/convergence_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "monocrn/linalg.hpp"

namespace monocrn {

namespace {

double inf_norm(const Vec& x) { return x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0; }

double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Witness make_witness(std::size_t sample, double time, std::string quantity, double value,
                     std::vector<std::pair<std::string, Vec>> points = {}) {
    Witness w;
    w.sample = sample;
    w.time = time;
    w.quantity = std::move(quantity);
    w.value = value;
    w.points = std::move(points);
    return w;
}

std::string status_text(const Trajectory& t) {
    std::string s(to_string(t.status()));
    if (!t.message().empty()) s += ": " + t.message();
    return s;
}

}  // namespace

VectorField pair_field(const VectorField& field) {
    const Eigen::Index d = field.dimension;
    VectorField out;
    out.dimension = 2 * d;
    out.eval = [f = field.eval, d](const Vec& z) -> Vec {
        Vec r(2 * d);
        r.head(d) = f(z.head(d));
        r.tail(d) = f(z.tail(d));
        return r;
    };
    if (field.jac) {
        out.jac = [j = field.jac, d](const Vec& z) -> Mat {
            Mat r = Mat::Zero(2 * d, 2 * d);
            r.topLeftCorner(d, d) = j(z.head(d));
            r.bottomRightCorner(d, d) = j(z.tail(d));
            return r;
        };
    }
    if (field.domain_test) {
        out.domain_test = [t = field.domain_test, d](const Vec& z) {
            return t(z.head(d)) && t(z.tail(d));
        };
    }
    if (field.clamp) {
        out.clamp = [c = field.clamp, d](Vec& z) {
            Vec a = z.head(d);
            Vec b = z.tail(d);
            c(a);
            c(b);
            z.head(d) = a;
            z.tail(d) = b;
        };
    }
    return out;
}

PairTrajectory integrate_pair(const VectorField& field, const Vec& xi1, const Vec& xi2, double horizon,
                              const IntegratorConfig& cfg) {
    require_size(xi1.size(), field.dimension, "integrate_pair: xi1");
    require_size(xi2.size(), field.dimension, "integrate_pair: xi2");
    const Eigen::Index d = field.dimension;
    Vec z0(2 * d);
    z0.head(d) = xi1;
    z0.tail(d) = xi2;
    PairTrajectory out{integrate(pair_field(field), z0, horizon, cfg), {}, {}};
    out.first.reserve(out.joint.size());
    out.second.reserve(out.joint.size());
    for (const auto& z : out.joint.states()) {
        out.first.emplace_back(z.head(d));
        out.second.emplace_back(z.tail(d));
    }
    return out;
}

VerificationReport verify_order_preservation(const VectorField& field, const OrthantOrder& order,
                                             const std::vector<PairSample>& pairs, double horizon,
                                             const IntegratorConfig& cfg, double strong_from_fraction) {
    require_size(order.dimension(), field.dimension, "verify_order_preservation");
    VerificationReport rep;
    rep.test = "order-preservation";
    rep.n_samples = pairs.size();
    const double strong_from = strong_from_fraction * horizon;
    std::size_t strict_pairs = 0;

    for (const auto& p : pairs) {
        const std::vector<std::pair<std::string, Vec>> pts{{"xi1", p.xi1}, {"xi2", p.xi2}};
        if (!field.in_domain(p.xi1) || !field.in_domain(p.xi2)) {
            rep.fail(make_witness(p.index, 0.0, "initial state outside domain", 0.0, pts));
            continue;
        }
        const auto pt = integrate_pair(field, p.xi1, p.xi2, horizon, cfg);
        if (pt.joint.status() != TrajectoryStatus::completed) {
            rep.fail(make_witness(p.index, pt.joint.t_end(), "integration " + status_text(pt.joint), 0.0, pts));
            continue;
        }
        const bool strict = order.lt(p.xi2, p.xi1);
        if (strict) ++strict_pairs;
        const auto& ts = pt.joint.times();
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double gap = order.min_signed_gap(pt.second[k], pt.first[k]);
            rep.metric_min("min_weak_gap", gap);
            if (gap < -kOrderSlack) {
                rep.violation(-gap);
                auto pts2 = pts;
                pts2.emplace_back("phi_xi1", pt.first[k]);
                pts2.emplace_back("phi_xi2", pt.second[k]);
                rep.fail(make_witness(p.index, ts[k], "order gap min_i s_i(phi1-phi2)_i", gap, pts2));
                break;
            }
            if (strict && ts[k] >= strong_from) {
                rep.metric_min("min_strong_gap", gap);
                if (gap <= kOrderMargin) {
                    rep.violation(kOrderMargin - gap);
                    rep.fail(make_witness(p.index, ts[k], "interior order gap (needs > 1e-9)", gap, pts));
                    break;
                }
            }
        }
    }
    rep.metrics["strict_pairs"] = static_cast<double>(strict_pairs);
    return rep;
}

VerificationReport verify_order_preservation(const VectorField& field, const OrthantOrder& order,
                                             const SamplingRegion& region, std::size_t n_pairs, double horizon,
                                             const IntegratorConfig& cfg, std::uint64_t seed) {
    const auto pairs = draw_ordered_pairs(region, order.signs(), n_pairs, seed);
    return verify_order_preservation(field, order, pairs, horizon, cfg);
}

VerificationReport verify_v_gauge_decrease(const VectorField& field, const OrthantOrder& order,
                                           const std::vector<PairSample>& pairs, double horizon,
                                           const IntegratorConfig& cfg, const GaugeCheckOptions& opts) {
    require_size(order.dimension(), field.dimension, "verify_v_gauge_decrease");
    const bool decreasing = opts.direction == Monotonicity::nonincreasing;
    VerificationReport rep;
    rep.test = decreasing ? "v-decrease" : "v-increase-reverse";
    rep.n_samples = pairs.size();
    const Projector proj(order.v());
    std::size_t n_along = 0, n_strict = 0;

    for (const auto& p : pairs) {
        const std::vector<std::pair<std::string, Vec>> pts{{"xi1", p.xi1}, {"xi2", p.xi2}};
        if (!field.in_domain(p.xi1) || !field.in_domain(p.xi2)) {
            rep.fail(make_witness(p.index, 0.0, "initial state outside domain", 0.0, pts));
            continue;
        }
        const auto pt = integrate_pair(field, p.xi1, p.xi2, horizon, cfg);
        const auto status = pt.joint.status();
        const bool ok_status = status == TrajectoryStatus::completed ||
                               (opts.allow_domain_exit && status == TrajectoryStatus::left_domain);
        if (!ok_status) {
            rep.fail(make_witness(p.index, pt.joint.t_end(), "integration " + status_text(pt.joint), 0.0, pts));
            continue;
        }
        rep.metric_min("min_time_reached", pt.joint.t_end());

        const double scale = 1.0 + std::max(inf_norm(p.xi1), inf_norm(p.xi2));
        const double slack = opts.slack_factor * cfg.rel_tol * scale;
        const auto& ts = pt.joint.times();
        std::vector<double> gauge(ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) gauge[k] = order.gauge(pt.first[k] - pt.second[k]);

        double running = gauge[0];
        for (std::size_t k = 1; k < ts.size(); ++k) {
            const double excess = decreasing ? gauge[k] - running : running - gauge[k];
            rep.metric_max("max_monotonicity_excess", excess);
            if (excess > slack) {
                rep.violation(excess - slack);
                rep.fail(make_witness(p.index, ts[k], decreasing ? "V increased by" : "V decreased by", excess, pts));
                break;
            }
            running = decreasing ? std::min(running, gauge[k]) : std::max(running, gauge[k]);
        }

        const bool along_v = proj.apply(p.xi1 - p.xi2).norm() <= 1e-12 * scale;
        if (along_v) {
            ++n_along;
            double dev = 0.0;
            for (double g : gauge) dev = std::max(dev, std::abs(g - gauge[0]));
            rep.metric_max("max_constant_deviation", dev);
            if (dev > opts.constant_tol) {
                rep.violation(dev - opts.constant_tol);
                rep.fail(make_witness(p.index, ts.back(), "V drift for a difference along v", dev, pts));
            }
        } else if (decreasing) {
            ++n_strict;
            const double gap = gauge.front() - gauge.back();
            rep.metric_min("min_gap", gap);
            if (!(gap > opts.min_gap)) {
                rep.violation(opts.min_gap - gap);
                rep.fail(make_witness(p.index, ts.back(), "V(0) - V(T) not above min_gap", gap, pts));
            }
        }
    }
    rep.metrics["pairs_along_v"] = static_cast<double>(n_along);
    rep.metrics["pairs_strict"] = static_cast<double>(n_strict);
    return rep;
}

VerificationReport verify_translation_flow(const VectorField& field, const Vec& v,
                                           const std::vector<std::pair<Vec, double>>& samples, double horizon,
                                           const IntegratorConfig& cfg) {
    require_size(v.size(), field.dimension, "verify_translation_flow");
    const Vec unit = v.normalized();
    VerificationReport rep;
    rep.test = "translation-flow";
    rep.n_samples = samples.size();
    rep.metrics["max_discrepancy"] = 0.0;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& [xi, lambda] = samples[i];
        const Vec shifted = xi + lambda * unit;
        const std::vector<std::pair<std::string, Vec>> pts{{"xi", xi}};
        if (!field.in_domain(xi) || !field.in_domain(shifted)) {
            rep.fail(make_witness(i, 0.0, "sample outside domain after translation", lambda, pts));
            continue;
        }
        const Trajectory a = integrate(field, xi, horizon, cfg);
        const Trajectory b = integrate(field, shifted, horizon, cfg);
        if (a.status() != TrajectoryStatus::completed || b.status() != TrajectoryStatus::completed) {
            const Trajectory& bad = a.status() != TrajectoryStatus::completed ? a : b;
            rep.fail(make_witness(i, bad.t_end(), "integration " + status_text(bad), lambda, pts));
            continue;
        }
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double t = a.times()[k];
            const Vec xb = b.at(t);
            const double disc = (xb - a.states()[k] - lambda * unit).norm();
            const double tol = 100.0 * (cfg.rel_tol * std::max(inf_norm(a.states()[k]), inf_norm(xb)) + cfg.abs_tol);
            rep.metric_max("max_discrepancy", disc);
            if (disc > tol) {
                rep.violation(disc - tol);
                rep.fail(make_witness(i, t, "|phi(xi+lambda v) - phi(xi) - lambda v|", disc, pts));
                break;
            }
        }
    }
    return rep;
}

VerificationReport verify_translation_flow(const VectorField& field, const Vec& v, const SamplingRegion& region,
                                           std::size_t n_samples, double horizon, const IntegratorConfig& cfg,
                                           std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::pair<Vec, double>> samples;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Vec xi = region.draw(rng);
        double lambda = uniform(rng, -2.0, 2.0);
        samples.emplace_back(std::move(xi), lambda);
    }
    return verify_translation_flow(field, v, samples, horizon, cfg);
}

BoundednessResult bounded_modulo_v(const Trajectory& traj, const Vec& v) {
    BoundednessResult out;
    if (traj.size() == 0) return out;
    const Projector proj(v);
    const auto& ts = traj.times();
    const double t_mid = traj.t_begin() + 0.5 * (traj.t_end() - traj.t_begin());

    double sup_first = 0.0;
    std::vector<double> tail_t, tail_p;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double p = proj.apply(traj.states()[k]).norm();
        out.sup_norm = std::max(out.sup_norm, p);
        if (ts[k] <= t_mid) sup_first = std::max(sup_first, p);
        if (ts[k] >= t_mid) {
            tail_t.push_back(ts[k]);
            tail_p.push_back(p);
        }
    }
    out.growth_fraction = out.sup_norm > 0.0 ? (out.sup_norm - sup_first) / out.sup_norm : 0.0;
    out.bounded = out.growth_fraction < 0.01;

    if (tail_t.size() >= 2) {
        const double n = static_cast<double>(tail_t.size());
        double mt = 0.0, mp = 0.0;
        for (std::size_t k = 0; k < tail_t.size(); ++k) {
            mt += tail_t[k] / n;
            mp += tail_p[k] / n;
        }
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < tail_t.size(); ++k) {
            num += (tail_t[k] - mt) * (tail_p[k] - mp);
            den += (tail_t[k] - mt) * (tail_t[k] - mt);
        }
        out.trend_slope = den > 0.0 ? num / den : 0.0;
    }
    return out;
}

EquilibriumCertificate find_projected_equilibrium(const VectorField& field, const Vec& v, const Vec& x0,
                                                  const IntegratorConfig& cfg, const EquilibriumOptions& opts) {
    require_size(v.size(), field.dimension, "find_projected_equilibrium: v");
    require_size(x0.size(), field.dimension, "find_projected_equilibrium: x0");
    const Projector proj(v);
    const Vec& unit = proj.v();
    const Vec start = proj.apply(x0);
    if (!field.in_domain(start)) throw PreconditionError("find_projected_equilibrium: projected start outside domain");

    IntegratorConfig c = cfg;
    c.stop_at_stall = true;
    c.stall_threshold = opts.stall_threshold;
    c.stall_window = opts.stall_window;
    const Trajectory traj = integrate(projected_field(field, unit), start, opts.max_time, c);
    if (traj.status() != TrajectoryStatus::stalled_at_equilibrium) {
        throw NumericalError("find_projected_equilibrium: projected trajectory did not stall (" + status_text(traj) +
                             ", t=" + std::to_string(traj.t_end()) + ")");
    }

    const auto residual = [&](const Vec& x) { return proj.apply(field.eval(x)).norm(); };
    const Mat basis = orthonormal_complement(unit);
    Vec xi = proj.apply(traj.back());
    double res = residual(xi);
    std::size_t iterations = 0;
    while (res > 1e-3 * opts.certify_tol && iterations < opts.max_newton_iterations) {
        const Vec g = basis.transpose() * field.eval(xi);
        const Mat jac = basis.transpose() * field.jacobian(xi) * basis;
        const Vec delta = jac.colPivHouseholderQr().solve(-g);
        if (!delta.allFinite()) break;
        bool improved = false;
        double step = 1.0;
        Vec cand;
        for (int ls = 0; ls < 30; ++ls, step *= 0.5) {
            cand = proj.apply(xi + step * (basis * delta));
            if (field.in_domain(cand) && residual(cand) < res) {
                improved = true;
                break;
            }
        }
        if (!improved) break;
        xi = cand;
        res = residual(xi);
        ++iterations;
    }
    if (!(res <= opts.certify_tol)) {
        std::string last;
        for (Eigen::Index i = 0; i < xi.size(); ++i) last += (i ? "," : "") + std::to_string(xi(i));
        throw NumericalError("find_projected_equilibrium: Newton polish did not certify (residual " +
                             std::to_string(res) + ", last iterate [" + last + "])");
    }

    EquilibriumCertificate cert;
    cert.start = start;
    cert.xi = xi;
    const Vec fx = field.eval(xi);
    cert.r = unit.dot(fx);
    cert.projected_residual = res;
    cert.span_residual = (fx - cert.r * unit).norm();
    cert.stall_time = traj.t_end();
    cert.newton_iterations = iterations;
    return cert;
}

EquilibriumCertificate find_projected_equilibrium(const ExtentSystem& sys, const Vec& x0, const IntegratorConfig& cfg,
                                                  const EquilibriumOptions& opts) {
    const auto& v = sys.translation_direction();
    if (!v) throw PreconditionError("find_projected_equilibrium: kernel of gamma is not spanned by a positive vector");
    EquilibriumCertificate cert = find_projected_equilibrium(sys.field(), *v, x0, cfg, opts);
    Vec zeta = sys.species_state(cert.xi);
    for (Eigen::Index i = 0; i < zeta.size(); ++i) {
        if (zeta(i) < -1e-9) throw NumericalError("find_projected_equilibrium: zeta has a negative entry");
        if (zeta(i) < 0.0) zeta(i) = 0.0;
    }
    cert.zeta = zeta;
    return cert;
}

std::vector<Vec> draw_projected_starts(const SamplingRegion& region, const Vec& v, std::size_t count,
                                       std::uint64_t seed) {
    Rng rng(seed);
    const Projector proj(v);
    std::vector<Vec> out;
    while (out.size() < count) {
        const Vec x = proj.apply(region.draw(rng));
        if (region.contains(x)) out.push_back(x);
    }
    return out;
}

VerificationReport verify_unique_equilibrium(const VectorField& field, const Vec& v, const std::vector<Vec>& starts,
                                             const IntegratorConfig& cfg, const EquilibriumOptions& opts,
                                             double agreement_tol, std::vector<EquilibriumCertificate>* certificates) {
    VerificationReport rep;
    rep.test = "unique-equilibrium";
    rep.n_samples = starts.size();
    std::vector<std::pair<std::size_t, EquilibriumCertificate>> certs;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        try {
            certs.emplace_back(i, find_projected_equilibrium(field, v, starts[i], cfg, opts));
        } catch (const NumericalError& e) {
            rep.fail(make_witness(i, std::numeric_limits<double>::quiet_NaN(), std::string("certificate failure: ") + e.what(),
                                  0.0, {{"start", starts[i]}}));
        }
    }
    double diameter = 0.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t a = 0; a < certs.size(); ++a) {
        rep.metric_max("max_projected_residual", certs[a].second.projected_residual);
        for (std::size_t b = a + 1; b < certs.size(); ++b) {
            const double d = (certs[a].second.xi - certs[b].second.xi).norm();
            if (d > diameter) {
                diameter = d;
                bi = a;
                bj = b;
            }
        }
    }
    rep.metrics["diameter"] = diameter;
    if (diameter > agreement_tol) {
        rep.violation(diameter - agreement_tol);
        for (std::size_t which : {bi, bj}) {
            const auto& [idx, c] = certs[which];
            rep.fail(make_witness(idx, c.stall_time, "distinct projected equilibrium (pair distance)", diameter,
                                  {{"start", c.start}, {"xi", c.xi}}));
        }
    }
    if (certificates) {
        certificates->clear();
        for (auto& [i, c] : certs) certificates->push_back(std::move(c));
    }
    return rep;
}

VerificationReport verify_equilibrium_orbit(const VectorField& field, const Vec& v, const EquilibriumCertificate& cert,
                                            double horizon, const IntegratorConfig& cfg, double span_tol,
                                            double orbit_tol) {
    VerificationReport rep;
    rep.test = "equilibrium-orbit";
    rep.n_samples = 1;
    const Vec unit = v.normalized();
    const Vec fx = field.eval(cert.xi);

    Vec ratio = fx.array() / unit.array();
    const double spread = ratio.maxCoeff() - ratio.minCoeff();
    const double denom = std::max(ratio.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double rel_spread = spread / denom;
    rep.metrics["span_relative_spread"] = rel_spread;
    if (spread > span_tol * denom) {
        rep.violation(rel_spread - span_tol);
        rep.fail(make_witness(0, 0.0, "relative spread of f(xi)/v", rel_spread, {{"xi", cert.xi}, {"f_xi", fx}}));
    }

    const Trajectory traj = integrate(field, cert.xi, horizon, cfg);
    if (traj.status() != TrajectoryStatus::completed) {
        rep.fail(make_witness(0, traj.t_end(), "integration " + status_text(traj), 0.0, {{"xi", cert.xi}}));
        return rep;
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double dev = (traj.states()[k] - (cert.xi + traj.times()[k] * fx)).norm();
        worst = std::max(worst, dev);
    }
    rep.metrics["max_affine_deviation"] = worst;
    if (worst > orbit_tol) {
        rep.violation(worst - orbit_tol);
        rep.fail(make_witness(0, traj.t_end(), "|phi_t(xi) - xi - t f(xi)|", worst, {{"xi", cert.xi}}));
    }
    return rep;
}

VerificationReport verify_extent_species_consistency(const ReactionNetwork& net, const Vec& sigma, const Vec& x0,
                                                     double horizon, const IntegratorConfig& cfg) {
    const ExtentSystem sys(net, sigma);
    require_size(x0.size(), sys.dimension(), "verify_extent_species_consistency: x0");
    if (!sys.in_domain(x0)) throw PreconditionError("verify_extent_species_consistency: sigma + gamma x0 must be >= 0");

    VerificationReport rep;
    rep.test = "extent-species-consistency";
    rep.n_samples = 1;
    Vec s0 = sys.species_state(x0);
    for (Eigen::Index i = 0; i < s0.size(); ++i) s0(i) = std::max(s0(i), 0.0);

    const Trajectory ts = integrate(species_field(net), s0, horizon, cfg);
    const Trajectory tx = integrate(sys.field(), x0, horizon, cfg);
    for (const Trajectory* t : {&ts, &tx}) {
        if (t->status() != TrajectoryStatus::completed) {
            rep.fail(make_witness(0, t->t_end(), "integration " + status_text(*t), 0.0, {{"x0", x0}}));
            return rep;
        }
    }
    rep.metrics["max_deviation"] = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double t = ts.times()[k];
        const Vec x = tx.at(t);
        const double dev = inf_norm(ts.states()[k] - sys.species_state(x));
        const double scale = std::max({1.0, inf_norm(ts.states()[k]), inf_norm(x)});
        const double tol = 100.0 * (cfg.rel_tol * scale + cfg.abs_tol);
        rep.metric_max("max_deviation", dev);
        if (dev > tol) {
            rep.violation(dev - tol);
            rep.fail(make_witness(0, t, "|S(t) - sigma - gamma x(t)|", dev, {{"x0", x0}}));
            break;
        }
    }
    return rep;
}

bool in_stoichiometric_class(const ReactionNetwork& net, const Vec& sigma, const Vec& rho) {
    require_size(sigma.size(), static_cast<Eigen::Index>(net.n()), "in_stoichiometric_class: sigma");
    require_size(rho.size(), static_cast<Eigen::Index>(net.n()), "in_stoichiometric_class: rho");
    const Vec d = rho - sigma;
    const Mat& g = net.gamma_real();
    const Vec a = g.colPivHouseholderQr().solve(d);
    return (g * a - d).norm() <= 1e-9 * std::max(1.0, d.norm());
}

std::vector<Vec> draw_class_members(const ReactionNetwork& net, const Vec& sigma, std::size_t count,
                                    std::uint64_t seed, double scale) {
    Rng rng(seed);
    std::vector<Vec> out;
    const auto m = static_cast<Eigen::Index>(net.m());
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 1'000'000) throw NumericalError("draw_class_members: no nonnegative member found");
        Vec a(m);
        for (Eigen::Index j = 0; j < m; ++j) a(j) = uniform(rng, -scale, scale);
        const Vec rho = sigma + net.gamma_real() * a;
        if ((rho.array() >= 0.0).all()) out.push_back(rho);
    }
    return out;
}

VerificationReport stoichiometric_class_convergence(const ReactionNetwork& net, const Vec& sigma,
                                                    const std::vector<Vec>& rhos, const IntegratorConfig& cfg,
                                                    const ClassConvergenceOptions& opts,
                                                    EquilibriumCertificate* certificate) {
    const ExtentSystem sys(net, sigma);
    for (const auto& rho : rhos) {
        require_size(rho.size(), static_cast<Eigen::Index>(net.n()), "stoichiometric_class_convergence: rho");
        if (!(rho.array() >= 0.0).all())
            throw PreconditionError("stoichiometric_class_convergence: rho has a negative entry");
        if (!in_stoichiometric_class(net, sigma, rho))
            throw PreconditionError("stoichiometric_class_convergence: rho - sigma is not in the image of gamma");
    }

    VerificationReport rep;
    rep.test = "class-convergence";
    rep.n_samples = rhos.size();
    const EquilibriumCertificate cert = find_projected_equilibrium(sys, Vec::Zero(sys.dimension()), cfg, opts.equilibrium);
    const Vec& zeta = *cert.zeta;
    if (certificate) *certificate = cert;

    rep.metrics["max_conservation_defect"] = 0.0;
    for (const auto& c : conservation_laws(net)) {
        const Vec cd = to_double(c);
        rep.metric_max("max_conservation_defect", std::abs(cd.dot(zeta) - cd.dot(sigma)));
    }

    IntegratorConfig c = cfg;
    c.stop_at_stall = true;
    c.stall_threshold = opts.stall_threshold;
    c.stall_window = opts.stall_window;
    const VectorField species = species_field(net);
    rep.metrics["max_terminal_distance"] = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        const Trajectory traj = integrate(species, rhos[i], opts.max_time, c);
        if (traj.status() != TrajectoryStatus::stalled_at_equilibrium) {
            rep.fail(make_witness(i, traj.t_end(), "no stall: " + status_text(traj), 0.0, {{"rho", rhos[i]}}));
            continue;
        }
        const double dist = inf_norm(traj.back() - zeta);
        rep.metric_max("max_terminal_distance", dist);
        if (dist > opts.agreement_tol) {
            rep.violation(dist - opts.agreement_tol);
            rep.fail(make_witness(i, traj.t_end(), "|S(T) - zeta|", dist,
                                  {{"rho", rhos[i]}, {"S_T", traj.back()}, {"zeta", zeta}}));
        }
    }
    return rep;
}

VerificationReport degenerate_case_convergence(const ReactionNetwork& net, const Vec& sigma,
                                               const IntegratorConfig& cfg, const ClassConvergenceOptions& opts) {
    require_size(sigma.size(), static_cast<Eigen::Index>(net.n()), "degenerate_case_convergence: sigma");
    const auto idx = [&](const char* name) {
        const auto i = net.index_of(name);
        if (!i) throw PreconditionError(std::string("degenerate_case_convergence: network lacks species ") + name);
        return static_cast<Eigen::Index>(*i);
    };
    const Eigen::Index P = idx("P"), Q = idx("Q"), E = idx("E"), F = idx("F"), C = idx("C"), D = idx("D");
    const bool kinase_dead = sigma(E) + sigma(C) == 0.0;
    const bool phosphatase_dead = sigma(F) + sigma(D) == 0.0;
    if (!kinase_dead && !phosphatase_dead)
        throw PreconditionError("degenerate_case_convergence: need E + C = 0 or F + D = 0");
    if (!(sigma.array() >= 0.0).all()) throw PreconditionError("degenerate_case_convergence: sigma must be >= 0");

    VerificationReport rep;
    rep.test = "degenerate-case";
    rep.n_samples = 1;
    IntegratorConfig c = cfg;
    c.stop_at_stall = true;
    c.stall_threshold = opts.stall_threshold;
    c.stall_window = opts.stall_window;
    const Trajectory traj = integrate(species_field(net), sigma, opts.max_time, c);
    if (traj.status() != TrajectoryStatus::stalled_at_equilibrium) {
        rep.fail(make_witness(0, traj.t_end(), "no stall: " + status_text(traj), 0.0, {{"sigma", sigma}}));
    }
    rep.metrics["stall_time"] = traj.t_end();

    std::vector<std::pair<Eigen::Index, std::string>> monotone;
    if (kinase_dead) monotone.emplace_back(P, "P");
    if (phosphatase_dead) monotone.emplace_back(Q, "Q");
    const auto& xs = traj.states();
    for (const auto& [i, name] : monotone) {
        double worst_drop = 0.0;
        for (std::size_t k = 1; k < xs.size(); ++k) {
            const double drop = xs[k - 1](i) - xs[k](i);
            worst_drop = std::max(worst_drop, drop);
            if (drop > 1e-10) {
                rep.violation(drop);
                rep.fail(make_witness(0, traj.times()[k], name + " decreased by", drop, {{"sigma", sigma}}));
                break;
            }
        }
        rep.metrics["max_drop_" + name] = worst_drop;
    }
    return rep;
}

}  // namespace monocrn
