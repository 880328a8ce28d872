#include "monocrn/extent_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monocrn {

namespace {

double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Vertices reachable from 0 following edges (forward) or reversed edges.
std::vector<bool> reach(const Mat& jac, double tol, bool forward) {
    const auto n = jac.rows();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j || seen[static_cast<std::size_t>(j)]) continue;
            const double e = forward ? jac(i, j) : jac(j, i);
            if (std::abs(e) > tol) {
                seen[static_cast<std::size_t>(j)] = true;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

}  // namespace

VectorField species_field(const ReactionNetwork& net) {
    VectorField f;
    f.dimension = static_cast<Eigen::Index>(net.n());
    f.eval = [net](const Vec& s) -> Vec { return net.gamma_real() * detail::rates_unchecked(net, s); };
    f.jac = [net](const Vec& s) -> Mat { return net.gamma_real() * detail::rate_jacobian_unchecked(net, s); };
    f.domain_test = [](const Vec& s) { return (s.array() >= -kBoundarySlack).all(); };
    f.clamp = [](Vec& s) {
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) < 0.0 && s(i) > -kBoundarySlack) s(i) = 0.0;
    };
    return f;
}

ExtentSystem::ExtentSystem(ReactionNetwork net, Vec sigma) : net_(std::move(net)), sigma_(std::move(sigma)) {
    require_size(sigma_.size(), static_cast<Eigen::Index>(net_.n()), "build_extent_system: sigma");
    for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
        if (!(sigma_(i) >= 0.0) || !std::isfinite(sigma_(i)))
            throw PreconditionError("build_extent_system: sigma must be nonnegative (species '" +
                                    net_.species()[static_cast<std::size_t>(i)].name + "')");
    }

    const ReactionNetwork& n = net_;
    const Vec s0 = sigma_;
    const Mat g = n.gamma_real();
    field_.dimension = static_cast<Eigen::Index>(n.m());
    field_.eval = [n, s0, g](const Vec& x) -> Vec { return detail::rates_unchecked(n, s0 + g * x); };
    field_.jac = [n, s0, g](const Vec& x) -> Mat { return detail::rate_jacobian_unchecked(n, s0 + g * x) * g; };
    field_.domain_test = [s0, g](const Vec& x) {
        const double slack = kBoundarySlack * (1.0 + x.lpNorm<Eigen::Infinity>());
        return ((s0 + g * x).array() >= -slack).all();
    };

    const RationalMatrix exact = net_.gamma_exact();
    kernel_ = right_kernel_basis(exact);
    for (auto& k : kernel_) k = primitive_integer(k);
    direction_ = positive_kernel_unit_vector(exact);

    vanishing_.assign(net_.n(), false);
    for (const auto& c : semipositive_conservation_laws(net_)) {
        double total = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) total += c[i].convert_to<double>() * sigma_(static_cast<Eigen::Index>(i));
        if (total != 0.0) continue;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] > 0) vanishing_[i] = true;
    }
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < vanishing_.size(); ++i)
        if (vanishing_[i]) rows.push_back(static_cast<Eigen::Index>(i));
    face_projector_ = Mat::Identity(dimension(), dimension());
    if (!rows.empty()) {
        const Mat gz = g(rows, Eigen::all);
        Eigen::JacobiSVD<Mat> svd(gz, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double cutoff = 1e-12 * std::max(1.0, sv.size() ? sv(0) : 0.0);
        Eigen::Index r = 0;
        while (r < sv.size() && sv(r) > cutoff) ++r;
        const Mat null = svd.matrixV().rightCols(dimension() - r);
        face_projector_ = null * null.transpose();
    }
}

Vec ExtentSystem::species_state(const Vec& x) const {
    require_size(x.size(), dimension(), "ExtentSystem::species_state");
    return sigma_ + net_.gamma_real() * x;
}

bool ExtentSystem::in_interior(const Vec& x) const {
    const Vec s = species_state(x);
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (!vanishing_[static_cast<std::size_t>(i)] && !(s(i) > 0.0)) return false;
    return true;
}

SamplingRegion ExtentSystem::sampling_region(bool interior) const {
    SamplingRegion r;
    r.center = Vec::Zero(dimension());
    r.half_width = 0.5 * std::max(1.0, sigma_.maxCoeff());
    if (!vanishing_.empty() && std::any_of(vanishing_.begin(), vanishing_.end(), [](bool b) { return b; }))
        r.transform = [p = face_projector_](const Vec& x) -> Vec { return p * x; };
    if (interior) {
        r.accept = [f = field_, s0 = sigma_, g = net_.gamma_real(), z = vanishing_](const Vec& x) {
            if (!f.in_domain(x)) return false;
            const Vec s = s0 + g * x;
            for (Eigen::Index i = 0; i < s.size(); ++i)
                if (!z[static_cast<std::size_t>(i)] && !(s(i) > 0.0)) return false;
            return true;
        };
    } else {
        r.accept = [f = field_](const Vec& x) { return f.in_domain(x); };
    }
    return r;
}

ExtentSystem build_extent_system(const ReactionNetwork& net, const Vec& sigma) { return ExtentSystem(net, sigma); }

TranslationInvarianceCheck check_translation_invariance(const VectorField& field, const Vec& v,
                                                        const SamplingRegion& region, std::size_t n_samples,
                                                        std::uint64_t seed) {
    require_size(v.size(), field.dimension, "check_translation_invariance");
    if (std::abs(v.norm() - 1.0) > 1e-9) throw PreconditionError("check_translation_invariance: v must be a unit vector");
    Rng rng(seed);
    TranslationInvarianceCheck out;
    out.verdict = true;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const Vec x = region.draw(rng);
        const double lambda = uniform(rng, -2.0, 2.0);
        const Vec fx = field.eval(x);
        const double bound = 1e-8 * (1.0 + fx.norm());
        const double jv = field.directional_derivative(x, v).norm();
        out.max_jv = std::max(out.max_jv, jv);
        double shift = 0.0;
        const Vec moved = x + lambda * v;
        if (field.in_domain(moved)) {
            shift = (field.eval(moved) - fx).norm();
            out.max_shift = std::max(out.max_shift, shift);
        } else {
            ++out.skipped;
        }
        ++out.samples;
        if ((jv > bound || shift > bound) && out.verdict) {
            out.verdict = false;
            out.witness = x;
        }
    }
    return out;
}

TranslationInvarianceCheck check_translation_invariance(const ExtentSystem& sys, const Vec& v,
                                                        std::size_t n_samples, std::uint64_t seed) {
    return check_translation_invariance(sys.field(), v, sys.sampling_region(false), n_samples, seed);
}

CooperativityCheck check_cooperativity(const VectorField& field, const SamplingRegion& region,
                                       std::size_t n_samples, std::uint64_t seed) {
    Rng rng(seed);
    CooperativityCheck out;
    out.verdict = true;
    out.worst_entry = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_samples; ++k) {
        const Vec x = region.draw(rng);
        const Mat j = field.jacobian(x);
        for (Eigen::Index r = 0; r < j.rows(); ++r) {
            for (Eigen::Index c = 0; c < j.cols(); ++c) {
                if (r == c) continue;
                if (j(r, c) < out.worst_entry) out.worst_entry = j(r, c);
                if (j(r, c) < -1e-10 && out.verdict) {
                    out.verdict = false;
                    out.witness = x;
                }
            }
        }
        ++out.samples;
    }
    if (!std::isfinite(out.worst_entry)) out.worst_entry = 0.0;  // no off-diagonal entries
    return out;
}

CooperativityCheck check_cooperativity(const ExtentSystem& sys, std::size_t n_samples, std::uint64_t seed) {
    return check_cooperativity(sys.field(), sys.sampling_region(true), n_samples, seed);
}

bool is_irreducible(const Mat& jac, double tol) {
    if (jac.rows() != jac.cols()) throw PreconditionError("is_irreducible: matrix must be square");
    if (jac.rows() <= 1) return true;
    const auto fwd = reach(jac, tol, true);
    const auto bwd = reach(jac, tol, false);
    return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
           std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

IrreducibilityCheck check_irreducibility(const VectorField& field, const Trajectory& traj, std::size_t n_samples) {
    IrreducibilityCheck out;
    if (n_samples == 0 || traj.size() == 0) return out;
    std::size_t good = 0;
    const double t0 = traj.t_begin();
    const double span = traj.t_end() - t0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = t0 + span * (static_cast<double>(k) + 0.5) / static_cast<double>(n_samples);
        const Vec x = traj.at(t);
        if (is_irreducible(field.jacobian(x))) {
            ++good;
        } else if (!out.witness_time) {
            out.witness_time = t;
            out.witness = x;
        }
    }
    out.samples = n_samples;
    out.fraction = static_cast<double>(good) / static_cast<double>(n_samples);
    out.verdict = out.fraction >= 0.99;
    return out;
}

IrreducibilityCheck check_irreducibility(const ExtentSystem& sys, const Trajectory& traj, std::size_t n_samples) {
    return check_irreducibility(sys.field(), traj, n_samples);
}

bool HypothesisReport::all_hold() const {
    return kernel_ok && bounded && translation && translation->verdict && cooperative.verdict &&
           irreducible.verdict && strongly_monotone;
}

HypothesisReport analyze_hypotheses(const ExtentSystem& sys, const HypothesisOptions& opts) {
    HypothesisReport rep;
    const RationalMatrix g = sys.network().gamma_exact();
    rep.rank = rank(g);
    rep.kernel = sys.kernel();
    rep.v = sys.translation_direction();
    rep.kernel_ok = rep.v.has_value();
    rep.conservation_laws = conservation_laws(sys.network());
    rep.semipositive_laws = semipositive_conservation_laws(sys.network());
    rep.species_bounded = bounded_by_conservation(sys.network());
    rep.bounded = std::all_of(rep.species_bounded.begin(), rep.species_bounded.end(), [](bool b) { return b; });
    rep.notes.push_back("boundedness: every species covered by a semi-positive conservation law "
                        "(sufficient, not necessary)");
    if (!rep.kernel_ok)
        rep.notes.push_back("kernel of gamma is not one-dimensional with a positive spanning vector");

    if (rep.v) rep.translation = check_translation_invariance(sys, *rep.v, opts.n_samples, opts.seed);
    rep.cooperative = check_cooperativity(sys, opts.n_samples, opts.seed + 1);
    if (std::any_of(sys.vanishing_species().begin(), sys.vanishing_species().end(), [](bool b) { return b; }))
        rep.notes.push_back("some species vanish on the whole class; samples are drawn on that face");

    const Trajectory traj = integrate(sys.field(), Vec::Zero(sys.dimension()), opts.horizon, opts.integrator);
    if (traj.status() != TrajectoryStatus::completed)
        rep.notes.push_back("irreducibility trajectory ended early: " + std::string(to_string(traj.status())));
    rep.irreducible = check_irreducibility(sys, traj, opts.n_samples);
    rep.strongly_monotone = rep.cooperative.verdict && rep.irreducible.verdict;
    return rep;
}

}  // namespace monocrn
