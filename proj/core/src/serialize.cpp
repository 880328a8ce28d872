#include "monocrn/serialize.hpp"

#include <cmath>

namespace monocrn {

namespace {

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json exact_list(const std::vector<RationalVector>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back(to_json(v));
    return arr;
}

}  // namespace

nlohmann::json to_json(const RationalVector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& q : v) arr.push_back(q.str());
    return arr;
}

nlohmann::json to_json(const HypothesisReport& r) {
    nlohmann::json j;
    j["rank"] = r.rank;
    j["kernel"] = exact_list(r.kernel);
    j["kernel_ok"] = r.kernel_ok;
    j["v"] = r.v ? vec_to_json(*r.v) : nlohmann::json(nullptr);
    j["conservation_laws"] = exact_list(r.conservation_laws);
    j["semipositive_conservation_laws"] = exact_list(r.semipositive_laws);
    j["boundedness"] = {{"verdict", r.bounded},
                        {"method", "checked by simulation heuristic (semi-positive conservation law per species)"},
                        {"species_covered", r.species_bounded}};
    if (r.translation) {
        const auto& t = *r.translation;
        j["translation_invariance"] = {{"verdict", t.verdict},
                                       {"max_jv_residual", number(t.max_jv)},
                                       {"max_shift_residual", number(t.max_shift)},
                                       {"samples", t.samples},
                                       {"skipped_shifts", t.skipped}};
        if (t.witness) j["translation_invariance"]["witness"] = vec_to_json(*t.witness);
    } else {
        j["translation_invariance"] = {{"verdict", false}, {"reason", "no positive kernel vector"}};
    }
    j["cooperativity"] = {{"verdict", r.cooperative.verdict},
                          {"worst_offdiagonal", number(r.cooperative.worst_entry)},
                          {"samples", r.cooperative.samples}};
    if (r.cooperative.witness) j["cooperativity"]["witness"] = vec_to_json(*r.cooperative.witness);
    j["irreducibility"] = {{"verdict", r.irreducible.verdict},
                           {"fraction", number(r.irreducible.fraction)},
                           {"samples", r.irreducible.samples}};
    if (r.irreducible.witness) {
        j["irreducibility"]["witness"] = vec_to_json(*r.irreducible.witness);
        j["irreducibility"]["witness_time"] = number(*r.irreducible.witness_time);
    }
    j["strongly_monotone"] = r.strongly_monotone;
    j["all_hold"] = r.all_hold();
    j["notes"] = r.notes;
    return j;
}

nlohmann::json to_json(const EquilibriumCertificate& c) {
    nlohmann::json j;
    j["start"] = vec_to_json(c.start);
    j["xi"] = vec_to_json(c.xi);
    j["r"] = number(c.r);
    j["zeta"] = c.zeta ? vec_to_json(*c.zeta) : nlohmann::json(nullptr);
    j["projected_residual"] = number(c.projected_residual);
    j["span_residual"] = number(c.span_residual);
    j["stall_time"] = number(c.stall_time);
    j["newton_iterations"] = c.newton_iterations;
    return j;
}

nlohmann::json to_json(const IntegratorConfig& c) {
    return {{"rel_tol", number(c.rel_tol)},         {"abs_tol", number(c.abs_tol)},
            {"max_step", number(c.max_step)},       {"min_step", number(c.min_step)},
            {"max_steps", c.max_steps},             {"initial_step", number(c.initial_step)},
            {"stall_window", number(c.stall_window)}, {"stall_threshold", number(c.stall_threshold)},
            {"stop_at_stall", c.stop_at_stall}};
}

}  // namespace monocrn
