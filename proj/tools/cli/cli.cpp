#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "monocrn/monocrn.hpp"

namespace monocrn::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : Error {
    using Error::Error;
};

// Either a reaction network with a base point or a bare vector field.
struct Problem {
    std::optional<ReactionNetwork> network;
    Vec sigma;
    std::optional<ExtentSystem> extent;
    std::optional<VectorField> field;
    std::optional<Vec> v;

    const VectorField& dynamics() const { return extent ? extent->field() : *field; }

    SamplingRegion region(bool interior) const {
        if (extent) return extent->sampling_region(interior);
        SamplingRegion r;
        r.center = Vec::Zero(field->dimension);
        r.half_width = 1.0;
        return r;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Problem load_problem(const RunConfig& cfg) {
    if (cfg.example.has_value() == cfg.input.has_value())
        throw UsageError("exactly one of --example or --input is required");
    Problem p;
    if (cfg.example) {
        auto ex = builtin::find(*cfg.example);
        if (!ex) {
            std::string known;
            for (const auto& n : builtin::names()) known += (known.empty() ? "" : ", ") + n;
            throw UsageError("unknown example '" + *cfg.example + "' (known: " + known + ")");
        }
        p.network = std::move(ex->network);
        p.sigma = ex->sigma;
        p.field = std::move(ex->field);
        if (p.field) p.v = ex->v;
    } else {
        p.network = parse_network(read_file(*cfg.input));
        if (!cfg.sigma) throw UsageError("--sigma is required with --input");
    }

    if (!p.network) {
        if (cfg.sigma || !cfg.rate_overrides.empty())
            throw UsageError("--sigma and --k apply only to reaction networks");
        return p;
    }
    for (const auto& [name, value] : cfg.rate_overrides) {
        try {
            p.network = p.network->with_rate_constant(name, value);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    if (cfg.sigma) {
        if (cfg.sigma->size() != p.network->n())
            throw UsageError("--sigma has " + std::to_string(cfg.sigma->size()) + " entries, network has " +
                             std::to_string(p.network->n()) + " species");
        p.sigma = Eigen::Map<const Vec>(cfg.sigma->data(), static_cast<Eigen::Index>(cfg.sigma->size()));
    }
    try {
        p.extent.emplace(*p.network, p.sigma);
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
    p.v = p.extent->translation_direction();
    return p;
}

IntegratorConfig integrator_config(const RunConfig& cfg) {
    IntegratorConfig c;
    c.rel_tol = cfg.rel_tol;
    c.abs_tol = cfg.abs_tol;
    try {
        c.validate();
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
    return c;
}

fs::path output_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    return dir;
}

void write_json(const fs::path& path, const nlohmann::json& j, std::ostream& out) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << j.dump(2) << '\n';
    out << "wrote " << path.string() << '\n';
}

nlohmann::json header(const RunConfig& cfg) {
    return {{"command", cfg.command}, {"seed", cfg.seed}, {"config_hash", config_hash(cfg)},
            {"config", config_json(cfg)}};
}

std::vector<std::string> indexed(const std::string& prefix, Eigen::Index n) {
    std::vector<std::string> out;
    for (Eigen::Index i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

nlohmann::json network_json(const ReactionNetwork& net) {
    nlohmann::json j;
    nlohmann::json names = nlohmann::json::array();
    for (const auto& s : net.species()) names.push_back(s.name);
    j["species"] = names;
    j["n"] = net.n();
    j["m"] = net.m();
    nlohmann::json gamma = nlohmann::json::array();
    for (Eigen::Index i = 0; i < net.gamma().rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < net.gamma().cols(); ++c) row.push_back(net.gamma()(i, c));
        gamma.push_back(row);
    }
    j["gamma"] = gamma;
    nlohmann::json ks = nlohmann::json::object();
    for (const auto& [name, value] : net.rate_constants()) ks[name] = value;
    j["rate_constants"] = ks;
    return j;
}

VerificationReport guarded(const std::string& name, const std::function<VerificationReport()>& body) {
    try {
        return body();
    } catch (const NumericalError& e) {
        VerificationReport r;
        r.test = name;
        Witness w;
        w.quantity = std::string("numerical error: ") + e.what();
        r.fail(std::move(w));
        return r;
    } catch (const PreconditionError& e) {
        VerificationReport r;
        r.test = name;
        Witness w;
        w.quantity = std::string("precondition: ") + e.what();
        r.fail(std::move(w));
        return r;
    }
}

void merge_into(VerificationReport& into, const VerificationReport& from, const std::string& prefix) {
    if (!from.verdict) into.verdict = false;
    into.violation(from.max_violation);
    for (const auto& w : from.witnesses) {
        Witness copy = w;
        copy.quantity = prefix + ": " + copy.quantity;
        into.witnesses.push_back(std::move(copy));
    }
    for (const auto& [k, v] : from.metrics) into.metrics[prefix + "." + k] = v;
    for (const auto& n : from.notes) into.notes.push_back(prefix + ": " + n);
}

bool integration_failed(const VerificationReport& r) {
    return std::any_of(r.witnesses.begin(), r.witnesses.end(), [](const Witness& w) {
        return w.quantity.find("step-failure") != std::string::npos;
    });
}

std::string pass_fail(bool b) { return b ? "PASS" : "FAIL"; }

}  // namespace

double RunConfig::effective_horizon() const {
    if (horizon) return *horizon;
    return command == "simulate" ? 50.0 : 20.0;
}

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["command"] = cfg.command;
    j["example"] = cfg.example ? nlohmann::json(*cfg.example) : nlohmann::json(nullptr);
    j["input"] = cfg.input ? nlohmann::json(*cfg.input) : nlohmann::json(nullptr);
    j["sigma"] = cfg.sigma ? nlohmann::json(*cfg.sigma) : nlohmann::json(nullptr);
    nlohmann::json ks = nlohmann::json::array();
    for (const auto& [name, value] : cfg.rate_overrides) ks.push_back({name, value});
    j["k"] = ks;
    j["horizon"] = cfg.effective_horizon();
    j["rel_tol"] = cfg.rel_tol;
    j["abs_tol"] = cfg.abs_tol;
    j["seed"] = cfg.seed;
    j["formats"] = cfg.formats;
    j["reverse"] = cfg.reverse;
    j["only"] = cfg.only;
    j["golden"] = cfg.golden ? nlohmann::json(*cfg.golden) : nlohmann::json(nullptr);
    if (cfg.input) {
        std::ifstream in(*cfg.input, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            j["input_fnv1a"] = fnv1a_hex(ss.str());
        }
    }
    return j;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(config_json(cfg).dump()); }

const std::vector<std::string>& verify_test_names() {
    static const std::vector<std::string> names{"order",   "v-decrease",  "v-increase-reverse", "translation-flow",
                                                "bounded", "equilibrium", "consistency",        "class-convergence"};
    return names;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    const Problem p = load_problem(cfg);
    const IntegratorConfig icfg = integrator_config(cfg);
    const double horizon = cfg.effective_horizon();
    nlohmann::json doc = header(cfg);
    bool all = false;

    if (p.extent) {
        HypothesisOptions ho;
        ho.horizon = horizon;
        ho.seed = cfg.seed;
        ho.integrator = icfg;
        const HypothesisReport hr = analyze_hypotheses(*p.extent, ho);
        doc["network"] = network_json(*p.network);
        doc["sigma"] = vec_to_json(p.sigma);
        nlohmann::json hyp = to_json(hr);
        bool sim_bounded = true;
        if (hr.v) {
            const Trajectory traj = integrate(p.extent->field(), Vec::Zero(p.extent->dimension()), horizon, icfg);
            const BoundednessResult b = bounded_modulo_v(traj, *hr.v);
            sim_bounded = b.bounded;
            hyp["boundedness"]["simulation"] = {{"bounded_modulo_v", b.bounded},
                                                {"sup_projected_norm", b.sup_norm},
                                                {"growth_fraction", b.growth_fraction},
                                                {"trend_slope", b.trend_slope},
                                                {"horizon", horizon}};
        }
        hyp["boundedness"]["status"] = "checked by simulation heuristic";
        hyp["boundedness"]["verdict"] = hr.bounded && sim_bounded;
        all = hr.all_hold() && sim_bounded;
        hyp["all_hold"] = all;
        doc["hypotheses"] = hyp;

        out << "rank(gamma) = " << hr.rank << ", kernel dimension = " << hr.kernel.size() << '\n';
        out << "positive kernel vector: " << (hr.v ? "yes" : "no") << '\n';
        out << "translation invariance: " << pass_fail(hr.translation && hr.translation->verdict) << '\n';
        out << "cooperativity: " << pass_fail(hr.cooperative.verdict) << '\n';
        out << "irreducibility: " << pass_fail(hr.irreducible.verdict) << " (fraction " << hr.irreducible.fraction
            << ")\n";
        out << "boundedness (checked by simulation heuristic): " << pass_fail(hr.bounded && sim_bounded) << '\n';
    } else {
        const VectorField& f = *p.field;
        const auto region = p.region(false);
        const auto tr = check_translation_invariance(f, *p.v, region, 200, cfg.seed);
        const auto co = check_cooperativity(f, region, 200, cfg.seed + 1);
        Rng rng(cfg.seed);
        const Trajectory traj = integrate(f, region.draw(rng), horizon, icfg);
        const auto ir = check_irreducibility(f, traj, 200);
        all = tr.verdict && co.verdict && ir.verdict;
        doc["field"] = {{"name", *cfg.example}, {"dimension", f.dimension}, {"v", vec_to_json(*p.v)}};
        doc["hypotheses"] = {
            {"translation_invariance", {{"verdict", tr.verdict}, {"max_jv_residual", tr.max_jv},
                                        {"max_shift_residual", tr.max_shift}, {"samples", tr.samples}}},
            {"cooperativity", {{"verdict", co.verdict}, {"worst_offdiagonal", co.worst_entry},
                               {"samples", co.samples}}},
            {"irreducibility", {{"verdict", ir.verdict}, {"fraction", ir.fraction}, {"samples", ir.samples}}},
            {"all_hold", all}};
        out << "translation invariance: " << pass_fail(tr.verdict) << '\n';
        out << "cooperativity: " << pass_fail(co.verdict) << '\n';
        out << "irreducibility: " << pass_fail(ir.verdict) << '\n';
    }
    out << "all hypotheses hold: " << (all ? "yes" : "no") << '\n';

    if (cfg.wants("json")) write_json(output_dir(cfg) / "analysis.json", doc, out);
    return all ? kOk : kVerdict;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Problem p = load_problem(cfg);
    const IntegratorConfig icfg = integrator_config(cfg);
    const double horizon = cfg.effective_horizon();
    const std::string stamp = "monocrn simulate seed=" + std::to_string(cfg.seed) + " config_hash=" + config_hash(cfg);

    struct Output {
        std::string name;
        Trajectory traj;
        std::vector<std::string> columns;
        bool allow_left_domain;
        std::vector<Vec> override_states;  // projected trajectories
    };
    std::vector<Output> outputs;

    if (p.extent) {
        const Vec x0 = Vec::Zero(p.extent->dimension());
        std::vector<std::string> species;
        for (const auto& s : p.network->species()) species.push_back(s.name);
        const auto xcols = indexed("x", p.extent->dimension());
        if (cfg.reverse) {
            outputs.push_back({"extent_reverse", integrate_reverse(p.extent->field(), x0, horizon, icfg), xcols, true, {}});
        } else {
            outputs.push_back({"species", integrate(species_field(*p.network), p.sigma, horizon, icfg), species, false, {}});
            outputs.push_back({"extent", integrate(p.extent->field(), x0, horizon, icfg), xcols, false, {}});
        }
        if (p.v) {
            const Projector proj(*p.v);
            const Output& ext = outputs.back();
            Output po{cfg.reverse ? "projected_reverse" : "projected", ext.traj, indexed("pi", p.extent->dimension()),
                      true, {}};
            for (const auto& x : ext.traj.states()) po.override_states.push_back(proj.apply(x));
            outputs.push_back(std::move(po));
        }
    } else {
        Rng rng(cfg.seed);
        const Vec x0 = p.region(false).draw(rng);
        const VectorField f = cfg.reverse ? p.field->negated() : *p.field;
        outputs.push_back({cfg.reverse ? "field_reverse" : "field", integrate(f, x0, horizon, icfg),
                           indexed("x", p.field->dimension), cfg.reverse, {}});
    }

    int code = kOk;
    nlohmann::json doc = header(cfg);
    nlohmann::json summary = nlohmann::json::array();
    const bool csv = cfg.wants("csv");
    const fs::path dir = (csv || cfg.wants("json")) ? output_dir(cfg) : fs::path();
    for (const auto& o : outputs) {
        const auto status = o.traj.status();
        const bool failed = status == TrajectoryStatus::step_failure ||
                            (status == TrajectoryStatus::left_domain && !o.allow_left_domain);
        if (failed && o.override_states.empty()) {
            err << "integration failure in '" << o.name << "': " << to_string(status) << ' ' << o.traj.message() << '\n';
            code = kIntegration;
        }
        const auto& st = o.traj.stats();
        summary.push_back({{"trajectory", o.name},
                           {"status", to_string(status)},
                           {"t_end", o.traj.t_end()},
                           {"samples", o.traj.size()},
                           {"accepted_steps", st.accepted},
                           {"rejected_steps", st.rejected},
                           {"evaluations", st.evaluations}});
        out << o.name << ": " << to_string(status) << " at t=" << o.traj.t_end() << " (" << o.traj.size()
            << " samples)\n";
        if (csv) {
            const fs::path path = dir / (o.name + ".csv");
            std::ofstream f(path, std::ios::binary);
            if (!f) throw Error("cannot write " + path.string());
            const std::vector<std::string> comments{stamp, "trajectory=" + o.name + " status=" +
                                                               std::string(to_string(status))};
            if (o.override_states.empty()) write_csv(f, o.traj, comments, o.columns);
            else write_csv(f, o.traj.times(), o.override_states, comments, o.columns);
            out << "wrote " << path.string() << '\n';
        }
    }
    doc["trajectories"] = summary;
    if (cfg.wants("json")) write_json(dir / "simulation.json", doc, out);
    return code;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    for (const auto& name : cfg.only) {
        const auto& known = verify_test_names();
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw UsageError("unknown test '" + name + "' for --only");
    }
    const Problem p = load_problem(cfg);
    const IntegratorConfig icfg = integrator_config(cfg);
    const double horizon = cfg.effective_horizon();
    const VectorField& f = p.dynamics();
    const std::uint64_t seed = cfg.seed;

    std::optional<nlohmann::json> golden;
    if (cfg.golden) {
        try {
            golden = nlohmann::json::parse(read_file(*cfg.golden));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("cannot parse golden file: " + std::string(e.what()));
        }
    }

    const auto selected = [&](const std::string& name) {
        return cfg.only.empty() || std::find(cfg.only.begin(), cfg.only.end(), name) != cfg.only.end();
    };
    std::vector<VerificationReport> reports;
    std::vector<std::string> skipped;
    std::optional<EquilibriumCertificate> certificate;
    const auto run_test = [&](const std::string& name, bool applicable, const std::function<VerificationReport()>& body) {
        if (!selected(name)) return;
        if (!applicable) {
            skipped.push_back(name);
            return;
        }
        VerificationReport r = guarded(name, body);
        r.test = name;
        out << name << ": " << pass_fail(r.verdict) << " (" << r.n_samples << " samples, " << r.witnesses.size()
            << " witnesses)\n";
        reports.push_back(std::move(r));
    };

    const bool has_v = p.v.has_value();
    const OrthantOrder order = has_v ? OrthantOrder::standard(*p.v) : OrthantOrder::standard(Vec::Ones(f.dimension));

    run_test("order", true, [&] {
        return verify_order_preservation(f, order, draw_ordered_pairs(p.region(false), order.signs(), 100, seed), horizon,
                                         icfg);
    });
    run_test("v-decrease", has_v, [&] {
        PairSamplerOptions po;
        po.translate_fraction = 0.05;
        return verify_v_gauge_decrease(f, order, draw_free_pairs(p.region(false), *p.v, 100, seed, po), horizon, icfg);
    });
    run_test("v-increase-reverse", has_v, [&] {
        GaugeCheckOptions go;
        go.direction = Monotonicity::nondecreasing;
        go.allow_domain_exit = true;
        return verify_v_gauge_decrease(f.negated(), order,
                                       draw_ordered_pairs(p.region(true), order.signs(), 20, seed + 1), horizon, icfg,
                                       go);
    });
    run_test("translation-flow", has_v,
             [&] { return verify_translation_flow(f, *p.v, p.region(false), 20, horizon, icfg, seed); });
    run_test("bounded", has_v, [&] {
        Vec x0 = Vec::Zero(f.dimension);
        if (!p.extent) {
            Rng rng(seed);
            x0 = p.region(false).draw(rng);
        }
        const Trajectory traj = integrate(f, x0, horizon, icfg);
        const BoundednessResult b = bounded_modulo_v(traj, *p.v);
        VerificationReport r;
        r.n_samples = 1;
        r.metrics = {{"sup_projected_norm", b.sup_norm},
                     {"growth_fraction", b.growth_fraction},
                     {"trend_slope", b.trend_slope}};
        r.notes.push_back("heuristic: running sup of |pi_v x(t)| grows by < 1% over the last half of the horizon");
        if (traj.status() != TrajectoryStatus::completed) {
            Witness w;
            w.time = traj.t_end();
            w.quantity = "integration " + std::string(to_string(traj.status()));
            r.fail(std::move(w));
        } else if (!b.bounded) {
            Witness w;
            w.time = traj.t_end();
            w.quantity = "growth fraction of sup |pi_v x|";
            w.value = b.growth_fraction;
            w.points.emplace_back("x0", x0);
            r.fail(std::move(w));
        }
        return r;
    });
    run_test("equilibrium", has_v, [&] {
        VerificationReport r;
        r.n_samples = 10;
        std::vector<EquilibriumCertificate> certs;
        auto starts = draw_projected_starts(p.region(false), *p.v, 10, seed);
        const VerificationReport u = verify_unique_equilibrium(f, *p.v, starts, icfg, {}, 1e-6, &certs);
        merge_into(r, u, "uniqueness");
        if (certs.empty()) return r;
        EquilibriumCertificate cert = certs.front();
        if (p.extent) {
            Vec zeta = p.extent->species_state(cert.xi);
            for (Eigen::Index i = 0; i < zeta.size(); ++i) zeta(i) = std::max(zeta(i), 0.0);
            cert.zeta = zeta;
        }
        certificate = cert;
        merge_into(r, verify_equilibrium_orbit(f, *p.v, cert, 5.0, icfg), "orbit");
        if (golden) {
            const Vec gz = vec_from_json(golden->at("zeta"));
            const double tol = golden->value("tolerance", 1e-6);
            const bool comparable = cert.zeta && gz.size() == cert.zeta->size();
            const double dev = comparable ? (*cert.zeta - gz).lpNorm<Eigen::Infinity>()
                                          : std::numeric_limits<double>::infinity();
            r.metrics["golden.max_deviation"] = comparable ? dev : -1.0;
            if (!(dev <= tol)) {
                Witness w;
                w.quantity = comparable ? "golden: |zeta - zeta_golden|" : "golden: dimension mismatch";
                w.value = comparable ? dev : 0.0;
                if (cert.zeta) w.points.emplace_back("zeta", *cert.zeta);
                w.points.emplace_back("zeta_golden", gz);
                r.violation(comparable ? dev - tol : 0.0);
                r.fail(std::move(w));
            }
        }
        return r;
    });
    run_test("consistency", p.extent.has_value(), [&] {
        VerificationReport r;
        std::vector<Vec> starts{Vec::Zero(p.extent->dimension())};
        Rng rng(seed);
        const auto region = p.region(false);
        starts.push_back(region.draw(rng));
        starts.push_back(region.draw(rng));
        r.n_samples = starts.size();
        for (std::size_t i = 0; i < starts.size(); ++i)
            merge_into(r, verify_extent_species_consistency(*p.network, p.sigma, starts[i], horizon, icfg),
                       "x0[" + std::to_string(i) + "]");
        return r;
    });
    run_test("class-convergence", p.extent.has_value() && has_v, [&] {
        auto rhos = draw_class_members(*p.network, p.sigma, 2, seed);
        rhos.insert(rhos.begin(), p.sigma);
        return stoichiometric_class_convergence(*p.network, p.sigma, rhos, icfg);
    });

    bool all = true, integration = false;
    nlohmann::json doc = header(cfg);
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& r : reports) {
        all = all && r.verdict;
        integration = integration || integration_failed(r);
        tests.push_back(to_json(r));
    }
    doc["tests"] = tests;
    doc["skipped"] = skipped;
    doc["certificate"] = certificate ? to_json(*certificate) : nlohmann::json(nullptr);
    doc["all_passed"] = all;
    for (const auto& s : skipped) out << s << ": skipped (not applicable)\n";
    out << "all verdicts true: " << (all ? "yes" : "no") << '\n';

    if (cfg.wants("json") || cfg.wants("csv")) {
        const fs::path dir = output_dir(cfg);
        if (cfg.wants("json")) write_json(dir / "verification.json", doc, out);
        if (cfg.wants("csv")) {
            const fs::path path = dir / "verification.csv";
            std::ofstream fcsv(path, std::ios::binary);
            fcsv << "# monocrn verify seed=" << seed << " config_hash=" << config_hash(cfg) << '\n';
            fcsv << "test,verdict,n_samples,n_witnesses,max_violation\n";
            char buf[32];
            for (const auto& r : reports) {
                std::snprintf(buf, sizeof buf, "%.17g", r.max_violation);
                fcsv << r.test << ',' << (r.verdict ? "true" : "false") << ',' << r.n_samples << ','
                     << r.witnesses.size() << ',' << buf << '\n';
            }
            out << "wrote " << path.string() << '\n';
        }
    }
    if (integration) return kIntegration;
    return all ? kOk : kVerdict;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monotone dynamics and convergence checks for mass-action reaction networks", "monocrn"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string sigma_text, formats_text = "json,csv";
    std::vector<std::string> k_texts;
    std::optional<double> horizon;

    const auto add_common = [&](CLI::App* sub) {
        auto* ex = sub->add_option("--example", cfg.example, "Builtin example (futile-cycle, a-to-b, rotation)");
        auto* in = sub->add_option("--input", cfg.input, "Network file");
        ex->excludes(in);
        sub->add_option("--sigma", sigma_text, "Base point, comma separated");
        sub->add_option("--k", k_texts, "Rate constant override name=value (k1, k-1, ...)");
        sub->add_option("--horizon", horizon, "Time horizon")->check(CLI::NonNegativeNumber);
        sub->add_option("--rel-tol", cfg.rel_tol, "Relative tolerance");
        sub->add_option("--abs-tol", cfg.abs_tol, "Absolute tolerance");
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--out", cfg.out_dir, "Output directory (MONOCRN_OUT overrides)");
        sub->add_option("--format", formats_text, "Output formats: json,csv");
    };
    CLI::App* analyze = app.add_subcommand("analyze", "Check the convergence hypotheses");
    CLI::App* simulate = app.add_subcommand("simulate", "Write trajectories as CSV");
    CLI::App* verify = app.add_subcommand("verify", "Run the verification suite");
    for (CLI::App* sub : {analyze, simulate, verify}) add_common(sub);
    simulate->add_flag("--reverse", cfg.reverse, "Integrate the extent system in reverse time");
    verify->add_option("--only", cfg.only, "Run only the named test(s)")->delimiter(',');
    verify->add_option("--golden", cfg.golden, "Golden file with a reference zeta");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.horizon = horizon;
        if (const char* env = std::getenv("MONOCRN_OUT"); env && *env) cfg.out_dir = env;

        cfg.formats.clear();
        std::stringstream fs_(formats_text);
        for (std::string item; std::getline(fs_, item, ',');) {
            if (item != "json" && item != "csv") throw UsageError("unknown format '" + item + "'");
            cfg.formats.push_back(item);
        }
        if (!sigma_text.empty()) {
            std::vector<double> sigma;
            std::stringstream ss(sigma_text);
            for (std::string item; std::getline(ss, item, ',');) {
                try {
                    std::size_t used = 0;
                    sigma.push_back(std::stod(item, &used));
                    if (used != item.size()) throw std::invalid_argument(item);
                } catch (const std::exception&) {
                    throw UsageError("--sigma: not a number: '" + item + "'");
                }
            }
            cfg.sigma = sigma;
        }
        for (const auto& kt : k_texts) {
            const auto eq = kt.find('=');
            if (eq == std::string::npos) throw UsageError("--k expects name=value, got '" + kt + "'");
            try {
                std::size_t used = 0;
                const std::string val = kt.substr(eq + 1);
                const double value = std::stod(val, &used);
                if (used != val.size()) throw std::invalid_argument(val);
                cfg.rate_overrides.emplace_back(kt.substr(0, eq), value);
            } catch (const std::exception&) {
                throw UsageError("--k: not a number in '" + kt + "'");
            }
        }

        if (cfg.command == "analyze") return cmd_analyze(cfg, out, err);
        if (cfg.command == "simulate") return cmd_simulate(cfg, out, err);
        return cmd_verify(cfg, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kIntegration;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace monocrn::cli
