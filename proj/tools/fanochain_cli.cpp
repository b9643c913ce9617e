// Command-line front end: builds a model from flags, a preset or a JSON
// config, runs sweeps / resonance finders / verification, emits CSV or JSON.
//
// Exit codes: 0 success, 1 verification beyond tolerance, 2 flag errors.
#include "fanochain/analytic.hpp"
#include "fanochain/errors.hpp"
#include "fanochain/io.hpp"
#include "fanochain/model.hpp"
#include "fanochain/oracle.hpp"
#include "fanochain/sweep.hpp"
#include "fanochain/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using fanochain::Json;

struct ModelFlags {
    std::string variant;
    std::optional<double> J, J_par, J_perp, E_d, gamma;
    std::optional<double> J1, J2, E_d1, E_d2, gamma1, gamma2;
};

struct Preset {
    ModelFlags model;
    std::optional<std::string> vary_name;
    std::vector<double> vary_values;
};

// Named parameter sets matching the bundled reference datasets.
const std::map<std::string, Preset>& preset_table() {
    static const std::map<std::string, Preset> table = [] {
        std::map<std::string, Preset> t;
        auto b_balanced = [](double g, double jperp) {
            ModelFlags f;
            f.variant = "b";
            f.J = 0.5;
            f.J1 = f.J2 = 0.4;
            f.E_d1 = f.E_d2 = 0.5;
            f.gamma1 = g;
            f.gamma2 = -g;
            f.J_perp = jperp;
            return f;
        };
        {
            ModelFlags f;
            f.variant = "b";
            f.J = 0.5;
            f.J1 = 0.4;
            f.J2 = 0.0;
            f.E_d1 = 0.5;
            f.E_d2 = 0.0;
            f.gamma1 = f.gamma2 = 0.0;
            f.J_perp = 0.0;
            t["fig2a"] = Preset{f, std::nullopt, {}};
        }
        t["fig2c"] = Preset{b_balanced(0.0, 0.0), "J_perp", {0.0, 0.2}};
        {
            ModelFlags f;
            f.variant = "a";
            f.J = 0.5;
            f.J_par = 0.3;
            f.E_d = 0.5;
            f.gamma = 0.0;
            t["fig2e"] = Preset{f, std::nullopt, {}};
            t["fig3"] = Preset{f, "gamma", {0.0, 0.1, 0.2}};
        }
        t["fig4a"] = Preset{b_balanced(0.0, 0.0), "gamma", {0.0, 0.05, 0.1}};
        t["fig4c"] = Preset{b_balanced(0.05, 0.02), "J_perp", {0.02, 0.1}};
        auto b_free = [](double j1, double j2, double e1, double e2, double g1, double g2) {
            ModelFlags f;
            f.variant = "b";
            f.J = 0.5;
            f.J1 = j1;
            f.J2 = j2;
            f.E_d1 = e1;
            f.E_d2 = e2;
            f.gamma1 = g1;
            f.gamma2 = g2;
            f.J_perp = 0.0;
            return f;
        };
        t["fig5a"] = Preset{b_free(0.4, 0.4, 0.4, 0.4, 0.05, -0.15), std::nullopt, {}};
        t["fig5b"] = Preset{b_free(0.4, 0.4, 0.4, -0.5, 0.05, -0.05), std::nullopt, {}};
        t["fig5c"] = Preset{b_free(0.4, 0.6, 0.4, 0.4, 0.05, -0.05), std::nullopt, {}};
        t["fig5d"] = Preset{b_free(0.4, 0.6, 0.4, -0.5, 0.05, -0.15), std::nullopt, {}};
        {
            ModelFlags f;
            f.variant = "c";
            f.J = 0.5;
            f.J_perp = 0.3;
            f.E_d = 0.2;
            f.gamma = 0.1;
            t["fig6"] = Preset{f, "gamma", {0.0, 0.1}};
        }
        return t;
    }();
    return table;
}

void merge_missing(ModelFlags& into, const ModelFlags& from) {
    if (into.variant.empty())
        into.variant = from.variant;
    auto take = [](std::optional<double>& dst, const std::optional<double>& src) {
        if (!dst && src)
            dst = src;
    };
    take(into.J, from.J);
    take(into.J_par, from.J_par);
    take(into.J_perp, from.J_perp);
    take(into.E_d, from.E_d);
    take(into.gamma, from.gamma);
    take(into.J1, from.J1);
    take(into.J2, from.J2);
    take(into.E_d1, from.E_d1);
    take(into.E_d2, from.E_d2);
    take(into.gamma1, from.gamma1);
    take(into.gamma2, from.gamma2);
}

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--config", "cannot open config file " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw CLI::ValidationError("--config", std::string("bad JSON: ") + e.what());
    }
}

ModelFlags flags_from_config(const Json& j) {
    ModelFlags f;
    auto take = [&](const char* key, std::optional<double>& dst) {
        if (j.contains(key))
            dst = j[key].get<double>();
    };
    if (j.contains("model"))
        f.variant = j["model"].get<std::string>();
    take("J", f.J);
    take("J-par", f.J_par);
    take("J-perp", f.J_perp);
    take("Ed", f.E_d);
    take("gamma", f.gamma);
    take("J1", f.J1);
    take("J2", f.J2);
    take("Ed1", f.E_d1);
    take("Ed2", f.E_d2);
    take("gamma1", f.gamma1);
    take("gamma2", f.gamma2);
    return f;
}

// Non-model flags from the config file apply only where the command line
// left the option untouched.
template <typename T>
void config_default(const Json& j, const char* key, const CLI::Option* opt, T& target) {
    if (opt != nullptr && opt->count() == 0 && j.contains(key))
        target = j[key].get<T>();
}

void config_default(const Json& j, const char* key, const CLI::Option* opt,
                    std::optional<double>& target) {
    if (opt != nullptr && opt->count() == 0 && j.contains(key))
        target = j[key].get<double>();
}

double need(const std::optional<double>& v, const char* flag) {
    if (!v)
        throw CLI::RequiredError(std::string("--") + flag);
    return *v;
}

fanochain::ScatteringModel build_from_flags(const ModelFlags& f) {
    using namespace fanochain;
    if (f.variant == "a") {
        return build_model_a(need(f.J, "J"), need(f.J_par, "J-par"), need(f.E_d, "Ed"),
                             f.gamma.value_or(0.0));
    }
    if (f.variant == "b") {
        // Shared flags expand to the balanced pair unless overridden.
        const double J1 = f.J1 ? *f.J1 : need(f.J_par, "J1 (or --J-par)");
        const double J2 = f.J2 ? *f.J2 : J1;
        const double E1 = f.E_d1 ? *f.E_d1 : need(f.E_d, "Ed1 (or --Ed)");
        const double E2 = f.E_d2 ? *f.E_d2 : E1;
        const double g1 = f.gamma1 ? *f.gamma1 : f.gamma.value_or(0.0);
        const double g2 = f.gamma2 ? *f.gamma2 : -g1;
        return build_model_b(need(f.J, "J"), J1, J2, E1, E2, g1, g2, f.J_perp.value_or(0.0));
    }
    if (f.variant == "c") {
        return build_model_c(need(f.J, "J"), need(f.J_perp, "J-perp"), need(f.E_d, "Ed"),
                             f.gamma.value_or(0.0));
    }
    throw CLI::ValidationError("--model", "expected one of a|b|c");
}

Json make_meta(const std::string& command, const fanochain::ScatteringModel& model) {
    Json meta;
    meta["tool"] = "fanochain";
    meta["version"] = fanochain::kVersion;
    meta["command"] = command;
    meta["model"] = fanochain::model_to_json(model);
    return meta;
}

void deliver(const std::string& text, const std::string& output_path) {
    if (output_path.empty() || output_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out)
        throw CLI::ValidationError("--output", "cannot write " + output_path);
    out << text;
}

struct CommonOpts {
    ModelFlags flags;
    std::string preset;
    std::string config;
    std::string format = "csv";
    std::string output;
    CLI::Option* preset_opt = nullptr;
    CLI::Option* format_opt = nullptr;
    CLI::Option* output_opt = nullptr;
};

void add_model_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--model", opts.flags.variant, "model variant: a|b|c");
    opts.preset_opt = cmd->add_option("--preset", opts.preset, "named parameter set (fig2a..fig6)");
    cmd->add_option("--config", opts.config, "JSON file mirroring the flags");
    cmd->add_option("--J", opts.flags.J, "lead hopping");
    cmd->add_option("--J-par", opts.flags.J_par, "defect-chain coupling (shared)");
    cmd->add_option("--J-perp", opts.flags.J_perp, "defect-defect / ladder coupling");
    cmd->add_option("--Ed", opts.flags.E_d, "defect energy (shared)");
    cmd->add_option("--gamma", opts.flags.gamma, "gain/loss strength (balanced pair)");
    cmd->add_option("--J1", opts.flags.J1, "first defect coupling");
    cmd->add_option("--J2", opts.flags.J2, "second defect coupling");
    cmd->add_option("--Ed1", opts.flags.E_d1, "first defect energy");
    cmd->add_option("--Ed2", opts.flags.E_d2, "second defect energy");
    cmd->add_option("--gamma1", opts.flags.gamma1, "first defect gain/loss");
    cmd->add_option("--gamma2", opts.flags.gamma2, "second defect gain/loss (stored as given)");
    opts.format_opt = cmd->add_option("--format", opts.format, "output format: csv|json")
                          ->check(CLI::IsMember({"csv", "json"}));
    opts.output_opt = cmd->add_option("--output,-o", opts.output, "output path ('-' for stdout)");
}

// Loads the config file (if any) and applies the shared precedence
// flags > config > preset for the common options.
Json resolve_common(CommonOpts& opts) {
    Json cfg = Json::object();
    if (!opts.config.empty())
        cfg = load_config(opts.config);
    config_default(cfg, "preset", opts.preset_opt, opts.preset);
    config_default(cfg, "format", opts.format_opt, opts.format);
    config_default(cfg, "output", opts.output_opt, opts.output);
    return cfg;
}

// Resolves the model from merged flags and returns it plus any vary axis the
// preset implies.
std::pair<fanochain::ScatteringModel, Preset> resolve_model(const CommonOpts& opts,
                                                            const Json& cfg) {
    ModelFlags merged = opts.flags;
    Preset preset_info;
    merge_missing(merged, flags_from_config(cfg));
    if (!opts.preset.empty()) {
        const auto it = preset_table().find(opts.preset);
        if (it == preset_table().end())
            throw CLI::ValidationError("--preset", "unknown preset " + opts.preset);
        preset_info = it->second;
        merge_missing(merged, preset_info.model);
    }
    return {build_from_flags(merged), preset_info};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering coefficients for tight-binding chains with side-coupled "
                 "gain/loss defect pairs"};
    app.set_version_flag("--version", fanochain::kVersion);
    app.require_subcommand(1);

    // -------- sweep --------
    CommonOpts sweep_opts;
    std::size_t sweep_steps = 2001;
    std::optional<double> sweep_min, sweep_max;
    bool sweep_oracle = false;
    std::string vary_name;
    std::vector<double> vary_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "frequency sweep of T, R and the phase");
    add_model_options(sweep_cmd, sweep_opts);
    auto* sweep_steps_opt = sweep_cmd->add_option("--steps", sweep_steps, "grid points (>= 2)");
    auto* sweep_min_opt = sweep_cmd->add_option("--omega-min", sweep_min,
                                                "grid start (default: band edge * (1-1e-6))");
    auto* sweep_max_opt = sweep_cmd->add_option("--omega-max", sweep_max, "grid end");
    auto* sweep_oracle_opt =
        sweep_cmd->add_flag("--oracle", sweep_oracle, "also run the direct solve per row");
    auto* vary_name_opt =
        sweep_cmd->add_option("--vary", vary_name, "secondary axis: gamma|J_perp|J1|J2|E_d1|E_d2");
    auto* vary_values_opt =
        sweep_cmd->add_option("--vary-values", vary_values, "secondary axis values");

    // -------- resonances --------
    CommonOpts res_opts;
    auto* res_cmd =
        app.add_subcommand("resonances", "perfect reflection/transmission frequencies");
    add_model_options(res_cmd, res_opts);

    // -------- amplitudes --------
    CommonOpts amp_opts;
    double amp_omega = 0.0;
    bool amp_oracle = false;
    auto* amp_cmd = app.add_subcommand("amplitudes", "t, r and defect amplitudes at one omega");
    add_model_options(amp_cmd, amp_opts);
    amp_cmd->add_option("--omega", amp_omega, "frequency inside the open band")->required();
    amp_cmd->add_flag("--oracle", amp_oracle, "cross-check against the direct solve");

    // -------- verify --------
    CommonOpts verify_opts;
    std::size_t verify_steps = 2001;
    double verify_tol = 1e-9;
    double verify_span = 0.99;
    auto* verify_cmd =
        app.add_subcommand("verify", "closed forms vs direct solve over a band grid");
    add_model_options(verify_cmd, verify_opts);
    auto* verify_steps_opt = verify_cmd->add_option("--steps", verify_steps, "grid points");
    auto* verify_tol_opt =
        verify_cmd->add_option("--tol", verify_tol, "max allowed |t,r| deviation");
    auto* verify_span_opt = verify_cmd->add_option("--band-span", verify_span,
                                                   "grid reach as a fraction of the band");

    // -------- conservation --------
    CommonOpts cons_opts;
    std::size_t cons_steps = 2001;
    double cons_tol = 1e-10;
    bool cons_oracle = false;
    auto* cons_cmd = app.add_subcommand("conservation", "max |R + T - 1| over a band grid");
    add_model_options(cons_cmd, cons_opts);
    auto* cons_steps_opt = cons_cmd->add_option("--steps", cons_steps, "grid points");
    auto* cons_tol_opt =
        cons_cmd->add_option("--tol", cons_tol, "pass/fail threshold on the deviation");
    auto* cons_oracle_opt =
        cons_cmd->add_flag("--oracle", cons_oracle, "audit the direct solve instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep_cmd->parsed()) {
            const Json cfg = resolve_common(sweep_opts);
            config_default(cfg, "steps", sweep_steps_opt, sweep_steps);
            config_default(cfg, "omega-min", sweep_min_opt, sweep_min);
            config_default(cfg, "omega-max", sweep_max_opt, sweep_max);
            config_default(cfg, "oracle", sweep_oracle_opt, sweep_oracle);
            config_default(cfg, "vary", vary_name_opt, vary_name);
            config_default(cfg, "vary-values", vary_values_opt, vary_values);
            auto [model, preset] = resolve_model(sweep_opts, cfg);
            fanochain::SweepSpec spec;
            spec.model = model;
            spec.steps = sweep_steps;
            spec.omega_min = sweep_min;
            spec.omega_max = sweep_max;
            spec.use_oracle = sweep_oracle;
            if (!vary_name.empty()) {
                spec.vary_name = vary_name;
                spec.vary_values = vary_values;
            } else if (preset.vary_name && sweep_opts.flags.variant.empty()) {
                // Multi-curve presets imply their axis unless the user pinned
                // the model by hand.
                spec.vary_name = preset.vary_name;
                spec.vary_values = preset.vary_values;
            }

            if (spec.vary_name && !spec.vary_values.empty()) {
                const auto results = fanochain::run_sweep_vary(spec);
                if (sweep_opts.format == "csv") {
                    std::ostringstream out;
                    for (std::size_t i = 0; i < results.size(); ++i)
                        fanochain::write_sweep_csv(
                            out, results[i],
                            fanochain::CsvPrefix{*spec.vary_name, spec.vary_values[i]}, i == 0);
                    deliver(out.str(), sweep_opts.output);
                } else {
                    Json doc;
                    doc["meta"] = make_meta("sweep", model);
                    doc["meta"]["vary"] = *spec.vary_name;
                    doc["meta"]["vary_values"] = spec.vary_values;
                    doc["results"] = Json::array();
                    for (const auto& result : results)
                        doc["results"].push_back(fanochain::sweep_to_json(result));
                    deliver(doc.dump(2) + "\n", sweep_opts.output);
                }
            } else {
                const auto result = fanochain::run_sweep(spec);
                if (sweep_opts.format == "csv") {
                    std::ostringstream out;
                    fanochain::write_sweep_csv(out, result);
                    deliver(out.str(), sweep_opts.output);
                } else {
                    Json doc;
                    doc["meta"] = make_meta("sweep", model);
                    doc.update(fanochain::sweep_to_json(result));
                    deliver(doc.dump(2) + "\n", sweep_opts.output);
                }
            }
            return 0;
        }

        if (res_cmd->parsed()) {
            const Json cfg = resolve_common(res_opts);
            auto [model, preset] = resolve_model(res_opts, cfg);
            (void)preset;
            if (model.variant != fanochain::Variant::A && model.variant != fanochain::Variant::B)
                throw fanochain::UnsupportedAnalysisError(
                    "closed-form resonance analysis covers models a and b only");
            const auto set = model.variant == fanochain::Variant::A
                                 ? fanochain::resonances_a(model)
                                 : fanochain::resonances_b(model);
            if (res_opts.format == "csv") {
                std::ostringstream out;
                fanochain::write_resonances_csv(out, set);
                deliver(out.str(), res_opts.output);
            } else {
                Json doc;
                doc["meta"] = make_meta("resonances", model);
                doc["roots"] = fanochain::resonances_to_json(set);
                deliver(doc.dump(2) + "\n", res_opts.output);
            }
            return 0;
        }

        if (amp_cmd->parsed()) {
            const Json cfg = resolve_common(amp_opts);
            auto [model, preset] = resolve_model(amp_opts, cfg);
            (void)preset;
            const auto solution = fanochain::amplitudes(model, amp_omega);
            std::optional<fanochain::OracleSolution> direct;
            if (amp_oracle)
                direct = fanochain::solve_scattering(model, amp_omega);
            if (amp_opts.format == "csv") {
                std::ostringstream out;
                fanochain::write_solution_csv(out, solution);
                deliver(out.str(), amp_opts.output);
            } else {
                Json doc;
                doc["meta"] = make_meta("amplitudes", model);
                doc["solution"] = fanochain::solution_to_json(solution);
                if (direct) {
                    doc["oracle"] = Json{{"T", direct->T},
                                         {"R", direct->R},
                                         {"dev_t", std::abs(solution.t - direct->t)},
                                         {"dev_r", std::abs(solution.r - direct->r)},
                                         {"condition_estimate", direct->condition_estimate}};
                }
                deliver(doc.dump(2) + "\n", amp_opts.output);
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            const Json cfg = resolve_common(verify_opts);
            config_default(cfg, "steps", verify_steps_opt, verify_steps);
            config_default(cfg, "tol", verify_tol_opt, verify_tol);
            config_default(cfg, "band-span", verify_span_opt, verify_span);
            auto [model, preset] = resolve_model(verify_opts, cfg);
            (void)preset;
            const double edge = 2.0 * std::abs(model.lead.hopping) * verify_span;
            std::vector<double> grid(verify_steps);
            for (std::size_t i = 0; i < verify_steps; ++i)
                grid[i] = -edge + 2.0 * edge * static_cast<double>(i) /
                                      static_cast<double>(verify_steps - 1);
            const auto report = fanochain::compare(model, grid);
            const bool pass = report.max_dev_t <= verify_tol && report.max_dev_r <= verify_tol;
            if (verify_opts.format == "json") {
                Json doc;
                doc["meta"] = make_meta("verify", model);
                doc["meta"]["tol"] = verify_tol;
                doc["report"] = fanochain::compare_to_json(report);
                doc["pass"] = pass;
                deliver(doc.dump(2) + "\n", verify_opts.output);
            } else {
                // Per-row deviations go to --output when given; the summary
                // always lands on stdout.
                if (!verify_opts.output.empty() && verify_opts.output != "-") {
                    std::ostringstream rows;
                    fanochain::write_compare_csv(rows, report);
                    deliver(rows.str(), verify_opts.output);
                }
                std::cout << "max|dt| = " << fanochain::format_double(report.max_dev_t)
                          << " at omega = " << fanochain::format_double(report.at_omega_t)
                          << "\nmax|dr| = " << fanochain::format_double(report.max_dev_r)
                          << " at omega = " << fanochain::format_double(report.at_omega_r)
                          << "\ncompared = " << report.compared << ", skipped = "
                          << report.skipped << ", tol = "
                          << fanochain::format_double(verify_tol) << "\nresult: "
                          << (pass ? "PASS" : "FAIL") << "\n";
            }
            return pass ? 0 : 1;
        }

        if (cons_cmd->parsed()) {
            const Json cfg = resolve_common(cons_opts);
            config_default(cfg, "steps", cons_steps_opt, cons_steps);
            config_default(cfg, "tol", cons_tol_opt, cons_tol);
            config_default(cfg, "oracle", cons_oracle_opt, cons_oracle);
            auto [model, preset] = resolve_model(cons_opts, cfg);
            (void)preset;
            const auto grid = fanochain::band_grid(model.lead.hopping, cons_steps);
            const auto audit = fanochain::conservation_audit(model, grid, cons_oracle);
            const bool pass = audit.max_deviation <= cons_tol;
            if (cons_opts.format == "json") {
                Json doc;
                doc["meta"] = make_meta("conservation", model);
                doc["meta"]["tol"] = cons_tol;
                doc["max_deviation"] = audit.max_deviation;
                doc["at_omega"] = audit.at_omega;
                doc["pass"] = pass;
                deliver(doc.dump(2) + "\n", cons_opts.output);
            } else {
                std::ostringstream out;
                out << "max|R+T-1| = " << fanochain::format_double(audit.max_deviation)
                    << " at omega = " << fanochain::format_double(audit.at_omega)
                    << ", tol = " << fanochain::format_double(cons_tol) << "\nresult: "
                    << (pass ? "PASS" : "FAIL") << "\n";
                deliver(out.str(), cons_opts.output);
            }
            return pass ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const fanochain::InvalidModelError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return 2;
    } catch (const fanochain::UnsupportedAnalysisError& e) {
        std::cerr << "unsupported for this model: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
