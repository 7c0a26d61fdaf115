#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dynerg/config_io.hpp"
#include "dynerg/verify.hpp"

namespace {

using namespace dynerg;

// Accepts preset names or the inline form "V 3; 1 2; 1 3" (';' for newlines).
LabeledGraph parse_graph_arg(std::string text) {
    for (char& c : text)
        if (c == ';') c = '\n';
    return parse_graph(text);
}

int resolve_threads(std::optional<int> flag, int config_threads) {
    if (flag) return *flag;
    if (const char* env = std::getenv("DYNERG_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    return config_threads;
}

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int cmd_analyze(const std::string& config_path, const std::string& out_dir) {
    const RunConfig config = load_run_config(config_path);
    const Json report = build_analyze_report(config);
    write_text_file(out_path(out_dir, "report.json"), report.dump(2) + "\n");
    std::cout << "wrote " << out_path(out_dir, "report.json") << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<int> threads_flag, std::optional<std::uint64_t> seed_flag) {
    RunConfig config = load_run_config(config_path);
    if (seed_flag) config.sim.seed = *seed_flag;
    const int threads = resolve_threads(threads_flag, config.threads);
    const SimulationOutputs outputs = run_simulation_outputs(config, threads);
    write_text_file(out_path(out_dir, "counts.csv"), outputs.counts_csv);
    write_text_file(out_path(out_dir, "summary.json"), outputs.summary.dump(2) + "\n");
    write_text_file(out_path(out_dir, "plotdata.csv"), outputs.plotdata_csv);
    std::cout << "wrote " << out_path(out_dir, "counts.csv") << ", "
              << out_path(out_dir, "summary.json") << ", "
              << out_path(out_dir, "plotdata.csv") << "\n"
              << "replications=" << config.sim.replications
              << " max|z| vs exact covariance=" << outputs.summary.at("max_abs_z_exact")
              << " pass=" << (outputs.pass ? "true" : "false") << "\n";
    return 0;
}

int cmd_verify(const std::string& out_dir, std::optional<int> threads_flag,
               std::optional<std::uint64_t> seed_flag, bool inject_failure) {
    VerifyOptions options;
    options.threads = resolve_threads(threads_flag, 1);
    if (seed_flag) options.seed = *seed_flag;
    options.inject_oracle_mismatch = inject_failure;

    const std::vector<CriterionResult> results = run_acceptance_criteria(options);
    Json criteria = Json::array();
    bool all_pass = true;
    for (const CriterionResult& result : results) {
        std::cout << format_criterion_line(result) << "\n";
        all_pass = all_pass && result.pass;
        criteria.push_back(Json{{"id", result.id},
                                {"name", result.name},
                                {"pass", result.pass},
                                {"seconds", result.seconds},
                                {"details", result.details}});
    }
    const Json report{{"criteria", std::move(criteria)}, {"all_pass", all_pass}};
    write_text_file(out_path(out_dir, "report.json"), report.dump(2) + "\n");
    std::cout << (all_pass ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all_pass ? 0 : 1;
}

int cmd_oracle(const std::string& h_text, const std::string& h_star_text,
               const std::string& g_text, const std::string& alpha_text) {
    const LabeledGraph H = parse_graph_arg(h_text);
    const LabeledGraph H_star = parse_graph_arg(h_star_text);
    const ScalingRegime regime(parse_rational(alpha_text));

    std::cout << "H  = " << canonical_form(H).to_string()
              << "  automorphisms=" << automorphism_count(H) << "\n";
    std::cout << "H* = " << canonical_form(H_star).to_string()
              << "  automorphisms=" << automorphism_count(H_star) << "\n";
    std::cout << "alpha = " << to_fraction_string(regime.alpha)
              << "  equioptimal=" << (equioptimal(H, H_star, regime) ? "yes" : "no") << "\n";

    std::vector<Pattern> targets;
    if (!g_text.empty()) {
        targets.push_back(canonical_form(parse_graph_arg(g_text)));
    } else {
        const auto cs = common_subgraph_patterns(H, H_star);
        targets.assign(cs.begin(), cs.end());
    }
    const auto ocs = optimal_common_subgraphs(H, H_star, regime);
    for (const Pattern& g : targets) {
        std::cout << g.to_string() << ":  S(H,g)=" << subgraph_pattern_count(H, g)
                  << "  S(H*,g)=" << subgraph_pattern_count(H_star, g) << "\n";
        std::cout << "  pair constant, enumerate mode:   "
                  << to_fraction_string(pairing_constant(H, H_star, g, PairingMode::enumerate))
                  << "\n";
        std::cout << "  pair constant, closed-form mode: ";
        if (!equioptimal(H, H_star, regime)) {
            std::cout << "refused: closed form requires an equioptimal pair\n";
        } else if (ocs.find(g) == ocs.end()) {
            std::cout << "refused: pattern is not in the optimal common set at this alpha\n";
        } else {
            std::cout << to_fraction_string(
                             pairing_constant(H, H_star, g, PairingMode::closed_form, &regime))
                      << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic random-graph motif statistics"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::optional<int> threads_flag;
    std::optional<std::uint64_t> seed_flag;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "JSON config file");
        if (needs_config) opt->required();
        sub->add_option("--out", out_dir, "output directory (created if missing)");
        sub->add_option("--threads", threads_flag,
                        "worker threads (fallback: DYNERG_THREADS, then config)");
        sub->add_option("--seed", seed_flag, "override the config seed");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "exponents, optimal sets and limit kernels");
    add_common(analyze, true);

    CLI::App* simulate = app.add_subcommand("simulate", "run replications, write counts and summary");
    add_common(simulate, true);

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
    add_common(verify, false);
    bool inject_failure = false;
    verify->add_flag("--inject-failure", inject_failure)->group("");  // test hook, hidden

    CLI::App* oracle = app.add_subcommand("oracle", "brute-force combinatorics printout");
    std::string h_text, h_star_text, g_text, alpha_text = "3/10";
    oracle->add_option("H", h_text, "first graph (preset or 'V n; u v; ...')")->required();
    oracle->add_option("HSTAR", h_star_text, "second graph")->required();
    oracle->add_option("G", g_text, "optional shared pattern; all common patterns if omitted");
    oracle->add_option("--alpha", alpha_text, "decay exponent as an exact rational");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(config_path, out_dir);
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir, threads_flag, seed_flag);
        if (verify->parsed()) return cmd_verify(out_dir, threads_flag, seed_flag, inject_failure);
        if (oracle->parsed()) return cmd_oracle(h_text, h_star_text, g_text, alpha_text);
    } catch (const dynerg::RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
