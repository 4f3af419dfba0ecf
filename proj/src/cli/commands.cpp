#include "mpts/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpts/cli/csv.hpp"
#include "mpts/cli/scenario.hpp"
#include "mpts/kl_math.hpp"

namespace mpts::cli {

namespace {

struct RunArgs {
    std::string scenario;
    std::optional<std::string> policy;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> runs;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::optional<std::string> out;
    std::optional<std::string> log_selections;
};

struct LowerBoundArgs {
    std::string scenario;
    std::optional<double> at;
};

std::filesystem::path default_output_path(const ScenarioFile& s) {
    std::filesystem::path dir = ".";
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') dir = env;
    return dir / (s.name + "_" + std::string(policy_name(s.policy)) + ".csv");
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    ScenarioFile s = resolve_scenario(args.scenario);
    if (args.policy) {
        const auto kind = parse_policy_kind(*args.policy);
        if (!kind) {
            err << "error: unknown policy '" << *args.policy << "'\n";
            return 2;
        }
        s.policy = *kind;
    }
    if (args.horizon) s.horizon = *args.horizon;
    if (args.runs) s.n_runs = *args.runs;
    if (args.seed) s.seed = *args.seed;

    const RunConfig config = s.to_run_config();
    validate(config);
    if (config.instance.build().base().has_boundary_mean()) {
        err << "warning: instance has an arm with mean 0 (outside the open-interval model)\n";
    }

    const std::filesystem::path csv_path = args.out ? std::filesystem::path(*args.out) : default_output_path(s);
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
        err << "error: cannot write output '" << csv_path.string() << "'\n";
        return 2;
    }
    std::filesystem::path meta_path = csv_path;
    meta_path += ".meta.json";
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) {
        err << "error: cannot write metadata '" << meta_path.string() << "'\n";
        return 2;
    }

    const AggregateTrace trace = run_batch(config, args.threads);
    write_aggregate_csv(csv, trace);
    write_run_metadata(meta, s, trace);
    csv.flush();
    meta.flush();
    if (!csv || !meta) {
        err << "error: failed writing '" << csv_path.string() << "'\n";
        return 2;
    }

    if (args.log_selections) {
        std::ofstream log(*args.log_selections, std::ios::binary);
        if (!log) {
            err << "error: cannot write selection log '" << *args.log_selections << "'\n";
            return 2;
        }
        log_selection_stream(config, 0, log);
    }

    out << "wrote " << csv_path.string() << " (" << trace.checkpoints.size() << " checkpoints, " << trace.n_runs
        << " runs, policy " << policy_name(s.policy) << ")\n";
    return 0;
}

int cmd_lowerbound(const LowerBoundArgs& args, std::ostream& out, std::ostream& err) {
    const ScenarioFile s = resolve_scenario(args.scenario);
    LowerBoundReport report;
    try {
        report = lower_bound_coefficient(s.instance.mus, s.instance.plays);
    } catch (const MarginalTie& e) {
        err << "error: " << e.what() << " (arms " << e.marginal_arm() << ", " << e.next_arm() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }

    out << "scenario " << s.name << ": K=" << s.instance.mus.size() << " L=" << s.instance.plays
        << " marginal_mean=" << format_double(report.marginal_mean) << '\n';
    if (s.instance.is_cascade()) {
        out << "note: CONJECTURE - for position-discounted (cascade) instances this bound is conjectured, "
               "not proven; it is the bound of the undiscounted instance\n";
    }
    out << "arm,mean,gap,kl,coefficient\n";
    for (const auto& term : report.per_arm_terms) {
        out << term.arm << ',' << format_double(s.instance.mus[term.arm]) << ',' << format_double(term.gap) << ','
            << format_double(term.kl) << ',' << format_double(term.coefficient) << '\n';
    }
    out << "total_coefficient " << format_double(report.total_coefficient) << '\n';
    if (args.at) {
        out << "bound_at " << format_double(*args.at) << ' ' << format_double(report.at(*args.at)) << '\n';
    }
    return 0;
}

int cmd_scenarios(bool as_json, std::ostream& out) {
    auto compatible = [](const ScenarioFile& s) {
        std::vector<std::string> names;
        for (PolicyKind kind : all_policy_kinds()) {
            if (!requires_cascade(kind) || s.instance.is_cascade()) names.emplace_back(policy_name(kind));
        }
        return names;
    };
    if (as_json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& s : builtin_scenarios()) {
            list.push_back({{"name", s.name},
                            {"K", s.instance.mus.size()},
                            {"L", s.instance.plays},
                            {"cascade", s.instance.is_cascade()},
                            {"default_policy", std::string(policy_name(s.policy))},
                            {"policies", compatible(s)}});
        }
        out << list.dump(2) << '\n';
        return 0;
    }
    for (const auto& s : builtin_scenarios()) {
        const auto names = compatible(s);
        out << s.name << "  K=" << s.instance.mus.size() << "  L=" << s.instance.plays
            << (s.instance.is_cascade() ? "  cascade" : "") << "  policies=";
        for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
        out << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiple-play Thompson sampling simulator", "mpts"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a batch of simulations and write a regret CSV");
    run->add_option("--scenario", run_args.scenario, "Preset name or scenario file")->required();
    run->add_option("--policy", run_args.policy, "mp-ts | imp-ts | bc-mp-ts | cucb | mp-kl-ucb");
    run->add_option("--T", run_args.horizon, "Horizon (rounds)");
    run->add_option("--runs", run_args.runs, "Number of independent runs");
    run->add_option("--seed", run_args.seed, "Master seed");
    run->add_option("--threads", run_args.threads, "Worker threads (0 = OpenMP default)");
    run->add_option("--out", run_args.out, "Output CSV path");
    run->add_option("--log-selections", run_args.log_selections, "Write run 0's per-round selections here");

    LowerBoundArgs lb_args;
    auto* lowerbound = app.add_subcommand("lowerbound", "Print the asymptotic regret lower-bound coefficient");
    lowerbound->add_option("scenario", lb_args.scenario, "Preset name or scenario file")->required();
    lowerbound->add_option("--at", lb_args.at, "Also print coefficient * ln(T)");

    bool as_json = false;
    auto* scenarios = app.add_subcommand("scenarios", "List built-in scenarios");
    scenarios->add_flag("--json", as_json, "Machine-readable listing");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) return cmd_run(run_args, out, err);
        if (*lowerbound) return cmd_lowerbound(lb_args, out, err);
        if (*scenarios) return cmd_scenarios(as_json, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace mpts::cli
