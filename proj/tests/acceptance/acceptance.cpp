// Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if any
// criterion fails. Long-running (the KL-UCB batch dominates).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mpts/cli/commands.hpp"
#include "mpts/harness.hpp"
#include "mpts/kl_math.hpp"
#include "mpts/policies.hpp"
#include "mpts/rng.hpp"
#include "mpts/sampling.hpp"
#include "oracles.hpp"

namespace {

using namespace mpts;
namespace fs = std::filesystem;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
    failures += !ok;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const std::vector<double> kScenarioOne = {0.7, 0.6, 0.5, 0.4, 0.3};

// Scenario-1 coefficient at 50 digits, from the decimal means.
oracle::hp scenario_one_coefficient_hp() {
    const oracle::hp mu_l("0.6");
    oracle::hp total = 0;
    for (const char* m : {"0.5", "0.4", "0.3"}) {
        const oracle::hp mu(m);
        total += (mu_l - mu) / oracle::kl_hp(mu, mu_l);
    }
    return total;
}

// ---------------------------------------------------------------------------

void math_oracles() {
    Stopwatch sw;
    double worst_beta = 0, worst_identity = 0;
    for (int a = 1; a <= 50; ++a) {
        for (int b = 1; b <= 50; ++b) {
            for (int j = 1; j <= 99; ++j) {
                const double y = j / 100.0;
                const double ref = oracle::beta_cdf_ibeta(a, b, y);
                worst_beta = std::max(worst_beta, std::fabs(beta_cdf_integer(a, b, Probability(y)).value() - ref));
                const double via_binomial = 1.0 - binomial_cdf(a + b - 1, Probability(y), a - 1);
                worst_identity = std::max(worst_identity, std::fabs(via_binomial - ref));
            }
        }
    }
    const double worst = std::max(worst_beta, worst_identity);
    report(worst <= 1e-10, "math.beta_binomial_identity",
           fmt("max |err| %.3g over a,b in [1,50], y in {0.01..0.99} (tol 1e-10)", worst));

    double worst_pinsker = 0;
    for (int i = 1; i <= 99; ++i) {
        for (int j = 1; j <= 99; ++j) {
            const double p = i / 100.0, q = j / 100.0;
            const double slack = bernoulli_kl(Probability(p), Probability(q)) - 2 * (p - q) * (p - q);
            worst_pinsker = std::min(worst_pinsker, slack);
        }
    }
    report(worst_pinsker >= -1e-12, "math.pinsker",
           fmt("min d(p,q) - 2(p-q)^2 = %.3g on 99x99 grid (tol -1e-12)", worst_pinsker));

    double worst_ucb = 0;
    for (double mu : {0.0, 0.1, 0.5, 0.9, 0.99}) {
        for (std::int64_t n : {1, 10, 100, 1000, 100000}) {
            for (double budget : {0.1, 1.0, std::log(100.0), std::log(1e5), 20.0}) {
                const double got = kl_ucb_index(Probability(mu), n, budget).value();
                const double ref = oracle::kl_ucb_scan(mu, n, budget, 1000000);
                worst_ucb = std::max(worst_ucb, std::fabs(got - ref));
            }
        }
    }
    report(worst_ucb <= 1e-6, "math.kl_ucb_scan",
           fmt("max |bisection - 1e6-point scan| %.6g on 5x5x5 grid (tol 1e-6); %.1fs", worst_ucb, sw.seconds()));
}

// ---------------------------------------------------------------------------

void lower_bound_value() {
    std::ostringstream out, err;
    const int code = cli::run_cli({"lowerbound", "scenario1"}, out, err);
    std::istringstream in(out.str());
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    bool ok = code == 0 && rows.size() == 3;
    double worst_rel = 0, worst_gap = 0;
    const char* decimal_mu[] = {"0.7", "0.6", "0.5", "0.4", "0.3"};
    const double decimal_gap[] = {0, 0, 0.1, 0.2, 0.3};
    for (const auto& r : rows) {
        if (r.size() != 5) {
            ok = false;
            continue;
        }
        const std::size_t arm = std::stoul(r[0]);
        const double gap = std::stod(r[2]), kl = std::stod(r[3]), coeff = std::stod(r[4]);
        const oracle::hp mu(decimal_mu[arm]), mu_l("0.6");
        const oracle::hp kl_ref = oracle::kl_hp(mu, mu_l);
        const oracle::hp coeff_ref = (mu_l - mu) / kl_ref;
        worst_rel = std::max(worst_rel, std::fabs(kl / kl_ref.convert_to<double>() - 1));
        worst_rel = std::max(worst_rel, std::fabs(coeff / coeff_ref.convert_to<double>() - 1));
        // Exact difference of the stored means, and the decimal gap to double rounding.
        ok &= gap == kScenarioOne[1] - kScenarioOne[arm];
        worst_gap = std::max(worst_gap, std::fabs(gap - decimal_gap[arm]));
    }
    ok &= worst_rel <= 1e-9 && worst_gap <= 1e-15;
    report(ok, "lowerbound.scenario1_terms",
           fmt("%zu terms, max rel err vs 50-digit oracle %.3g (tol 1e-9), gaps (0.1,0.2,0.3) max dev %.3g",
               rows.size(), worst_rel, worst_gap));
}

// ---------------------------------------------------------------------------

struct Batch {
    std::vector<RegretTrace> traces;
    AggregateTrace agg;
    double seconds = 0;
};

Batch run(RunConfig config) {
    Stopwatch sw;
    Batch b;
    b.traces = run_traces(config);
    b.agg = aggregate(config, b.traces);
    b.seconds = sw.seconds();
    return b;
}

RunConfig scenario_one(PolicyKind policy, std::uint64_t seed) {
    RunConfig c;
    c.instance.mus = kScenarioOne;
    c.instance.plays = 2;
    c.policy = policy;
    c.horizon = 100000;
    c.n_runs = 1000;
    c.master_seed = seed;
    c.checkpoints = {1000, 10000, 100000};
    return c;
}

void ordered_below(const Batch& lo, const Batch& hi, const std::string& name) {
    const double gap = hi.agg.mean_regret.back() - lo.agg.mean_regret.back();
    const double se = std::hypot(lo.agg.stderr_regret.back(), hi.agg.stderr_regret.back());
    report(gap > 3 * se, name, fmt("gap %.3f vs 3*SE %.3f", gap, 3 * se));
}

void scenario_one_experiments() {
    const Batch ts = run(scenario_one(PolicyKind::MpTs, 42));
    const Batch klucb = run(scenario_one(PolicyKind::MpKlUcb, 43));
    const Batch cucb = run(scenario_one(PolicyKind::Cucb, 44));
    std::cout << fmt("  scenario1 T=1e5 n=1000: mp-ts %.2f (se %.2f, %.0fs), mp-kl-ucb %.2f (se %.2f, %.0fs), "
                     "cucb %.2f (se %.2f, %.0fs)",
                     ts.agg.mean_regret.back(), ts.agg.stderr_regret.back(), ts.seconds,
                     klucb.agg.mean_regret.back(), klucb.agg.stderr_regret.back(), klucb.seconds,
                     cucb.agg.mean_regret.back(), cucb.agg.stderr_regret.back(), cucb.seconds)
              << std::endl;
    ordered_below(ts, klucb, "ordering.mp_ts_below_mp_kl_ucb");
    ordered_below(klucb, cucb, "ordering.mp_kl_ucb_below_cucb");

    const double c = scenario_one_coefficient_hp().convert_to<double>();
    const double slope = (ts.agg.mean_regret[2] - ts.agg.mean_regret[1]) / std::log(10.0);
    report(slope >= 0.6 * c && slope <= 2.0 * c, "slope.mp_ts_vs_bound",
           fmt("slope %.3f, C %.5f, band [%.3f, %.3f]", slope, c, 0.6 * c, 2.0 * c));

    std::vector<double> late, early, diff;
    for (const auto& t : ts.traces) {
        const auto& m = t.multi_suboptimal_rounds;
        early.push_back(static_cast<double>(m[1] - m[0]));
        late.push_back(static_cast<double>(m[2] - m[1]));
        diff.push_back(late.back() - early.back());
    }
    const auto e = mean_and_error(early), l = mean_and_error(late), d = mean_and_error(diff);
    report(l.mean <= e.mean + 3 * d.standard_error, "multisub.decaying_rate",
           fmt("increment [1e4,1e5] %.4g <= [1e3,1e4] %.4g + 3*SE %.4g", l.mean, e.mean, 3 * d.standard_error));
}

// ---------------------------------------------------------------------------

void cascade_experiment() {
    RunConfig c;
    c.instance.mus = {0.24, 0.21, 0.18, 0.15, 0.12, 0.09, 0.06, 0.03, 0.00};
    c.instance.plays = 3;
    c.instance.gammas = std::vector<double>{1.0, 0.7, 0.7};
    c.horizon = 100000;
    c.n_runs = 500;
    c.checkpoints = {100000};
    c.policy = PolicyKind::BcMpTs;
    c.master_seed = 45;
    const Batch bc = run(c);
    c.policy = PolicyKind::MpTs;
    c.master_seed = 46;
    const Batch ts = run(c);
    std::cout << fmt("  cascade9 T=1e5 n=500: bc-mp-ts %.2f (se %.2f), mp-ts %.2f (se %.2f)",
                     bc.agg.mean_regret.back(), bc.agg.stderr_regret.back(), ts.agg.mean_regret.back(),
                     ts.agg.stderr_regret.back())
              << std::endl;
    ordered_below(bc, ts, "cascade.bc_mp_ts_below_mp_ts");
}

// ---------------------------------------------------------------------------

// Ordered selection at `round` of an independent run, as a category index.
std::size_t selection_at(PolicyKind kind, const InstanceSpec& spec, std::size_t round, std::uint64_t seed,
                         std::uint64_t run_id) {
    const Environment env = spec.build();
    auto policy = make_policy(kind, spec.mus.size(), spec.plays);
    Rng rng = stream_for_run(seed, run_id);
    Selection sel;
    std::vector<std::uint8_t> rewards(spec.plays);
    const auto exposures = env.exposures();
    for (std::size_t t = 1;; ++t) {
        policy->select(t, rng, sel);
        if (t == round) break;
        env.draw(sel, rng, rewards);
        policy->update(sel, rewards, exposures);
    }
    return sel[0] * spec.mus.size() + sel[1];
}

void reductions() {
    RunConfig c;
    c.instance.mus = kScenarioOne;
    c.instance.plays = 1;
    c.horizon = 10000;
    c.n_runs = 500;
    c.checkpoints = {10000};
    c.policy = PolicyKind::ImpTs;
    c.master_seed = 47;
    const Batch imp = run(c);
    c.policy = PolicyKind::MpTs;
    c.master_seed = 48;
    const Batch mp = run(c);
    std::vector<double> a, b;
    for (const auto& t : imp.traces) a.push_back(t.cumulative_regret.back());
    for (const auto& t : mp.traces) b.push_back(t.cumulative_regret.back());
    const double p = oracle::welch_p(a, b);
    report(p > 0.01, "reduction.imp_ts_l1_equals_mp_ts",
           fmt("Welch p = %.4f (500 runs each, T=1e4; means %.3f vs %.3f)", p, mean_and_error(a).mean,
               mean_and_error(b).mean));

    // 10^5 independent selections per policy, recorded at round 20.
    InstanceSpec plain{{0.7, 0.5, 0.4, 0.2}, 2, std::nullopt};
    InstanceSpec unit_discount = plain;
    unit_discount.gammas = std::vector<double>{1.0, 1.0};
    const std::size_t k = plain.mus.size();
    std::vector<double> bc_counts(k * k, 0.0), ts_counts(k * k, 0.0);
    for (std::uint64_t r = 0; r < 100000; ++r) {
        bc_counts[selection_at(PolicyKind::BcMpTs, unit_discount, 20, 49, r)] += 1;
        ts_counts[selection_at(PolicyKind::MpTs, plain, 20, 50, r)] += 1;
    }
    const double q = oracle::chi_square_two_sample_p(bc_counts, ts_counts);
    report(q > 0.01, "reduction.bc_unit_discount_equals_mp_ts",
           fmt("chi-square p = %.4f over 12 ordered pairs, 1e5 selections each", q));
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void determinism() {
    const fs::path dir = fs::temp_directory_path() / "mpts_acceptance_determinism";
    fs::create_directories(dir);
    bool ok = true;
    std::string detail;
    for (const char* scenario : {"scenario1", "cascade9"}) {
        std::vector<std::string> files;
        for (const char* threads : {"1", "4", "1", "4"}) {
            const fs::path out = dir / (std::string(scenario) + "_" + std::to_string(files.size()) + ".csv");
            std::ostringstream o, e;
            ok &= cli::run_cli({"run", "--scenario", scenario, "--T", "20000", "--runs", "40", "--seed", "7",
                                "--threads", threads, "--out", out.string()},
                               o, e) == 0;
            files.push_back(slurp(out));
        }
        for (const auto& f : files) ok &= !f.empty() && f == files[0];
        detail += std::string(scenario) + " " + std::to_string(files[0].size()) + " bytes; ";
    }
    fs::remove_all(dir);
    report(ok, "determinism.cli_csv_byte_identical", detail + "threads {1,4}, two executions each");
}

// ---------------------------------------------------------------------------

void beta_sampler() {
    auto moments = [](double a, double b, std::uint64_t seed) {
        Rng rng(seed);
        const int n = 1000000;
        double sum = 0, sum_sq = 0;
        for (int i = 0; i < n; ++i) {
            const double x = sample_beta(a, b, rng);
            sum += x;
            sum_sq += x * x;
        }
        const double mean = sum / n;
        return std::pair{mean, (sum_sq - n * mean * mean) / (n - 1)};
    };
    const auto [m37, v37] = moments(3, 7, 51);
    report(std::fabs(m37 - 0.3) <= 0.002 && std::fabs(v37 / 0.019090909090909091 - 1) <= 0.05,
           "beta.integer_moments", fmt("Beta(3,7) mean %.5f (0.3 +- 0.002), variance %.6f (0.0190909 +- 5%%)", m37, v37));
    const auto [m2, v2] = moments(2, 1.3, 52);
    (void)v2;
    report(std::fabs(m2 - 2.0 / 3.3) <= 0.003, "beta.non_integer_mean",
           fmt("Beta(2,1.3) mean %.5f vs %.5f (tol 0.003)", m2, 2.0 / 3.3));
}

}  // namespace

int main() {
    Stopwatch total;
    math_oracles();
    lower_bound_value();
    beta_sampler();
    determinism();
    reductions();
    cascade_experiment();
    scenario_one_experiments();
    std::cout << fmt("%d criteria failed; %.0fs total", failures, total.seconds()) << std::endl;
    return failures == 0 ? 0 : 1;
}
