#include "mpts/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>

#include "mpts/kl_math.hpp"

namespace mpts {

namespace {

constexpr std::size_t kPairwiseBlock = 8;

double pairwise(std::span<const double> v) {
    if (v.size() <= kPairwiseBlock) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

RegretTrace simulate(const RunConfig& config, const Environment& env, std::span<const std::uint64_t> checkpoints,
                     std::uint64_t run_id, std::ostream* sink) {
    const BernoulliBandit& base = env.base();
    const std::size_t plays = base.plays();
    Rng rng = stream_for_run(config.master_seed, run_id);
    auto policy = make_policy(config.policy, base.num_arms(), plays);

    RegretTrace trace;
    trace.run_id = run_id;
    trace.cumulative_regret.reserve(checkpoints.size());
    trace.multi_suboptimal_rounds.reserve(checkpoints.size());
    trace.draw_counts.assign(base.num_arms(), 0);

    Selection sel;
    sel.arms.reserve(plays);
    std::vector<std::uint8_t> rewards(plays);
    double regret = 0.0;
    std::uint64_t multi_suboptimal = 0;
    std::size_t next_checkpoint = 0;

    for (std::uint64_t t = 1; t <= config.horizon; ++t) {
        policy->select(t, rng, sel);
        env.draw(sel, rng, rewards);
        regret += env.regret(sel);

        std::size_t suboptimal = 0;
        for (std::size_t arm : sel.arms) {
            ++trace.draw_counts[arm];
            if (base.is_suboptimal(arm)) ++suboptimal;
        }
        if (suboptimal >= 2) ++multi_suboptimal;

        if (sink != nullptr) {
            std::ostream& out = *sink;
            out << t << ',';
            for (std::size_t l = 0; l < plays; ++l) out << (l ? ";" : "") << sel[l];
            out << ',';
            for (std::size_t l = 0; l < plays; ++l) out << (l ? ";" : "") << int{rewards[l]};
            out << '\n';
            if (!out) throw std::runtime_error("selection log write failed at round " + std::to_string(t));
        }

        policy->update(sel, rewards, env.exposures());

        if (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
            trace.cumulative_regret.push_back(regret);
            trace.multi_suboptimal_rounds.push_back(multi_suboptimal);
            ++next_checkpoint;
        }
    }
    return trace;
}

struct Prepared {
    Environment env;
    std::vector<std::uint64_t> checkpoints;
};

Prepared prepare(const RunConfig& config) {
    auto checkpoints = validate(config);
    return Prepared{config.instance.build(), std::move(checkpoints)};
}

}  // namespace

Environment InstanceSpec::build() const {
    BernoulliBandit base(mus, plays);
    if (gammas) return Environment(CascadeBandit(std::move(base), *gammas));
    return Environment(std::move(base));
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon) {
    if (horizon <= 10) return {horizon};
    const std::uint64_t n = std::min<std::uint64_t>(100, horizon - 9);
    std::vector<std::uint64_t> points;
    points.reserve(n);
    const double ratio = static_cast<double>(horizon) / 10.0;
    std::uint64_t prev = 9;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = 10.0 * std::pow(ratio, static_cast<double>(i) / static_cast<double>(n - 1));
        auto v = static_cast<std::uint64_t>(std::llround(x));
        v = std::max(v, prev + 1);
        v = std::min(v, horizon - (n - 1 - i));
        points.push_back(v);
        prev = v;
    }
    points.back() = horizon;
    return points;
}

std::vector<std::uint64_t> validate(const RunConfig& config) {
    try {
        (void)config.instance.build();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid instance: ") + e.what());
    }
    if (requires_cascade(config.policy) && !config.instance.is_cascade()) {
        throw ConfigError("policy requires cascade instance");
    }
    if (config.horizon < 1) throw ConfigError("horizon must be >= 1");
    if (config.n_runs < 1) throw ConfigError("n_runs must be >= 1");

    std::vector<std::uint64_t> checkpoints =
        config.checkpoints.empty() ? default_checkpoints(config.horizon) : config.checkpoints;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1) throw ConfigError("checkpoints must be >= 1");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
            throw ConfigError("checkpoints must be strictly increasing");
        }
    }
    if (checkpoints.back() > config.horizon) throw ConfigError("checkpoint beyond the horizon");
    return checkpoints;
}

RegretTrace run_single(const RunConfig& config, std::uint64_t run_id) {
    const Prepared p = prepare(config);
    return simulate(config, p.env, p.checkpoints, run_id, nullptr);
}

RegretTrace log_selection_stream(const RunConfig& config, std::uint64_t run_id, std::ostream& sink) {
    const Prepared p = prepare(config);
    return simulate(config, p.env, p.checkpoints, run_id, &sink);
}

std::vector<RegretTrace> run_traces(const RunConfig& config, int threads) {
    const Prepared p = prepare(config);
    const auto n = static_cast<std::int64_t>(config.n_runs);
    std::vector<RegretTrace> traces(config.n_runs);
    std::exception_ptr failure;
    const int workers = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t r = 0; r < n; ++r) {
        try {
            traces[static_cast<std::size_t>(r)] =
                simulate(config, p.env, p.checkpoints, static_cast<std::uint64_t>(r), nullptr);
        } catch (...) {
#pragma omp critical(mpts_run_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return traces;
}

std::vector<RegretTrace> run_traces_serial(const RunConfig& config) {
    const Prepared p = prepare(config);
    std::vector<RegretTrace> traces;
    traces.reserve(config.n_runs);
    for (std::uint64_t r = 0; r < config.n_runs; ++r) {
        traces.push_back(simulate(config, p.env, p.checkpoints, r, nullptr));
    }
    return traces;
}

double stable_sum(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return pairwise(sorted);
}

MeanAndError mean_and_error(std::span<const double> values) {
    MeanAndError out;
    const std::size_t n = values.size();
    if (n == 0) return out;
    out.mean = stable_sum(values) / static_cast<double>(n);
    if (n < 2) return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - out.mean;
        sq[i] = d * d;
    }
    const double variance = stable_sum(sq) / static_cast<double>(n - 1);
    out.standard_error = std::sqrt(variance / static_cast<double>(n));
    return out;
}

AggregateTrace aggregate(const RunConfig& config, std::span<const RegretTrace> traces) {
    AggregateTrace agg;
    agg.checkpoints = validate(config);
    agg.n_runs = traces.size();
    const std::size_t m = agg.checkpoints.size();
    agg.mean_regret.resize(m);
    agg.stderr_regret.resize(m);
    agg.mean_multi_suboptimal.resize(m);

    std::vector<double> column(traces.size());
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = 0; r < traces.size(); ++r) {
            if (traces[r].cumulative_regret.size() != m) {
                throw std::invalid_argument("trace does not match the checkpoint grid");
            }
            column[r] = traces[r].cumulative_regret[c];
        }
        const MeanAndError regret = mean_and_error(column);
        agg.mean_regret[c] = regret.mean;
        agg.stderr_regret[c] = regret.standard_error;

        for (std::size_t r = 0; r < traces.size(); ++r) {
            column[r] = static_cast<double>(traces[r].multi_suboptimal_rounds[c]);
        }
        agg.mean_multi_suboptimal[c] = mean_and_error(column).mean;
    }

    try {
        const LowerBoundReport report = lower_bound_coefficient(config.instance.mus, config.instance.plays);
        std::vector<double> curve(m);
        for (std::size_t c = 0; c < m; ++c) curve[c] = report.at(static_cast<double>(agg.checkpoints[c]));
        agg.lower_bound = std::move(curve);
    } catch (const std::exception&) {
        agg.lower_bound.reset();
    }
    return agg;
}

AggregateTrace run_batch(const RunConfig& config, int threads) {
    const auto traces = run_traces(config, threads);
    return aggregate(config, traces);
}

AggregateTrace run_batch_serial(const RunConfig& config) {
    const auto traces = run_traces_serial(config);
    return aggregate(config, traces);
}

}  // namespace mpts
