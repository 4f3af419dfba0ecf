#pragma once

// Seeded Monte Carlo simulation of a policy on an instance: single runs,
// batches of independent runs and their pointwise aggregation.
//
// Random stream contract: run r of a batch uses stream_for_run(master_seed, r)
// and, every round, consumes it in the order
//   1. policy selection (posterior samples, then tie-break shuffles),
//   2. reward draws, one uniform per position in selection order.
// A trace is therefore a pure function of (config, run id) and batches are
// identical for any number of worker threads.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mpts/environments.hpp"
#include "mpts/policies.hpp"

namespace mpts {

struct InstanceSpec {
    std::vector<double> mus;
    std::size_t plays = 1;
    /// Per-position discounts (gammas[0] == 1); absent for the plain model.
    std::optional<std::vector<double>> gammas;

    bool is_cascade() const noexcept { return gammas.has_value(); }
    Environment build() const;
    friend bool operator==(const InstanceSpec&, const InstanceSpec&) = default;
};

struct RunConfig {
    InstanceSpec instance;
    PolicyKind policy = PolicyKind::MpTs;
    std::uint64_t horizon = 0;
    std::uint64_t n_runs = 1;
    std::uint64_t master_seed = 0;
    /// Strictly increasing rounds in [1, horizon]. Empty means
    /// default_checkpoints(horizon).
    std::vector<std::uint64_t> checkpoints;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 100 roughly log-spaced rounds from 10 to horizon. Rounding collisions at
/// the low end are resolved by bumping to the previous point + 1, so the grid
/// has min(100, horizon - 9) points and always ends at horizon. For horizon
/// below 10 the grid is {horizon}.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t horizon);

/// Throws ConfigError on an invalid instance, checkpoint list, horizon or
/// run count, or when the policy needs a cascade instance it did not get.
/// Returns the effective checkpoint list.
std::vector<std::uint64_t> validate(const RunConfig& config);

struct RegretTrace {
    std::uint64_t run_id = 0;
    std::vector<double> cumulative_regret;            // one per checkpoint
    std::vector<std::uint64_t> multi_suboptimal_rounds;  // cumulative, one per checkpoint
    std::vector<std::uint64_t> draw_counts;           // N_i(T + 1) per arm

    friend bool operator==(const RegretTrace&, const RegretTrace&) = default;
};

struct AggregateTrace {
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> mean_regret;
    std::vector<double> stderr_regret;
    std::vector<double> mean_multi_suboptimal;
    std::uint64_t n_runs = 0;
    /// coefficient * ln(t) per checkpoint when the instance admits a bound.
    std::optional<std::vector<double>> lower_bound;

    friend bool operator==(const AggregateTrace&, const AggregateTrace&) = default;
};

RegretTrace run_single(const RunConfig& config, std::uint64_t run_id);

/// run_single that additionally writes one line per round to `sink`:
///   t,arm_1;...;arm_L,reward_1;...;reward_L
/// A failed write aborts the run with a std::runtime_error naming the round.
RegretTrace log_selection_stream(const RunConfig& config, std::uint64_t run_id, std::ostream& sink);

/// Traces for run ids 0 .. n_runs-1, computed in parallel with OpenMP.
/// threads == 0 keeps the OpenMP default.
std::vector<RegretTrace> run_traces(const RunConfig& config, int threads = 0);

/// Sequential reference for run_traces.
std::vector<RegretTrace> run_traces_serial(const RunConfig& config);

/// Pointwise mean and standard error over traces. The result does not depend
/// on the order of `traces`: each column is sorted and summed pairwise.
AggregateTrace aggregate(const RunConfig& config, std::span<const RegretTrace> traces);

AggregateTrace run_batch(const RunConfig& config, int threads = 0);
AggregateTrace run_batch_serial(const RunConfig& config);

/// Order-independent pairwise sum (sorts a copy first).
double stable_sum(std::span<const double> values);

struct MeanAndError {
    double mean = 0.0;
    double standard_error = 0.0;  // 0 when fewer than two values
};

MeanAndError mean_and_error(std::span<const double> values);

}  // namespace mpts
