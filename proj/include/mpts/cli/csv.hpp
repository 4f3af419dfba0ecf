#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "mpts/cli/scenario.hpp"
#include "mpts/harness.hpp"

namespace mpts::cli {

inline constexpr std::string_view kCsvHeader = "checkpoint_t,mean_regret,stderr_regret,mean_multisub,lower_bound";

/// %.17g, so every double survives a text round trip bit-exactly.
std::string format_double(double value);

/// Header line then one row per checkpoint. lower_bound is left empty when
/// the instance has no bound.
void write_aggregate_csv(std::ostream& out, const AggregateTrace& trace);

/// JSON sidecar describing how a CSV was produced: the effective scenario,
/// checkpoint grid, seed-derivation scheme and code version.
void write_run_metadata(std::ostream& out, const ScenarioFile& scenario, const AggregateTrace& trace);

std::string code_version();

}  // namespace mpts::cli
