#include "mpts/cli/csv.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

#ifndef MPTS_VERSION
#define MPTS_VERSION "unknown"
#endif

namespace mpts::cli {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_aggregate_csv(std::ostream& out, const AggregateTrace& trace) {
    out << kCsvHeader << '\n';
    for (std::size_t c = 0; c < trace.checkpoints.size(); ++c) {
        out << trace.checkpoints[c] << ',' << format_double(trace.mean_regret[c]) << ','
            << format_double(trace.stderr_regret[c]) << ',' << format_double(trace.mean_multi_suboptimal[c]) << ',';
        if (trace.lower_bound) out << format_double((*trace.lower_bound)[c]);
        out << '\n';
    }
}

void write_run_metadata(std::ostream& out, const ScenarioFile& scenario, const AggregateTrace& trace) {
    nlohmann::json doc;
    doc["code_version"] = code_version();
    doc["scenario"] = nlohmann::json::parse(serialize_scenario(scenario));
    doc["checkpoints"] = trace.checkpoints;
    doc["n_runs"] = trace.n_runs;
    doc["rng"] = "xoshiro256**; run r seeded with splitmix64(splitmix64(seed) ^ r)";
    doc["csv_columns"] = std::string(kCsvHeader);
    out << doc.dump(2) << '\n';
}

std::string code_version() { return MPTS_VERSION; }

}  // namespace mpts::cli
