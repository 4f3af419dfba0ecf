#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpts/harness.hpp"

namespace mpts::cli {

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A named experiment: instance plus default run parameters.
///
/// On disk this is a JSON object with keys
///   name, arms, L, gammas (optional), policy, T, n_runs, seed,
///   checkpoints (optional)
/// Any other key is rejected.
struct ScenarioFile {
    std::string name;
    InstanceSpec instance;
    PolicyKind policy = PolicyKind::MpTs;
    std::uint64_t horizon = 100000;
    std::uint64_t n_runs = 1000;
    std::uint64_t seed = 42;
    std::optional<std::vector<std::uint64_t>> checkpoints;

    RunConfig to_run_config() const;
    friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

ScenarioFile parse_scenario(std::string_view text);
std::string serialize_scenario(const ScenarioFile& scenario);

/// scenario1, scenario2, cascade9, synthetic-many.
const std::vector<ScenarioFile>& builtin_scenarios();
std::optional<ScenarioFile> find_preset(std::string_view name);

/// Seed of the generator behind the synthetic-many preset.
inline constexpr std::uint64_t kSyntheticManySeed = 20120;

/// 60 means drawn uniformly from [0.01, 0.07) with Rng(kSyntheticManySeed).
std::vector<double> synthetic_many_arms();

/// A preset name, or else a path to a scenario file.
ScenarioFile resolve_scenario(std::string_view name_or_path);

}  // namespace mpts::cli
