#include "mpts/cli/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mpts/rng.hpp"

namespace mpts::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {"name", "arms",  "L",    "gammas",     "policy",
                                          "T",    "n_runs", "seed", "checkpoints"};

template <typename T>
T get_required(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ScenarioError(std::string("scenario is missing key '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
std::optional<T> get_optional(const json& doc, const char* key) {
    if (!doc.contains(key)) return std::nullopt;
    return get_required<T>(doc, key);
}

ScenarioFile make_preset(std::string name, std::vector<double> arms, std::size_t plays,
                         std::optional<std::vector<double>> gammas, PolicyKind policy, std::uint64_t n_runs) {
    ScenarioFile s;
    s.name = std::move(name);
    s.instance.mus = std::move(arms);
    s.instance.plays = plays;
    s.instance.gammas = std::move(gammas);
    s.policy = policy;
    s.horizon = 100000;
    s.n_runs = n_runs;
    s.seed = 42;
    return s;
}

std::vector<ScenarioFile> make_presets() {
    std::vector<ScenarioFile> presets;
    presets.push_back(make_preset("scenario1", {0.7, 0.6, 0.5, 0.4, 0.3}, 2, std::nullopt, PolicyKind::MpTs, 1000));

    std::vector<double> twenty = {0.15, 0.12, 0.10};
    twenty.insert(twenty.end(), 9, 0.05);
    twenty.insert(twenty.end(), 8, 0.03);
    presets.push_back(make_preset("scenario2", std::move(twenty), 3, std::nullopt, PolicyKind::MpTs, 1000));

    presets.push_back(make_preset("cascade9", {0.24, 0.21, 0.18, 0.15, 0.12, 0.09, 0.06, 0.03, 0.00}, 3,
                                  std::vector<double>{1.0, 0.7, 0.7}, PolicyKind::BcMpTs, 500));

    presets.push_back(make_preset("synthetic-many", synthetic_many_arms(), 3, std::nullopt, PolicyKind::MpTs, 1000));
    return presets;
}

}  // namespace

RunConfig ScenarioFile::to_run_config() const {
    RunConfig config;
    config.instance = instance;
    config.policy = policy;
    config.horizon = horizon;
    config.n_runs = n_runs;
    config.master_seed = seed;
    if (checkpoints) config.checkpoints = *checkpoints;
    return config;
}

ScenarioFile parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario must be a JSON object");
    for (const auto& item : doc.items()) {
        if (!kKnownKeys.count(item.key())) throw ScenarioError("unknown scenario key '" + item.key() + "'");
    }

    ScenarioFile s;
    s.name = get_required<std::string>(doc, "name");
    s.instance.mus = get_required<std::vector<double>>(doc, "arms");
    s.instance.plays = get_required<std::size_t>(doc, "L");
    s.instance.gammas = get_optional<std::vector<double>>(doc, "gammas");

    const auto policy_name_text = get_required<std::string>(doc, "policy");
    const auto kind = parse_policy_kind(policy_name_text);
    if (!kind) throw ScenarioError("unknown policy '" + policy_name_text + "'");
    s.policy = *kind;

    s.horizon = get_required<std::uint64_t>(doc, "T");
    s.n_runs = get_required<std::uint64_t>(doc, "n_runs");
    s.seed = get_required<std::uint64_t>(doc, "seed");
    s.checkpoints = get_optional<std::vector<std::uint64_t>>(doc, "checkpoints");

    try {
        (void)validate(s.to_run_config());
    } catch (const ConfigError& e) {
        throw ScenarioError(e.what());
    }
    return s;
}

std::string serialize_scenario(const ScenarioFile& s) {
    json doc;
    doc["name"] = s.name;
    doc["arms"] = s.instance.mus;
    doc["L"] = s.instance.plays;
    if (s.instance.gammas) doc["gammas"] = *s.instance.gammas;
    doc["policy"] = std::string(policy_name(s.policy));
    doc["T"] = s.horizon;
    doc["n_runs"] = s.n_runs;
    doc["seed"] = s.seed;
    if (s.checkpoints) doc["checkpoints"] = *s.checkpoints;
    return doc.dump(2);
}

std::vector<double> synthetic_many_arms() {
    Rng rng(kSyntheticManySeed);
    std::vector<double> arms(60);
    for (double& mu : arms) mu = 0.01 + 0.06 * rng.uniform();
    return arms;
}

const std::vector<ScenarioFile>& builtin_scenarios() {
    static const std::vector<ScenarioFile> presets = make_presets();
    return presets;
}

std::optional<ScenarioFile> find_preset(std::string_view name) {
    for (const auto& s : builtin_scenarios()) {
        if (s.name == name) return s;
    }
    return std::nullopt;
}

ScenarioFile resolve_scenario(std::string_view name_or_path) {
    if (auto preset = find_preset(name_or_path)) return *preset;
    std::ifstream in{std::string(name_or_path)};
    if (!in) throw ScenarioError("unknown scenario '" + std::string(name_or_path) + "' (not a preset or readable file)");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

}  // namespace mpts::cli
