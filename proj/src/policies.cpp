#include "mpts/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mpts/kl_math.hpp"
#include "mpts/sampling.hpp"

namespace mpts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<PolicyKind, 5> kAllKinds = {PolicyKind::MpTs, PolicyKind::ImpTs, PolicyKind::BcMpTs,
                                                 PolicyKind::Cucb, PolicyKind::MpKlUcb};

// Top `plays` indices by score into `out`. `order` is scratch.
void top_into(std::span<const double> scores, std::size_t plays, Rng& rng, std::vector<std::size_t>& order,
              std::vector<std::size_t>& out) {
    const std::size_t k = scores.size();
    order.resize(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t head = std::min(plays + 1, k);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(head), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
                      });
    bool tied = false;
    for (std::size_t i = 0; i + 1 < head; ++i) {
        if (scores[order[i]] == scores[order[i + 1]]) {
            tied = true;
            break;
        }
    }
    if (tied) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = k - 1; i > 0; --i) {
            std::swap(order[i], order[rng.below(i + 1)]);
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    }
    out.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(plays));
}

void check_plays(std::size_t plays, std::size_t num_arms) {
    if (plays < 1 || plays > num_arms) throw std::invalid_argument("need 1 <= L <= K");
}

double empirical_score(const FreqArmStat& s) { return s.draws >= 1 ? s.mean() : -kInf; }

TsArmStat posterior_of(const FreqArmStat& s) {
    TsArmStat ts;
    ts.successes = 1.0 + static_cast<double>(s.successes);
    ts.failures = 1.0 + static_cast<double>(s.draws - s.successes);
    ts.effective_draws = ts.successes + ts.failures;
    return ts;
}

// Shared by the free function and the stateful policy. `thetas` holds one
// entry per arm; it is filled lazily through `sample` for the TS slot.
template <typename SampleFn>
void imp_ts_into(std::span<const FreqArmStat> stats, std::size_t plays, Rng& rng, SampleFn&& sample,
                 std::vector<double>& scores, std::vector<std::size_t>& order, std::vector<std::size_t>& out) {
    const std::size_t k = stats.size();
    scores.resize(k);
    std::vector<std::size_t>& chosen = out;
    if (plays > 1) {
        for (std::size_t i = 0; i < k; ++i) scores[i] = empirical_score(stats[i]);
        top_into(scores, plays - 1, rng, order, chosen);
    } else {
        chosen.clear();
    }
    for (std::size_t i = 0; i < k; ++i) scores[i] = 0.0;
    for (std::size_t arm : chosen) scores[arm] = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
        if (scores[i] != -kInf) scores[i] = sample(i);
    }
    std::vector<std::size_t> last;
    top_into(scores, 1, rng, order, last);
    chosen.push_back(last[0]);
}

class MpTsPolicy final : public Policy {
public:
    MpTsPolicy(std::size_t num_arms, std::size_t plays) : stats_(num_arms), thetas_(num_arms), plays_(plays) {}

    PolicyKind kind() const noexcept override { return PolicyKind::MpTs; }

    void select(std::uint64_t, Rng& rng, Selection& out) override {
        for (std::size_t i = 0; i < stats_.size(); ++i) {
            thetas_[i] = sample_beta(stats_[i].successes, stats_[i].failures, rng);
        }
        top_into(thetas_, plays_, rng, order_, out.arms);
    }

    void update(const Selection& sel, std::span<const std::uint8_t> rewards, std::span<const double>) override {
        for (std::size_t j = 0; j < sel.size(); ++j) stats_[sel[j]] = update_ts(stats_[sel[j]], rewards[j] != 0);
    }

private:
    std::vector<TsArmStat> stats_;
    std::vector<double> thetas_;
    std::vector<std::size_t> order_;
    std::size_t plays_;
};

class ImpTsPolicy final : public Policy {
public:
    ImpTsPolicy(std::size_t num_arms, std::size_t plays) : stats_(num_arms), plays_(plays) {}

    PolicyKind kind() const noexcept override { return PolicyKind::ImpTs; }

    void select(std::uint64_t, Rng& rng, Selection& out) override {
        auto sample = [&](std::size_t arm) {
            const TsArmStat p = posterior_of(stats_[arm]);
            return sample_beta(p.successes, p.failures, rng);
        };
        imp_ts_into(stats_, plays_, rng, sample, scores_, order_, out.arms);
    }

    void update(const Selection& sel, std::span<const std::uint8_t> rewards, std::span<const double>) override {
        for (std::size_t j = 0; j < sel.size(); ++j) stats_[sel[j]] = update_freq(stats_[sel[j]], rewards[j] != 0);
    }

private:
    std::vector<FreqArmStat> stats_;
    std::vector<double> scores_;
    std::vector<std::size_t> order_;
    std::size_t plays_;
};

class BcMpTsPolicy final : public Policy {
public:
    BcMpTsPolicy(std::size_t num_arms, std::size_t plays) : stats_(num_arms), thetas_(num_arms), plays_(plays) {}

    PolicyKind kind() const noexcept override { return PolicyKind::BcMpTs; }

    void select(std::uint64_t, Rng& rng, Selection& out) override {
        for (std::size_t i = 0; i < stats_.size(); ++i) {
            auto& s = stats_[i];
            s.failures = std::max(s.effective_draws - s.successes, 1.0);
            thetas_[i] = sample_beta(s.successes, s.failures, rng);
        }
        top_into(thetas_, plays_, rng, order_, out.arms);
    }

    void update(const Selection& sel, std::span<const std::uint8_t> rewards,
                std::span<const double> exposures) override {
        for (std::size_t l = 0; l < sel.size(); ++l) {
            stats_[sel[l]] = update_bc(stats_[sel[l]], rewards[l] != 0, exposures[l]);
        }
    }

private:
    std::vector<TsArmStat> stats_;
    std::vector<double> thetas_;
    std::vector<std::size_t> order_;
    std::size_t plays_;
};

class IndexPolicy final : public Policy {
public:
    IndexPolicy(PolicyKind kind, std::size_t num_arms, std::size_t plays)
        : kind_(kind), stats_(num_arms), indices_(num_arms), plays_(plays) {}

    PolicyKind kind() const noexcept override { return kind_; }

    void select(std::uint64_t round, Rng& rng, Selection& out) override {
        for (std::size_t i = 0; i < stats_.size(); ++i) indices_[i] = arm_index(kind_, stats_[i], round);
        top_into(indices_, plays_, rng, order_, out.arms);
    }

    void update(const Selection& sel, std::span<const std::uint8_t> rewards, std::span<const double>) override {
        for (std::size_t j = 0; j < sel.size(); ++j) stats_[sel[j]] = update_freq(stats_[sel[j]], rewards[j] != 0);
    }

private:
    PolicyKind kind_;
    std::vector<FreqArmStat> stats_;
    std::vector<double> indices_;
    std::vector<std::size_t> order_;
    std::size_t plays_;
};

}  // namespace

std::string_view policy_name(PolicyKind kind) noexcept {
    switch (kind) {
        case PolicyKind::MpTs: return "mp-ts";
        case PolicyKind::ImpTs: return "imp-ts";
        case PolicyKind::BcMpTs: return "bc-mp-ts";
        case PolicyKind::Cucb: return "cucb";
        case PolicyKind::MpKlUcb: return "mp-kl-ucb";
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) noexcept {
    for (PolicyKind kind : kAllKinds) {
        if (policy_name(kind) == name) return kind;
    }
    return std::nullopt;
}

std::span<const PolicyKind> all_policy_kinds() noexcept { return kAllKinds; }

TsArmStat update_ts(TsArmStat stat, bool reward) noexcept {
    if (reward) {
        stat.successes += 1.0;
    } else {
        stat.failures += 1.0;
    }
    stat.effective_draws += 1.0;
    return stat;
}

TsArmStat update_bc(TsArmStat stat, bool reward, double exposure) noexcept {
    if (reward) stat.successes += 1.0;
    stat.effective_draws += exposure;
    return stat;
}

FreqArmStat update_freq(FreqArmStat stat, bool reward) noexcept {
    stat.draws += 1;
    stat.successes += reward ? 1 : 0;
    return stat;
}

Selection top_by_score(std::span<const double> scores, std::size_t plays, Rng& rng) {
    check_plays(plays, scores.size());
    Selection sel;
    std::vector<std::size_t> order;
    top_into(scores, plays, rng, order, sel.arms);
    return sel;
}

Selection select_mp_ts(std::span<const TsArmStat> stats, std::size_t plays, Rng& rng) {
    check_plays(plays, stats.size());
    std::vector<double> thetas(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        thetas[i] = sample_beta(stats[i].successes, stats[i].failures, rng);
    }
    return top_by_score(thetas, plays, rng);
}

Selection select_imp_ts(std::span<const FreqArmStat> stats, std::size_t plays, Rng& rng) {
    check_plays(plays, stats.size());
    auto sample = [&](std::size_t arm) {
        const TsArmStat p = posterior_of(stats[arm]);
        return sample_beta(p.successes, p.failures, rng);
    };
    Selection sel;
    std::vector<double> scores;
    std::vector<std::size_t> order;
    imp_ts_into(stats, plays, rng, sample, scores, order, sel.arms);
    return sel;
}

Selection select_imp_ts_with_samples(std::span<const FreqArmStat> stats, std::span<const double> thetas,
                                     std::size_t plays, Rng& rng) {
    check_plays(plays, stats.size());
    if (thetas.size() != stats.size()) throw std::invalid_argument("one theta per arm required");
    Selection sel;
    std::vector<double> scores;
    std::vector<std::size_t> order;
    imp_ts_into(stats, plays, rng, [&](std::size_t arm) { return thetas[arm]; }, scores, order, sel.arms);
    return sel;
}

Selection select_bc_mp_ts(std::span<TsArmStat> stats, std::size_t plays, Rng& rng) {
    check_plays(plays, stats.size());
    std::vector<double> thetas(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        auto& s = stats[i];
        s.failures = std::max(s.effective_draws - s.successes, 1.0);
        thetas[i] = sample_beta(s.successes, s.failures, rng);
    }
    return top_by_score(thetas, plays, rng);
}

double arm_index(PolicyKind kind, const FreqArmStat& stat, std::uint64_t round) {
    if (stat.draws == 0) return kInf;
    const Probability mu_hat(stat.mean());
    const auto t = static_cast<double>(round);
    switch (kind) {
        case PolicyKind::Cucb: return cucb_index(mu_hat, stat.draws, t);
        case PolicyKind::MpKlUcb: return kl_ucb_index(mu_hat, stat.draws, std::log(t)).value();
        default: throw std::invalid_argument("arm_index: not an index policy");
    }
}

Selection select_index_policy(PolicyKind kind, std::span<const FreqArmStat> stats, std::uint64_t round,
                              std::size_t plays, Rng& rng) {
    check_plays(plays, stats.size());
    if (round < 1) throw std::invalid_argument("round must be >= 1");
    std::vector<double> indices(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) indices[i] = arm_index(kind, stats[i], round);
    return top_by_score(indices, plays, rng);
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, std::size_t num_arms, std::size_t plays) {
    check_plays(plays, num_arms);
    switch (kind) {
        case PolicyKind::MpTs: return std::make_unique<MpTsPolicy>(num_arms, plays);
        case PolicyKind::ImpTs: return std::make_unique<ImpTsPolicy>(num_arms, plays);
        case PolicyKind::BcMpTs: return std::make_unique<BcMpTsPolicy>(num_arms, plays);
        case PolicyKind::Cucb:
        case PolicyKind::MpKlUcb: return std::make_unique<IndexPolicy>(kind, num_arms, plays);
    }
    throw std::invalid_argument("unknown policy kind");
}

}  // namespace mpts
