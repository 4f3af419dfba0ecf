#include "mpts/environments.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mpts {

BernoulliBandit::BernoulliBandit(std::vector<double> mus, std::size_t plays)
    : mus_(std::move(mus)), plays_(plays) {
    const std::size_t k = mus_.size();
    if (k < 2) throw std::invalid_argument("bandit needs at least 2 arms");
    if (plays_ < 1 || plays_ >= k) throw std::invalid_argument("bandit needs 1 <= L < K");
    for (std::size_t i = 0; i < k; ++i) {
        if (!(mus_[i] >= 0.0 && mus_[i] < 1.0)) {
            throw std::invalid_argument("arm " + std::to_string(i) + " mean must lie in [0, 1)");
        }
    }
    ranking_.resize(k);
    std::iota(ranking_.begin(), ranking_.end(), std::size_t{0});
    std::stable_sort(ranking_.begin(), ranking_.end(),
                     [&](std::size_t a, std::size_t b) { return mus_[a] > mus_[b]; });
    optimal_.assign(k, false);
    for (std::size_t l = 0; l < plays_; ++l) optimal_[ranking_[l]] = true;
    marginal_mean_ = mus_[ranking_[plays_ - 1]];
}

bool BernoulliBandit::has_boundary_mean() const noexcept {
    return std::any_of(mus_.begin(), mus_.end(), [](double m) { return m == 0.0; });
}

void BernoulliBandit::validate(const Selection& sel) const {
    if (sel.size() != plays_) {
        throw std::invalid_argument("selection has " + std::to_string(sel.size()) + " arms, expected " +
                                    std::to_string(plays_));
    }
    std::vector<bool> seen(num_arms(), false);
    for (std::size_t arm : sel.arms) {
        if (arm >= num_arms()) throw std::invalid_argument("selection arm out of range");
        if (seen[arm]) throw std::invalid_argument("selection repeats an arm");
        seen[arm] = true;
    }
}

CascadeBandit::CascadeBandit(BernoulliBandit base, std::vector<double> gammas)
    : base_(std::move(base)), gammas_(std::move(gammas)) {
    if (gammas_.size() != base_.plays()) {
        throw std::invalid_argument("cascade needs one discount per position");
    }
    if (gammas_[0] != 1.0) throw std::invalid_argument("discount of the first position must be 1");
    for (double g : gammas_) {
        if (!(g > 0.0 && g <= 1.0)) throw std::invalid_argument("discounts must lie in (0, 1]");
    }
    exposures_.resize(gammas_.size());
    double e = 1.0;
    for (std::size_t l = 0; l < gammas_.size(); ++l) {
        if (l > 0) e *= gammas_[l];
        exposures_[l] = e;
    }
}

CascadeBandit CascadeBandit::with_constant_discount(BernoulliBandit base, double gamma) {
    std::vector<double> gammas(base.plays(), gamma);
    gammas[0] = 1.0;
    return CascadeBandit(std::move(base), std::move(gammas));
}

void draw_rewards(const BernoulliBandit& instance, const Selection& sel, Rng& rng,
                  std::span<std::uint8_t> rewards) {
    for (std::size_t j = 0; j < sel.size(); ++j) {
        rewards[j] = rng.bernoulli(instance.mu(sel[j])) ? 1 : 0;
    }
}

std::vector<std::uint8_t> draw_rewards(const BernoulliBandit& instance, const Selection& sel, Rng& rng) {
    instance.validate(sel);
    std::vector<std::uint8_t> rewards(sel.size());
    draw_rewards(instance, sel, rng, rewards);
    return rewards;
}

void cascade_draw(const CascadeBandit& instance, const Selection& sel, Rng& rng,
                  std::span<std::uint8_t> rewards) {
    for (std::size_t l = 0; l < sel.size(); ++l) {
        rewards[l] = rng.bernoulli(instance.exposure(l) * instance.base().mu(sel[l])) ? 1 : 0;
    }
}

std::vector<std::uint8_t> cascade_draw(const CascadeBandit& instance, const Selection& sel, Rng& rng) {
    instance.base().validate(sel);
    std::vector<std::uint8_t> rewards(sel.size());
    cascade_draw(instance, sel, rng, rewards);
    return rewards;
}

double per_round_regret(const BernoulliBandit& instance, const Selection& sel) {
    // Summing only over the symmetric difference makes the top-L set score
    // exactly zero; rounded addition is monotone, so the result is >= 0.
    double missed = 0.0;
    for (std::size_t l = 0; l < instance.plays(); ++l) {
        const std::size_t arm = instance.ranking()[l];
        if (std::find(sel.arms.begin(), sel.arms.end(), arm) == sel.arms.end()) missed += instance.mu(arm);
    }
    double taken = 0.0;
    for (std::size_t arm : sel.arms) {
        if (!instance.is_optimal(arm)) taken += instance.mu(arm);
    }
    return missed - taken;
}

double cascade_per_round_regret(const CascadeBandit& instance, const Selection& sel) {
    const auto& base = instance.base();
    double regret = 0.0;
    for (std::size_t l = 0; l < sel.size(); ++l) {
        regret += instance.exposure(l) * (base.mu(base.ranking()[l]) - base.mu(sel[l]));
    }
    return std::max(regret, 0.0);
}

Environment::Environment(BernoulliBandit instance)
    : plain_(std::move(instance)), exposures_(plain_->plays(), 1.0) {}

Environment::Environment(CascadeBandit instance)
    : cascade_(std::move(instance)),
      exposures_(cascade_->exposures().begin(), cascade_->exposures().end()) {}

const BernoulliBandit& Environment::base() const noexcept {
    return cascade_ ? cascade_->base() : *plain_;
}

const CascadeBandit& Environment::cascade() const {
    if (!cascade_) throw std::logic_error("environment is not a cascade instance");
    return *cascade_;
}

void Environment::draw(const Selection& sel, Rng& rng, std::span<std::uint8_t> rewards) const {
    if (cascade_) {
        cascade_draw(*cascade_, sel, rng, rewards);
    } else {
        draw_rewards(*plain_, sel, rng, rewards);
    }
}

double Environment::regret(const Selection& sel) const {
    return cascade_ ? cascade_per_round_regret(*cascade_, sel) : per_round_regret(*plain_, sel);
}

}  // namespace mpts
