#pragma once

// Ground-truth bandit instances: reward generation and exact expected regret
// for the plain multiple-play model and the position-discounted cascade model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mpts/rng.hpp"

namespace mpts {

/// Ordered list of distinct arm indices chosen in one round. The order only
/// matters for cascade instances (entry l is placed at position l).
struct Selection {
    std::vector<std::size_t> arms;

    std::size_t size() const noexcept { return arms.size(); }
    std::size_t operator[](std::size_t i) const noexcept { return arms[i]; }
    friend bool operator==(const Selection&, const Selection&) = default;
};

class BernoulliBandit {
public:
    /// Throws std::invalid_argument unless K >= 2, 1 <= plays < K and every
    /// mean lies in [0, 1). A mean of exactly 0 is accepted (see
    /// has_boundary_mean()).
    BernoulliBandit(std::vector<double> mus, std::size_t plays);

    std::size_t num_arms() const noexcept { return mus_.size(); }
    std::size_t plays() const noexcept { return plays_; }
    std::span<const double> mus() const noexcept { return mus_; }
    double mu(std::size_t arm) const noexcept { return mus_[arm]; }

    /// Arms sorted by mean, descending; ties keep index order.
    std::span<const std::size_t> ranking() const noexcept { return ranking_; }

    /// The reference top-L set, ranking()[0 .. L).
    bool is_optimal(std::size_t arm) const noexcept { return optimal_[arm]; }

    /// Mean strictly below the L-th largest mean.
    bool is_suboptimal(std::size_t arm) const noexcept { return mus_[arm] < marginal_mean_; }

    double marginal_mean() const noexcept { return marginal_mean_; }

    /// True when some arm has mean exactly 0, outside the open-interval model.
    bool has_boundary_mean() const noexcept;

    /// Throws std::invalid_argument unless sel holds exactly L distinct
    /// in-range arms.
    void validate(const Selection& sel) const;

private:
    std::vector<double> mus_;
    std::size_t plays_;
    std::vector<std::size_t> ranking_;
    std::vector<bool> optimal_;
    double marginal_mean_;
};

class CascadeBandit {
public:
    /// gammas has length L; gammas[0] must be 1 and all entries lie in (0, 1].
    /// gammas[l] is the probability that position l is examined given that
    /// position l - 1 was.
    CascadeBandit(BernoulliBandit base, std::vector<double> gammas);

    /// Position-independent discount gamma for every position l >= 2.
    static CascadeBandit with_constant_discount(BernoulliBandit base, double gamma);

    const BernoulliBandit& base() const noexcept { return base_; }
    std::span<const double> gammas() const noexcept { return gammas_; }

    /// Product of gammas[1..position], 1 at position 0 (zero-based).
    double exposure(std::size_t position) const noexcept { return exposures_[position]; }
    std::span<const double> exposures() const noexcept { return exposures_; }

private:
    BernoulliBandit base_;
    std::vector<double> gammas_;
    std::vector<double> exposures_;
};

/// Entry j of `rewards` is 1 with probability mu(sel[j]). Draws one uniform
/// per entry, in selection order.
void draw_rewards(const BernoulliBandit& instance, const Selection& sel, Rng& rng,
                  std::span<std::uint8_t> rewards);
std::vector<std::uint8_t> draw_rewards(const BernoulliBandit& instance, const Selection& sel, Rng& rng);

/// Position l pays 1 with probability exposure(l) * mu(sel[l]), independently
/// across positions.
void cascade_draw(const CascadeBandit& instance, const Selection& sel, Rng& rng,
                  std::span<std::uint8_t> rewards);
std::vector<std::uint8_t> cascade_draw(const CascadeBandit& instance, const Selection& sel, Rng& rng);

/// Expected shortfall of the selected set against the top-L set:
/// sum over top-L arms not selected minus sum over selected arms outside the
/// top L. Exactly zero for the top-L set and never negative.
double per_round_regret(const BernoulliBandit& instance, const Selection& sel);

/// sum_l exposure(l) * (mu of the l-th best arm - mu(sel[l])).
double cascade_per_round_regret(const CascadeBandit& instance, const Selection& sel);

/// Either model behind one interface, used by the simulation loop.
class Environment {
public:
    explicit Environment(BernoulliBandit instance);
    explicit Environment(CascadeBandit instance);

    const BernoulliBandit& base() const noexcept;
    bool is_cascade() const noexcept { return cascade_.has_value(); }
    const CascadeBandit& cascade() const;

    /// Exposure per position; all ones for the plain model.
    std::span<const double> exposures() const noexcept { return exposures_; }

    void draw(const Selection& sel, Rng& rng, std::span<std::uint8_t> rewards) const;
    double regret(const Selection& sel) const;

private:
    std::optional<BernoulliBandit> plain_;
    std::optional<CascadeBandit> cascade_;
    std::vector<double> exposures_;
};

}  // namespace mpts
