#pragma once

// Multiple-play bandit policies. Each policy turns its sufficient statistics
// into a Selection and folds observed rewards back in. The free functions
// below are the per-round kernels; Policy wraps them with state and scratch
// buffers for the simulation loop.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mpts/environments.hpp"
#include "mpts/rng.hpp"

namespace mpts {

enum class PolicyKind { MpTs, ImpTs, BcMpTs, Cucb, MpKlUcb };

/// CLI spelling: mp-ts, imp-ts, bc-mp-ts, cucb, mp-kl-ucb.
std::string_view policy_name(PolicyKind kind) noexcept;
std::optional<PolicyKind> parse_policy_kind(std::string_view name) noexcept;
std::span<const PolicyKind> all_policy_kinds() noexcept;

/// Only the bias-corrected sampler needs position discounts.
constexpr bool requires_cascade(PolicyKind kind) noexcept { return kind == PolicyKind::BcMpTs; }

/// Beta posterior parameters. For plain MP-TS successes/failures are integer
/// counts plus the uniform prior. The bias-corrected variant tracks
/// effective_draws and re-derives failures = max(effective_draws - successes, 1).
struct TsArmStat {
    double successes = 1.0;
    double failures = 1.0;
    double effective_draws = 2.0;
};

struct FreqArmStat {
    std::int64_t draws = 0;
    std::int64_t successes = 0;

    /// Only meaningful when draws >= 1.
    double mean() const noexcept {
        return static_cast<double>(successes) / static_cast<double>(draws);
    }
};

TsArmStat update_ts(TsArmStat stat, bool reward) noexcept;
TsArmStat update_bc(TsArmStat stat, bool reward, double exposure) noexcept;
FreqArmStat update_freq(FreqArmStat stat, bool reward) noexcept;

/// The `plays` arms with the largest scores, ordered by score descending.
/// Ties (including +/-inf) are broken uniformly at random; rng is consumed
/// only when a tie touches the chosen prefix.
Selection top_by_score(std::span<const double> scores, std::size_t plays, Rng& rng);

/// MP-TS: theta_i ~ Beta(A_i, B_i) for every arm, then top-L by theta.
Selection select_mp_ts(std::span<const TsArmStat> stats, std::size_t plays, Rng& rng);

/// IMP-TS: the plays-1 arms with the largest empirical means (undrawn arms
/// rank below every drawn arm), then the arm with the largest posterior
/// sample Beta(1 + s, 1 + n - s) among the rest.
Selection select_imp_ts(std::span<const FreqArmStat> stats, std::size_t plays, Rng& rng);

/// IMP-TS with injected posterior samples; entries of `thetas` for arms
/// taken by the empirical-mean slots are ignored.
Selection select_imp_ts_with_samples(std::span<const FreqArmStat> stats, std::span<const double> thetas,
                                     std::size_t plays, Rng& rng);

/// BC-MP-TS: refresh failures from effective draws, sample thetas and place
/// the arm with the l-th largest theta at position l.
Selection select_bc_mp_ts(std::span<TsArmStat> stats, std::size_t plays, Rng& rng);

/// CUCB or MP-KL-UCB at round t (>= 1). Undrawn arms get +inf.
Selection select_index_policy(PolicyKind kind, std::span<const FreqArmStat> stats, std::uint64_t round,
                              std::size_t plays, Rng& rng);

/// Index value used by select_index_policy for one arm.
double arm_index(PolicyKind kind, const FreqArmStat& stat, std::uint64_t round);

class Policy {
public:
    virtual ~Policy() = default;

    virtual PolicyKind kind() const noexcept = 0;

    /// Writes this round's selection into `out` (resized to L).
    virtual void select(std::uint64_t round, Rng& rng, Selection& out) = 0;

    /// rewards[l] and exposures[l] belong to sel[l].
    virtual void update(const Selection& sel, std::span<const std::uint8_t> rewards,
                        std::span<const double> exposures) = 0;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, std::size_t num_arms, std::size_t plays);

}  // namespace mpts
