#pragma once

// Scalar kernels shared by the policies, the lower-bound calculator and the
// test oracles. Everything here is a pure function of its arguments.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpts {

/// A real number in [0, 1]. Construction outside that interval throws
/// std::domain_error.
class Probability {
public:
    explicit Probability(double value);

    constexpr double value() const noexcept { return value_; }

private:
    double value_;
};

/// Bernoulli KL divergence d(p, q) in nats.
///
/// Conventions: 0 ln 0 = 0, d(p, p) = 0, and d(p, q) = +inf when q is 0 or 1
/// and p != q.
double bernoulli_kl(Probability p, Probability q);

/// Largest q in [mu_hat, 1] with draws * d(mu_hat, q) <= budget.
///
/// Bisection with a 1e-9 absolute tolerance on q and at most 200 halvings.
/// The returned point always satisfies the constraint (it is the lower end
/// of the final bracket). Throws std::invalid_argument if draws < 1 or the
/// budget is negative.
Probability kl_ucb_index(Probability mu_hat, std::int64_t draws, double budget);

/// mu_hat + sqrt(3 ln t / (2 draws)); not clipped to [0, 1].
double cucb_index(Probability mu_hat, std::int64_t draws, double round);

struct LowerBoundTerm {
    std::size_t arm;
    double gap;          // mu_L - mu_i
    double kl;           // d(mu_i, mu_L)
    double coefficient;  // gap / kl
};

struct LowerBoundReport {
    std::vector<LowerBoundTerm> per_arm_terms;
    double total_coefficient = 0.0;
    double marginal_mean = 0.0;

    /// total_coefficient * ln(horizon).
    double at(double horizon) const;
};

/// Raised when the L-th and (L+1)-th largest expectations coincide, in which
/// case the asymptotic bound is not defined by the coefficient formula.
class MarginalTie : public std::domain_error {
public:
    MarginalTie(std::size_t marginal_arm, std::size_t next_arm);

    std::size_t marginal_arm() const noexcept { return marginal_arm_; }
    std::size_t next_arm() const noexcept { return next_arm_; }

private:
    std::size_t marginal_arm_;
    std::size_t next_arm_;
};

/// Asymptotic regret-per-log-round coefficient for a multiple-play instance:
/// the sum over arms strictly below the L-th largest mean of
/// (mu_L - mu_i) / d(mu_i, mu_L).
///
/// Requires 1 <= plays < K, every mean in [0, 1), and a strict gap between
/// the L-th and (L+1)-th largest means (MarginalTie otherwise). Arm indices
/// in the report refer to positions in `mus`.
LowerBoundReport lower_bound_coefficient(std::span<const double> mus, std::size_t plays);

/// P(X <= k) for X ~ Binomial(trials, p).
double binomial_cdf(std::int64_t trials, Probability p, std::int64_t k);

/// CDF of Beta(alpha, beta) at y for integer parameters, evaluated through
/// the binomial tail: F(y) = 1 - F_B(alpha + beta - 1, y)(alpha - 1).
///
/// Terms are formed in log space and summed smallest-first.
Probability beta_cdf_integer(std::int64_t alpha, std::int64_t beta, Probability y);

enum class Tail { Upper, Lower };

/// exp(-n d(mu +/- epsilon, mu)); bound on the probability that the mean of n
/// Bernoulli(mu) draws deviates by at least epsilon in the given direction.
/// Throws std::domain_error unless 0 < epsilon < 1 - mu (upper) or
/// 0 < epsilon < mu (lower).
Probability chernoff_tail_bound(Probability mu, std::int64_t draws, double epsilon,
                                Tail tail = Tail::Upper);

}  // namespace mpts
