#include "mpts/kl_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mpts {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIndexTolerance = 1e-9;
constexpr int kIndexMaxIterations = 200;

// x ln(x / y) with 0 ln(0 / y) = 0.
double xlogxy(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return kInf;
    return x * std::log(x / y);
}

double kl_raw(double p, double q) {
    if (p == q) return 0.0;
    const double d = xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q);
    // Rounding can push d(p, q) a hair below zero when p and q are adjacent.
    return d < 0.0 ? 0.0 : d;
}

// Log-pmf of Binomial(n, p) at every k in [0, n], built by the ratio
// recurrence so no factorials (or non-reentrant lgamma) are involved.
std::vector<double> binomial_log_pmf(std::int64_t n, double p) {
    std::vector<double> log_pmf(static_cast<std::size_t>(n) + 1);
    const double log_odds = std::log(p) - std::log1p(-p);
    double acc = static_cast<double>(n) * std::log1p(-p);
    log_pmf[0] = acc;
    for (std::int64_t k = 0; k < n; ++k) {
        acc += std::log(static_cast<double>(n - k) / static_cast<double>(k + 1)) + log_odds;
        log_pmf[static_cast<std::size_t>(k) + 1] = acc;
    }
    return log_pmf;
}

double sum_smallest_first(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double v : terms) s += v;
    return s;
}

// P(lo <= X <= hi), X ~ Binomial(n, p), p strictly inside (0, 1).
double binomial_range(std::int64_t n, double p, std::int64_t lo, std::int64_t hi) {
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, n);
    if (lo > hi) return 0.0;
    const auto log_pmf = binomial_log_pmf(n, p);
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t k = lo; k <= hi; ++k) terms.push_back(std::exp(log_pmf[static_cast<std::size_t>(k)]));
    return std::clamp(sum_smallest_first(std::move(terms)), 0.0, 1.0);
}

}  // namespace

Probability::Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::domain_error("probability out of [0, 1]: " + std::to_string(value));
    }
}

double bernoulli_kl(Probability p, Probability q) { return kl_raw(p.value(), q.value()); }

Probability kl_ucb_index(Probability mu_hat, std::int64_t draws, double budget) {
    if (draws < 1) throw std::invalid_argument("kl_ucb_index: draws must be >= 1");
    if (!(budget >= 0.0)) throw std::invalid_argument("kl_ucb_index: budget must be >= 0");

    const double p = mu_hat.value();
    if (p == 1.0 || budget == 0.0) return mu_hat;

    const double per_draw = budget / static_cast<double>(draws);
    // d(p, q) >= 2 (q - p)^2 caps the feasible region.
    double lo = p;
    double hi = std::min(1.0, p + std::sqrt(per_draw / 2.0));
    if (kl_raw(p, hi) <= per_draw) return Probability(hi);

    for (int it = 0; it < kIndexMaxIterations && hi - lo > kIndexTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kl_raw(p, mid) <= per_draw) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return Probability(lo);
}

double cucb_index(Probability mu_hat, std::int64_t draws, double round) {
    if (draws < 1) throw std::invalid_argument("cucb_index: draws must be >= 1");
    if (!(round >= 1.0)) throw std::invalid_argument("cucb_index: round must be >= 1");
    return mu_hat.value() + std::sqrt(3.0 * std::log(round) / (2.0 * static_cast<double>(draws)));
}

double LowerBoundReport::at(double horizon) const { return total_coefficient * std::log(horizon); }

MarginalTie::MarginalTie(std::size_t marginal_arm, std::size_t next_arm)
    : std::domain_error("marginal arm is not distinct: arms " + std::to_string(marginal_arm) +
                        " and " + std::to_string(next_arm) + " share the L-th largest mean"),
      marginal_arm_(marginal_arm),
      next_arm_(next_arm) {}

LowerBoundReport lower_bound_coefficient(std::span<const double> mus, std::size_t plays) {
    const std::size_t k = mus.size();
    if (plays < 1 || plays >= k) {
        throw std::invalid_argument("lower_bound_coefficient: need 1 <= L < K");
    }
    for (double mu : mus) {
        if (Probability(mu).value() >= 1.0) {
            throw std::domain_error("lower_bound_coefficient: means must lie in [0, 1)");
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mus[a] > mus[b]; });
    const std::size_t marginal = order[plays - 1];
    const std::size_t next = order[plays];
    if (mus[marginal] == mus[next]) throw MarginalTie(marginal, next);

    LowerBoundReport report;
    report.marginal_mean = mus[marginal];
    const Probability mu_l(mus[marginal]);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(mus[i] < mus[marginal])) continue;
        LowerBoundTerm term;
        term.arm = i;
        term.gap = mus[marginal] - mus[i];
        term.kl = bernoulli_kl(Probability(mus[i]), mu_l);
        term.coefficient = term.gap / term.kl;
        report.per_arm_terms.push_back(term);
        report.total_coefficient += term.coefficient;
    }
    return report;
}

double binomial_cdf(std::int64_t trials, Probability p, std::int64_t k) {
    if (trials < 0) throw std::invalid_argument("binomial_cdf: trials must be >= 0");
    if (k < 0) return 0.0;
    if (k >= trials) return 1.0;
    if (p.value() == 0.0) return 1.0;
    if (p.value() == 1.0) return 0.0;
    return binomial_range(trials, p.value(), 0, k);
}

Probability beta_cdf_integer(std::int64_t alpha, std::int64_t beta, Probability y) {
    if (alpha < 1 || beta < 1) throw std::invalid_argument("beta_cdf_integer: alpha, beta must be >= 1");
    if (y.value() == 0.0) return Probability(0.0);
    if (y.value() == 1.0) return Probability(1.0);
    // 1 - F_B(alpha - 1) is the upper tail P(X >= alpha); summing that tail
    // directly keeps small CDF values accurate.
    const std::int64_t n = alpha + beta - 1;
    return Probability(binomial_range(n, y.value(), alpha, n));
}

Probability chernoff_tail_bound(Probability mu, std::int64_t draws, double epsilon, Tail tail) {
    const double m = mu.value();
    const double limit = tail == Tail::Upper ? 1.0 - m : m;
    if (!(epsilon > 0.0 && epsilon < limit)) {
        throw std::domain_error("chernoff_tail_bound: epsilon outside the valid interval");
    }
    if (draws < 0) throw std::invalid_argument("chernoff_tail_bound: draws must be >= 0");
    if (draws == 0) return Probability(1.0);
    const double shifted = tail == Tail::Upper ? m + epsilon : m - epsilon;
    return Probability(std::exp(-kl_raw(shifted, m) * static_cast<double>(draws)));
}

}  // namespace mpts
