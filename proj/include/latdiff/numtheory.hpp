#ifndef LATDIFF_NUMTHEORY_HPP
#define LATDIFF_NUMTHEORY_HPP

// Sieved arithmetic functions (Moebius mu, divisor count sigma, primes,
// smallest prime factors) and truncated Euler-product evaluation of the
// Dirichlet series
//
//   zeta(s)     = prod_p (1 - p^-s)^-1
//   1/zeta(s)   = prod_p (1 - p^-s)    = sum_m mu(m)/m^s
//   xi(s)       = prod_p (1 - 2 p^-s)  = sum_m mu(m) sigma(m)/m^s
//
// with explicit truncation-tail bounds.  Real values for integer s >= 2
// only; the products converge absolutely there.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace latdiff {

// mu, sigma, primes and smallest-prime-factor tables for 1..limit.
// Built in one linear-sieve pass, immutable afterwards, safe to share
// across threads.
class ArithTables {
public:
    static constexpr std::uint64_t kDefaultLimitCeiling = 100'000'000;

    explicit ArithTables(std::uint64_t limit,
                         std::uint64_t limit_ceiling = kDefaultLimitCeiling);

    std::uint64_t limit() const { return limit_; }

    // mu(m) in {-1,0,1}; valid for 1 <= m <= limit
    int mu(std::uint64_t m) const { return mu_[m]; }

    // number of positive divisors of m
    std::uint32_t sigma(std::uint64_t m) const { return sigma_[m]; }

    // smallest prime factor of m (m itself when m is prime); spf(1) = 1
    std::uint32_t smallest_prime_factor(std::uint64_t m) const { return spf_[m]; }

    std::span<const std::uint32_t> primes() const { return primes_; }

private:
    std::uint64_t limit_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint32_t> sigma_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::uint32_t> primes_;
};

ArithTables build_tables(std::uint64_t limit,
                         std::uint64_t limit_ceiling = ArithTables::kDefaultLimitCeiling);

// Ascending primes <= n (plain Eratosthenes; independent of ArithTables).
std::vector<std::uint32_t> primes_upto(std::uint64_t n);

// (prime, exponent) pairs of n >= 1 by trial division, ascending primes.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

bool is_squarefree(std::uint64_t n);

// Product of the distinct prime divisors of d (d* in the usual notation).
// squarefree_kernel(1) = 1.  Throws std::domain_error for d = 0.
std::uint64_t squarefree_kernel(std::uint64_t d);

// Smallest positive m such that d divides m^k, for k >= 2.  Divides d and
// is divisible by every prime factor of d.
std::uint64_t k_root_index(std::uint64_t d, int k);

enum class SeriesKind { Zeta, InvZeta, Xi };

struct SeriesValue {
    double value = 0.0;
    double tail_bound = 0.0;   // upper bound on |value - untruncated limit|
    std::string truncation;    // e.g. "primes<=1000000"
};

// Truncated Euler product over primes <= prime_bound.  The tail bound is
// the integral-comparison estimate 4*c*P^(1-s)/(s-1) with c = 1 (zeta,
// 1/zeta) or c = 2 (xi).  Zeta is returned as the reciprocal of the same
// truncated product as 1/zeta, so the two values are exact reciprocals.
// Throws std::domain_error for s <= 1 (pole at s = 1).
SeriesValue eval_series(SeriesKind kind, int s, std::uint64_t prime_bound);

// Memoized wrapper around eval_series; thread-safe.  Intensity/weight
// formulas call this so that bulk sweeps do not re-sieve primes.
const SeriesValue& eval_series_cached(SeriesKind kind, int s, std::uint64_t prime_bound);

}  // namespace latdiff

#endif
