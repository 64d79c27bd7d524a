#include "latdiff/numtheory.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "latdiff/errors.hpp"

namespace latdiff {

ArithTables::ArithTables(std::uint64_t limit, std::uint64_t limit_ceiling) : limit_(limit) {
    if (limit == 0)
        throw SizeLimitError("build_tables: limit must be >= 1");
    if (limit > limit_ceiling)
        throw SizeLimitError("build_tables: limit " + std::to_string(limit) +
                             " exceeds table ceiling " + std::to_string(limit_ceiling));

    const std::size_t n = static_cast<std::size_t>(limit);
    mu_.assign(n + 1, 0);
    sigma_.assign(n + 1, 0);
    spf_.assign(n + 1, 0);
    // exponent of spf(i) in i, needed to extend sigma multiplicatively
    std::vector<std::uint8_t> spf_exp(n + 1, 0);

    mu_[1] = 1;
    sigma_[1] = 1;
    spf_[1] = 1;

    for (std::size_t i = 2; i <= n; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(static_cast<std::uint32_t>(i));
            mu_[i] = -1;
            sigma_[i] = 2;
            spf_exp[i] = 1;
        }
        for (std::uint32_t p : primes_) {
            if (p > spf_[i] || static_cast<std::uint64_t>(p) * i > limit) break;
            const std::size_t m = static_cast<std::size_t>(p) * i;
            spf_[m] = p;
            if (p == spf_[i]) {
                mu_[m] = 0;
                spf_exp[m] = static_cast<std::uint8_t>(spf_exp[i] + 1);
                sigma_[m] = sigma_[i] / (spf_exp[i] + 1u) * (spf_exp[i] + 2u);
                break;
            }
            mu_[m] = static_cast<std::int8_t>(-mu_[i]);
            spf_exp[m] = 1;
            sigma_[m] = sigma_[i] * 2;
        }
    }
}

ArithTables build_tables(std::uint64_t limit, std::uint64_t limit_ceiling) {
    return ArithTables(limit, limit_ceiling);
}

std::vector<std::uint32_t> primes_upto(std::uint64_t n) {
    std::vector<std::uint32_t> primes;
    if (n < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= n; m += p) composite[m] = true;
    }
    return primes;
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
    if (n == 0) throw std::domain_error("factorize: 0 has no factorization");
    std::vector<std::pair<std::uint64_t, int>> factors;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        factors.emplace_back(p, e);
    }
    if (n > 1) factors.emplace_back(n, 1);
    return factors;
}

bool is_squarefree(std::uint64_t n) {
    if (n == 0) return false;
    for (const auto& pe : factorize(n))
        if (pe.second >= 2) return false;
    return true;
}

std::uint64_t squarefree_kernel(std::uint64_t d) {
    if (d == 0) throw std::domain_error("squarefree_kernel: undefined for 0");
    std::uint64_t kernel = 1;
    for (const auto& pe : factorize(d)) kernel *= pe.first;
    return kernel;
}

std::uint64_t k_root_index(std::uint64_t d, int k) {
    if (d == 0) throw std::domain_error("k_root_index: undefined for d = 0");
    if (k < 2) throw std::invalid_argument("k_root_index: requires k >= 2");
    // minimal m with d | m^k: take each prime of d to the power ceil(e/k)
    std::uint64_t m = 1;
    for (const auto& [p, e] : factorize(d)) {
        int need = (e + k - 1) / k;
        for (int i = 0; i < need; ++i) m *= p;
    }
    return m;
}

namespace {

// p^s as a double via repeated multiplication; deterministic across libms.
double ipow(double base, int exp) {
    double r = 1.0;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

SeriesValue eval_series(SeriesKind kind, int s, std::uint64_t prime_bound) {
    if (s <= 1)
        throw std::domain_error("eval_series: diverges for s <= 1 (pole at s = 1)");
    if (prime_bound < 2)
        throw std::invalid_argument("eval_series: prime_bound must be >= 2");

    const double c = (kind == SeriesKind::Xi) ? 2.0 : 1.0;
    double product = 1.0;
    for (std::uint32_t p : primes_upto(prime_bound))
        product *= 1.0 - c / ipow(static_cast<double>(p), s);

    double value = product;
    if (kind == SeriesKind::Zeta) {
        // Reciprocal of the identically truncated product, nudged by at
        // most 2 ulps so that zeta*inv_zeta rounds to exactly 1 whenever
        // a binary64 value achieving that exists.
        value = 1.0 / product;
        if (value * product != 1.0) {
            double up = value, down = value;
            for (int step = 0; step < 2 && value * product != 1.0; ++step) {
                up = std::nextafter(up, std::numeric_limits<double>::infinity());
                down = std::nextafter(down, -std::numeric_limits<double>::infinity());
                if (up * product == 1.0) value = up;
                else if (down * product == 1.0) value = down;
            }
        }
    }

    const double pd = static_cast<double>(prime_bound);
    SeriesValue out;
    out.value = value;
    out.tail_bound = 4.0 * c / (ipow(pd, s - 1) * static_cast<double>(s - 1));
    out.truncation = "primes<=" + std::to_string(prime_bound);
    return out;
}

const SeriesValue& eval_series_cached(SeriesKind kind, int s, std::uint64_t prime_bound) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, std::uint64_t>, SeriesValue> cache;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_tuple(static_cast<int>(kind), s, prime_bound);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, eval_series(kind, s, prime_bound)).first;
    return it->second;
}

}  // namespace latdiff
