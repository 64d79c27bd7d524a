#include "latdiff/kfree.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "latdiff/errors.hpp"
#include "latdiff/lattice.hpp"
#include "latdiff/numtheory.hpp"

namespace latdiff {

namespace {

using u128 = unsigned __int128;

std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
}

// floor(n^(1/k))
std::uint64_t kth_root(std::uint64_t n, int k) {
    if (n == 0) return 0;
    std::uint64_t r = static_cast<std::uint64_t>(
        std::floor(std::pow(static_cast<double>(n), 1.0 / k)));
    auto pow_le = [&](std::uint64_t b) {
        u128 v = 1;
        for (int i = 0; i < k; ++i) {
            v *= b;
            if (v > n) return false;
        }
        return true;
    };
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

void check_k(int k) {
    if (k < 2) throw std::invalid_argument("k-free: k must be >= 2");
}

}  // namespace

bool is_kfree(std::int64_t x, int k) {
    check_k(k);
    if (x == 0) throw std::domain_error("is_kfree: undefined for x = 0");
    std::uint64_t n = abs_u64(x);
    auto exponent_at_least_k = [&](std::uint64_t p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            if (++e >= k) return true;
        }
        return false;
    };
    // any remaining prime q of the cofactor has q^k > n, so exponent < k
    if (exponent_at_least_k(2)) return false;
    for (std::uint64_t p = 3; ; p += 2) {
        u128 pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        if (pk > n) break;
        if (n % p == 0 && exponent_at_least_k(p)) return false;
    }
    return true;
}

std::vector<std::uint8_t> kfree_sieve(std::uint64_t limit, int k) {
    check_k(k);
    std::vector<std::uint8_t> flags(limit + 1, 1);
    flags[0] = 0;
    for (std::uint32_t p : primes_upto(kth_root(limit, k))) {
        u128 q = 1;
        for (int i = 0; i < k; ++i) q *= p;
        const std::uint64_t step = static_cast<std::uint64_t>(q);
        for (std::uint64_t m = step; m <= limit; m += step) flags[m] = 0;
    }
    return flags;
}

std::vector<std::int64_t> enumerate_kfree(std::int64_t lo, std::int64_t hi, int k) {
    check_k(k);
    if (lo > hi) throw std::invalid_argument("enumerate_kfree: lo > hi");
    const std::uint64_t max_abs = std::max(abs_u64(lo), abs_u64(hi));
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::vector<std::uint8_t> keep(span, 1);
    for (std::uint32_t p : primes_upto(kth_root(max_abs, k))) {
        u128 qq = 1;
        for (int i = 0; i < k; ++i) qq *= p;
        const std::int64_t q = static_cast<std::int64_t>(qq);
        std::int64_t first = lo;
        const std::int64_t r = lo % q;
        if (r > 0) first = lo + (q - r);
        else if (r < 0) first = lo - r;
        for (std::int64_t v = first; v <= hi; v += q)
            keep[static_cast<std::uint64_t>(v - lo)] = 0;
    }
    std::vector<std::int64_t> out;
    for (std::int64_t v = lo; v <= hi; ++v)
        if (v != 0 && keep[static_cast<std::uint64_t>(v - lo)]) out.push_back(v);
    return out;
}

std::int64_t find_gap(int k, std::uint64_t length, std::vector<std::uint64_t> moduli) {
    check_k(k);
    if (length == 0) throw std::invalid_argument("find_gap: length must be >= 1");
    if (moduli.empty()) {
        std::uint64_t bound = 64 + 8 * length;
        auto primes = primes_upto(bound);
        while (primes.size() < length) {
            bound *= 4;
            primes = primes_upto(bound);
        }
        moduli.assign(primes.begin(), primes.begin() + static_cast<std::ptrdiff_t>(length));
    }
    if (moduli.size() != length)
        throw std::invalid_argument("find_gap: need one modulus per position");

    std::vector<LatticeVector> residues(length);
    std::vector<std::uint64_t> powers(length);
    for (std::uint64_t j = 0; j < length; ++j) {
        u128 q = 1;
        for (int i = 0; i < k; ++i) {
            q *= moduli[j];
            if (q > std::numeric_limits<std::uint64_t>::max())
                throw SizeLimitError("find_gap: modulus power exceeds the 64-bit ceiling");
        }
        powers[j] = static_cast<std::uint64_t>(q);
        residues[j] = {-static_cast<std::int64_t>(j)};
    }
    const LatticeVector sol = crt_lattice(residues, powers);

    std::int64_t n = sol[0];
    if (n == 0) {
        std::int64_t prod = 1;
        for (std::uint64_t q : powers) prod *= static_cast<std::int64_t>(q);
        n = prod;
    }
    for (std::uint64_t j = 0; j < length; ++j)
        if (is_kfree(n + static_cast<std::int64_t>(j), k))
            throw std::logic_error("find_gap: verification failed");
    return n;
}

}  // namespace latdiff
