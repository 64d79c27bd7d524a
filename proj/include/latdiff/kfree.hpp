#ifndef LATDIFF_KFREE_HPP
#define LATDIFF_KFREE_HPP

// k-th-power-free integers: x != 0 is k-free when no prime p has p^k | x
// (sign ignored; divisors are always positive).  Membership by trial
// division, bulk queries by sieving multiples of p^k, and the CRT
// construction of runs of L consecutive non-k-free integers.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace latdiff {

struct KFreeSpec {
    int k;
    explicit KFreeSpec(int k_in) : k(k_in) {
        if (k < 2)
            throw std::invalid_argument("KFreeSpec: k must be >= 2 (k = 1 leaves only +-1)");
    }
};

// Throws std::domain_error for x = 0 (characteristic function undefined).
bool is_kfree(std::int64_t x, int k);

// flags[m] for 0 <= m <= limit with flags[m] = 1 iff m is k-free; flags[0] = 0.
// Membership of negative x is flags[|x|].
std::vector<std::uint8_t> kfree_sieve(std::uint64_t limit, int k);

// Ascending k-free integers in the closed interval [lo, hi], 0 excluded.
std::vector<std::int64_t> enumerate_kfree(std::int64_t lo, std::int64_t hi, int k);

// N such that none of N, N+1, ..., N+L-1 is k-free, via N == -(j-1)
// mod moduli[j]^k; least positive solution, verified by is_kfree before
// returning.  Default moduli: the first L primes.
std::int64_t find_gap(int k, std::uint64_t length, std::vector<std::uint64_t> moduli = {});

}  // namespace latdiff

#endif
