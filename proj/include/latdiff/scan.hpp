#ifndef LATDIFF_SCAN_HPP
#define LATDIFF_SCAN_HPP

// Coordinate-space scanning kernels behind enumeration, counting and
// exponential sums.  A ball (or box) in physical space is pulled back
// through the basis inverse to an integer bounding box; candidates are
// walked in lexicographic order and membership is tested exactly with
// strict inequalities.  The first coordinate range can be split into
// contiguous slabs for deterministic parallel reduction.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <thread>
#include <vector>

#include "latdiff/lattice.hpp"

namespace latdiff::detail {

struct BallScan {
    const Lattice* lat = nullptr;
    std::array<double, Lattice::kMaxDim> center{};
    double radius = 0.0;
    double radius_sq = 0.0;
    std::array<std::int64_t, Lattice::kMaxDim> lo{};
    std::array<std::int64_t, Lattice::kMaxDim> hi{};
};

struct BoxScan {
    const Lattice* lat = nullptr;
    std::array<double, Lattice::kMaxDim> center{};
    std::array<double, Lattice::kMaxDim> half{};
    std::array<std::int64_t, Lattice::kMaxDim> lo{};
    std::array<std::int64_t, Lattice::kMaxDim> hi{};
};

BallScan make_ball_scan(const Lattice& lat, std::span<const double> center, double radius);
BoxScan make_box_scan(const Lattice& lat, std::span<const double> center,
                      std::span<const double> half_widths);

// Volume-based upper bounds on the point counts (ceiling checks).
double ball_count_bound(const Lattice& lat, double radius);
double box_count_bound(const Lattice& lat, std::span<const double> half_widths);

namespace impl {

template <class Fn>
void ball_identity_rec(const BallScan& g, int level, double dist2,
                       std::array<std::int64_t, Lattice::kMaxDim>& x,
                       std::int64_t lo0, std::int64_t hi0, Fn& fn) {
    const int n = g.lat->dim();
    const double c = g.center[level];
    const double rem = g.radius_sq - dist2;
    if (rem <= 0.0) return;
    const double s = std::sqrt(rem);
    std::int64_t lo = static_cast<std::int64_t>(std::ceil(c - s)) - 1;
    std::int64_t hi = static_cast<std::int64_t>(std::floor(c + s)) + 1;
    if (lo < g.lo[level]) lo = g.lo[level];
    if (hi > g.hi[level]) hi = g.hi[level];
    if (level == 0) {
        if (lo < lo0) lo = lo0;
        if (hi > hi0) hi = hi0;
    }
    if (level == n - 1) {
        for (std::int64_t t = lo; t <= hi; ++t) {
            const double d = static_cast<double>(t) - c;
            if (dist2 + d * d < g.radius_sq) {
                x[level] = t;
                fn(std::span<const std::int64_t>(x.data(), n));
            }
        }
        return;
    }
    for (std::int64_t t = lo; t <= hi; ++t) {
        const double d = static_cast<double>(t) - c;
        const double d2 = dist2 + d * d;
        if (d2 >= g.radius_sq) continue;
        x[level] = t;
        ball_identity_rec(g, level + 1, d2, x, lo0, hi0, fn);
    }
}

template <class Fn>
void ball_general_rec(const BallScan& g, int level,
                      std::array<double, Lattice::kMaxDim>& partial,
                      std::array<std::int64_t, Lattice::kMaxDim>& x,
                      std::int64_t lo0, std::int64_t hi0, Fn& fn) {
    const int n = g.lat->dim();
    const Lattice& lat = *g.lat;
    std::int64_t lo = g.lo[level], hi = g.hi[level];
    if (level == 0) {
        if (lo < lo0) lo = lo0;
        if (hi > hi0) hi = hi0;
    }
    if (level == n - 1) {
        for (std::int64_t t = lo; t <= hi; ++t) {
            double dist2 = 0.0;
            const double td = static_cast<double>(t);
            for (int i = 0; i < n; ++i) {
                const double p = partial[i] + td * lat.basis_entry(i, level);
                dist2 += p * p;
            }
            if (dist2 < g.radius_sq) {
                x[level] = t;
                fn(std::span<const std::int64_t>(x.data(), n));
            }
        }
        return;
    }
    std::array<double, Lattice::kMaxDim> next{};
    for (std::int64_t t = lo; t <= hi; ++t) {
        const double td = static_cast<double>(t);
        for (int i = 0; i < n; ++i) next[i] = partial[i] + td * lat.basis_entry(i, level);
        x[level] = t;
        ball_general_rec(g, level + 1, next, x, lo0, hi0, fn);
    }
}

template <class Fn>
void box_rec(const BoxScan& g, int level, std::array<double, Lattice::kMaxDim>& partial,
             std::array<std::int64_t, Lattice::kMaxDim>& x,
             std::int64_t lo0, std::int64_t hi0, Fn& fn) {
    const int n = g.lat->dim();
    const Lattice& lat = *g.lat;
    std::int64_t lo = g.lo[level], hi = g.hi[level];
    if (level == 0) {
        if (lo < lo0) lo = lo0;
        if (hi > hi0) hi = hi0;
    }
    if (level == n - 1) {
        for (std::int64_t t = lo; t <= hi; ++t) {
            const double td = static_cast<double>(t);
            bool inside = true;
            for (int i = 0; i < n && inside; ++i) {
                const double p = partial[i] + td * lat.basis_entry(i, level);
                inside = std::abs(p - g.center[i]) < g.half[i];
            }
            if (inside) {
                x[level] = t;
                fn(std::span<const std::int64_t>(x.data(), n));
            }
        }
        return;
    }
    std::array<double, Lattice::kMaxDim> next{};
    for (std::int64_t t = lo; t <= hi; ++t) {
        const double td = static_cast<double>(t);
        for (int i = 0; i < n; ++i) next[i] = partial[i] + td * lat.basis_entry(i, level);
        x[level] = t;
        box_rec(g, level + 1, next, x, lo0, hi0, fn);
    }
}

}  // namespace impl

// Visit ball points whose first coordinate lies in [x0_lo, x0_hi],
// lexicographic order; fn(std::span<const std::int64_t> coords).
template <class Fn>
void scan_ball_slab(const BallScan& g, std::int64_t x0_lo, std::int64_t x0_hi, Fn&& fn) {
    std::array<std::int64_t, Lattice::kMaxDim> x{};
    if (g.lat->identity_basis()) {
        impl::ball_identity_rec(g, 0, 0.0, x, x0_lo, x0_hi, fn);
    } else {
        std::array<double, Lattice::kMaxDim> partial{};
        for (int i = 0; i < g.lat->dim(); ++i) partial[i] = -g.center[i];
        // partial carries B*x - center accumulated level by level
        impl::ball_general_rec(g, 0, partial, x, x0_lo, x0_hi, fn);
    }
}

template <class Fn>
void scan_ball(const BallScan& g, Fn&& fn) {
    scan_ball_slab(g, g.lo[0], g.hi[0], fn);
}

template <class Fn>
void scan_box_slab(const BoxScan& g, std::int64_t x0_lo, std::int64_t x0_hi, Fn&& fn) {
    std::array<std::int64_t, Lattice::kMaxDim> x{};
    std::array<double, Lattice::kMaxDim> partial{};
    impl::box_rec(g, 0, partial, x, x0_lo, x0_hi, fn);
}

template <class Fn>
void scan_box(const BoxScan& g, Fn&& fn) {
    scan_box_slab(g, g.lo[0], g.hi[0], fn);
}

// Split [lo0, hi0] into `slabs` contiguous chunks and run
// fn(slab_index, slab_lo, slab_hi) on each, one thread per slab when
// slabs > 1.  Callers combine per-slab results in slab order.
template <class Fn>
void for_each_slab(std::int64_t lo0, std::int64_t hi0, int slabs, Fn&& fn) {
    if (hi0 < lo0) return;
    if (slabs < 1) slabs = 1;
    const std::int64_t len = hi0 - lo0 + 1;
    if (static_cast<std::int64_t>(slabs) > len) slabs = static_cast<int>(len);
    if (slabs == 1) {
        fn(0, lo0, hi0);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(slabs));
    for (int k = 0; k < slabs; ++k) {
        const std::int64_t a = lo0 + len * k / slabs;
        const std::int64_t b = lo0 + len * (k + 1) / slabs - 1;
        threads.emplace_back([k, a, b, &fn] { fn(k, a, b); });
    }
    for (auto& t : threads) t.join();
}

}  // namespace latdiff::detail

#endif
