#include "latdiff/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latdiff/errors.hpp"
#include "latdiff/numtheory.hpp"
#include "latdiff/scan.hpp"

namespace latdiff {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
}

// |det| and row-major inverse by Gauss-Jordan with partial pivoting
void invert_matrix(int n, const std::vector<double>& col_major,
                   std::vector<double>& inv_row_major, double& det_abs) {
    std::vector<double> a(static_cast<std::size_t>(n) * n);   // row-major work copy
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] = col_major[static_cast<std::size_t>(j) * n + i];
    inv_row_major.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv_row_major[static_cast<std::size_t>(i) * n + i] = 1.0;

    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
                std::abs(a[static_cast<std::size_t>(pivot) * n + col]))
                pivot = r;
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a[static_cast<std::size_t>(pivot) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
                std::swap(inv_row_major[static_cast<std::size_t>(pivot) * n + j],
                          inv_row_major[static_cast<std::size_t>(col) * n + j]);
            }
            det = -det;
        }
        const double p = a[static_cast<std::size_t>(col) * n + col];
        if (std::abs(p) < 1e-14)
            throw std::invalid_argument("Lattice: basis matrix is singular");
        det *= p;
        for (int j = 0; j < n; ++j) {
            a[static_cast<std::size_t>(col) * n + j] /= p;
            inv_row_major[static_cast<std::size_t>(col) * n + j] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[static_cast<std::size_t>(r) * n + col];
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a[static_cast<std::size_t>(r) * n + j] -=
                    f * a[static_cast<std::size_t>(col) * n + j];
                inv_row_major[static_cast<std::size_t>(r) * n + j] -=
                    f * inv_row_major[static_cast<std::size_t>(col) * n + j];
            }
        }
    }
    det_abs = std::abs(det);
}

}  // namespace

std::uint64_t content(std::span<const std::int64_t> x) {
    std::uint64_t g = 0;
    for (std::int64_t v : x) g = std::gcd(g, abs_u64(v));
    return g == 0 ? kContentInfinite : g;
}

bool is_visible(std::span<const std::int64_t> x) {
    const std::uint64_t c = content(x);
    if (c == kContentInfinite)
        throw std::domain_error("is_visible: undefined for the zero vector");
    return c == 1;
}

double unit_ball_volume(int n) {
    if (n < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
    const double two_pi = 6.283185307179586476925286766559;
    double vprev = 1.0;  // v_0
    double v = 2.0;      // v_1
    if (n == 0) return 1.0;
    for (int i = 2; i <= n; ++i) {
        const double vi = vprev * two_pi / static_cast<double>(i);
        vprev = v;
        v = vi;
    }
    return v;
}

Lattice::Lattice(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("Lattice: dimension must be in [1, 8]");
    basis_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) basis_[static_cast<std::size_t>(i) * dim + i] = 1.0;
    init();
}

Lattice::Lattice(int dim, std::vector<double> basis_col_major)
    : dim_(dim), basis_(std::move(basis_col_major)) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("Lattice: dimension must be in [1, 8]");
    if (basis_.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("Lattice: basis must be dim x dim");
    for (double v : basis_)
        if (!std::isfinite(v)) throw std::invalid_argument("Lattice: basis entries must be finite");
    init();
}

void Lattice::init() {
    invert_matrix(dim_, basis_, inv_, det_abs_);
    identity_ = true;
    for (int i = 0; i < dim_ && identity_; ++i)
        for (int j = 0; j < dim_ && identity_; ++j)
            identity_ = basis_entry(i, j) == (i == j ? 1.0 : 0.0);

    // L(Gamma) by exhaustive search; the ball of radius twice the largest
    // column norm always contains a shortest vector
    double max_norm = 0.0;
    for (int j = 0; j < dim_; ++j) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += basis_entry(i, j) * basis_entry(i, j);
        max_norm = std::max(max_norm, std::sqrt(s));
    }
    shortest_len_ = 0.0;  // sentinel while scanning
    const std::vector<double> origin(static_cast<std::size_t>(dim_), 0.0);
    const detail::BallScan scan = detail::make_ball_scan(*this, origin, 2.0 * max_norm);
    double best_sq = std::numeric_limits<double>::infinity();
    detail::scan_ball(scan, [&](std::span<const std::int64_t> coords) {
        double d2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
            double p = 0.0;
            for (int j = 0; j < dim_; ++j)
                p += basis_entry(i, j) * static_cast<double>(coords[j]);
            d2 += p * p;
        }
        if (d2 > 0.0 && d2 < best_sq) best_sq = d2;
    });
    shortest_len_ = std::sqrt(best_sq);
}

Lattice Lattice::dual() const {
    // row-major B^-1 read as column-major is exactly B^-T
    return Lattice(dim_, inv_);
}

void Lattice::position_into(std::span<const std::int64_t> coords, std::span<double> out) const {
    for (int i = 0; i < dim_; ++i) {
        double p = 0.0;
        for (int j = 0; j < dim_; ++j)
            p += basis_entry(i, j) * static_cast<double>(coords[j]);
        out[i] = p;
    }
}

std::vector<double> Lattice::position(std::span<const std::int64_t> coords) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    position_into(coords, out);
    return out;
}

namespace detail {

BallScan make_ball_scan(const Lattice& lat, std::span<const double> center, double radius) {
    const int n = lat.dim();
    if (static_cast<int>(center.size()) != n)
        throw std::invalid_argument("ball scan: center dimension mismatch");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("ball scan: radius must be positive and finite");
    for (double c : center)
        if (!std::isfinite(c)) throw std::invalid_argument("ball scan: center must be finite");

    BallScan g;
    g.lat = &lat;
    g.radius = radius;
    g.radius_sq = radius * radius;
    const auto inv = lat.inverse_row_major();
    for (int i = 0; i < n; ++i) {
        g.center[i] = center[i];
        double cc = 0.0, row_norm_sq = 0.0;
        for (int j = 0; j < n; ++j) {
            const double e = inv[static_cast<std::size_t>(i) * n + j];
            cc += e * center[j];
            row_norm_sq += e * e;
        }
        const double reach = radius * std::sqrt(row_norm_sq);
        g.lo[i] = static_cast<std::int64_t>(std::floor(cc - reach)) - 1;
        g.hi[i] = static_cast<std::int64_t>(std::ceil(cc + reach)) + 1;
    }
    return g;
}

BoxScan make_box_scan(const Lattice& lat, std::span<const double> center,
                      std::span<const double> half_widths) {
    const int n = lat.dim();
    if (static_cast<int>(center.size()) != n || static_cast<int>(half_widths.size()) != n)
        throw std::invalid_argument("box scan: dimension mismatch");
    for (double h : half_widths)
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::invalid_argument("box scan: half-widths must be positive and finite");

    BoxScan g;
    g.lat = &lat;
    const auto inv = lat.inverse_row_major();
    for (int i = 0; i < n; ++i) {
        g.center[i] = center[i];
        g.half[i] = half_widths[i];
        double cc = 0.0, reach = 0.0;
        for (int j = 0; j < n; ++j) {
            const double e = inv[static_cast<std::size_t>(i) * n + j];
            cc += e * center[j];
            reach += std::abs(e) * half_widths[j];
        }
        g.lo[i] = static_cast<std::int64_t>(std::floor(cc - reach)) - 1;
        g.hi[i] = static_cast<std::int64_t>(std::ceil(cc + reach)) + 1;
    }
    return g;
}

double ball_count_bound(const Lattice& lat, double radius) {
    double cell_diam = 0.0;
    for (int j = 0; j < lat.dim(); ++j) {
        double s = 0.0;
        for (int i = 0; i < lat.dim(); ++i)
            s += lat.basis_entry(i, j) * lat.basis_entry(i, j);
        cell_diam += std::sqrt(s);
    }
    const double r = radius + cell_diam;
    return unit_ball_volume(lat.dim()) * std::pow(r, lat.dim()) / lat.volume();
}

double box_count_bound(const Lattice& lat, std::span<const double> half_widths) {
    double cell_diam = 0.0;
    for (int j = 0; j < lat.dim(); ++j) {
        double s = 0.0;
        for (int i = 0; i < lat.dim(); ++i)
            s += lat.basis_entry(i, j) * lat.basis_entry(i, j);
        cell_diam += std::sqrt(s);
    }
    double vol = 1.0;
    for (double h : half_widths) vol *= 2.0 * (h + cell_diam);
    return vol / lat.volume();
}

}  // namespace detail

namespace {

void check_ball_ceiling(const Lattice& lat, double radius, std::uint64_t ceiling) {
    const double bound = detail::ball_count_bound(lat, radius);
    if (bound > static_cast<double>(ceiling))
        throw SizeLimitError("enumerate_ball: point-count bound " + std::to_string(bound) +
                             " exceeds ceiling " + std::to_string(ceiling));
}

}  // namespace

void for_each_in_ball(const Lattice& lat, std::span<const double> center, double radius,
                      const PointFilter& filter,
                      const std::function<void(std::span<const std::int64_t>)>& fn,
                      std::uint64_t count_ceiling) {
    check_ball_ceiling(lat, radius, count_ceiling);
    const detail::BallScan g = detail::make_ball_scan(lat, center, radius);
    detail::scan_ball(g, [&](std::span<const std::int64_t> coords) {
        if (filter.passes(coords)) fn(coords);
    });
}

std::vector<LatticeVector> points_in_ball(const Lattice& lat, std::span<const double> center,
                                          double radius, const PointFilter& filter,
                                          std::uint64_t count_ceiling) {
    std::vector<LatticeVector> out;
    for_each_in_ball(lat, center, radius, filter,
                     [&](std::span<const std::int64_t> coords) {
                         out.emplace_back(coords.begin(), coords.end());
                     },
                     count_ceiling);
    return out;
}

std::uint64_t count_in_ball(const Lattice& lat, std::span<const double> center, double radius,
                            const PointFilter& filter, int slabs, std::uint64_t count_ceiling) {
    check_ball_ceiling(lat, radius, count_ceiling);
    const detail::BallScan g = detail::make_ball_scan(lat, center, radius);
    if (slabs < 1) slabs = 1;
    std::vector<std::uint64_t> partial(static_cast<std::size_t>(slabs), 0);
    detail::for_each_slab(g.lo[0], g.hi[0], slabs,
                          [&](int k, std::int64_t a, std::int64_t b) {
                              std::uint64_t c = 0;
                              detail::scan_ball_slab(g, a, b,
                                                     [&](std::span<const std::int64_t> coords) {
                                                         if (filter.passes(coords)) ++c;
                                                     });
                              partial[static_cast<std::size_t>(k)] = c;
                          });
    std::uint64_t total = 0;
    for (std::uint64_t c : partial) total += c;
    return total;
}

namespace {

// least non-negative a with a*x == 1 mod m (m > 1, gcd(x, m) = 1)
std::uint64_t mod_inverse(std::uint64_t x, std::uint64_t m) {
    i128 t = 0, new_t = 1;
    i128 r = static_cast<i128>(m), new_r = static_cast<i128>(x % m);
    while (new_r != 0) {
        const i128 q = r / new_r;
        i128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw std::invalid_argument("crt_lattice: moduli are not pairwise coprime");
    if (t < 0) t += static_cast<i128>(m);
    return static_cast<std::uint64_t>(t);
}

std::uint64_t nonneg_mod(std::int64_t v, std::uint64_t m) {
    i128 r = static_cast<i128>(v) % static_cast<i128>(m);
    if (r < 0) r += static_cast<i128>(m);
    return static_cast<std::uint64_t>(r);
}

}  // namespace

LatticeVector crt_lattice(const std::vector<LatticeVector>& residues,
                          const std::vector<std::uint64_t>& moduli) {
    if (residues.empty() || residues.size() != moduli.size())
        throw std::invalid_argument("crt_lattice: residue/modulus lists must be nonempty and equal-length");
    const std::size_t n = residues.front().size();
    for (const auto& r : residues)
        if (r.size() != n) throw std::invalid_argument("crt_lattice: inconsistent residue dimensions");
    u128 product = 1;
    for (std::uint64_t m : moduli) {
        if (m <= 1) throw std::invalid_argument("crt_lattice: moduli must be > 1");
        const u128 next = product * m;
        if (next / m != product)
            throw SizeLimitError("crt_lattice: modulus product overflows the 128-bit accumulator");
        product = next;
    }
    for (std::size_t i = 0; i < moduli.size(); ++i)
        for (std::size_t j = i + 1; j < moduli.size(); ++j)
            if (std::gcd(moduli[i], moduli[j]) != 1)
                throw std::invalid_argument("crt_lattice: moduli are not pairwise coprime");
    if (product > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
        throw SizeLimitError("crt_lattice: modulus product exceeds the 64-bit coordinate ceiling");

    LatticeVector out(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        u128 x = nonneg_mod(residues[0][c], moduli[0]);
        u128 big_m = moduli[0];
        for (std::size_t j = 1; j < moduli.size(); ++j) {
            const std::uint64_t m = moduli[j];
            const std::uint64_t r = nonneg_mod(residues[j][c], m);
            const std::uint64_t m_inv = mod_inverse(static_cast<std::uint64_t>(big_m % m), m);
            const std::uint64_t x_mod = static_cast<std::uint64_t>(x % m);
            const std::uint64_t diff = (r + m - x_mod % m) % m;
            const u128 t = (static_cast<u128>(diff) * m_inv) % m;
            x += big_m * t;
            big_m *= m;
        }
        out[c] = static_cast<std::int64_t>(x);
    }
    return out;
}

LatticeVector find_hole(const Lattice& lat, const std::vector<LatticeVector>& config,
                        std::vector<std::uint64_t> moduli) {
    if (config.empty()) throw std::invalid_argument("find_hole: configuration must be nonempty");
    const std::size_t s = config.size();
    for (const auto& c : config)
        if (static_cast<int>(c.size()) != lat.dim())
            throw std::invalid_argument("find_hole: configuration dimension mismatch");
    if (moduli.empty()) {
        const auto primes = primes_upto(64 + 8 * s);
        std::vector<std::uint32_t> ps(primes.begin(), primes.end());
        while (ps.size() < s) {
            // enough primes for any desk-scale configuration; widen if not
            const auto wider = primes_upto(ps.back() * 4);
            ps.assign(wider.begin(), wider.end());
        }
        moduli.assign(ps.begin(), ps.begin() + static_cast<std::ptrdiff_t>(s));
    }
    if (moduli.size() != s)
        throw std::invalid_argument("find_hole: need one modulus per configuration point");

    std::vector<LatticeVector> residues(s);
    for (std::size_t j = 0; j < s; ++j) {
        residues[j].resize(config[j].size());
        for (std::size_t c = 0; c < config[j].size(); ++c) residues[j][c] = -config[j][c];
    }
    LatticeVector t = crt_lattice(residues, moduli);

    std::int64_t big_m = 1;
    for (std::uint64_t m : moduli) big_m *= static_cast<std::int64_t>(m);

    // keep every translate away from the origin, where visibility is undefined
    auto hits_origin = [&] {
        for (const auto& c : config) {
            bool zero = true;
            for (std::size_t i = 0; i < c.size() && zero; ++i) zero = (c[i] + t[i]) == 0;
            if (zero) return true;
        }
        return false;
    };
    while (hits_origin()) t[0] += big_m;

    for (std::size_t j = 0; j < s; ++j) {
        LatticeVector p(config[j].size());
        for (std::size_t c = 0; c < p.size(); ++c) p[c] = config[j][c] + t[c];
        const std::uint64_t cont = content(p);
        if (cont % moduli[j] != 0 || is_visible(p))
            throw std::logic_error("find_hole: verification failed");
    }
    return t;
}

std::pair<LatticeVector, LatticeVector> visible_difference_witness(const Lattice& lat,
                                                                   const LatticeVector& x) {
    if (lat.dim() < 2)
        throw std::invalid_argument("visible_difference_witness: requires dimension >= 2");
    if (static_cast<int>(x.size()) != lat.dim())
        throw std::invalid_argument("visible_difference_witness: dimension mismatch");
    LatticeVector v1(x.size()), v2(x.size(), 0);
    v1[0] = x[0] + 1;
    v1[1] = 1;
    for (std::size_t i = 2; i < x.size(); ++i) v1[i] = x[i];
    v2[0] = 1;
    v2[1] = 1 - x[1];
    if (!is_visible(v1) || !is_visible(v2))
        throw std::logic_error("visible_difference_witness: construction failed");
    return {v1, v2};
}

}  // namespace latdiff
