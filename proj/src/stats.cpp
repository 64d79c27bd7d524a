#include "latdiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latdiff/errors.hpp"
#include "latdiff/numtheory.hpp"
#include "latdiff/scan.hpp"

namespace latdiff {

namespace {

struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
}

// largest integer strictly below R (for strict |x| < R over integers)
std::int64_t strict_int_bound(double r) {
    std::int64_t b = static_cast<std::int64_t>(std::floor(r));
    if (static_cast<double>(b) >= r) --b;
    return b;
}

double ipow(double base, int exp) {
    double v = 1.0;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

bool in_set(PointSet::Kind kind, std::span<const std::int64_t> coords) {
    return kind == PointSet::Kind::LatticeAll || content(coords) == 1;
}

void require_lattice(const PointSet& set) {
    if (set.kind == PointSet::Kind::KFree || set.lattice == nullptr)
        throw std::invalid_argument("point set does not carry a lattice");
}

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

// ---- Region ------------------------------------------------------------

Region Region::ball(std::vector<double> center, double radius) {
    if (center.empty() || center.size() > Lattice::kMaxDim)
        throw std::invalid_argument("Region: dimension must be in [1, 8]");
    for (double c : center)
        if (!std::isfinite(c)) throw std::invalid_argument("Region: center must be finite");
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("Region: ball radius must be positive (volume would be 0)");
    Region r;
    r.shape = Shape::Ball;
    r.center = std::move(center);
    r.radius = radius;
    return r;
}

Region Region::box(std::vector<double> center, std::vector<double> half_widths) {
    if (center.empty() || center.size() > Lattice::kMaxDim || half_widths.size() != center.size())
        throw std::invalid_argument("Region: center/half-width dimension mismatch");
    for (double c : center)
        if (!std::isfinite(c)) throw std::invalid_argument("Region: center must be finite");
    for (double h : half_widths)
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::invalid_argument("Region: half-widths must be positive (volume would be 0)");
    Region r;
    r.shape = Shape::Box;
    r.center = std::move(center);
    r.half_widths = std::move(half_widths);
    return r;
}

double Region::volume() const {
    if (shape == Shape::Ball) return unit_ball_volume(dim()) * ipow(radius, dim());
    double v = 1.0;
    for (double h : half_widths) v *= 2.0 * h;
    return v;
}

double Region::sup_norm() const {
    if (shape == Shape::Ball) return norm(center) + radius;
    double s = 0.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
        const double e = std::abs(center[i]) + half_widths[i];
        s += e * e;
    }
    return std::sqrt(s);
}

double Region::scale() const {
    if (shape == Shape::Ball) return radius;
    return *std::max_element(half_widths.begin(), half_widths.end());
}

// ---- densities ----------------------------------------------------------

namespace {

double density_error_bound(int n, double scale, double sup) {
    if (n == 1) return 10.0 / scale;
    if (n == 2) return 10.0 * (std::log(std::max(sup, 2.0)) / scale + sup / (scale * scale));
    return 10.0 * (1.0 / scale + sup / ipow(scale, n));
}

}  // namespace

DensityEstimate density_visible(const Lattice& lat, const Region& region, int slabs,
                                std::uint64_t count_ceiling) {
    if (region.dim() != lat.dim())
        throw std::invalid_argument("density_visible: region dimension mismatch");
    if (!(region.volume() > 0.0))
        throw std::invalid_argument("density_visible: region volume is 0");
    if (slabs < 1) slabs = 1;

    std::uint64_t count = 0;
    if (region.shape == Region::Shape::Ball) {
        count = count_in_ball(lat, region.center, region.radius, PointFilter::visible(), slabs,
                              count_ceiling);
    } else {
        const double bound = detail::box_count_bound(lat, region.half_widths);
        if (bound > static_cast<double>(count_ceiling))
            throw SizeLimitError("density_visible: point-count bound " + std::to_string(bound) +
                                 " exceeds ceiling " + std::to_string(count_ceiling));
        const detail::BoxScan g = detail::make_box_scan(lat, region.center, region.half_widths);
        std::vector<std::uint64_t> partial(static_cast<std::size_t>(slabs), 0);
        detail::for_each_slab(g.lo[0], g.hi[0], slabs, [&](int s, std::int64_t a, std::int64_t b) {
            std::uint64_t c = 0;
            detail::scan_box_slab(g, a, b, [&](std::span<const std::int64_t> coords) {
                if (content(coords) == 1) ++c;
            });
            partial[static_cast<std::size_t>(s)] = c;
        });
        for (std::uint64_t c : partial) count += c;
    }

    DensityEstimate est;
    est.count = count;
    est.region = region;
    est.normalizer = region.volume();
    est.density = static_cast<double>(count) / est.normalizer;
    est.sup_norm = region.sup_norm();
    est.error_bound = density_error_bound(lat.dim(), region.scale(), est.sup_norm);
    return est;
}

DensityEstimate density_kfree(int k, double radius) {
    KFreeSpec spec(k);
    if (!(radius >= 1.0) || !std::isfinite(radius))
        throw std::invalid_argument("density_kfree: radius must be >= 1");
    const std::int64_t bound = strict_int_bound(radius);
    std::uint64_t count = 0;
    if (bound >= 1) {
        const auto flags = kfree_sieve(static_cast<std::uint64_t>(bound), spec.k);
        for (std::int64_t m = 1; m <= bound; ++m) count += flags[static_cast<std::uint64_t>(m)];
        count *= 2;  // both signs; 0 excluded
    }
    DensityEstimate est;
    est.count = count;
    est.region = Region::ball({0.0}, radius);
    est.normalizer = 2.0 * radius;
    est.density = static_cast<double>(count) / est.normalizer;
    est.sup_norm = radius;
    est.error_bound = 10.0 * std::pow(radius, 1.0 / spec.k - 1.0);
    return est;
}

double theoretical_density_visible(const Lattice& lat, std::uint64_t prime_bound) {
    if (lat.dim() == 1) return 0.0;  // zeta has its pole at 1
    return lat.density() * eval_series_cached(SeriesKind::InvZeta, lat.dim(), prime_bound).value;
}

double theoretical_density_kfree(int k, std::uint64_t prime_bound) {
    KFreeSpec spec(k);
    return eval_series_cached(SeriesKind::InvZeta, spec.k, prime_bound).value;
}

// ---- autocorrelation ----------------------------------------------------

double theoretical_weight_visible(const Lattice& lat, const LatticeVector& a,
                                  std::uint64_t prime_bound) {
    if (lat.dim() < 2)
        throw std::invalid_argument("theoretical_weight_visible: requires dimension >= 2");
    if (static_cast<int>(a.size()) != lat.dim())
        throw std::invalid_argument("theoretical_weight_visible: dimension mismatch");
    const std::uint64_t cont = content(a);
    if (cont == kContentInfinite)
        throw std::domain_error(
            "theoretical_weight_visible: a = 0 is the density, not an autocorrelation weight");
    const int n = lat.dim();
    double w = lat.density() * eval_series_cached(SeriesKind::Xi, n, prime_bound).value;
    for (const auto& pe : factorize(cont))
        w *= 1.0 + 1.0 / (ipow(static_cast<double>(pe.first), n) - 2.0);
    return w;
}

double theoretical_weight_kfree(int k, std::int64_t a, std::uint64_t prime_bound) {
    KFreeSpec spec(k);
    if (a == 0)
        throw std::domain_error(
            "theoretical_weight_kfree: a = 0 is the density, not an autocorrelation weight");
    double w = eval_series_cached(SeriesKind::Xi, spec.k, prime_bound).value;
    for (const auto& [p, e] : factorize(abs_u64(a)))
        if (e >= spec.k) w *= 1.0 + 1.0 / (ipow(static_cast<double>(p), spec.k) - 2.0);
    return w;
}

namespace {

bool all_zero(const LatticeVector& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; });
}

std::uint64_t autocorr_count_lattice(const PointSet& set, const LatticeVector& a, double radius,
                                     bool one_sided, int slabs, std::uint64_t count_ceiling) {
    const Lattice& lat = *set.lattice;
    const int n = lat.dim();
    const double bound = detail::ball_count_bound(lat, radius);
    if (bound > static_cast<double>(count_ceiling))
        throw SizeLimitError("empirical_autocorr: point-count bound " + std::to_string(bound) +
                             " exceeds ceiling " + std::to_string(count_ceiling));
    const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    const detail::BallScan g = detail::make_ball_scan(lat, origin, radius);
    const double r2 = radius * radius;
    const bool identity = lat.identity_basis();
    const bool need_visible = set.kind == PointSet::Kind::LatticeVisible;

    std::vector<std::uint64_t> partial(static_cast<std::size_t>(slabs), 0);
    detail::for_each_slab(g.lo[0], g.hi[0], slabs, [&](int s, std::int64_t lo, std::int64_t hi) {
        std::uint64_t c = 0;
        std::array<std::int64_t, Lattice::kMaxDim> diff{};
        std::array<double, Lattice::kMaxDim> pos{};
        detail::scan_ball_slab(g, lo, hi, [&](std::span<const std::int64_t> coords) {
            if (need_visible && content(coords) != 1) return;
            for (int i = 0; i < n; ++i) diff[i] = coords[i] - a[i];
            const std::span<const std::int64_t> d(diff.data(), static_cast<std::size_t>(n));
            if (!one_sided) {
                double d2 = 0.0;
                if (identity) {
                    for (int i = 0; i < n; ++i) {
                        const double v = static_cast<double>(diff[i]);
                        d2 += v * v;
                    }
                } else {
                    lat.position_into(d, std::span<double>(pos.data(), static_cast<std::size_t>(n)));
                    for (int i = 0; i < n; ++i) d2 += pos[i] * pos[i];
                }
                if (!(d2 < r2)) return;
            }
            if (need_visible && content(d) != 1) return;
            ++c;
        });
        partial[static_cast<std::size_t>(s)] = c;
    });
    std::uint64_t total = 0;
    for (std::uint64_t c : partial) total += c;
    return total;
}

std::uint64_t autocorr_count_kfree(int k, std::int64_t a, double radius, bool one_sided) {
    const std::int64_t bound = strict_int_bound(radius);
    if (bound < 1) return 0;
    const std::uint64_t limit = static_cast<std::uint64_t>(bound) + abs_u64(a);
    const auto flags = kfree_sieve(limit, k);
    std::uint64_t count = 0;
    for (std::int64_t x = -bound; x <= bound; ++x) {
        if (x == 0 || x == a) continue;
        if (!flags[abs_u64(x)]) continue;
        const std::int64_t d = x - a;
        if (!one_sided && abs_u64(d) > static_cast<std::uint64_t>(bound)) continue;
        if (!flags[abs_u64(d)]) continue;
        ++count;
    }
    return count;
}

}  // namespace

AutocorrEstimate empirical_autocorr(const PointSet& set, const LatticeVector& a, double radius,
                                    bool one_sided, int slabs, std::uint64_t prime_bound,
                                    std::uint64_t count_ceiling) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("empirical_autocorr: radius must be positive");
    if (slabs < 1) slabs = 1;

    AutocorrEstimate est;
    est.a = a;
    est.radius = radius;

    if (set.kind == PointSet::Kind::KFree) {
        if (a.size() != 1)
            throw std::invalid_argument("empirical_autocorr: k-free displacement is 1-dimensional");
        const std::int64_t av = a[0];
        if (!(radius > static_cast<double>(abs_u64(av))))
            throw std::invalid_argument("empirical_autocorr: requires R > |a|");
        est.pair_count = autocorr_count_kfree(set.k, av, radius, one_sided);
        est.w_r = static_cast<double>(est.pair_count) / (2.0 * radius);
        est.w_theory = (av == 0) ? theoretical_density_kfree(set.k, prime_bound)
                                 : theoretical_weight_kfree(set.k, av, prime_bound);
    } else {
        require_lattice(set);
        const Lattice& lat = *set.lattice;
        if (static_cast<int>(a.size()) != lat.dim())
            throw std::invalid_argument("empirical_autocorr: displacement dimension mismatch");
        if (!(radius > norm(lat.position(a))))
            throw std::invalid_argument("empirical_autocorr: requires R > |a|");
        est.pair_count = autocorr_count_lattice(set, a, radius, one_sided, slabs, count_ceiling);
        est.w_r = static_cast<double>(est.pair_count) /
                  (unit_ball_volume(lat.dim()) * ipow(radius, lat.dim()));
        if (set.kind == PointSet::Kind::LatticeAll)
            est.w_theory = lat.density();
        else
            est.w_theory = all_zero(a) ? theoretical_density_visible(lat, prime_bound)
                                       : theoretical_weight_visible(lat, a, prime_bound);
    }
    est.abs_error = std::abs(est.w_r - est.w_theory);
    return est;
}

// ---- Fourier-Bohr -------------------------------------------------------

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// exp(-2 pi i t) accumulated with the integer part of t removed first
inline void add_phase(Kahan& re, Kahan& im, double t) {
    const double tr = t - std::nearbyint(t);
    const double ang = -kTwoPi * tr;
    re.add(std::cos(ang));
    im.add(std::sin(ang));
}

}  // namespace

std::complex<double> fourier_bohr(const PointSet& set, std::span<const double> x, double radius,
                                  int slabs, std::uint64_t count_ceiling) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("fourier_bohr: radius must be positive");
    if (slabs < 1) slabs = 1;

    if (set.kind == PointSet::Kind::KFree) {
        if (x.size() != 1)
            throw std::invalid_argument("fourier_bohr: k-free frequency is 1-dimensional");
        const std::int64_t bound = strict_int_bound(radius);
        Kahan re, im;
        if (bound >= 1) {
            const auto flags = kfree_sieve(static_cast<std::uint64_t>(bound), set.k);
            for (std::int64_t y = -bound; y <= bound; ++y) {
                if (y == 0 || !flags[abs_u64(y)]) continue;
                add_phase(re, im, x[0] * static_cast<double>(y));
            }
        }
        return {re.sum / (2.0 * radius), im.sum / (2.0 * radius)};
    }

    require_lattice(set);
    const Lattice& lat = *set.lattice;
    const int n = lat.dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("fourier_bohr: frequency dimension mismatch");
    const double bound = detail::ball_count_bound(lat, radius);
    if (bound > static_cast<double>(count_ceiling))
        throw SizeLimitError("fourier_bohr: point-count bound " + std::to_string(bound) +
                             " exceeds ceiling " + std::to_string(count_ceiling));

    const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
    const detail::BallScan g = detail::make_ball_scan(lat, origin, radius);
    const bool identity = lat.identity_basis();
    const bool need_visible = set.kind == PointSet::Kind::LatticeVisible;

    // frequency pulled back to coordinate space: x . (B c) = (B^T x) . c
    std::array<double, Lattice::kMaxDim> freq{};
    for (int j = 0; j < n; ++j) {
        if (identity) {
            freq[j] = x[j];
        } else {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += lat.basis_entry(i, j) * x[i];
            freq[j] = s;
        }
    }

    std::vector<Kahan> partial_re(static_cast<std::size_t>(slabs));
    std::vector<Kahan> partial_im(static_cast<std::size_t>(slabs));
    detail::for_each_slab(g.lo[0], g.hi[0], slabs, [&](int s, std::int64_t lo, std::int64_t hi) {
        Kahan re, im;
        detail::scan_ball_slab(g, lo, hi, [&](std::span<const std::int64_t> coords) {
            if (need_visible && content(coords) != 1) return;
            double t = 0.0;
            for (int j = 0; j < n; ++j) t += freq[j] * static_cast<double>(coords[j]);
            add_phase(re, im, t);
        });
        partial_re[static_cast<std::size_t>(s)] = re;
        partial_im[static_cast<std::size_t>(s)] = im;
    });
    double re = 0.0, im = 0.0;
    for (int s = 0; s < slabs; ++s) {
        re += partial_re[static_cast<std::size_t>(s)].sum;
        im += partial_im[static_cast<std::size_t>(s)].sum;
    }
    const double nrm = unit_ball_volume(n) * ipow(radius, n);
    return {re / nrm, im / nrm};
}

// ---- convergence tables --------------------------------------------------

namespace {

std::vector<double> checked_radii(std::vector<double> radii) {
    if (radii.empty()) throw std::invalid_argument("convergence table: no radii");
    for (double r : radii)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::invalid_argument("convergence table: radii must be positive");
    std::sort(radii.begin(), radii.end());
    return radii;
}

// first radius index admitting a squared norm (strict), or npos
std::size_t bin_of(const std::vector<double>& radii_sq, double norm_sq) {
    const auto it = std::upper_bound(radii_sq.begin(), radii_sq.end(), norm_sq);
    return it == radii_sq.end() ? static_cast<std::size_t>(-1)
                                : static_cast<std::size_t>(it - radii_sq.begin());
}

}  // namespace

std::vector<ConvergenceRow> density_table(const PointSet& set, std::vector<double> radii,
                                          int slabs, std::uint64_t prime_bound,
                                          std::uint64_t count_ceiling) {
    radii = checked_radii(std::move(radii));
    if (slabs < 1) slabs = 1;
    const std::size_t nr = radii.size();
    std::vector<std::uint64_t> cumulative(nr, 0);
    double theory = 0.0;
    double norm_factor = 0.0;
    int n = 1;

    if (set.kind == PointSet::Kind::KFree) {
        theory = theoretical_density_kfree(set.k, prime_bound);
        const std::int64_t bound = strict_int_bound(radii.back());
        const auto flags = bound >= 1 ? kfree_sieve(static_cast<std::uint64_t>(bound), set.k)
                                      : std::vector<std::uint8_t>{};
        std::vector<double> radii_sq(nr);
        for (std::size_t i = 0; i < nr; ++i) radii_sq[i] = radii[i] * radii[i];
        for (std::int64_t m = 1; m <= bound; ++m) {
            if (!flags[static_cast<std::uint64_t>(m)]) continue;
            const double md = static_cast<double>(m);
            const std::size_t b = bin_of(radii_sq, md * md);
            if (b != static_cast<std::size_t>(-1)) cumulative[b] += 2;
        }
    } else {
        require_lattice(set);
        const Lattice& lat = *set.lattice;
        n = lat.dim();
        theory = set.kind == PointSet::Kind::LatticeAll ? lat.density()
                                                        : theoretical_density_visible(lat, prime_bound);
        const double bound = detail::ball_count_bound(lat, radii.back());
        if (bound > static_cast<double>(count_ceiling))
            throw SizeLimitError("density_table: point-count bound " + std::to_string(bound) +
                                 " exceeds ceiling " + std::to_string(count_ceiling));
        const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
        const detail::BallScan g = detail::make_ball_scan(lat, origin, radii.back());
        const bool identity = lat.identity_basis();
        std::vector<double> radii_sq(nr);
        for (std::size_t i = 0; i < nr; ++i) radii_sq[i] = radii[i] * radii[i];

        std::vector<std::vector<std::uint64_t>> bins(
            static_cast<std::size_t>(slabs), std::vector<std::uint64_t>(nr, 0));
        detail::for_each_slab(g.lo[0], g.hi[0], slabs, [&](int s, std::int64_t lo, std::int64_t hi) {
            auto& mine = bins[static_cast<std::size_t>(s)];
            std::array<double, Lattice::kMaxDim> pos{};
            detail::scan_ball_slab(g, lo, hi, [&](std::span<const std::int64_t> coords) {
                if (!in_set(set.kind, coords)) return;
                double n2 = 0.0;
                if (identity) {
                    for (int i = 0; i < n; ++i) {
                        const double v = static_cast<double>(coords[i]);
                        n2 += v * v;
                    }
                } else {
                    lat.position_into(coords, std::span<double>(pos.data(), static_cast<std::size_t>(n)));
                    for (int i = 0; i < n; ++i) n2 += pos[i] * pos[i];
                }
                const std::size_t b = bin_of(radii_sq, n2);
                if (b != static_cast<std::size_t>(-1)) ++mine[b];
            });
        });
        for (int s = 0; s < slabs; ++s)
            for (std::size_t i = 0; i < nr; ++i) cumulative[i] += bins[static_cast<std::size_t>(s)][i];
    }

    std::vector<ConvergenceRow> rows(nr);
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < nr; ++i) {
        running += cumulative[i];
        norm_factor = set.kind == PointSet::Kind::KFree
                          ? 2.0 * radii[i]
                          : unit_ball_volume(n) * ipow(radii[i], n);
        rows[i].radius = radii[i];
        rows[i].count = running;
        rows[i].estimate = static_cast<double>(running) / norm_factor;
        rows[i].theory = theory;
        rows[i].abs_error = std::abs(rows[i].estimate - theory);
    }
    return rows;
}

std::vector<ConvergenceRow> autocorr_table(const PointSet& set, const LatticeVector& a,
                                           std::vector<double> radii, bool one_sided, int slabs,
                                           std::uint64_t prime_bound,
                                           std::uint64_t count_ceiling) {
    radii = checked_radii(std::move(radii));
    if (slabs < 1) slabs = 1;
    const std::size_t nr = radii.size();
    std::vector<std::uint64_t> binned(nr, 0);
    double theory = 0.0;
    int n = 1;

    if (set.kind == PointSet::Kind::KFree) {
        if (a.size() != 1)
            throw std::invalid_argument("autocorr_table: k-free displacement is 1-dimensional");
        const std::int64_t av = a[0];
        if (!(radii.front() > static_cast<double>(abs_u64(av))))
            throw std::invalid_argument("autocorr_table: requires R > |a| for every radius");
        theory = (av == 0) ? theoretical_density_kfree(set.k, prime_bound)
                           : theoretical_weight_kfree(set.k, av, prime_bound);
        const std::int64_t bound = strict_int_bound(radii.back());
        const auto flags = kfree_sieve(static_cast<std::uint64_t>(bound) + abs_u64(av), set.k);
        std::vector<double> radii_sq(nr);
        for (std::size_t i = 0; i < nr; ++i) radii_sq[i] = radii[i] * radii[i];
        for (std::int64_t x = -bound; x <= bound; ++x) {
            if (x == 0 || x == av || !flags[abs_u64(x)]) continue;
            const std::int64_t d = x - av;
            if (!flags[abs_u64(d)]) continue;
            const double xn = static_cast<double>(x), dn = static_cast<double>(d);
            const double key = one_sided ? xn * xn : std::max(xn * xn, dn * dn);
            const std::size_t b = bin_of(radii_sq, key);
            if (b != static_cast<std::size_t>(-1)) ++binned[b];
        }
    } else {
        require_lattice(set);
        const Lattice& lat = *set.lattice;
        n = lat.dim();
        if (static_cast<int>(a.size()) != n)
            throw std::invalid_argument("autocorr_table: displacement dimension mismatch");
        if (!(radii.front() > norm(lat.position(a))))
            throw std::invalid_argument("autocorr_table: requires R > |a| for every radius");
        if (set.kind == PointSet::Kind::LatticeAll)
            theory = lat.density();
        else
            theory = all_zero(a) ? theoretical_density_visible(lat, prime_bound)
                                 : theoretical_weight_visible(lat, a, prime_bound);
        const double bound = detail::ball_count_bound(lat, radii.back());
        if (bound > static_cast<double>(count_ceiling))
            throw SizeLimitError("autocorr_table: point-count bound " + std::to_string(bound) +
                                 " exceeds ceiling " + std::to_string(count_ceiling));
        const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
        const detail::BallScan g = detail::make_ball_scan(lat, origin, radii.back());
        const bool identity = lat.identity_basis();
        const bool need_visible = set.kind == PointSet::Kind::LatticeVisible;
        std::vector<double> radii_sq(nr);
        for (std::size_t i = 0; i < nr; ++i) radii_sq[i] = radii[i] * radii[i];

        std::vector<std::vector<std::uint64_t>> bins(
            static_cast<std::size_t>(slabs), std::vector<std::uint64_t>(nr, 0));
        detail::for_each_slab(g.lo[0], g.hi[0], slabs, [&](int s, std::int64_t lo, std::int64_t hi) {
            auto& mine = bins[static_cast<std::size_t>(s)];
            std::array<std::int64_t, Lattice::kMaxDim> diff{};
            std::array<double, Lattice::kMaxDim> pos{};
            detail::scan_ball_slab(g, lo, hi, [&](std::span<const std::int64_t> coords) {
                if (need_visible && content(coords) != 1) return;
                double xn2 = 0.0, dn2 = 0.0;
                for (int i = 0; i < n; ++i) diff[i] = coords[i] - a[i];
                const std::span<const std::int64_t> d(diff.data(), static_cast<std::size_t>(n));
                if (need_visible && content(d) != 1) return;
                if (identity) {
                    for (int i = 0; i < n; ++i) {
                        const double xv = static_cast<double>(coords[i]);
                        const double dv = static_cast<double>(diff[i]);
                        xn2 += xv * xv;
                        dn2 += dv * dv;
                    }
                } else {
                    lat.position_into(coords, std::span<double>(pos.data(), static_cast<std::size_t>(n)));
                    for (int i = 0; i < n; ++i) xn2 += pos[i] * pos[i];
                    lat.position_into(d, std::span<double>(pos.data(), static_cast<std::size_t>(n)));
                    for (int i = 0; i < n; ++i) dn2 += pos[i] * pos[i];
                }
                const double key = one_sided ? xn2 : std::max(xn2, dn2);
                const std::size_t b = bin_of(radii_sq, key);
                if (b != static_cast<std::size_t>(-1)) ++mine[b];
            });
        });
        for (int s = 0; s < slabs; ++s)
            for (std::size_t i = 0; i < nr; ++i) binned[i] += bins[static_cast<std::size_t>(s)][i];
    }

    std::vector<ConvergenceRow> rows(nr);
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < nr; ++i) {
        running += binned[i];
        const double nrm = set.kind == PointSet::Kind::KFree
                               ? 2.0 * radii[i]
                               : unit_ball_volume(n) * ipow(radii[i], n);
        rows[i].radius = radii[i];
        rows[i].count = running;
        rows[i].estimate = static_cast<double>(running) / nrm;
        rows[i].theory = theory;
        rows[i].abs_error = std::abs(rows[i].estimate - theory);
    }
    return rows;
}

std::vector<ConvergenceRow> fourier_table(const PointSet& set, std::span<const double> x,
                                          double theory, std::vector<double> radii, int slabs,
                                          std::uint64_t count_ceiling) {
    radii = checked_radii(std::move(radii));
    if (slabs < 1) slabs = 1;
    const std::size_t nr = radii.size();
    std::vector<double> radii_sq(nr);
    for (std::size_t i = 0; i < nr; ++i) radii_sq[i] = radii[i] * radii[i];

    std::vector<std::uint64_t> counts(nr, 0);
    std::vector<double> re(nr, 0.0), im(nr, 0.0);
    int n = 1;

    if (set.kind == PointSet::Kind::KFree) {
        if (x.size() != 1)
            throw std::invalid_argument("fourier_table: k-free frequency is 1-dimensional");
        const std::int64_t bound = strict_int_bound(radii.back());
        const auto flags = bound >= 1 ? kfree_sieve(static_cast<std::uint64_t>(bound), set.k)
                                      : std::vector<std::uint8_t>{};
        std::vector<Kahan> kre(nr), kim(nr);
        for (std::int64_t y = -bound; y <= bound; ++y) {
            if (y == 0 || !flags[abs_u64(y)]) continue;
            const double yd = static_cast<double>(y);
            const std::size_t b = bin_of(radii_sq, yd * yd);
            if (b == static_cast<std::size_t>(-1)) continue;
            ++counts[b];
            add_phase(kre[b], kim[b], x[0] * yd);
        }
        for (std::size_t i = 0; i < nr; ++i) {
            re[i] = kre[i].sum;
            im[i] = kim[i].sum;
        }
    } else {
        require_lattice(set);
        const Lattice& lat = *set.lattice;
        n = lat.dim();
        if (static_cast<int>(x.size()) != n)
            throw std::invalid_argument("fourier_table: frequency dimension mismatch");
        const double bound = detail::ball_count_bound(lat, radii.back());
        if (bound > static_cast<double>(count_ceiling))
            throw SizeLimitError("fourier_table: point-count bound " + std::to_string(bound) +
                                 " exceeds ceiling " + std::to_string(count_ceiling));
        const std::vector<double> origin(static_cast<std::size_t>(n), 0.0);
        const detail::BallScan g = detail::make_ball_scan(lat, origin, radii.back());
        const bool identity = lat.identity_basis();
        const bool need_visible = set.kind == PointSet::Kind::LatticeVisible;

        std::array<double, Lattice::kMaxDim> freq{};
        for (int j = 0; j < n; ++j) {
            if (identity) {
                freq[j] = x[j];
            } else {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += lat.basis_entry(i, j) * x[i];
                freq[j] = s;
            }
        }

        struct SlabBins {
            std::vector<std::uint64_t> counts;
            std::vector<Kahan> re, im;
        };
        std::vector<SlabBins> bins(static_cast<std::size_t>(slabs));
        for (auto& sb : bins) {
            sb.counts.assign(nr, 0);
            sb.re.assign(nr, Kahan{});
            sb.im.assign(nr, Kahan{});
        }
        detail::for_each_slab(g.lo[0], g.hi[0], slabs, [&](int s, std::int64_t lo, std::int64_t hi) {
            auto& mine = bins[static_cast<std::size_t>(s)];
            std::array<double, Lattice::kMaxDim> pos{};
            detail::scan_ball_slab(g, lo, hi, [&](std::span<const std::int64_t> coords) {
                if (need_visible && content(coords) != 1) return;
                double n2 = 0.0, t = 0.0;
                if (identity) {
                    for (int i = 0; i < n; ++i) {
                        const double v = static_cast<double>(coords[i]);
                        n2 += v * v;
                        t += freq[i] * v;
                    }
                } else {
                    lat.position_into(coords, std::span<double>(pos.data(), static_cast<std::size_t>(n)));
                    for (int i = 0; i < n; ++i) {
                        n2 += pos[i] * pos[i];
                        t += freq[i] * static_cast<double>(coords[i]);
                    }
                }
                const std::size_t b = bin_of(radii_sq, n2);
                if (b == static_cast<std::size_t>(-1)) return;
                ++mine.counts[b];
                add_phase(mine.re[b], mine.im[b], t);
            });
        });
        for (int s = 0; s < slabs; ++s) {
            const auto& sb = bins[static_cast<std::size_t>(s)];
            for (std::size_t i = 0; i < nr; ++i) {
                counts[i] += sb.counts[i];
                re[i] += sb.re[i].sum;
                im[i] += sb.im[i].sum;
            }
        }
    }

    std::vector<ConvergenceRow> rows(nr);
    std::uint64_t running = 0;
    double rre = 0.0, rim = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        running += counts[i];
        rre += re[i];
        rim += im[i];
        const double nrm = set.kind == PointSet::Kind::KFree
                               ? 2.0 * radii[i]
                               : unit_ball_volume(n) * ipow(radii[i], n);
        const double mre = rre / nrm, mim = rim / nrm;
        rows[i].radius = radii[i];
        rows[i].count = running;
        rows[i].estimate = mre * mre + mim * mim;
        rows[i].theory = theory;
        rows[i].abs_error = std::abs(rows[i].estimate - theory);
    }
    return rows;
}

}  // namespace latdiff
