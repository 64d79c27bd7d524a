#include "latdiff/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latdiff/errors.hpp"
#include "latdiff/kfree.hpp"
#include "latdiff/numtheory.hpp"
#include "latdiff/scan.hpp"

namespace latdiff {

namespace {

using i128 = __int128;

std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
}

double ipow(double base, int exp) {
    double v = 1.0;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

int mu_of_squarefree(const std::vector<std::pair<std::uint64_t, int>>& factors) {
    return factors.size() % 2 == 0 ? 1 : -1;
}

}  // namespace

RationalDualPoint RationalDualPoint::reduced(std::vector<std::int64_t> numerator,
                                             std::uint64_t q_in) {
    if (q_in == 0) throw std::invalid_argument("RationalDualPoint: denominator must be positive");
    std::uint64_t g = q_in;
    for (std::int64_t v : numerator) g = std::gcd(g, abs_u64(v));
    if (g > 1) {
        for (auto& v : numerator) v /= static_cast<std::int64_t>(g);
        q_in /= g;
    }
    RationalDualPoint p;
    p.numerator = std::move(numerator);
    p.q = q_in;
    return p;
}

std::vector<double> RationalDualPoint::position(const Lattice& dual_lattice) const {
    if (static_cast<int>(numerator.size()) != dual_lattice.dim())
        throw std::invalid_argument("RationalDualPoint: dimension mismatch");
    std::vector<double> pos = dual_lattice.position(numerator);
    for (double& v : pos) v /= static_cast<double>(q);
    return pos;
}

double amplitude_visible(const Lattice& lat, std::uint64_t q, std::uint64_t prime_bound) {
    if (lat.dim() < 2)
        throw std::invalid_argument("amplitude_visible: requires dimension >= 2");
    if (q == 0) throw std::invalid_argument("amplitude_visible: q must be positive");
    const auto factors = factorize(q);
    for (const auto& pe : factors)
        if (pe.second >= 2) return 0.0;  // outside the squarefree support
    const int n = lat.dim();
    double a = lat.density() * eval_series_cached(SeriesKind::InvZeta, n, prime_bound).value *
               static_cast<double>(mu_of_squarefree(factors));
    for (const auto& pe : factors)
        a /= ipow(static_cast<double>(pe.first), n) - 1.0;
    return a;
}

double intensity_visible(const Lattice& lat, std::uint64_t q, std::uint64_t prime_bound) {
    if (lat.dim() < 2)
        throw std::invalid_argument("intensity_visible: requires dimension >= 2");
    if (q == 0) throw std::invalid_argument("intensity_visible: q must be positive");
    if (!is_squarefree(q)) return 0.0;
    const int n = lat.dim();
    const double inv_zeta = eval_series_cached(SeriesKind::InvZeta, n, prime_bound).value;
    double in = lat.density() * lat.density() * inv_zeta * inv_zeta;
    for (const auto& pe : factorize(q)) {
        const double d = ipow(static_cast<double>(pe.first), n) - 1.0;
        in /= d * d;
    }
    return in;
}

double amplitude_kfree(int k, std::uint64_t q, std::uint64_t prime_bound) {
    KFreeSpec spec(k);
    if (q == 0) throw std::invalid_argument("amplitude_kfree: q must be positive");
    if (q > 1 && !is_kfree(static_cast<std::int64_t>(q), spec.k + 1))
        return 0.0;  // support needs a (k+1)-power-free denominator
    const auto factors = factorize(q);
    double a = eval_series_cached(SeriesKind::InvZeta, spec.k, prime_bound).value *
               static_cast<double>(mu_of_squarefree(factors));
    for (const auto& pe : factors)
        a /= ipow(static_cast<double>(pe.first), spec.k) - 1.0;
    return a;
}

double intensity_kfree(int k, std::uint64_t q, std::uint64_t prime_bound) {
    KFreeSpec spec(k);
    if (q == 0) throw std::invalid_argument("intensity_kfree: q must be positive");
    if (q > 1 && !is_kfree(static_cast<std::int64_t>(q), spec.k + 1)) return 0.0;
    const double inv_zeta = eval_series_cached(SeriesKind::InvZeta, spec.k, prime_bound).value;
    double in = inv_zeta * inv_zeta;
    for (const auto& pe : factorize(q)) {
        const double d = ipow(static_cast<double>(pe.first), spec.k) - 1.0;
        in /= d * d;
    }
    return in;
}

DualWindow DualWindow::box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.empty() || lo.size() != hi.size() || lo.size() > Lattice::kMaxDim)
        throw std::invalid_argument("DualWindow: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || !(lo[i] < hi[i]))
            throw std::invalid_argument("DualWindow: requires lo < hi componentwise");
    }
    DualWindow w;
    w.lo = std::move(lo);
    w.hi = std::move(hi);
    return w;
}

namespace {

// exact lexicographic order on rational coordinate vectors num/q
bool rational_lex_less(const RationalDualPoint& a, const RationalDualPoint& b) {
    for (std::size_t i = 0; i < a.numerator.size(); ++i) {
        const i128 lhs = static_cast<i128>(a.numerator[i]) * static_cast<i128>(b.q);
        const i128 rhs = static_cast<i128>(b.numerator[i]) * static_cast<i128>(a.q);
        if (lhs != rhs) return lhs < rhs;
    }
    return false;
}

void sort_peaks(std::vector<WeightedPeak>& peaks) {
    std::sort(peaks.begin(), peaks.end(), [](const WeightedPeak& a, const WeightedPeak& b) {
        if (a.intensity != b.intensity) return a.intensity > b.intensity;
        return rational_lex_less(a.location, b.location);
    });
}

}  // namespace

std::vector<WeightedPeak> enumerate_peaks_visible(const Lattice& lat, const DualWindow& window,
                                                  std::uint64_t q_max, double intensity_floor,
                                                  std::uint64_t prime_bound,
                                                  std::uint64_t count_ceiling) {
    if (lat.dim() < 2)
        throw std::invalid_argument("enumerate_peaks_visible: requires dimension >= 2");
    if (q_max < 1) throw std::invalid_argument("enumerate_peaks_visible: q_max must be >= 1");
    if (intensity_floor < 0)
        throw std::invalid_argument("enumerate_peaks_visible: intensity_floor must be >= 0");
    const int n = lat.dim();
    if (window.dim() != n)
        throw std::invalid_argument("enumerate_peaks_visible: window dimension mismatch");

    const Lattice dual = lat.dual();
    const auto dual_inv = dual.inverse_row_major();  // equals B^T

    // window box center/half-widths for the coordinate pull-back
    std::vector<double> wc(static_cast<std::size_t>(n)), wh(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        wc[i] = 0.5 * (window.lo[i] + window.hi[i]);
        wh[i] = 0.5 * (window.hi[i] - window.lo[i]);
    }

    std::vector<WeightedPeak> peaks;
    double candidate_budget = 0.0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        if (!is_squarefree(q)) continue;
        const double intensity = intensity_visible(lat, q, prime_bound);
        if (intensity < intensity_floor) continue;
        const double amplitude = amplitude_visible(lat, q, prime_bound);

        // numerator bounding box: num/q = D^-1 y for y in the window
        std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
        double box_cells = 1.0;
        for (int i = 0; i < n; ++i) {
            double cc = 0.0, reach = 0.0;
            for (int j = 0; j < n; ++j) {
                const double e = dual_inv[static_cast<std::size_t>(i) * n + j];
                cc += e * wc[j];
                reach += std::abs(e) * wh[j];
            }
            const double qd = static_cast<double>(q);
            lo[i] = static_cast<std::int64_t>(std::floor((cc - reach) * qd)) - 1;
            hi[i] = static_cast<std::int64_t>(std::ceil((cc + reach) * qd)) + 1;
            box_cells *= static_cast<double>(hi[i] - lo[i] + 1);
        }
        candidate_budget += box_cells;
        if (candidate_budget > static_cast<double>(count_ceiling))
            throw SizeLimitError("enumerate_peaks_visible: candidate count " +
                                 std::to_string(candidate_budget) + " exceeds ceiling " +
                                 std::to_string(count_ceiling));

        std::vector<std::int64_t> num(static_cast<std::size_t>(n), 0);
        std::vector<double> pos(static_cast<std::size_t>(n));
        const double qd = static_cast<double>(q);
        // odometer over the numerator box
        for (int i = 0; i < n; ++i) num[i] = lo[i];
        while (true) {
            // lowest terms exactly when the numerator content is coprime to q
            std::uint64_t g = 0;
            for (std::int64_t v : num) g = std::gcd(g, abs_u64(v));
            const bool new_point = (q == 1) ? (true) : (std::gcd(g, q) == 1);
            if (new_point) {
                dual.position_into(num, pos);
                bool inside = true;
                for (int i = 0; i < n && inside; ++i) {
                    const double v = pos[i] / qd;
                    inside = window.lo[i] <= v && v < window.hi[i];
                }
                if (inside) {
                    WeightedPeak peak;
                    peak.location.numerator = num;
                    peak.location.q = q;
                    peak.intensity = intensity;
                    peak.amplitude = amplitude;
                    peak.position.resize(static_cast<std::size_t>(n));
                    for (int i = 0; i < n; ++i) peak.position[i] = pos[i] / qd;
                    peaks.push_back(std::move(peak));
                }
            }
            int level = n - 1;
            while (level >= 0 && num[level] == hi[level]) {
                num[level] = lo[level];
                --level;
            }
            if (level < 0) break;
            ++num[level];
        }
    }
    sort_peaks(peaks);
    return peaks;
}

std::vector<WeightedPeak> enumerate_peaks_kfree(int k, double lo, double hi, std::uint64_t q_max,
                                                double intensity_floor, std::uint64_t prime_bound,
                                                std::uint64_t count_ceiling) {
    KFreeSpec spec(k);
    if (q_max < 1) throw std::invalid_argument("enumerate_peaks_kfree: q_max must be >= 1");
    if (intensity_floor < 0)
        throw std::invalid_argument("enumerate_peaks_kfree: intensity_floor must be >= 0");
    if (!(lo < hi)) throw std::invalid_argument("enumerate_peaks_kfree: requires lo < hi");

    std::vector<WeightedPeak> peaks;
    double candidate_budget = 0.0;
    for (std::uint64_t q = 1; q <= q_max; ++q) {
        if (q > 1 && !is_kfree(static_cast<std::int64_t>(q), spec.k + 1)) continue;
        const double intensity = intensity_kfree(spec.k, q, prime_bound);
        if (intensity < intensity_floor) continue;
        const double amplitude = amplitude_kfree(spec.k, q, prime_bound);

        const double qd = static_cast<double>(q);
        const std::int64_t a_lo = static_cast<std::int64_t>(std::floor(lo * qd)) - 1;
        const std::int64_t a_hi = static_cast<std::int64_t>(std::ceil(hi * qd)) + 1;
        candidate_budget += static_cast<double>(a_hi - a_lo + 1);
        if (candidate_budget > static_cast<double>(count_ceiling))
            throw SizeLimitError("enumerate_peaks_kfree: candidate count " +
                                 std::to_string(candidate_budget) + " exceeds ceiling " +
                                 std::to_string(count_ceiling));

        for (std::int64_t a = a_lo; a <= a_hi; ++a) {
            if (q > 1 && std::gcd(abs_u64(a), q) != 1) continue;
            const double v = static_cast<double>(a) / qd;
            if (!(lo <= v && v < hi)) continue;
            WeightedPeak peak;
            peak.location.numerator = {a};
            peak.location.q = q;
            peak.intensity = intensity;
            peak.amplitude = amplitude;
            peak.position = {v};
            peaks.push_back(std::move(peak));
        }
    }
    sort_peaks(peaks);
    return peaks;
}

RasterImage raster_map(const std::vector<WeightedPeak>& peaks, const DualWindow& window,
                       double resolution, double gamma) {
    if (peaks.empty())
        throw std::invalid_argument("raster_map: no peaks, refusing to emit an empty image");
    if (!(resolution >= 1.0))
        throw std::invalid_argument("raster_map: resolution must be >= 1 pixel per unit");
    if (!(gamma > 0.0)) throw std::invalid_argument("raster_map: gamma must be positive");
    const int dim = window.dim();
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("raster_map: only 1- and 2-dimensional windows");

    double max_intensity = 0.0;
    for (const auto& p : peaks) max_intensity = std::max(max_intensity, p.intensity);
    if (max_intensity <= 0.0)
        throw std::invalid_argument("raster_map: all peak intensities are 0");

    RasterImage img;
    img.width = std::max(1, static_cast<int>(std::llround((window.hi[0] - window.lo[0]) * resolution)));
    img.height = dim == 1 ? 1
                          : std::max(1, static_cast<int>(std::llround(
                                            (window.hi[1] - window.lo[1]) * resolution)));
    img.pixels.assign(static_cast<std::size_t>(img.width) * img.height, 0);

    for (const auto& p : peaks) {
        if (static_cast<int>(p.position.size()) != dim) continue;
        int col = static_cast<int>(std::floor((p.position[0] - window.lo[0]) * resolution));
        col = std::clamp(col, 0, img.width - 1);
        int row = 0;
        if (dim == 2) {
            // top-left origin: larger dual y maps to a smaller row index
            row = static_cast<int>(std::floor((window.hi[1] - p.position[1]) * resolution));
            row = std::clamp(row, 0, img.height - 1);
        }
        const double scaled = std::pow(p.intensity / max_intensity, gamma);
        const std::uint8_t value =
            static_cast<std::uint8_t>(std::llround(255.0 * scaled));
        auto& px = img.pixels[static_cast<std::size_t>(row) * img.width + col];
        px = std::max(px, value);
    }
    return img;
}

}  // namespace latdiff
