#ifndef LATDIFF_DIFFRACTION_HPP
#define LATDIFF_DIFFRACTION_HPP

// Closed-form Bragg peak supports and intensities.  The diffraction of
// the visible points of an n-dimensional lattice is pure point, living
// on the rational dual points with squarefree denominator q, with
//
//   intensity(q) = dens(Gamma)^2 / zeta(n)^2 * prod_{p|q} 1/(p^n - 1)^2
//   amplitude(q) = dens(Gamma) mu(q) / zeta(n) * prod_{p|q} 1/(p^n - 1)
//
// and the k-free analogue lives on rationals a/q with (k+1)-power-free
// denominator, with n replaced by k and dens = 1.  Peaks are enumerated
// from this closed-form support, never detected from numeric spectra.

#include <cstdint>
#include <vector>

#include "latdiff/lattice.hpp"
#include "latdiff/stats.hpp"

namespace latdiff {

// Point of Q Gamma*: (1/q) * (dual basis) * numerator, kept in lowest
// terms so that q is exactly den(x), the least m with m*x in Gamma*.
struct RationalDualPoint {
    std::vector<std::int64_t> numerator;
    std::uint64_t q = 1;

    // divides out gcd(content(numerator), q); the zero vector reduces to q = 1
    static RationalDualPoint reduced(std::vector<std::int64_t> numerator, std::uint64_t q);

    std::uint64_t den() const { return q; }
    std::vector<double> position(const Lattice& dual_lattice) const;
};

struct WeightedPeak {
    RationalDualPoint location;
    double intensity = 0.0;
    double amplitude = 0.0;            // signed; intensity = amplitude^2
    std::vector<double> position;      // cached dual-space coordinates
};

// Intensity/amplitude as functions of the denominator q alone.  Zero off
// the support (q not squarefree, resp. not (k+1)-power-free).
double intensity_visible(const Lattice& lat, std::uint64_t q,
                         std::uint64_t prime_bound = kDefaultPrimeBound);
double amplitude_visible(const Lattice& lat, std::uint64_t q,
                         std::uint64_t prime_bound = kDefaultPrimeBound);
double intensity_kfree(int k, std::uint64_t q, std::uint64_t prime_bound = kDefaultPrimeBound);
double amplitude_kfree(int k, std::uint64_t q, std::uint64_t prime_bound = kDefaultPrimeBound);

// Half-open axis-aligned box [lo_i, hi_i) in dual space.
struct DualWindow {
    std::vector<double> lo, hi;

    static DualWindow box(std::vector<double> lo, std::vector<double> hi);
    int dim() const { return static_cast<int>(lo.size()); }
};

// All peaks of denominator q <= q_max inside the window with intensity
// >= intensity_floor, deduplicated via lowest terms, sorted by
// descending intensity and then lexicographic location.
std::vector<WeightedPeak> enumerate_peaks_visible(
    const Lattice& lat, const DualWindow& window, std::uint64_t q_max, double intensity_floor,
    std::uint64_t prime_bound = kDefaultPrimeBound,
    std::uint64_t count_ceiling = kDefaultCountCeiling);

std::vector<WeightedPeak> enumerate_peaks_kfree(
    int k, double lo, double hi, std::uint64_t q_max, double intensity_floor,
    std::uint64_t prime_bound = kDefaultPrimeBound,
    std::uint64_t count_ceiling = kDefaultCountCeiling);

// 8-bit grayscale, row-major, origin at the top-left.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
};

// Each peak deposits one pixel of value round(255 * (I/I_max)^gamma);
// collisions keep the maximum.  1-d peak lists give a height-1 image.
// Throws std::invalid_argument when there are no peaks.
RasterImage raster_map(const std::vector<WeightedPeak>& peaks, const DualWindow& window,
                       double resolution, double gamma);

}  // namespace latdiff

#endif
