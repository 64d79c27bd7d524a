#ifndef LATDIFF_STATS_HPP
#define LATDIFF_STATS_HPP

// Empirical estimators over expanding regions -- densities, autocorrelation
// coefficients, Fourier-Bohr exponential sums -- next to their closed-form
// counterparts:
//
//   dens(V)  = dens(Gamma)/zeta(n)                       (visible points)
//   dens(F)  = 1/zeta(k)                                 (k-free integers)
//   w(a)     = dens(Gamma) xi(n) prod_{p | cont(a)} (1 + 1/(p^n - 2))
//   w(a)     = xi(k)       prod_{p: p^k | a}  (1 + 1/(p^k - 2))
//
// The empirical autocorrelation coefficient keeps both ball conditions,
//   w_R(a) = |{x : |x| < R, |x-a| < R, x in S, x-a in S}| / (v_n R^n),
// and the Fourier-Bohr coefficient is the finite-R sum
//   m_x(R) = (1/(v_n R^n)) sum_{y in S, |y| < R} exp(-2 pi i x.y).
//
// All point sums run over a fixed slab partition with compensated
// accumulation, so results are bit-for-bit reproducible for a given
// partition count.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "latdiff/kfree.hpp"
#include "latdiff/lattice.hpp"

namespace latdiff {

inline constexpr std::uint64_t kDefaultPrimeBound = 1'000'000;

struct Region {
    enum class Shape { Ball, Box };
    Shape shape = Shape::Ball;
    std::vector<double> center;
    double radius = 0.0;             // Ball
    std::vector<double> half_widths; // Box

    static Region ball(std::vector<double> center, double radius);
    static Region box(std::vector<double> center, std::vector<double> half_widths);

    int dim() const { return static_cast<int>(center.size()); }
    double volume() const;
    // M = sup of |y| over the region (drives the tied-density error term)
    double sup_norm() const;
    // characteristic linear scale: ball radius, or the largest half-width
    double scale() const;
};

// The three point sets the estimators run over.
struct PointSet {
    enum class Kind { LatticeAll, LatticeVisible, KFree };
    Kind kind = Kind::LatticeAll;
    const Lattice* lattice = nullptr;
    int k = 0;

    static PointSet all(const Lattice& lat) { return {Kind::LatticeAll, &lat, 0}; }
    static PointSet visible(const Lattice& lat) { return {Kind::LatticeVisible, &lat, 0}; }
    static PointSet kfree(int k) { return {Kind::KFree, nullptr, KFreeSpec(k).k}; }

    int dim() const { return lattice ? lattice->dim() : 1; }
};

struct DensityEstimate {
    std::uint64_t count = 0;
    Region region;
    double normalizer = 0.0;   // region volume
    double density = 0.0;      // count / normalizer
    double error_bound = 0.0;  // asymptotic order with constant 10, advisory
    double sup_norm = 0.0;     // M of the region
};

struct AutocorrEstimate {
    LatticeVector a;           // 1-vector for the k-free case
    double radius = 0.0;
    std::uint64_t pair_count = 0;
    double w_r = 0.0;
    double w_theory = 0.0;
    double abs_error = 0.0;
};

struct ConvergenceRow {
    double radius = 0.0;
    std::uint64_t count = 0;
    double estimate = 0.0;
    double theory = 0.0;
    double abs_error = 0.0;
};

// ---- densities --------------------------------------------------------

// Count of visible points in the region over its volume.  n = 1 is
// allowed (the theoretical density is then 0).
DensityEstimate density_visible(const Lattice& lat, const Region& region, int slabs = 1,
                                std::uint64_t count_ceiling = kDefaultCountCeiling);

// |{x in F_k : |x| < R}| / (2R)
DensityEstimate density_kfree(int k, double radius);

// dens(Gamma)/zeta(n); 0 for n = 1
double theoretical_density_visible(const Lattice& lat,
                                   std::uint64_t prime_bound = kDefaultPrimeBound);
// 1/zeta(k)
double theoretical_density_kfree(int k, std::uint64_t prime_bound = kDefaultPrimeBound);

// ---- autocorrelation --------------------------------------------------

// Closed-form autocorrelation weight; a = 0 is a domain error (the weight
// at 0 is the density, served by density_visible / density_kfree).
double theoretical_weight_visible(const Lattice& lat, const LatticeVector& a,
                                  std::uint64_t prime_bound = kDefaultPrimeBound);
double theoretical_weight_kfree(int k, std::int64_t a,
                                std::uint64_t prime_bound = kDefaultPrimeBound);

// w_R(a) with both ball conditions; `one_sided` drops |x-a| < R, which
// reproduces the O(1/R) discrepancy of the one-sided form.  Requires
// R > |a|.  w_theory is filled from the closed forms above (density when
// a = 0).
AutocorrEstimate empirical_autocorr(const PointSet& set, const LatticeVector& a, double radius,
                                    bool one_sided = false, int slabs = 1,
                                    std::uint64_t prime_bound = kDefaultPrimeBound,
                                    std::uint64_t count_ceiling = kDefaultCountCeiling);

// ---- Fourier-Bohr coefficients ----------------------------------------

// m_x(R); |m_x(R)|^2 estimates the diffraction intensity at x.
std::complex<double> fourier_bohr(const PointSet& set, std::span<const double> x, double radius,
                                  int slabs = 1,
                                  std::uint64_t count_ceiling = kDefaultCountCeiling);

// ---- convergence tables (one scan of the largest ball) -----------------

std::vector<ConvergenceRow> density_table(const PointSet& set, std::vector<double> radii,
                                          int slabs = 1,
                                          std::uint64_t prime_bound = kDefaultPrimeBound,
                                          std::uint64_t count_ceiling = kDefaultCountCeiling);

std::vector<ConvergenceRow> autocorr_table(const PointSet& set, const LatticeVector& a,
                                           std::vector<double> radii, bool one_sided = false,
                                           int slabs = 1,
                                           std::uint64_t prime_bound = kDefaultPrimeBound,
                                           std::uint64_t count_ceiling = kDefaultCountCeiling);

// `theory` is the expected intensity at x (0 off the Bragg support);
// estimate column is |m_x(R)|^2.
std::vector<ConvergenceRow> fourier_table(const PointSet& set, std::span<const double> x,
                                          double theory, std::vector<double> radii,
                                          int slabs = 1,
                                          std::uint64_t count_ceiling = kDefaultCountCeiling);

}  // namespace latdiff

#endif
