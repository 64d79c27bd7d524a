// Acceptance suite: end-to-end checks of the closed-form values against
// the brute-force estimators at fixed radii and tolerances, plus the
// property suites.  One [PASS]/[FAIL] line per criterion; exit code is
// the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latdiff/diffraction.hpp"
#include "latdiff/kfree.hpp"
#include "latdiff/lattice.hpp"
#include "latdiff/numtheory.hpp"
#include "latdiff/stats.hpp"

using namespace latdiff;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

struct Criterion {
    std::ostringstream detail;
    bool ok = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    // records one sub-check: |got - want| <= tol
    void near(const std::string& label, double got, double want, double tol) {
        const double err = std::abs(got - want);
        const bool pass = err <= tol;
        ok = ok && pass;
        detail << label << " |" << got << "-" << want << "|=" << err
               << (pass ? " <= " : " > ") << tol << "; ";
    }

    void require(const std::string& label, bool pass) {
        ok = ok && pass;
        detail << label << (pass ? " ok" : " FAILED") << "; ";
    }

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    void finish(int number, const std::string& title, double budget_seconds) {
        const double t = elapsed();
        if (t > budget_seconds) {
            ok = false;
            detail << "runtime " << t << "s exceeds " << budget_seconds << "s; ";
        }
        std::printf("[%s] criterion %d: %s (%s%.1fs <= %.0fs)\n", ok ? "PASS" : "FAIL", number,
                    title.c_str(), detail.str().c_str(), t, budget_seconds);
        if (!ok) ++g_failures;
    }
};

void criterion_1_visible_density() {
    Criterion c;
    Lattice z2(2);
    const auto est2 = density_visible(z2, Region::ball({0.0, 0.0}, 1000.0), 4);
    c.near("Z^2 R=1000", est2.density, theoretical_density_visible(z2), 0.01);
    const double t2a = c.elapsed();
    c.require("Z^2 within 10s", t2a <= 10.0);

    Lattice z3(3);
    const auto est3 = density_visible(z3, Region::ball({0.0, 0.0, 0.0}, 150.0), 4);
    c.near("Z^3 R=150", est3.density, theoretical_density_visible(z3), 0.01);
    c.require("Z^3 within 10s", c.elapsed() - t2a <= 10.0);
    c.finish(1, "density of visible points", 20.0);
}

void criterion_2_kfree_density() {
    Criterion c;
    const auto sq = density_kfree(2, 1e6);
    c.near("k=2 R=1e6", sq.density, theoretical_density_kfree(2), 5e-3);
    const auto cb = density_kfree(3, 1e6);
    c.near("k=3 R=1e6", cb.density, theoretical_density_kfree(3), 2e-3);
    c.finish(2, "density of k-free integers", 5.0);
}

void criterion_3_visible_autocorr() {
    Criterion c;
    Lattice z2(2);
    const PointSet v = PointSet::visible(z2);
    // closed-form oracle values, fixed before the run
    const struct {
        LatticeVector a;
        double w;
    } cases[] = {{{1, 0}, 0.3226}, {{2, 0}, 0.4840}, {{6, 0}, 0.5531}, {{3, 4}, 0.3226}};
    for (const auto& tc : cases) {
        const auto est = empirical_autocorr(v, tc.a, 2000.0, false, 4);
        std::ostringstream label;
        label << "a=(" << tc.a[0] << "," << tc.a[1] << ")";
        c.near(label.str() + " oracle", est.w_theory, tc.w, 5e-4);
        c.near(label.str(), est.w_r, est.w_theory, 0.05);
    }
    c.finish(3, "autocorrelation of the visible points", 60.0);
}

void criterion_4_kfree_autocorr() {
    Criterion c;
    const PointSet f2 = PointSet::kfree(2);
    for (std::int64_t a : {1, 2, 4, 12}) {
        const auto est = empirical_autocorr(f2, {a}, 1e6);
        c.near("a=" + std::to_string(a), est.w_r, est.w_theory, 1e-2);
    }
    c.finish(4, "autocorrelation of the squarefree integers", 10.0);
}

void criterion_5_visible_diffraction() {
    Criterion c;
    Lattice z2(2);
    const PointSet v = PointSet::visible(z2);
    const struct {
        std::vector<double> x;
        std::uint64_t den;
    } cases[] = {{{0.0, 0.0}, 1},
                 {{0.5, 0.0}, 2},
                 {{1.0 / 3.0, 1.0 / 3.0}, 3},
                 {{1.0 / 6.0, 0.0}, 6}};
    for (const auto& tc : cases) {
        const auto m = fourier_bohr(v, tc.x, 2000.0, 4);
        std::ostringstream label;
        label << "den=" << tc.den;
        c.near(label.str(), std::norm(m), intensity_visible(z2, tc.den), 0.02);
    }
    const auto off = fourier_bohr(v, std::vector<double>{std::sqrt(2.0) / 10.0, 0.0}, 2000.0, 4);
    c.require("|m|^2 < 0.01 off the Bragg support", std::norm(off) < 0.01);
    c.finish(5, "diffraction intensities of the visible points", 120.0);
}

void criterion_6_kfree_diffraction() {
    Criterion c;
    const PointSet f2 = PointSet::kfree(2);
    const struct {
        double x;
        std::uint64_t den;
    } cases[] = {{0.0, 1}, {0.5, 2}, {0.25, 4}, {1.0 / 3.0, 3}};
    for (const auto& tc : cases) {
        const auto m = fourier_bohr(f2, std::vector<double>{tc.x}, 1e6);
        c.near("x den=" + std::to_string(tc.den), std::norm(m), intensity_kfree(2, tc.den), 0.01);
    }
    c.require("intensity_kfree(k=2, q=8) == 0 exactly", intensity_kfree(2, 8) == 0.0);
    c.finish(6, "diffraction intensities of the squarefree integers", 30.0);
}

void criterion_7_holes_and_gaps() {
    Criterion c;
    Lattice z2(2);
    std::vector<LatticeVector> block;
    for (std::int64_t i = 0; i < 3; ++i)
        for (std::int64_t j = 0; j < 3; ++j) block.push_back({i, j});
    const auto t = find_hole(z2, block);
    bool all_invisible = true;
    for (const auto& b : block) {
        const LatticeVector p = {b[0] + t[0], b[1] + t[1]};
        const std::uint64_t g = std::gcd(std::abs(p[0]), std::abs(p[1]));
        all_invisible = all_invisible && g != 1;
    }
    c.require("3x3 block fully invisible after translation", all_invisible);

    const std::int64_t n = find_gap(2, 4);
    bool gap_ok = true;
    for (int j = 0; j < 4; ++j) gap_ok = gap_ok && !is_kfree(n + j, 2);
    c.require("find_gap(k=2,L=4) yields 4 consecutive non-squarefree", gap_ok);
    c.finish(7, "hole and gap constructions", 1.0);
}

void criterion_8_property_suites() {
    Criterion c;
    // Moebius identities up to 1e5
    {
        const std::uint64_t n = 100000;
        ArithTables t = build_tables(n);
        std::vector<int> divsum(n + 1, 0);
        for (std::uint64_t d = 1; d <= n; ++d)
            for (std::uint64_t m = d; m <= n; m += d) divsum[m] += t.mu(d);
        bool ok = divsum[1] == 1;
        for (std::uint64_t m = 2; m <= n && ok; ++m) ok = divsum[m] == 0;
        c.require("Moebius divisor sums m<=1e5", ok);
    }
    // lattice-point counting bound
    {
        Lattice z2(2);
        const double diam = std::sqrt(2.0);
        const double c1 = 4.0 * kPi * diam, c2 = 4.0 * kPi * diam * diam;
        bool ok = true;
        for (double radius : {10.0, 50.0, 100.0, 500.0}) {
            const std::uint64_t n =
                count_in_ball(z2, std::vector<double>{0.0, 0.0}, radius, PointFilter::all());
            ok = ok && std::abs(static_cast<double>(n) - kPi * radius * radius) <=
                           c1 * radius + c2;
        }
        c.require("ball-count bound R in {10,50,100,500}", ok);
    }
    // difference witness over 100 random vectors
    {
        Lattice z2(2);
        std::mt19937_64 rng(1);
        std::uniform_int_distribution<std::int64_t> coord(-100000, 100000);
        bool ok = true;
        for (int i = 0; i < 100 && ok; ++i) {
            const LatticeVector x = {coord(rng), coord(rng)};
            const auto [v1, v2] = visible_difference_witness(z2, x);
            ok = is_visible(v1) && is_visible(v2) && v1[0] - v2[0] == x[0] &&
                 v1[1] - v2[1] == x[1];
        }
        c.require("difference witness, 100 random vectors", ok);
    }
    // content invariance under 100 random unimodular maps
    {
        std::mt19937_64 rng(2);
        std::uniform_int_distribution<std::int64_t> coord(-500, 500);
        std::uniform_int_distribution<int> shear(-3, 3);
        bool ok = true;
        for (int i = 0; i < 100 && ok; ++i) {
            std::int64_t m00 = 1, m01 = 0, m10 = 0, m11 = 1;
            for (int s = 0; s < 5; ++s) {
                const std::int64_t k = shear(rng);
                if (s % 2 == 0) {
                    m00 += k * m10;
                    m01 += k * m11;
                } else {
                    m10 += k * m00;
                    m11 += k * m01;
                }
            }
            LatticeVector x = {coord(rng), coord(rng)};
            if (x[0] == 0 && x[1] == 0) x[0] = 1;
            const LatticeVector mx = {m00 * x[0] + m01 * x[1], m10 * x[0] + m11 * x[1]};
            ok = std::abs(m00 * m11 - m01 * m10) == 1 && content(mx) == content(x);
        }
        c.require("content invariance, 100 unimodular maps", ok);
    }
    // Wiener consistency q <= 1e4
    {
        Lattice z2(2);
        bool ok = true;
        for (std::uint64_t q = 1; q <= 10000 && ok; ++q) {
            const double a = amplitude_visible(z2, q);
            const double i = intensity_visible(z2, q);
            ok = (i == 0.0) ? (a == 0.0) : std::abs(a * a - i) <= 1e-12 * i;
        }
        c.require("Wiener consistency q<=1e4", ok);
    }
    // exact symmetry of the empirical autocorrelation
    {
        Lattice z2(2);
        const PointSet v = PointSet::visible(z2);
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<std::int64_t> coord(-20, 20);
        bool ok = true;
        for (int i = 0; i < 20 && ok; ++i) {
            const LatticeVector a = {coord(rng), coord(rng)};
            if (std::hypot(static_cast<double>(a[0]), static_cast<double>(a[1])) >= 40.0) continue;
            const auto plus = empirical_autocorr(v, a, 40.0);
            const auto minus = empirical_autocorr(v, {-a[0], -a[1]}, 40.0);
            ok = plus.pair_count == minus.pair_count && plus.w_r == minus.w_r;
        }
        c.require("w_R(a) = w_R(-a) exactly, 20 random a", ok);
    }
    // shape independence and tied density
    {
        Lattice z2(2);
        const auto ball = density_visible(z2, Region::ball({0.0, 0.0}, 1000.0), 4);
        const auto box = density_visible(z2, Region::box({0.0, 0.0}, {1000.0, 1000.0}), 4);
        c.near("ball vs box at scale 1000", ball.density, box.density, 0.02);
        const auto tied = density_visible(z2, Region::ball({500.0, 0.0}, 1000.0), 4);
        c.near("tied density, center (500,0) R=1000", tied.density,
               theoretical_density_visible(z2), 0.05);
    }
    c.finish(8, "property suites", 60.0);
}

void criterion_9_window_volume() {
    Criterion c;
    const SeriesValue v = eval_series(SeriesKind::InvZeta, 2, 1000000);
    c.near("prod(1-p^-2) vs 6/pi^2", v.value, 6.0 / (kPi * kPi), 1e-5);
    c.finish(9, "window-volume identity", 5.0);
}

}  // namespace

int main() {
    criterion_1_visible_density();
    criterion_2_kfree_density();
    criterion_3_visible_autocorr();
    criterion_4_kfree_autocorr();
    criterion_5_visible_diffraction();
    criterion_6_kfree_diffraction();
    criterion_7_holes_and_gaps();
    criterion_8_property_suites();
    criterion_9_window_volume();
    if (g_failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
