#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <sstream>

#include "latdiff/diffraction.hpp"
#include "latdiff/errors.hpp"
#include "latdiff/io.hpp"
#include "latdiff/numtheory.hpp"
#include "latdiff/stats.hpp"

using namespace latdiff;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kBase = 36.0 / (kPi * kPi * kPi * kPi);  // 1/zeta(2)^2

}  // namespace

TEST_CASE("RationalDualPoint reduction and den") {
    auto p = RationalDualPoint::reduced({2, 4}, 6);
    CHECK(p.numerator == LatticeVector{1, 2});
    CHECK(p.den() == 3);

    auto whole = RationalDualPoint::reduced({4, 2}, 2);
    CHECK(whole.numerator == LatticeVector{2, 1});
    CHECK(whole.den() == 1);

    auto zero = RationalDualPoint::reduced({0, 0}, 5);
    CHECK(zero.den() == 1);

    CHECK_THROWS_AS(RationalDualPoint::reduced({1}, 0), std::invalid_argument);

    Lattice z2(2);
    const auto pos = p.position(z2.dual());
    CHECK(pos[0] == doctest::Approx(1.0 / 3.0));
    CHECK(pos[1] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("den is invariant under coordinate permutations and sign flips") {
    for (std::int64_t a : {0, 1, 2, 3, 5}) {
        for (std::int64_t b : {0, 1, 4, 9}) {
            if (a == 0 && b == 0) continue;
            for (std::uint64_t q : {1ull, 2ull, 3ull, 6ull, 10ull}) {
                const auto d0 = RationalDualPoint::reduced({a, b}, q).den();
                CHECK(RationalDualPoint::reduced({b, a}, q).den() == d0);
                CHECK(RationalDualPoint::reduced({-a, b}, q).den() == d0);
                CHECK(RationalDualPoint::reduced({a, -b}, q).den() == d0);
                CHECK(RationalDualPoint::reduced({-b, -a}, q).den() == d0);
            }
        }
    }
}

TEST_CASE("intensity_visible: pinned values on Z^2") {
    Lattice z2(2);
    CHECK(std::abs(intensity_visible(z2, 1) - kBase) < 1e-4);
    CHECK(std::abs(intensity_visible(z2, 2) - kBase / 9.0) < 1e-5);
    CHECK(intensity_visible(z2, 4) == 0.0);  // off the squarefree support
    CHECK(intensity_visible(z2, 9) == 0.0);
    CHECK(std::abs(intensity_visible(z2, 6) - kBase / 576.0) < 1e-7);
}

TEST_CASE("amplitude_visible: pinned values on Z^2") {
    Lattice z2(2);
    CHECK(std::abs(amplitude_visible(z2, 1) - 0.6079271) < 1e-4);
    CHECK(std::abs(amplitude_visible(z2, 2) - (-0.2026424)) < 1e-4);
    CHECK(std::abs(amplitude_visible(z2, 6) - 0.0253303) < 1e-5);
    CHECK(amplitude_visible(z2, 4) == 0.0);
}

TEST_CASE("Wiener consistency: amplitude^2 equals intensity for q <= 1e4") {
    Lattice z2(2);
    for (std::uint64_t q = 1; q <= 10000; ++q) {
        const double a = amplitude_visible(z2, q);
        const double i = intensity_visible(z2, q);
        if (i == 0.0) {
            CHECK(a == 0.0);
            continue;
        }
        CHECK(std::abs(a * a - i) <= 1e-12 * i);
    }
}

TEST_CASE("Wiener consistency for the k-free intensities, q <= 1e4") {
    for (std::uint64_t q = 1; q <= 10000; ++q) {
        const double a = amplitude_kfree(2, q);
        const double i = intensity_kfree(2, q);
        if (i == 0.0) {
            CHECK(a == 0.0);
            continue;
        }
        CHECK(std::abs(a * a - i) <= 1e-12 * i);
    }
}

TEST_CASE("intensity factors multiplicatively over coprime squarefree denominators") {
    Lattice z2(2);
    const double i1 = intensity_visible(z2, 1);
    for (std::uint64_t q1 = 2; q1 <= 100; ++q1) {
        if (!is_squarefree(q1)) continue;
        for (std::uint64_t q2 = q1 + 1; q2 <= 100; ++q2) {
            if (!is_squarefree(q2) || std::gcd(q1, q2) != 1) continue;
            const double lhs = intensity_visible(z2, q1 * q2) * i1;
            const double rhs = intensity_visible(z2, q1) * intensity_visible(z2, q2);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("intensity carries the dens(Gamma)^2 factor") {
    Lattice z2(2);
    Lattice two_z2(2, {2.0, 0.0, 0.0, 2.0});
    CHECK(intensity_visible(two_z2, 1) ==
          doctest::Approx(intensity_visible(z2, 1) / 16.0).epsilon(1e-12));
}

TEST_CASE("intensity_kfree: pinned values, k = 2") {
    CHECK(std::abs(intensity_kfree(2, 1) - kBase) < 1e-4);
    CHECK(std::abs(intensity_kfree(2, 4) - kBase / 9.0) < 1e-5);  // 4 is cube-free
    CHECK(intensity_kfree(2, 8) == 0.0);  // 8 = 2^3 is not (k+1)-power-free
    CHECK(std::abs(intensity_kfree(2, 3) - kBase / 64.0) < 1e-6);
    CHECK(intensity_kfree(3, 16) == 0.0);
    CHECK(intensity_kfree(3, 8) > 0.0);  // 8 = 2^3 is 4th-power-free
}

TEST_CASE("enumerate_peaks_visible: unit cell of Z^2") {
    Lattice z2(2);
    const DualWindow cell = DualWindow::box({0.0, 0.0}, {1.0, 1.0});

    const auto q1 = enumerate_peaks_visible(z2, cell, 1, 0.0);
    REQUIRE(q1.size() == 1);
    CHECK(q1[0].location.numerator == LatticeVector{0, 0});
    CHECK(q1[0].location.q == 1);
    CHECK(std::abs(q1[0].intensity - kBase) < 1e-4);

    const auto q2 = enumerate_peaks_visible(z2, cell, 2, 0.0);
    REQUIRE(q2.size() == 4);
    CHECK(q2[0].location.q == 1);  // strongest peak first
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(q2[i].location.q == 2);
        CHECK(std::abs(q2[i].intensity - kBase / 9.0) < 1e-5);
    }
    // lexicographic among equals: (0,1/2), (1/2,0), (1/2,1/2)
    CHECK(q2[1].location.numerator == LatticeVector{0, 1});
    CHECK(q2[2].location.numerator == LatticeVector{1, 0});
    CHECK(q2[3].location.numerator == LatticeVector{1, 1});

    const auto q3 = enumerate_peaks_visible(z2, cell, 3, 0.0);
    CHECK(q3.size() == 12);
    std::size_t den3 = 0;
    for (const auto& p : q3)
        if (p.location.q == 3) {
            ++den3;
            CHECK(std::abs(p.intensity - kBase / 64.0) < 1e-6);
        }
    CHECK(den3 == 8);
}

TEST_CASE("enumerate_peaks_visible: locations are unique after reduction") {
    Lattice z2(2);
    const DualWindow cell = DualWindow::box({0.0, 0.0}, {1.0, 1.0});
    const auto peaks = enumerate_peaks_visible(z2, cell, 10, 0.0);
    std::set<std::pair<LatticeVector, std::uint64_t>> seen;
    for (const auto& p : peaks) {
        CHECK(is_squarefree(p.location.q));
        CHECK(seen.emplace(p.location.numerator, p.location.q).second);
    }
    // every location is in lowest terms
    for (const auto& p : peaks) {
        const auto re = RationalDualPoint::reduced(p.location.numerator, p.location.q);
        CHECK(re.q == p.location.q);
    }
}

TEST_CASE("enumerate_peaks_visible: intensity floor prunes weak peaks") {
    Lattice z2(2);
    const DualWindow cell = DualWindow::box({0.0, 0.0}, {1.0, 1.0});
    const auto peaks = enumerate_peaks_visible(z2, cell, 3, 0.1);
    REQUIRE(peaks.size() == 1);  // I(2) = base/9 = 0.041 and I(3) fall below 0.1
    CHECK(peaks[0].location.q == 1);
}

TEST_CASE("enumerate_peaks_visible: non-identity lattice uses the dual geometry") {
    Lattice st(2, {2.0, 0.0, 0.0, 1.0});  // dual is (1/2)Z x Z
    const DualWindow cell = DualWindow::box({0.0, 0.0}, {1.0, 1.0});
    const auto peaks = enumerate_peaks_visible(st, cell, 1, 0.0);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].position[0] == doctest::Approx(0.0));
    CHECK(peaks[1].position[0] == doctest::Approx(0.5));
    CHECK(peaks[1].position[1] == doctest::Approx(0.0));
}

TEST_CASE("enumerate_peaks_visible: window and ceiling errors") {
    Lattice z2(2);
    CHECK_THROWS_AS(DualWindow::box({0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
    const DualWindow big = DualWindow::box({0.0, 0.0}, {100.0, 100.0});
    CHECK_THROWS_AS(enumerate_peaks_visible(z2, big, 100, 0.0, kDefaultPrimeBound, 10000),
                    SizeLimitError);
}

TEST_CASE("enumerate_peaks_kfree: unit interval, k = 2") {
    const auto q1 = enumerate_peaks_kfree(2, 0.0, 1.0, 1, 0.0);
    REQUIRE(q1.size() == 1);
    CHECK(q1[0].position[0] == 0.0);

    const auto q2 = enumerate_peaks_kfree(2, 0.0, 1.0, 2, 0.0);
    REQUIRE(q2.size() == 2);
    CHECK(q2[1].position[0] == doctest::Approx(0.5));
    CHECK(std::abs(q2[1].intensity - kBase / 9.0) < 1e-5);

    const auto q4 = enumerate_peaks_kfree(2, 0.0, 1.0, 4, 0.0);
    REQUIRE(q4.size() == 6);  // 0; 1/2; 1/4, 3/4; 1/3, 2/3
    // q in {2,4} share the intensity base/9; lexicographic inside the tie
    CHECK(q4[1].position[0] == doctest::Approx(0.25));
    CHECK(q4[2].position[0] == doctest::Approx(0.5));
    CHECK(q4[3].position[0] == doctest::Approx(0.75));
    CHECK(std::abs(q4[1].intensity - kBase / 9.0) < 1e-5);
    CHECK(q4[4].position[0] == doctest::Approx(1.0 / 3.0));
    CHECK(q4[5].position[0] == doctest::Approx(2.0 / 3.0));
    CHECK(std::abs(q4[4].intensity - kBase / 64.0) < 1e-6);
}

TEST_CASE("empirical Fourier mass matches the closed-form intensity (smoke)") {
    Lattice z2(2);
    const auto m = fourier_bohr(PointSet::visible(z2), std::vector<double>{1.0 / 3.0, 1.0 / 3.0},
                                600.0);
    CHECK(std::abs(std::norm(m) - intensity_visible(z2, 3)) <= 0.02);
}

TEST_CASE("raster_map: single peak saturates") {
    WeightedPeak p;
    p.location = RationalDualPoint::reduced({1, 1}, 2);
    p.intensity = 0.123;
    p.amplitude = std::sqrt(0.123);
    p.position = {0.5, 0.5};
    const DualWindow w = DualWindow::box({0.0, 0.0}, {1.0, 1.0});
    const auto img = raster_map({p}, w, 4.0, 1.0);
    CHECK(img.width == 4);
    CHECK(img.height == 4);
    int lit = 0;
    for (auto v : img.pixels)
        if (v != 0) ++lit;
    CHECK(lit == 1);
    CHECK(img.at(2, 2) == 255);  // (0.5, 0.5) -> col 2, row floor((1-0.5)*4) = 2
}

TEST_CASE("raster_map: gamma scaling of a 1:9 intensity pair") {
    WeightedPeak strong, weak;
    strong.position = {0.1};
    strong.intensity = 0.9;
    weak.position = {0.6};
    weak.intensity = 0.1;
    const DualWindow w = DualWindow::box({0.0}, {1.0});
    const auto linear = raster_map({strong, weak}, w, 10.0, 1.0);
    CHECK(linear.height == 1);
    CHECK(linear.at(0, 1) == 255);
    CHECK(linear.at(0, 6) == 28);  // round(255/9)
    const auto soft = raster_map({strong, weak}, w, 10.0, 0.5);
    CHECK(soft.at(0, 1) == 255);
    CHECK(soft.at(0, 6) == 85);  // round(255/3)
}

TEST_CASE("raster_map: collisions keep the maximum and empty input is an error") {
    WeightedPeak a, b;
    a.position = {0.5, 0.5};
    a.intensity = 1.0;
    b.position = {0.51, 0.49};
    b.intensity = 0.25;
    const DualWindow w = DualWindow::box({0.0, 0.0}, {1.0, 1.0});
    const auto img = raster_map({a, b}, w, 2.0, 1.0);  // both land in one 2x2 cell
    int nonzero = 0;
    std::uint8_t maxv = 0;
    for (auto v : img.pixels) {
        if (v != 0) ++nonzero;
        maxv = std::max(maxv, v);
    }
    CHECK(nonzero == 1);
    CHECK(maxv == 255);
    CHECK_THROWS_AS(raster_map({}, w, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(raster_map({a}, w, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(raster_map({a}, w, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("write_pgm emits a parseable P5 with the comment line") {
    RasterImage img;
    img.width = 3;
    img.height = 2;
    img.pixels = {0, 128, 255, 7, 0, 1};
    std::ostringstream os(std::ios::binary);
    write_pgm(os, img, "lattice=I2 qmax=3 gamma=1");
    const std::string s = os.str();
    CHECK(s.rfind("P5\n# lattice=I2 qmax=3 gamma=1\n3 2\n255\n", 0) == 0);
    CHECK(s.size() == std::string("P5\n# lattice=I2 qmax=3 gamma=1\n3 2\n255\n").size() + 6);
    CHECK(static_cast<unsigned char>(s[s.size() - 6]) == 0);
    CHECK(static_cast<unsigned char>(s[s.size() - 4]) == 255);
}

TEST_CASE("write_peaks_csv layout") {
    Lattice z2(2);
    const DualWindow cell = DualWindow::box({0.0, 0.0}, {1.0, 1.0});
    const auto peaks = enumerate_peaks_visible(z2, cell, 2, 0.0);
    std::ostringstream os;
    write_peaks_csv(os, 2, peaks);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "num_1,num_2,q,intensity,amplitude");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 4);
}
