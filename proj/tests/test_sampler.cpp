#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "exlb/errors.hpp"
#include "exlb/normal.hpp"
#include "exlb/rng.hpp"
#include "exlb/sampler.hpp"
#include "oracles.hpp"

using namespace exlb;

namespace {

GridSpec small_spec(double side, int n) { return GridSpec{side, n}; }

const SpectralMeasure& five_atom_unit() {
    static auto m = SpectralMeasure::degenerate_five_atom(0.0, 0.5, 0.5, {1, 0}, {0, 1});
    return m;
}

} // namespace

TEST_CASE("samplers are deterministic in the seed") {
    const GridSpec spec = small_spec(4.0, 25);
    auto a = sample_atomic(five_atom_unit(), spec, 42);
    auto b = sample_atomic(five_atom_unit(), spec, 42);
    CHECK(a.values == b.values);
    auto c = sample_atomic(five_atom_unit(), spec, 43);
    CHECK(a.values != c.values);

    auto r1 = sample_rpw(64, spec, 7);
    auto r2 = sample_rpw(64, spec, 7);
    CHECK(r1.values == r2.values);

    auto s1 = sample_spectral_grid(SpectralMeasure::bargmann_fock(), small_spec(8.0, 41), 9);
    auto s2 = sample_spectral_grid(SpectralMeasure::bargmann_fock(), small_spec(8.0, 41), 9);
    CHECK(s1.values == s2.values);
}

TEST_CASE("single origin atom gives a constant N(0,1) field") {
    auto m = validate_measure(SpectralMeasure::atomic({{{0.0, 0.0}, 1.0}}));
    std::vector<double> draws;
    for (int s = 0; s < 4000; ++s) {
        auto g = sample_atomic(m, small_spec(2.0, 3), 100 + s);
        for (double v : g.values) CHECK(v == g.values[0]);
        draws.push_back(g.values[0]);
    }
    auto mm = oracle::moments(draws);
    CHECK(std::abs(mm.mean) < 3.5 * mm.std_error());
    CHECK(std::abs(mm.var - 1.0) < 0.1);
}

TEST_CASE("five-atom sampler: unit pointwise variance over 1e5 samples") {
    std::vector<double> vals;
    vals.reserve(100000);
    for (int s = 0; s < 100000; ++s) {
        auto g = sample_atomic(five_atom_unit(), small_spec(1.0, 3), 50000 + s);
        vals.push_back(g.values[4]); // centre vertex
    }
    auto mm = oracle::moments(vals);
    // Var of the sample variance of N(0,1): ~2/n
    CHECK(std::abs(mm.var - 1.0) < 3.0 * std::sqrt(2.0 / 100000.0));
}

TEST_CASE("five-atom sampler: covariance at lag (0.5, 0) vanishes") {
    // kappa(x) = (1/2)cos(2 pi x1) + 1/2 at x = (0.5, 0): -1/2 + 1/2 = 0.
    const GridSpec spec{1.0, 3}; // spacing 0.5
    std::vector<double> prods;
    for (int s = 0; s < 10000; ++s) {
        auto g = sample_atomic(five_atom_unit(), spec, 900000 + s);
        prods.push_back(g.at(0, 0) * g.at(0, 1));
    }
    auto mm = oracle::moments(prods);
    CHECK(std::abs(mm.mean) < 3.0 * mm.std_error());
}

TEST_CASE("rpw with one direction pair is constant along wavefronts") {
    auto g = sample_rpw(2, small_spec(5.0, 11), 3);
    for (int r = 1; r < g.n(); ++r)
        for (int c = 0; c < g.n(); ++c)
            CHECK(g.at(r, c) == doctest::Approx(g.at(0, c)).epsilon(1e-12));
    CHECK_THROWS_AS(sample_rpw(3, small_spec(5.0, 11), 3), ConfigError);
    CHECK_THROWS_AS(sample_rpw(0, small_spec(5.0, 11), 3), ConfigError);
}

TEST_CASE("rpw empirical covariance at lag 1 approaches J0(1)") {
    // Spatial + ensemble average over 200 realizations.
    const GridSpec spec = GridSpec::from_resolution(30.0, 2 * kPi, 6.0);
    const int lag = 1; // one grid step along x...
    const double r = spec.spacing() * lag;
    double sum = 0.0, sumsq = 0.0;
    const int reals = 200;
    for (int s = 0; s < reals; ++s) {
        auto g = sample_rpw(256, spec, 4000 + s);
        double acc = 0.0;
        int cnt = 0;
        for (int row = 0; row < g.n(); row += 3)
            for (int col = 0; col + lag < g.n(); col += 3) {
                acc += g.at(row, col) * g.at(row, col + lag);
                ++cnt;
            }
        const double per = acc / cnt;
        sum += per;
        sumsq += per * per;
    }
    const double mean = sum / reals;
    const double se = std::sqrt((sumsq / reals - mean * mean) / (reals - 1));
    const double expect = std::cyl_bessel_j(0, r);
    CHECK(std::abs(mean - expect) < 3.5 * se);
}

TEST_CASE("rpw marginals are standard normal (KS at the 1e-3 level)") {
    std::vector<double> vals;
    for (int s = 0; s < 10000; ++s) {
        auto g = sample_rpw(16, small_spec(2.0, 3), 777000 + s);
        vals.push_back(g.at(1, 1));
    }
    CHECK(oracle::ks_normal_pvalue(vals) > 1e-3);
    std::vector<double> avals;
    for (int s = 0; s < 10000; ++s) {
        auto g = sample_atomic(five_atom_unit(), small_spec(2.0, 3), 888000 + s);
        avals.push_back(g.at(1, 1));
    }
    CHECK(oracle::ks_normal_pvalue(avals) > 1e-3);
}

TEST_CASE("rpw stationarity: covariance depends only on the lag") {
    const GridSpec spec = small_spec(6.0, 13); // spacing 0.5
    const int reals = 3000;
    // Three lags x three base points.
    const int lags[3][2] = {{0, 2}, {2, 0}, {2, 2}};
    const int bases[3][2] = {{0, 0}, {3, 2}, {6, 5}};
    for (const auto& lag : lags) {
        double means[3], ses[3];
        for (int b = 0; b < 3; ++b) {
            std::vector<double> prods;
            prods.reserve(reals);
            for (int s = 0; s < reals; ++s) {
                auto g = sample_rpw(64, spec, 31000 + s);
                prods.push_back(g.at(bases[b][0], bases[b][1]) *
                                g.at(bases[b][0] + lag[0], bases[b][1] + lag[1]));
            }
            auto mm = oracle::moments(prods);
            means[b] = mm.mean;
            ses[b] = mm.std_error();
        }
        for (int b = 1; b < 3; ++b)
            CHECK(std::abs(means[b] - means[0]) < 3.5 * std::hypot(ses[b], ses[0]));
    }
}

TEST_CASE("rpw isotropy at M = 64: unit-lag covariance agrees across directions") {
    const GridSpec spec{4.0, 5}; // spacing 1
    const int reals = 4000;
    // Four unit-length directions on the grid: +x, -x, +y, diagonal/sqrt2.
    std::vector<double> m(4), se(4);
    for (int d = 0; d < 4; ++d) {
        std::vector<double> prods;
        prods.reserve(reals);
        for (int s = 0; s < reals; ++s) {
            auto g = sample_rpw(64, spec, 61000 + s);
            double other = d == 0   ? g.at(2, 3)
                           : d == 1 ? g.at(2, 1)
                           : d == 2 ? g.at(3, 2)
                                    : g.at(1, 1); // lag sqrt(2) handled below
            prods.push_back(g.at(2, 2) * other);
        }
        auto mm = oracle::moments(prods);
        m[d] = mm.mean;
        se[d] = mm.std_error();
    }
    for (int d = 1; d < 3; ++d)
        CHECK(std::abs(m[d] - m[0]) < 3.5 * std::hypot(se[d], se[0]));
    // The diagonal pair sits at lag sqrt(2); compare against J0 directly.
    CHECK(std::abs(m[3] - std::cyl_bessel_j(0, std::sqrt(2.0))) < 3.5 * se[3]);
    CHECK(std::abs(m[0] - std::cyl_bessel_j(0, 1.0)) < 3.5 * se[0]);
}

TEST_CASE("spectral synthesis reproduces the Bargmann-Fock covariance") {
    auto bf = SpectralMeasure::bargmann_fock();
    const GridSpec spec = GridSpec::from_resolution(10.0, 2 * kPi / 4.29, 6.0);
    const int reals = 150;
    std::vector<double> k0, k1, k4;
    const int step1 = static_cast<int>(std::lround(1.0 / spec.spacing()));
    const int step4 = static_cast<int>(std::lround(4.0 / spec.spacing()));
    for (int s = 0; s < reals; ++s) {
        auto g = sample_spectral_grid(bf, spec, 12000 + s);
        double a0 = 0, a1 = 0, a4 = 0;
        int c0 = 0, c1 = 0, c4 = 0;
        for (int r = 0; r < g.n(); r += 2) {
            for (int c = 0; c < g.n(); c += 2) {
                a0 += g.at(r, c) * g.at(r, c);
                ++c0;
                if (c + step1 < g.n()) { a1 += g.at(r, c) * g.at(r, c + step1); ++c1; }
                if (c + step4 < g.n()) { a4 += g.at(r, c) * g.at(r, c + step4); ++c4; }
            }
        }
        k0.push_back(a0 / c0);
        k1.push_back(a1 / c1);
        k4.push_back(a4 / c4);
    }
    auto m0 = oracle::moments(k0), m1 = oracle::moments(k1), m4 = oracle::moments(k4);
    CHECK(std::abs(m0.mean - 1.0) < 4.0 * m0.std_error());
    const double r1 = step1 * spec.spacing();
    CHECK(std::abs(m1.mean - std::exp(-0.5 * r1 * r1)) < 4.0 * m1.std_error());
    // No spurious periodic correlation at lag 4 (validates the padding).
    CHECK(std::abs(m4.mean - 0.0) < 4.0 * m4.std_error() + 1e-3);
}

TEST_CASE("spectral synthesis rejects undersampling grids") {
    auto bf = SpectralMeasure::bargmann_fock();
    // Spacing 2 gives a Nyquist frequency pi/2 well inside the BF support.
    CHECK_THROWS_AS(sample_spectral_grid(bf, GridSpec{20.0, 11}, 1),
                    ResolutionTooCoarseError);
}

TEST_CASE("field binary dump round trip") {
    auto g = sample_rpw(16, small_spec(5.0, 9), 5);
    const std::string path = "/tmp/exlb_test_field.bin";
    write_field(g, path);
    auto h = read_field(path);
    CHECK(h.spec.points_per_side == g.spec.points_per_side);
    CHECK(h.spec.spacing() == doctest::Approx(g.spec.spacing()).epsilon(1e-15));
    CHECK(h.values == g.values);
    std::filesystem::remove(path);
}

TEST_CASE("seed mixing separates streams") {
    CHECK(mix_seed(1, 0) != mix_seed(1, 1));
    CHECK(mix_seed(1, 0) != mix_seed(2, 0));
    CHECK(mix_seed(123, 456) == mix_seed(123, 456));
}
