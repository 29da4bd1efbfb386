#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "ringlase/errors.hpp"
#include "ringlase/spectral.hpp"

using namespace ringlase;

TEST_CASE("wavelength to angular frequency") {
    CHECK(wavelength_to_angular_frequency(Wavelength::from_nm(1547.6)).value() == doctest::Approx(1.21714e15).epsilon(1e-5));
    CHECK(wavelength_to_angular_frequency(Wavelength::from_nm(1550.0)).value() == doctest::Approx(1.21526e15).epsilon(1e-5));
    const double direct = 2.0 * oracle::pi * oracle::c0 / 1547.6e-9;
    CHECK(wavelength_to_angular_frequency(Wavelength::from_nm(1547.6)).value() == doctest::Approx(direct).epsilon(1e-15));
}

TEST_CASE("non-positive wavelength or frequency is rejected") {
    CHECK_THROWS_AS(Wavelength(0.0), DomainError);
    CHECK_THROWS_AS(Wavelength(-1e-6), DomainError);
    CHECK_THROWS_AS(Wavelength::from_nm(std::nan("")), DomainError);
    CHECK_THROWS_AS(AngularFrequency(0.0), DomainError);
}

TEST_CASE("property: conversion round trip over 1200-1700 nm") {
    oracle::Gen gen(11);
    for (int k = 0; k < 2000; ++k) {
        const auto l = Wavelength::from_nm(gen.uniform(1200.0, 1700.0));
        const auto back = angular_frequency_to_wavelength(wavelength_to_angular_frequency(l));
        REQUIRE(std::abs(back.meters() - l.meters()) <= 1e-12 * l.meters());
    }
}

TEST_CASE("lorentzian amplitude examples") {
    const LorentzianLine line(1.2e15, 8e10);
    const cdouble peak = lorentzian_amplitude(1.2e15, line);
    CHECK(peak.real() == 1.0);
    CHECK(peak.imag() == 0.0);
    CHECK(std::norm(lorentzian_amplitude(1.2e15 + 4e10, line)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(lorentzian_amplitude(1.2e15 + 5 * 8e10, line)) == doctest::Approx(1.0 / 101.0).epsilon(1e-9));
    CHECK(lorentzian_power(1.2e15 + 5 * 8e10, line) == doctest::Approx(9.901e-3).epsilon(1e-3));
    CHECK_THROWS_AS(LorentzianLine(1.2e15, 0.0), DomainError);
}

TEST_CASE("property: lorentzian agrees with the direct formula") {
    oracle::Gen gen(12);
    for (int k = 0; k < 500; ++k) {
        const double w0 = gen.uniform(1.1e15, 1.3e15);
        const double g = gen.log_uniform(1e9, 1e12);
        const double w = w0 + gen.uniform(-50.0, 50.0) * g;
        const LorentzianLine line(w0, g);
        REQUIRE(lorentzian_power(w, line) == doctest::Approx(oracle::lorentz(w, w0, g)).epsilon(1e-12));
        REQUIRE(std::norm(lorentzian_amplitude(w, line)) == doctest::Approx(oracle::lorentz(w, w0, g)).epsilon(1e-12));
    }
}

TEST_CASE("property: lorentzian normalization over +-50 linewidths") {
    oracle::Gen gen(13);
    for (int k = 0; k < 20; ++k) {
        const double g = gen.log_uniform(1e9, 1e12);
        const LorentzianLine line(1.2e15, g);
        const auto grid = make_grid(1.2e15, 100.0 * g, 200001);
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) sum += lorentzian_power(grid[i], line);
        sum *= grid.step();
        // the tails beyond +-50 G hold about 0.6% of pi G / 2
        REQUIRE(sum == doctest::Approx(oracle::pi * g / 2.0).epsilon(0.01));
        REQUIRE(sum < oracle::pi * g / 2.0);
    }
}

TEST_CASE("property: half-power points recover the FWHM within one step") {
    oracle::Gen gen(14);
    for (int k = 0; k < 50; ++k) {
        const double g = gen.log_uniform(1e9, 1e12);
        const double w0 = 1.2e15 + gen.uniform(-0.3, 0.3) * g;
        const LorentzianLine line(w0, g);
        const auto grid = make_grid(1.2e15, 10.0 * g, 4001);
        double first = 0.0, last = 0.0;
        bool seen = false;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (lorentzian_power(grid[i], line) >= 0.5) {
                if (!seen) first = grid[i];
                last = grid[i];
                seen = true;
            }
        REQUIRE(std::abs((last - first) - g) <= grid.step() + 1e-6 * g);
    }
}

TEST_CASE("make_grid examples") {
    const auto g = make_grid(0.0, 2.0, 3);
    CHECK(g[0] == -1.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 1.0);
    CHECK(g.step() == 1.0);
    CHECK_THROWS_AS(make_grid(0.0, 2.0, 1), DomainError);
    CHECK_THROWS_AS(make_grid(0.0, 0.0, 5), DomainError);

    const auto w = wavelength_to_angular_frequency(Wavelength::from_nm(1530.4));
    const auto pm = make_grid_pm(w, 1.0, 401);
    CHECK(pm.size() == 401);
    const double expected = 2.0 * oracle::pi * oracle::c0 * 1e-12 / (1530.4e-9 * 1530.4e-9);
    CHECK(pm.step() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(pm.front() == doctest::Approx(w.value() - 200.0 * expected).epsilon(1e-15));
}

TEST_CASE("property: grid points strictly increase and hit both ends") {
    oracle::Gen gen(15);
    for (int k = 0; k < 300; ++k) {
        const double center = gen.uniform(-1e15, 1e15);
        const double span = gen.log_uniform(1e-3, 1e14);
        const auto n = static_cast<std::size_t>(gen.integer(2, 2000));
        const double step = span / static_cast<double>(n - 1);
        if (step <= 8.0 * 2.220446049250313e-16 * (std::abs(center) + span / 2)) {
            REQUIRE_THROWS_AS(make_grid(center, span, n), DomainError);
            continue;
        }
        const auto g = make_grid(center, span, n);
        REQUIRE(g.step() == doctest::Approx(span / static_cast<double>(n - 1)));
        const auto p = g.points();
        for (std::size_t i = 1; i < p.size(); ++i) REQUIRE(p[i] > p[i - 1]);
        REQUIRE(p.front() == center - span / 2);
        REQUIRE(p.back() == doctest::Approx(center + span / 2));
        REQUIRE(g.contains(p.back()));
    }
}
