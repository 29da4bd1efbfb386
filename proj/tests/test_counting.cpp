#include "doctest.h"

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "ringlase/counting.hpp"
#include "ringlase/errors.hpp"

using namespace ringlase;

namespace {

DetectionChain quiet(double ts_db = -3.0, double ti_db = -3.0) {
    DetectionChain c;
    c.signal_transmission_db = ts_db;
    c.idler_transmission_db = ti_db;
    c.dark_rate = 0.0;
    c.jitter_sigma_s = 0.0;
    return c;
}

// Mean and count of bins further than `gap` from the center.
std::pair<double, double> off_peak_mean(const CoincidenceHistogram& h, int gap) {
    double s = 0.0, n = 0.0;
    for (std::size_t k = 0; k < h.counts.size(); ++k)
        if (std::abs(static_cast<int>(k) - h.half_bins) > gap) {
            s += static_cast<double>(h.counts[k]);
            n += 1.0;
        }
    return {s / n, n};
}

}  // namespace

TEST_CASE("detected rates with the default losses") {
    DetectionChain c;
    c.dark_rate = 0.0;
    const auto r = detected_rates(1e6, c, 1e-3);
    CHECK(r.true_coincidences == doctest::Approx(1862.0).epsilon(1e-3));
    CHECK(r.singles_signal == doctest::Approx(1e6 * std::pow(10.0, -1.31)));
    CHECK(r.singles_idler == doctest::Approx(1e6 * std::pow(10.0, -1.42)));
    CHECK(infer_pair_rate(r.true_coincidences, c) == doctest::Approx(1e6).epsilon(1e-12));
    CHECK(infer_pair_rate(1862.0, c) == doctest::Approx(1e6).epsilon(1e-3));
}

TEST_CASE("lossless chain passes pairs through") {
    auto c = quiet(0.0, 0.0);
    for (double rate : {0.0, 1.0, 3.7e5}) {
        const auto r = detected_rates(rate, c, 2e-3);
        CHECK(r.singles_signal == rate);
        CHECK(r.singles_idler == rate);
        CHECK(r.true_coincidences == rate);
    }
    CHECK_THROWS_AS(detected_rates(-1.0, c, 1e-3), DomainError);
}

TEST_CASE("noise and dark counts add to singles only") {
    auto c = quiet();
    c.noise_signal_per_w = 2e8;
    c.noise_idler_per_w = 1e8;
    c.dark_rate = 50.0;
    const auto with = detected_rates(1e5, c, 1e-3);
    const auto without = detected_rates(1e5, c, 1e-3, false);
    CHECK(with.singles_signal - without.singles_signal == doctest::Approx(2e5 + 50.0));
    CHECK(with.singles_idler - without.singles_idler == doctest::Approx(1e5 + 50.0));
    CHECK(with.true_coincidences == without.true_coincidences);
}

TEST_CASE("analytic CAR with the default losses") {
    DetectionChain c;
    c.dark_rate = 0.0;
    const auto r = detected_rates(1e6, c, 1e-3);
    CHECK(r.singles_signal * r.singles_idler * c.bin_width_s == doctest::Approx(0.0652).epsilon(2e-3));
    const auto car0 = car_analytic(1e6, c, 1e-3);
    CHECK(car0.multipair_only == doctest::Approx(2.86e4).epsilon(2e-3));
    CHECK(car0.with_noise == car0.multipair_only);

    const auto noisy = calibrate_noise(c, 1e6, 1e-3, 9.0);
    const auto car1 = car_analytic(1e6, noisy, 1e-3);
    CHECK(car1.multipair_only / car1.with_noise == doctest::Approx(100.0).epsilon(1e-12));

    DetectionChain with_dark = noisy;
    with_dark.dark_rate = 100.0;
    const auto car2 = car_analytic(1e6, with_dark, 1e-3);
    CHECK(car2.multipair_only / car2.with_noise == doctest::Approx(100.0).epsilon(1e-2));

    DetectionChain tiny = c;
    tiny.bin_width_s = 1e-30;
    CHECK(car_analytic(1e6, tiny, 1e-3).multipair_only > 1e20);
    CHECK_THROWS_AS(car_analytic(0.0, c, 1e-3), DomainError);
}

TEST_CASE("loss scaling leaves the multipair CAR unchanged") {
    oracle::Gen gen(31);
    for (int trial = 0; trial < 200; ++trial) {
        DetectionChain c = quiet(gen.uniform(-20.0, 0.0), gen.uniform(-20.0, 0.0));
        const double rate = gen.log_uniform(1e2, 1e8);
        const double x = gen.uniform(0.01, 1.0);
        DetectionChain d = c;
        d.signal_transmission_db += 10.0 * std::log10(x);
        d.idler_transmission_db += 10.0 * std::log10(x);
        const auto a = detected_rates(rate, c, 1e-3, false);
        const auto b = detected_rates(rate, d, 1e-3, false);
        CHECK(b.true_coincidences == doctest::Approx(x * x * a.true_coincidences).epsilon(1e-10));
        CHECK(b.singles_signal * b.singles_idler ==
              doctest::Approx(x * x * a.singles_signal * a.singles_idler).epsilon(1e-10));
        CHECK(car_analytic(rate, d, 1e-3).multipair_only ==
              doctest::Approx(car_analytic(rate, c, 1e-3).multipair_only).epsilon(1e-10));
    }
}

// Holds once pair singles exceed the dark rate; below that, dark counts make CAR rise with power.
TEST_CASE("analytic CAR falls with power once noise is calibrated") {
    oracle::Gen gen(8);
    for (int trial = 0; trial < 50; ++trial) {
        DetectionChain c;
        c.dark_rate = gen.uniform(0.0, 500.0);
        const double kappa = gen.log_uniform(1e11, 1e13);
        c = calibrate_noise(c, kappa * 1.6e-3 * 1.6e-3, 1.6e-3, gen.uniform(1.0, 20.0));
        double prev = INFINITY;
        for (double p = 1e-3; p <= 3e-3; p += 1e-4) {
            REQUIRE(kappa * p * p * c.idler_transmission() > c.dark_rate);
            const double v = car_analytic(kappa * p * p, c, p).with_noise;
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("constructed histogram: CAR = 9") {
    CoincidenceHistogram h;
    h.bin_width_s = 35e-12;
    h.half_bins = 50;
    h.duration_s = 1.0;
    h.counts.assign(101, 100);
    h.counts[50] += 900;
    h.counts[51] += 900;
    const auto e = car(h);
    CHECK(e.value == doctest::Approx(9.0));
    CHECK(e.window_bins == 2);
    CHECK(e.background == 100.0);
    CHECK(e.peak_bin == 50);
    CHECK(e.sigma > 0.0);
}

TEST_CASE("flat or empty histograms have no peak") {
    CoincidenceHistogram h;
    h.bin_width_s = 35e-12;
    h.half_bins = 50;
    h.duration_s = 1.0;
    h.counts.assign(101, 40);
    h.counts[50] = 150;
    CHECK_THROWS_AS(car(h), AnalysisError);
    h.counts.assign(101, 0);
    CHECK_THROWS_AS(car(h), AnalysisError);
    h.counts[50] = 10;
    CHECK_THROWS_AS(car(h), AnalysisError);  // zero background
}

TEST_CASE("zero jitter puts every true coincidence at zero delay") {
    const auto c = quiet();
    const double rate = 2e5, t = 1.0;
    const auto h = simulate_histogram(rate, 1e-3, c, t, 42, 60);
    const auto r = detected_rates(rate, c, 1e-3);
    const double floor = r.singles_signal * r.singles_idler * c.bin_width_s * t;
    const auto [mean, n] = off_peak_mean(h, 0);
    CHECK(std::abs(mean - floor) < 3.0 * std::sqrt(floor / n));
    for (int d : {-1, 1}) CHECK(static_cast<double>(h.counts[static_cast<std::size_t>(60 + d)]) < floor + 5.0 * std::sqrt(floor) + 1.0);
    const double excess = static_cast<double>(h.counts[60]) - floor;
    CHECK(std::abs(excess - r.true_coincidences * t) < 4.0 * std::sqrt(r.true_coincidences * t + floor));
}

TEST_CASE("peak width follows the combined jitter") {
    auto c = quiet(0.0, 0.0);
    c.bin_width_s = 4e-12;
    for (double sigma : {10e-12, 20e-12, 40e-12}) {
        c.jitter_sigma_s = sigma;
        const auto h = simulate_histogram(5e4, 1e-3, c, 1.0, 5, 150);
        const double expect = 2.0 * std::sqrt(2.0 * std::log(2.0)) * std::sqrt(2.0) * sigma;
        CHECK(peak_fwhm(h) == doctest::Approx(expect).epsilon(0.10));
    }
}

TEST_CASE("accidental floor with noise and dark counts") {
    auto c = quiet(-6.0, -8.0);
    c.jitter_sigma_s = 20e-12;
    c.noise_signal_per_w = 3e8;
    c.noise_idler_per_w = 2e8;
    c.dark_rate = 1e3;
    const double rate = 1e5, p = 1e-3, t = 2.0;
    const auto h = simulate_histogram(rate, p, c, t, 99, 100);
    const auto r = detected_rates(rate, c, p);
    const double floor = r.singles_signal * r.singles_idler * c.bin_width_s * t;
    const auto [mean, n] = off_peak_mean(h, 10);
    CHECK(std::abs(mean - floor) < 3.0 * std::sqrt(floor / n));
}

TEST_CASE("Monte Carlo CAR agrees with the analytic value") {
    const auto c = quiet();
    const double rate = 1e6, t = 1.0;
    const auto r = detected_rates(rate, c, 1e-3);
    REQUIRE(r.true_coincidences * t >= 1e5);
    const auto h = simulate_histogram(rate, 1e-3, c, t, 2024, 100);
    const auto e = car(h);
    const double expect = car_analytic(rate, c, 1e-3).with_noise;
    MESSAGE("MC " << e.value << " +- " << e.sigma << ", analytic " << expect);
    CHECK(std::abs(e.value - expect) < 3.0 * e.sigma);
    CHECK(e.window_bins == 1);
}

TEST_CASE("same seed, same histogram") {
    auto c = quiet();
    c.jitter_sigma_s = 20e-12;
    c.noise_signal_per_w = 1e8;
    c.dark_rate = 100.0;
    const auto a = simulate_histogram(3e5, 1e-3, c, 0.2, 7, 50);
    const auto b = simulate_histogram(3e5, 1e-3, c, 0.2, 7, 50);
    const auto d = simulate_histogram(3e5, 1e-3, c, 0.2, 8, 50);
    CHECK(a.counts == b.counts);
    CHECK(a.counts != d.counts);
    CHECK(a.total() > 0);
    CHECK(a.counts.size() == 101);
    CHECK(a.delay(50) == 0.0);
    CHECK(a.delay(51) == doctest::Approx(35e-12));
}

TEST_CASE("resource guard and bad inputs") {
    const auto c = quiet();
    CHECK_THROWS_AS(simulate_histogram(1e9, 1e-3, c, 10.0, 1), DomainError);
    CHECK_THROWS_AS(simulate_histogram(1e3, 1e-3, c, 0.0, 1), DomainError);
    CHECK_THROWS_AS(simulate_histogram(1e3, 1e-3, c, 1.0, 1, 0), DomainError);
    auto bad = c;
    bad.signal_transmission_db = 1.0;
    CHECK_THROWS_AS(simulate_histogram(1e3, 1e-3, bad, 1.0, 1), ConfigError);
    bad = c;
    bad.bin_width_s = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
