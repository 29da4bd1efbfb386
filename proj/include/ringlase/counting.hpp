#pragma once

#include <cstdint>
#include <vector>

namespace ringlase {

struct DetectionChain {
    double signal_transmission_db = -13.1;  // includes detector efficiency
    double idler_transmission_db = -14.2;
    double jitter_sigma_s = 20e-12;          // per detector, Gaussian
    double bin_width_s = 35e-12;
    double noise_signal_per_w = 0.0;         // uncorrelated counts/s per watt of P_in
    double noise_idler_per_w = 0.0;
    double dark_rate = 100.0;                // counts/s per detector

    double signal_transmission() const;
    double idler_transmission() const;
    void validate() const;
};

struct DetectedRates {
    double singles_signal;
    double singles_idler;
    double true_coincidences;
};

DetectedRates detected_rates(double pair_rate, const DetectionChain& chain, double power_w,
                             bool include_noise = true);

/// Internal pair rate that explains a measured true-coincidence rate.
double infer_pair_rate(double true_coincidences, const DetectionChain& chain);

struct CarPrediction {
    double with_noise;
    double multipair_only;
};

CarPrediction car_analytic(double pair_rate, const DetectionChain& chain, double power_w);

/// Noise coefficients such that, at `power_w`, each arm sees `excess` times as
/// many uncorrelated counts as pair photons.
DetectionChain calibrate_noise(DetectionChain chain, double pair_rate, double power_w, double excess);

/// Signal - idler delays, bins centered on k * bin_width for k in [-half_bins, half_bins].
struct CoincidenceHistogram {
    double bin_width_s = 0.0;
    int half_bins = 0;
    double duration_s = 0.0;
    std::vector<std::uint64_t> counts;

    double delay(std::size_t k) const noexcept { return (static_cast<double>(k) - half_bins) * bin_width_s; }
    std::uint64_t total() const;
};

/// Monte Carlo acquisition split into fixed-length chunks, each seeded from
/// (seed, chunk index); the result is independent of thread count.
CoincidenceHistogram simulate_histogram(double pair_rate, double power_w, const DetectionChain& chain,
                                        double duration_s, std::uint64_t seed, int half_bins = 100);

struct CarEstimate {
    double value;
    double sigma;
    double background;  // per bin
    int window_bins;
    std::size_t peak_bin;
};

/// Background-subtracted coincidences within the peak FWHM over the background
/// in the same window. Background is the median off-peak bin.
CarEstimate car(const CoincidenceHistogram& hist);

/// Peak FWHM above background, seconds, from interpolated half crossings.
double peak_fwhm(const CoincidenceHistogram& hist);

}  // namespace ringlase
