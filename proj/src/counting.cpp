#include "ringlase/counting.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ringlase/errors.hpp"
#include "ringlase/parallel.hpp"

namespace ringlase {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

constexpr double kMaxEvents = 1e9;
constexpr double kPiHalf = 1.57079632679489661923;
constexpr double kEventsPerChunk = 2e6;

struct ChunkPlan {
    std::size_t count;
    double length;
};

ChunkPlan plan_chunks(double event_rate, double duration) {
    double length = event_rate > 0.0 ? kEventsPerChunk / event_rate : duration;
    length = std::clamp(length, std::min(1e-3, duration), duration);
    auto count = static_cast<std::size_t>(std::ceil(duration / length));
    return {std::max<std::size_t>(count, 1), length};
}

void add_uniform(std::vector<double>& out, std::mt19937_64& rng, double rate, double length) {
    if (!(rate > 0.0)) return;
    std::poisson_distribution<long long> n_dist(rate * length);
    std::uniform_real_distribution<double> u(0.0, length);
    const long long n = n_dist(rng);
    for (long long k = 0; k < n; ++k) out.push_back(u(rng));
}

double median(std::vector<double> v) {
    if (v.empty()) throw AnalysisError("histogram has no off-peak bins");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

struct PeakInfo {
    std::size_t peak;
    double peak_counts;
    double background;
    std::size_t off_peak;
};

PeakInfo find_peak(const CoincidenceHistogram& hist) {
    const auto& c = hist.counts;
    if (c.size() < 3) throw AnalysisError("histogram too short");
    const auto it = std::max_element(c.begin(), c.end());
    const auto peak = static_cast<std::size_t>(it - c.begin());
    const auto exclusion = static_cast<std::size_t>(std::max(5, hist.half_bins / 10));
    std::vector<double> off;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const std::size_t d = k > peak ? k - peak : peak - k;
        if (d > exclusion) off.push_back(static_cast<double>(c[k]));
    }
    const double b = median(off);
    const auto pk = static_cast<double>(*it);
    if (!(pk > 5.0 * b) || pk <= 0.0) throw AnalysisError("no detectable coincidence peak");
    return {peak, pk, b, off.size()};
}

}  // namespace

double DetectionChain::signal_transmission() const { return db_to_linear(signal_transmission_db); }
double DetectionChain::idler_transmission() const { return db_to_linear(idler_transmission_db); }

void DetectionChain::validate() const {
    if (!(signal_transmission_db <= 0.0)) throw ConfigError("detection.signal_transmission_dB: must be <= 0");
    if (!(idler_transmission_db <= 0.0)) throw ConfigError("detection.idler_transmission_dB: must be <= 0");
    if (!(jitter_sigma_s >= 0.0)) throw ConfigError("detection.jitter_sigma_ps: must be >= 0");
    if (!(bin_width_s > 0.0)) throw ConfigError("detection.bin_width_ps: must be > 0");
    if (!(noise_signal_per_w >= 0.0)) throw ConfigError("detection.noise_signal_per_mW: must be >= 0");
    if (!(noise_idler_per_w >= 0.0)) throw ConfigError("detection.noise_idler_per_mW: must be >= 0");
    if (!(dark_rate >= 0.0)) throw ConfigError("detection.dark_rate: must be >= 0");
}

DetectedRates detected_rates(double pair_rate, const DetectionChain& chain, double power_w, bool include_noise) {
    if (!(pair_rate >= 0.0)) throw DomainError("pair rate must be >= 0");
    const double ts = chain.signal_transmission();
    const double ti = chain.idler_transmission();
    DetectedRates r{pair_rate * ts, pair_rate * ti, pair_rate * ts * ti};
    if (include_noise) {
        r.singles_signal += chain.noise_signal_per_w * power_w + chain.dark_rate;
        r.singles_idler += chain.noise_idler_per_w * power_w + chain.dark_rate;
    }
    return r;
}

double infer_pair_rate(double true_coincidences, const DetectionChain& chain) {
    return true_coincidences / (chain.signal_transmission() * chain.idler_transmission());
}

CarPrediction car_analytic(double pair_rate, const DetectionChain& chain, double power_w) {
    if (!(pair_rate > 0.0)) throw DomainError("pair rate must be > 0");
    auto ratio = [&](bool noise) {
        const auto r = detected_rates(pair_rate, chain, power_w, noise);
        return r.true_coincidences / (r.singles_signal * r.singles_idler * chain.bin_width_s);
    };
    return {ratio(true), ratio(false)};
}

DetectionChain calibrate_noise(DetectionChain chain, double pair_rate, double power_w, double excess) {
    if (!(power_w > 0.0)) throw DomainError("reference power must be > 0");
    chain.noise_signal_per_w = excess * pair_rate * chain.signal_transmission() / power_w;
    chain.noise_idler_per_w = excess * pair_rate * chain.idler_transmission() / power_w;
    return chain;
}

std::uint64_t CoincidenceHistogram::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

CoincidenceHistogram simulate_histogram(double pair_rate, double power_w, const DetectionChain& chain,
                                        double duration_s, std::uint64_t seed, int half_bins) {
    if (!(duration_s > 0.0)) throw DomainError("acquisition time must be > 0");
    if (half_bins < 1) throw DomainError("histogram needs at least one bin each side");
    chain.validate();
    const double noise_s = chain.noise_signal_per_w * power_w + chain.dark_rate;
    const double noise_i = chain.noise_idler_per_w * power_w + chain.dark_rate;
    const double event_rate = pair_rate + noise_s + noise_i;
    if (event_rate * duration_s > kMaxEvents)
        throw DomainError("expected event count exceeds 1e9; split the acquisition into shorter runs");

    const ChunkPlan plan = plan_chunks(event_rate, duration_s);
    const double ts = chain.signal_transmission();
    const double ti = chain.idler_transmission();
    const double bin = chain.bin_width_s;
    const double reach = (half_bins + 0.5) * bin;
    const std::size_t n_bins = 2 * static_cast<std::size_t>(half_bins) + 1;

    std::vector<std::vector<std::uint64_t>> partial(plan.count, std::vector<std::uint64_t>(n_bins, 0));
    parallel_for(plan.count, [&](std::size_t chunk) {
        const double length = std::min(plan.length, duration_s - static_cast<double>(chunk) * plan.length);
        if (!(length > 0.0)) return;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        std::uniform_real_distribution<double> when(0.0, length);
        std::normal_distribution<double> jitter(0.0, chain.jitter_sigma_s);
        auto jit = [&]() { return chain.jitter_sigma_s > 0.0 ? jitter(rng) : 0.0; };

        std::vector<double> sig, idl;
        std::poisson_distribution<long long> pairs(pair_rate * length);
        const long long n_pairs = pair_rate > 0.0 ? pairs(rng) : 0;
        for (long long k = 0; k < n_pairs; ++k) {
            const double t = when(rng);
            const bool s_ok = u01(rng) < ts;
            const bool i_ok = u01(rng) < ti;
            const double js = jit();
            const double ji = jit();
            if (s_ok) sig.push_back(t + js);
            if (i_ok) idl.push_back(t + ji);
        }
        add_uniform(sig, rng, noise_s, length);
        add_uniform(idl, rng, noise_i, length);
        std::sort(sig.begin(), sig.end());
        std::sort(idl.begin(), idl.end());

        auto& counts = partial[chunk];
        std::size_t first = 0;
        for (double s : sig) {
            while (first < idl.size() && idl[first] < s - reach) ++first;
            for (std::size_t j = first; j < idl.size() && idl[j] <= s + reach; ++j) {
                const double d = s - idl[j];
                const auto k = static_cast<long long>(std::floor(d / bin + 0.5)) + half_bins;
                if (k >= 0 && k < static_cast<long long>(n_bins)) ++counts[static_cast<std::size_t>(k)];
            }
        }
    });

    CoincidenceHistogram h;
    h.bin_width_s = bin;
    h.half_bins = half_bins;
    h.duration_s = duration_s;
    h.counts.assign(n_bins, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < n_bins; ++k) h.counts[k] += p[k];
    return h;
}

CarEstimate car(const CoincidenceHistogram& hist) {
    const PeakInfo info = find_peak(hist);
    const auto& c = hist.counts;
    const double b = info.background;
    if (!(b > 0.0)) throw AnalysisError("zero background; CAR undefined");
    const double half = b + 0.5 * (info.peak_counts - b);
    std::size_t lo = info.peak, hi = info.peak;
    while (lo > 0 && static_cast<double>(c[lo - 1]) >= half) --lo;
    while (hi + 1 < c.size() && static_cast<double>(c[hi + 1]) >= half) ++hi;
    double n = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) n += static_cast<double>(c[k]);
    const auto w = static_cast<double>(hi - lo + 1);
    const double bg = w * b;
    const double sigma_b = std::sqrt(kPiHalf * b / static_cast<double>(info.off_peak));
    const double d_b = n / (w * b * b);
    const double sigma = std::sqrt(n / (bg * bg) + d_b * d_b * sigma_b * sigma_b);
    return {(n - bg) / bg, sigma, b, static_cast<int>(w), info.peak};
}

double peak_fwhm(const CoincidenceHistogram& hist) {
    const PeakInfo info = find_peak(hist);
    const auto& c = hist.counts;
    const double half = info.background + 0.5 * (info.peak_counts - info.background);
    auto at = [&](std::ptrdiff_t k) {
        return (k < 0 || k >= static_cast<std::ptrdiff_t>(c.size())) ? info.background
                                                                    : static_cast<double>(c[static_cast<std::size_t>(k)]);
    };
    auto crossing = [&](int dir) {
        auto k = static_cast<std::ptrdiff_t>(info.peak);
        while (at(k + dir) >= half && std::abs(k + dir - static_cast<std::ptrdiff_t>(info.peak)) < static_cast<std::ptrdiff_t>(c.size())) k += dir;
        const double a = at(k), b = at(k + dir);
        return static_cast<double>(k) + dir * (a - half) / (a - b);
    };
    return (crossing(+1) - crossing(-1)) * hist.bin_width_s;
}

}  // namespace ringlase
