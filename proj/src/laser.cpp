#include "ringlase/laser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "ringlase/errors.hpp"
#include "ringlase/parallel.hpp"

namespace ringlase {

namespace {

constexpr double kLn10Over10 = 2.302585092994045684 / 10.0;

double ln_gain(double current_ma, const LoopParams& loop) {
    return loop.gain_slope_db_per_ma * (current_ma - loop.gain_offset_ma) * kLn10Over10;
}

double threshold_current(const LoopParams& loop) {
    return loop.gain_offset_ma + 10.0 * std::log10(1.0 / loop.round_trip_transmission) / loop.gain_slope_db_per_ma;
}

struct LoopEval {
    double power_w;
    double clip;
};

// One undamped pass: ring input power implied by a trial ring input power.
LoopEval loop_map(double p_trial, double lng0, const LoopParams& loop, const ThermalNonlinearParams& tn) {
    const double s = 1.0 + p_trial / tn.tpa_power_w;
    const double peak = 1.0 / (s * s);
    const double net0 = std::exp(lng0) * loop.round_trip_transmission * peak;
    const double clip = net0 > 1.0 ? std::sqrt(net0 - 1.0) : 0.0;
    const double d = loop.filter_loss ? peak * filter_average(clip, loop.weight_exponent) : peak;
    const double loss = std::log(1.0 / (loop.round_trip_transmission * d));
    const double p_loop = loop.saturation_power_w * (lng0 / loss - 1.0);
    return {std::max(0.0, loop.ring_input_factor * p_loop), clip};
}

}  // namespace

void LoopParams::validate() const {
    if (!(round_trip_transmission > 0.0 && round_trip_transmission < 1.0))
        throw ConfigError("loop.round_trip_transmission: must be in (0, 1)");
    if (!(saturation_power_w > 0.0)) throw ConfigError("loop.saturation_power_mW: must be > 0");
    if (!(gain_slope_db_per_ma > 0.0) || !std::isfinite(gain_slope_db_per_ma))
        throw ConfigError("loop.gain_slope_dB_per_mA: must be > 0");
    if (!std::isfinite(gain_offset_ma)) throw ConfigError("loop.gain_offset_mA: must be finite");
    if (!(ring_input_factor > 0.0)) throw ConfigError("loop.ring_input_factor: must be > 0");
    if (monitor_factor != 565.0) throw ConfigError("loop.monitor_factor: must be 565");
    if (!(mode_spacing_m > 0.0)) throw ConfigError("loop.mode_spacing_pm: must be > 0");
    if (!(weight_exponent >= 0.0)) throw ConfigError("loop.weight_exponent: must be >= 0");
    if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("loop.damping: must be in (0, 1]");
    if (max_iterations < 1) throw ConfigError("loop.max_iterations: must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("loop.tolerance: must be > 0");
}

double PumpSpectrum::total_power() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) sum += std::norm(a);
    return sum * spacing;
}

double small_signal_gain(double current_ma, const LoopParams& loop) {
    if (!(current_ma >= 0.0)) throw DomainError("current must be >= 0");
    return std::pow(10.0, loop.gain_slope_db_per_ma * (current_ma - loop.gain_offset_ma) / 10.0);
}

double rigrod_power(double current_ma, const LoopParams& loop) {
    if (!(current_ma >= 0.0)) throw DomainError("current must be >= 0");
    const double lng0 = ln_gain(current_ma, loop);
    const double loss = std::log(1.0 / loop.round_trip_transmission);
    if (lng0 <= loss) return 0.0;
    return loop.ring_input_factor * loop.saturation_power_w * (lng0 / loss - 1.0);
}

double filter_average(double clip, double beta) {
    if (!(clip > 0.0)) return 1.0;
    // t = sinh(s): int_0^y (1+t^2)^-a dt = int_0^asinh(y) cosh(s)^(1-2a) ds
    using boost::math::quadrature::gauss;
    const double top = std::asinh(clip);
    const int panels = static_cast<int>(std::ceil(top));
    const double h = top / panels;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = k * h, b = (k + 1) * h;
        num += gauss<double, 20>::integrate([beta](double x) { return std::pow(std::cosh(x), -1.0 - 2.0 * beta); }, a, b);
        den += gauss<double, 20>::integrate([beta](double x) { return std::pow(std::cosh(x), 1.0 - 2.0 * beta); }, a, b);
    }
    return num / den;
}

LasingState solve_steady_state(double current_ma, const LoopParams& loop, const RingParams& ring,
                               const ThermalNonlinearParams& tn) {
    if (!(current_ma >= 0.0)) throw DomainError("current must be >= 0");
    const double lng0 = ln_gain(current_ma, loop);
    if (lng0 <= std::log(1.0 / loop.round_trip_transmission))
        return LasingState{current_ma, 0.0, false, 0.0, 0, cold_state(ring)};

    double p = rigrod_power(current_ma, loop);
    for (int it = 1; it <= loop.max_iterations; ++it) {
        const LoopEval next = loop_map(p, lng0, loop, tn);
        const double p_next = (1.0 - loop.damping) * p + loop.damping * next.power_w;
        const bool done = std::abs(p_next - p) <= loop.tolerance * std::abs(p_next);
        p = p_next;
        if (done) {
            if (p <= 0.0) return LasingState{current_ma, 0.0, false, 0.0, it, cold_state(ring)};
            const LoopEval at = loop_map(p, lng0, loop, tn);
            return LasingState{current_ma, p, true, at.clip, it, hot_state(ring, tn, p)};
        }
    }
    throw SolverError("steady state did not converge", p, loop.max_iterations);
}

PumpSpectrum pump_spectrum(const LasingState& state, const LoopParams& loop, std::size_t n_modes_out,
                           PumpPhase phase, std::uint64_t seed) {
    if (!state.above_threshold || !(state.power_w > 0.0))
        throw AnalysisError("pump spectrum requested below threshold");
    const auto& line = state.hot.line(Resonance::pump);
    const double spacing = wavelength_span_to_angular(loop.mode_spacing_m, state.center_wavelength());
    const double half_width = state.clip * 0.5 * line.fwhm();
    const auto half_modes = static_cast<std::size_t>(std::floor(half_width / spacing));
    const std::size_t support = 2 * half_modes + 1;
    std::size_t pad = 0;
    if (n_modes_out > support) pad = (n_modes_out - support + 1) / 2;
    const std::size_t n = support + 2 * pad;

    std::vector<double> weight(n, 0.0);
    double weight_sum = 0.0;
    for (std::size_t k = 0; k < support; ++k) {
        const double offset = (static_cast<double>(k) - static_cast<double>(half_modes)) * spacing;
        const double y = 2.0 * offset / line.fwhm();
        const double w = std::pow(1.0 + y * y, -loop.weight_exponent);
        weight[pad + k] = w;
        weight_sum += w;
    }

    PumpSpectrum out;
    out.spacing = spacing;
    out.first = line.center() - static_cast<double>(half_modes + pad) * spacing;
    out.amplitudes.resize(n);
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        const double mag = std::sqrt(state.power_w * weight[k] / (weight_sum * spacing));
        double phi = 0.0;
        if (phase == PumpPhase::random) {
            // 53-bit uniform in [0, 1), independent of the standard library's distributions
            phi = 2.0 * kPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
        out.amplitudes[k] = std::polar(mag, phi);
    }
    return out;
}

double emission_fwhm_pm(const PumpSpectrum& spectrum) {
    const std::size_t n = spectrum.size();
    if (n == 0) throw AnalysisError("empty pump spectrum");
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = std::norm(spectrum.amplitudes[k]);
    const auto peak_it = std::max_element(p.begin(), p.end());
    const double peak = *peak_it;
    if (!(peak > 0.0)) throw AnalysisError("empty pump spectrum");
    const double half = 0.5 * peak;
    const auto ipk = static_cast<std::ptrdiff_t>(peak_it - p.begin());
    auto value = [&](std::ptrdiff_t k) {
        return (k < 0 || k >= static_cast<std::ptrdiff_t>(n)) ? 0.0 : p[static_cast<std::size_t>(k)];
    };
    // crossing positions in units of mode index, linear interpolation
    auto crossing = [&](int dir) {
        std::ptrdiff_t k = ipk;
        while (value(k + dir) >= half) k += dir;
        const double a = value(k), b = value(k + dir);
        return static_cast<double>(k) + dir * (a - half) / (a - b);
    };
    const double width = (crossing(+1) - crossing(-1)) * spectrum.spacing;
    const double center = spectrum.frequency(static_cast<std::size_t>(ipk));
    return angular_span_to_wavelength(width, AngularFrequency(center)) * 1e12;
}

std::vector<LasingPoint> lasing_curve(const std::vector<double>& currents_ma, const LoopParams& loop,
                                      const RingParams& ring, const ThermalNonlinearParams& tn) {
    for (std::size_t k = 1; k < currents_ma.size(); ++k)
        if (!(currents_ma[k] > currents_ma[k - 1])) throw DomainError("current sweep must be increasing");
    std::vector<std::optional<LasingPoint>> slots(currents_ma.size());
    parallel_for(currents_ma.size(), [&](std::size_t k) {
        const auto st = solve_steady_state(currents_ma[k], loop, ring, tn);
        LasingPoint pt{st.current_ma, st.power_w / loop.monitor_factor, st.power_w, 0.0, 0.0};
        if (st.above_threshold) {
            pt.shift_pm = st.hot.pump_shift_m() * 1e12;
            pt.fwhm_pm = emission_fwhm_pm(pump_spectrum(st, loop, 0, PumpPhase::coherent, 0));
        }
        slots[k] = pt;
    });
    std::vector<LasingPoint> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(*s);
    return out;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("linear fit needs distinct x values");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

LoopParams calibrate_gain(LoopParams loop, const RingParams& ring, const ThermalNonlinearParams& tn,
                          double threshold_ma, double slope_w_per_ma, double fit_lo_ma, double fit_hi_ma) {
    std::vector<double> currents;
    for (double i = fit_lo_ma; i <= fit_hi_ma + 1e-9; i += 1.0) currents.push_back(i);
    const double loss_db = 10.0 * std::log10(1.0 / loop.round_trip_transmission);
    auto fitted_slope = [&](double g1) {
        loop.gain_slope_db_per_ma = g1;
        loop.gain_offset_ma = threshold_ma - loss_db / g1;
        std::vector<double> p;
        for (double i : currents) p.push_back(solve_steady_state(i, loop, ring, tn).power_w);
        return linear_fit(currents, p).slope;
    };
    double lo = 1e-4, hi = 1.0;
    if (fitted_slope(lo) > slope_w_per_ma || fitted_slope(hi) < slope_w_per_ma)
        throw SolverError("gain calibration target out of range", slope_w_per_ma, 0);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fitted_slope(mid) < slope_w_per_ma ? lo : hi) = mid;
    }
    loop.gain_slope_db_per_ma = 0.5 * (lo + hi);
    loop.gain_offset_ma = threshold_ma - loss_db / loop.gain_slope_db_per_ma;
    return loop;
}

LoopParams calibrate_gain_cold(LoopParams loop, double threshold_ma, double slope_w_per_ma) {
    // P_in = C Psat (g1 (I - Ith) ln10/10) / ln(1/T)
    const double loss = std::log(1.0 / loop.round_trip_transmission);
    loop.gain_slope_db_per_ma =
        slope_w_per_ma * loss / (loop.ring_input_factor * loop.saturation_power_w * kLn10Over10);
    loop.gain_offset_ma = threshold_ma - 10.0 * std::log10(1.0 / loop.round_trip_transmission) / loop.gain_slope_db_per_ma;
    return loop;
}

double current_for_power(double power_w, const LoopParams& loop, const RingParams& ring,
                         const ThermalNonlinearParams& tn) {
    if (!(power_w > 0.0)) throw DomainError("target power must be > 0");
    const double ith = threshold_current(loop);
    double lo = std::max(0.0, ith);
    double hi = lo + 1.0;
    while (solve_steady_state(hi, loop, ring, tn).power_w < power_w) {
        lo = hi;
        hi = ith + 2.0 * (hi - ith);
        if (hi > ith + 1e4) throw SolverError("target power not reachable", power_w, 0);
    }
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (solve_steady_state(mid, loop, ring, tn).power_w < power_w ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace ringlase
