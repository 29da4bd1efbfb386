#pragma once

#include <cstdint>
#include <vector>

#include "ringlase/ring.hpp"
#include "ringlase/spectral.hpp"

namespace ringlase {

/// Fiber-loop cavity: BOA gain, lumped losses and the ring as intracavity filter.
struct LoopParams {
    double round_trip_transmission = 0.0895;
    double saturation_power_w = 31.62e-3;
    double gain_slope_db_per_ma = 0.0;  // g1 in G0[dB] = g1 (I - I0)
    double gain_offset_ma = 0.0;        // I0
    double ring_input_factor = 0.5;     // P_in = C * P_loop
    double monitor_factor = 565.0;      // P_in = monitor_factor * P_PM
    double mode_spacing_m = 0.05e-12;
    double weight_exponent = 0.5;
    double damping = 0.5;
    bool filter_loss = true;  // include comb-averaged filter transmission in the loop loss
    int max_iterations = 10000;
    double tolerance = 1e-6;

    void validate() const;
};

struct LasingState {
    double current_ma = 0.0;
    double power_w = 0.0;  // ring input power
    bool above_threshold = false;
    double clip = 0.0;     // half-width of net-gain support in units of Gamma_hot/2
    int iterations = 0;
    HotRingState hot;

    AngularFrequency center() const { return AngularFrequency(hot.line(Resonance::pump).center()); }
    Wavelength center_wavelength() const { return angular_frequency_to_wavelength(center()); }
};

enum class PumpPhase { random, coherent };

/// Comb of loop modes: omega_m = first + m * spacing.
struct PumpSpectrum {
    double first = 0.0;    // rad/s
    double spacing = 0.0;  // rad/s
    std::vector<cdouble> amplitudes;  // sum |a|^2 * spacing = total_power

    double total_power() const;
    double frequency(std::size_t m) const noexcept { return first + static_cast<double>(m) * spacing; }
    std::size_t size() const noexcept { return amplitudes.size(); }
};

double small_signal_gain(double current_ma, const LoopParams& loop);

/// Cold-ring Rigrod steady state, returned as ring input power.
double rigrod_power(double current_ma, const LoopParams& loop);

/// <L>_w over the clipped emission band, weights w = L^beta.
double filter_average(double clip, double beta);

LasingState solve_steady_state(double current_ma, const LoopParams& loop, const RingParams& ring,
                               const ThermalNonlinearParams& tn);

/// `n_modes_out` = 0 returns just the modes with net gain; a larger value pads
/// the comb symmetrically with empty modes.
PumpSpectrum pump_spectrum(const LasingState& state, const LoopParams& loop, std::size_t n_modes_out,
                           PumpPhase phase, std::uint64_t seed);

/// Emission FWHM of the comb envelope, pm at the comb center.
double emission_fwhm_pm(const PumpSpectrum& spectrum);

struct LasingPoint {
    double current_ma;
    double monitor_power_w;
    double power_w;
    double shift_pm;
    double fwhm_pm;
};

std::vector<LasingPoint> lasing_curve(const std::vector<double>& currents_ma, const LoopParams& loop,
                                      const RingParams& ring, const ThermalNonlinearParams& tn);

struct LinearFit {
    double slope;
    double intercept;
    double x_intercept() const { return -intercept / slope; }
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Sets (g1, I0) so that the solved curve has threshold `threshold_ma` and its
/// linear fit over [fit_lo, fit_hi] has slope `slope_w_per_ma` in ring input power.
LoopParams calibrate_gain(LoopParams loop, const RingParams& ring, const ThermalNonlinearParams& tn,
                          double threshold_ma, double slope_w_per_ma, double fit_lo_ma, double fit_hi_ma);

/// Same targets against the cold Rigrod formula alone (no ring).
LoopParams calibrate_gain_cold(LoopParams loop, double threshold_ma, double slope_w_per_ma);

/// Smallest current whose steady state reaches `power_w`, by bisection.
double current_for_power(double power_w, const LoopParams& loop, const RingParams& ring,
                         const ThermalNonlinearParams& tn);

}  // namespace ringlase
