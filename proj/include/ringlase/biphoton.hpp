#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ringlase/laser.hpp"
#include "ringlase/ring.hpp"
#include "ringlase/spectral.hpp"

namespace ringlase {

struct JointSpectralAmplitude {
    SpectralGrid signal;
    SpectralGrid idler;
    Eigen::MatrixXcd amplitudes;  // rows: signal, columns: idler
    bool normalized = false;

    double cell_area() const noexcept { return signal.step() * idler.step(); }
};

/// Shared SFWM kernel. For a signal/idler pair it averages the pump-pair
/// products b_m b_m' (b = alpha F_p) over the sum-frequency cell
/// [ws + wi - dwi/2, ws + wi + dwi/2). Each comb sum frequency owns one
/// spacing-wide interval and enters with its overlap fraction. The signal and
/// idler resonance fields are applied last.
class JsaKernel {
public:
    JsaKernel(const PumpSpectrum& pump, const HotRingState& hot);

    cdouble operator()(double omega_s, double omega_i, double idler_cell) const;

    /// Sum-frequency comb sum_{m+m'=n} b_m b_m' at 2 first + n spacing.
    const std::vector<cdouble>& pair_comb() const noexcept { return comb_; }

private:
    std::vector<cdouble> comb_;
    double sum_first_;
    double spacing_;
    LorentzianLine signal_;
    LorentzianLine idler_;
};

/// Grids centered on the hot signal and idler resonances, steps in pm.
SpectralGrid signal_grid(const HotRingState& hot, double step_pm, std::size_t n_points);
SpectralGrid idler_grid(const HotRingState& hot, double step_pm, std::size_t n_points);

JointSpectralAmplitude joint_spectral_amplitude(const PumpSpectrum& pump, const HotRingState& hot,
                                                const SpectralGrid& signal, const SpectralGrid& idler,
                                                bool normalize = true);

/// |phi|^2 normalized so that sum * cell area = 1.
Eigen::MatrixXd jsd(const JointSpectralAmplitude& jsa);

/// Idler power spectrum generated by a CW seed at `seed_omega` (arbitrary units,
/// same scale for every seed).
std::vector<double> stimulated_idler_spectrum(double seed_omega, const PumpSpectrum& pump,
                                              const HotRingState& hot, const SpectralGrid& signal,
                                              const SpectralGrid& idler);

/// One comb line carrying `power_w`.
PumpSpectrum single_mode_pump(double omega, double power_w, double spacing);

/// Overlap of the pump comb with the hot pump resonance, including the TPA
/// reduction of the intracavity enhancement. 1 for a narrow line on a cold ring.
double pump_overlap(const PumpSpectrum& pump, const HotRingState& hot);

/// R = kappa (P_in eta)^2, pairs/s. Zero below threshold.
double pair_generation_rate(const LasingState& state, const PumpSpectrum& pump, double kappa);

}  // namespace ringlase
