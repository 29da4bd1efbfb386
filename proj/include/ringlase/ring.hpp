#pragma once

#include <array>
#include <limits>

#include "ringlase/spectral.hpp"

namespace ringlase {

enum class Resonance { pump = 0, signal = 1, idler = 2 };
enum class Port { through, drop };

/// Cold add-drop racetrack. Each resonance is a single Lorentzian pole
/// characterised by its measured center and loaded Q.
struct RingParams {
    double length_m = 66.8e-6;
    double group_index = 4.18;
    Wavelength lambda_pump = Wavelength::from_nm(1547.6);
    Wavelength lambda_signal = Wavelength::from_nm(1530.4);
    Wavelength lambda_idler = Wavelength::from_nm(1564.9);
    double q_pump = 22100.0;
    double q_signal = 21900.0;
    double q_idler = 14900.0;
    double through_extinction_db = 15.0;  // on-resonance through-port suppression
    double drop_loss_db = 9.0;            // Input -> Drop insertion loss on resonance

    Wavelength center(Resonance r) const noexcept;
    double q(Resonance r) const noexcept;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Thermo-optic redshift and TPA broadening, both linear in ring input power.
struct ThermalNonlinearParams {
    double shift_m_per_w = 0.0;  // redshift per watt of P_in
    double tpa_power_w = std::numeric_limits<double>::infinity();  // Gamma(P) = Gamma0 (1 + P / tpa_power_w)

    void validate() const;
};

/// Ring resonances at a given operating power.
class HotRingState {
public:
    HotRingState(double power_w, std::array<LorentzianLine, 3> hot, std::array<LorentzianLine, 3> cold);

    double power() const noexcept { return power_; }
    const LorentzianLine& line(Resonance r) const noexcept { return hot_[static_cast<int>(r)]; }
    const LorentzianLine& cold_line(Resonance r) const noexcept { return cold_[static_cast<int>(r)]; }
    /// Gamma(P) / Gamma0; identical for the three resonances.
    double broadening() const noexcept { return hot_[0].fwhm() / cold_[0].fwhm(); }
    /// Redshift of the pump resonance, meters.
    double pump_shift_m() const;

private:
    double power_;
    std::array<LorentzianLine, 3> hot_;
    std::array<LorentzianLine, 3> cold_;
};

/// FWHM in wavelength, lambda / Q.
Wavelength resonance_fwhm(Wavelength lambda0, double q);

/// Free spectral range lambda^2 / (n_g L).
Wavelength fsr(Wavelength lambda0, double group_index, double length_m);

HotRingState hot_state(const RingParams& ring, const ThermalNonlinearParams& tn, double power_w);

inline HotRingState cold_state(const RingParams& ring) {
    return hot_state(ring, ThermalNonlinearParams{}, 0.0);
}

/// Intracavity field enhancement, normalised to 1 on the hot resonance peak.
cdouble field_enhancement(double omega, Resonance which, const HotRingState& hot);

/// Power transmission Input -> Through or Input -> Drop near the closest
/// resonance. The drop peak drops as (Gamma0/Gamma)^2 when TPA adds loss.
double port_transmission(double omega, Port port, const HotRingState& hot, const RingParams& ring);

/// Shift signal and idler symmetrically in frequency so that
/// w_s + w_i = 2 w_p while keeping w_s - w_i.
RingParams energy_matched(const RingParams& ring);

/// Thermo-optic coefficient that redshifts the pump resonance by
/// `linewidths` cold FWHMs at `power_w`.
double calibrate_thermal_shift(const RingParams& ring, double power_w, double linewidths);

}  // namespace ringlase
