#include "ringlase/ring.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ringlase/errors.hpp"

namespace ringlase {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || std::isnan(v)) throw ConfigError(std::string(field) + ": must be > 0");
}

}  // namespace

Wavelength RingParams::center(Resonance r) const noexcept {
    switch (r) {
        case Resonance::pump: return lambda_pump;
        case Resonance::signal: return lambda_signal;
        case Resonance::idler: return lambda_idler;
    }
    return lambda_pump;
}

double RingParams::q(Resonance r) const noexcept {
    switch (r) {
        case Resonance::pump: return q_pump;
        case Resonance::signal: return q_signal;
        case Resonance::idler: return q_idler;
    }
    return q_pump;
}

void RingParams::validate() const {
    require_positive(length_m, "ring.length_um");
    require_positive(group_index, "ring.group_index");
    require_positive(q_pump, "ring.Q_pump");
    require_positive(q_signal, "ring.Q_signal");
    require_positive(q_idler, "ring.Q_idler");
    if (!(through_extinction_db >= 0.0)) throw ConfigError("ring.through_extinction_dB: must be >= 0");
    if (!(drop_loss_db >= 0.0)) throw ConfigError("ring.drop_loss_dB: must be >= 0");
    if (!(lambda_signal < lambda_pump && lambda_pump < lambda_idler))
        throw ConfigError("ring.lambda_*_nm: resonances must be ordered signal < pump < idler");

    const double two_fsr = 2.0 * fsr(lambda_pump, group_index, length_m).meters();
    const double blue = lambda_pump.meters() - lambda_signal.meters();
    const double red = lambda_idler.meters() - lambda_pump.meters();
    if (std::abs(blue - two_fsr) > 0.05 * two_fsr)
        throw ConfigError("ring.lambda_signal_nm: must sit two FSRs below the pump within 5%");
    if (std::abs(red - two_fsr) > 0.05 * two_fsr)
        throw ConfigError("ring.lambda_idler_nm: must sit two FSRs above the pump within 5%");
}

void ThermalNonlinearParams::validate() const {
    if (!(shift_m_per_w >= 0.0)) throw ConfigError("thermal.shift_pm_per_mW: must be >= 0");
    if (!(tpa_power_w > 0.0)) throw ConfigError("thermal.tpa_power_mW: must be > 0");
}

HotRingState::HotRingState(double power_w, std::array<LorentzianLine, 3> hot,
                           std::array<LorentzianLine, 3> cold)
    : power_(power_w), hot_(hot), cold_(cold) {}

double HotRingState::pump_shift_m() const {
    const auto i = static_cast<int>(Resonance::pump);
    const double hot_l = 2.0 * kPi * kSpeedOfLight / hot_[i].center();
    const double cold_l = 2.0 * kPi * kSpeedOfLight / cold_[i].center();
    return hot_l - cold_l;
}

Wavelength resonance_fwhm(Wavelength lambda0, double q) {
    if (!(q > 0.0)) throw DomainError("quality factor must be > 0");
    return Wavelength(lambda0.meters() / q);
}

Wavelength fsr(Wavelength lambda0, double group_index, double length_m) {
    if (!(group_index > 0.0) || !(length_m > 0.0))
        throw DomainError("group index and length must be > 0");
    return Wavelength(lambda0.meters() * lambda0.meters() / (group_index * length_m));
}

HotRingState hot_state(const RingParams& ring, const ThermalNonlinearParams& tn, double power_w) {
    if (!(power_w >= 0.0)) throw DomainError("ring input power must be >= 0");
    const double shift = tn.shift_m_per_w * power_w;
    const double scale = 1.0 + power_w / tn.tpa_power_w;

    std::array<LorentzianLine, 3> hot{LorentzianLine(1.0, 1.0), LorentzianLine(1.0, 1.0),
                                      LorentzianLine(1.0, 1.0)};
    std::array<LorentzianLine, 3> cold = hot;
    for (auto r : {Resonance::pump, Resonance::signal, Resonance::idler}) {
        const Wavelength l0 = ring.center(r);
        const double w0 = wavelength_to_angular_frequency(l0).value();
        const double g0 = w0 / ring.q(r);
        const double wh = wavelength_to_angular_frequency(Wavelength(l0.meters() + shift)).value();
        cold[static_cast<int>(r)] = LorentzianLine(w0, g0);
        hot[static_cast<int>(r)] = LorentzianLine(wh, g0 * scale);
    }
    return HotRingState(power_w, hot, cold);
}

cdouble field_enhancement(double omega, Resonance which, const HotRingState& hot) {
    return lorentzian_amplitude(omega, hot.line(which));
}

double port_transmission(double omega, Port port, const HotRingState& hot, const RingParams& ring) {
    Resonance nearest = Resonance::pump;
    double best = std::numeric_limits<double>::infinity();
    for (auto r : {Resonance::pump, Resonance::signal, Resonance::idler}) {
        const auto& l = hot.line(r);
        const double d = std::abs(omega - l.center()) / l.fwhm();
        if (d < best) {
            best = d;
            nearest = r;
        }
    }
    const double lineshape = lorentzian_power(omega, hot.line(nearest));
    if (port == Port::through) {
        const double floor = std::pow(10.0, -ring.through_extinction_db / 10.0);
        return 1.0 - (1.0 - floor) * lineshape;
    }
    const double peak = std::pow(10.0, -ring.drop_loss_db / 10.0);
    const double narrowing = hot.cold_line(nearest).fwhm() / hot.line(nearest).fwhm();
    return peak * narrowing * narrowing * lineshape;
}

RingParams energy_matched(const RingParams& ring) {
    const double wp = wavelength_to_angular_frequency(ring.lambda_pump).value();
    const double ws = wavelength_to_angular_frequency(ring.lambda_signal).value();
    const double wi = wavelength_to_angular_frequency(ring.lambda_idler).value();
    const double half_mismatch = 0.5 * (2.0 * wp - ws - wi);
    RingParams out = ring;
    out.lambda_signal = angular_frequency_to_wavelength(AngularFrequency(ws + half_mismatch));
    out.lambda_idler = angular_frequency_to_wavelength(AngularFrequency(wi + half_mismatch));
    return out;
}

double calibrate_thermal_shift(const RingParams& ring, double power_w, double linewidths) {
    if (!(power_w > 0.0)) throw DomainError("calibration power must be > 0");
    return linewidths * resonance_fwhm(ring.lambda_pump, ring.q_pump).meters() / power_w;
}

}  // namespace ringlase
