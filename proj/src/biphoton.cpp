#include "ringlase/biphoton.hpp"

#include <algorithm>
#include <cmath>

#include "ringlase/errors.hpp"
#include "ringlase/parallel.hpp"

namespace ringlase {

JsaKernel::JsaKernel(const PumpSpectrum& pump, const HotRingState& hot)
    : sum_first_(2.0 * pump.first),
      spacing_(pump.spacing),
      signal_(hot.line(Resonance::signal)),
      idler_(hot.line(Resonance::idler)) {
    const std::size_t n = pump.size();
    if (n == 0) throw DomainError("empty pump spectrum");
    std::vector<cdouble> b(n);
    const auto& pline = hot.line(Resonance::pump);
    for (std::size_t m = 0; m < n; ++m) b[m] = pump.amplitudes[m] * lorentzian_amplitude(pump.frequency(m), pline);
    comb_.assign(2 * n - 1, cdouble{});
    for (std::size_t m = 0; m < n; ++m) {
        if (b[m] == cdouble{}) continue;
        for (std::size_t k = 0; k < n; ++k) comb_[m + k] += b[m] * b[k];
    }
}

cdouble JsaKernel::operator()(double omega_s, double omega_i, double idler_cell) const {
    // comb line n stands for sum frequencies [n - 1/2, n + 1/2) in units of the spacing
    const double total = omega_s + omega_i;
    const double lo = (total - 0.5 * idler_cell - sum_first_) / spacing_;
    const double hi = (total + 0.5 * idler_cell - sum_first_) / spacing_;
    const auto last = static_cast<double>(comb_.size()) - 1.0;
    const double n_lo = std::max(0.0, std::floor(lo + 0.5));
    const double n_hi = std::min(last, std::ceil(hi - 0.5));
    cdouble sum{};
    for (double n = n_lo; n <= n_hi; n += 1.0) {
        const double w = std::min(n + 0.5, hi) - std::max(n - 0.5, lo);
        if (w > 0.0) sum += comb_[static_cast<std::size_t>(n)] * w;
    }
    if (sum == cdouble{}) return sum;
    return sum * (spacing_ / idler_cell) * lorentzian_amplitude(omega_s, signal_) *
           lorentzian_amplitude(omega_i, idler_);
}

SpectralGrid signal_grid(const HotRingState& hot, double step_pm, std::size_t n_points) {
    return make_grid_pm(AngularFrequency(hot.line(Resonance::signal).center()), step_pm, n_points);
}

SpectralGrid idler_grid(const HotRingState& hot, double step_pm, std::size_t n_points) {
    return make_grid_pm(AngularFrequency(hot.line(Resonance::idler).center()), step_pm, n_points);
}

namespace {

double peak_field(const SpectralGrid& g, const LorentzianLine& line) {
    double best = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) best = std::max(best, lorentzian_power(g[k], line));
    return std::sqrt(best);
}

void check_overlap(const HotRingState& hot, const SpectralGrid& signal, const SpectralGrid& idler) {
    if (peak_field(signal, hot.line(Resonance::signal)) < 1e-3)
        throw ConfigError("signal grid does not overlap the signal resonance");
    if (peak_field(idler, hot.line(Resonance::idler)) < 1e-3)
        throw ConfigError("idler grid does not overlap the idler resonance");
}

}  // namespace

JointSpectralAmplitude joint_spectral_amplitude(const PumpSpectrum& pump, const HotRingState& hot,
                                                const SpectralGrid& signal, const SpectralGrid& idler,
                                                bool normalize) {
    check_overlap(hot, signal, idler);
    const JsaKernel kernel(pump, hot);
    JointSpectralAmplitude out{signal, idler, Eigen::MatrixXcd(signal.size(), idler.size()), false};
    const double cell = idler.step();
    parallel_for(signal.size(), [&](std::size_t r) {
        for (std::size_t c = 0; c < idler.size(); ++c)
            out.amplitudes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = kernel(signal[r], idler[c], cell);
    });
    if (normalize) {
        const double mass = out.amplitudes.squaredNorm() * out.cell_area();
        if (!(mass > 0.0)) throw ConfigError("pump sum frequencies miss the signal/idler grids");
        out.amplitudes /= std::sqrt(mass);
        out.normalized = true;
    }
    return out;
}

Eigen::MatrixXd jsd(const JointSpectralAmplitude& jsa) {
    Eigen::MatrixXd d = jsa.amplitudes.cwiseAbs2();
    const double mass = d.sum() * jsa.cell_area();
    if (!(mass > 0.0)) throw DomainError("all-zero joint spectral amplitude");
    return d / mass;
}

std::vector<double> stimulated_idler_spectrum(double seed_omega, const PumpSpectrum& pump,
                                              const HotRingState& hot, const SpectralGrid& signal,
                                              const SpectralGrid& idler) {
    if (!signal.contains(seed_omega)) throw DomainError("seed outside the signal grid");
    check_overlap(hot, signal, idler);
    const JsaKernel kernel(pump, hot);
    std::vector<double> out(idler.size());
    for (std::size_t c = 0; c < idler.size(); ++c) out[c] = std::norm(kernel(seed_omega, idler[c], idler.step()));
    return out;
}

PumpSpectrum single_mode_pump(double omega, double power_w, double spacing) {
    if (!(power_w > 0.0) || !(spacing > 0.0)) throw DomainError("single-mode pump needs power and spacing > 0");
    PumpSpectrum p;
    p.first = omega;
    p.spacing = spacing;
    p.amplitudes = {cdouble(std::sqrt(power_w / spacing), 0.0)};
    return p;
}

double pump_overlap(const PumpSpectrum& pump, const HotRingState& hot) {
    const auto& line = hot.line(Resonance::pump);
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < pump.size(); ++m) {
        const double w = std::norm(pump.amplitudes[m]);
        num += w * lorentzian_power(pump.frequency(m), line);
        den += w;
    }
    if (!(den > 0.0)) return 0.0;
    return (num / den) / hot.broadening();
}

double pair_generation_rate(const LasingState& state, const PumpSpectrum& pump, double kappa) {
    if (!state.above_threshold || !(state.power_w > 0.0)) return 0.0;
    const double p = state.power_w * pump_overlap(pump, state.hot);
    return kappa * p * p;
}

}  // namespace ringlase
