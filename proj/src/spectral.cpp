#include "ringlase/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ringlase/errors.hpp"

namespace ringlase {

Wavelength::Wavelength(double meters) : m_(meters) {
    if (!(meters > 0.0) || !std::isfinite(meters))
        throw DomainError("wavelength must be positive and finite, got " + std::to_string(meters));
}

AngularFrequency::AngularFrequency(double rad_per_s) : w_(rad_per_s) {
    if (!(rad_per_s > 0.0) || !std::isfinite(rad_per_s))
        throw DomainError("angular frequency must be positive and finite, got " +
                          std::to_string(rad_per_s));
}

AngularFrequency wavelength_to_angular_frequency(Wavelength lambda) {
    return AngularFrequency(2.0 * kPi * kSpeedOfLight / lambda.meters());
}

Wavelength angular_frequency_to_wavelength(AngularFrequency omega) {
    return Wavelength(2.0 * kPi * kSpeedOfLight / omega.value());
}

double wavelength_span_to_angular(double dlambda_m, Wavelength center) {
    return 2.0 * kPi * kSpeedOfLight * dlambda_m / (center.meters() * center.meters());
}

double angular_span_to_wavelength(double domega, AngularFrequency center) {
    const double lambda = 2.0 * kPi * kSpeedOfLight / center.value();
    return domega * lambda * lambda / (2.0 * kPi * kSpeedOfLight);
}

SpectralGrid::SpectralGrid(double center, double span, std::size_t n_points)
    : center_(center), span_(span), n_(n_points), step_(0.0) {
    if (n_points < 2) throw DomainError("spectral grid needs at least 2 points");
    if (!(span > 0.0) || !std::isfinite(span)) throw DomainError("spectral grid span must be positive");
    if (!std::isfinite(center)) throw DomainError("spectral grid center must be finite");
    step_ = span_ / static_cast<double>(n_ - 1);
    const double scale = std::abs(center) + 0.5 * span;
    if (step_ <= 8.0 * std::numeric_limits<double>::epsilon() * scale)
        throw DomainError("spectral grid step below floating-point resolution");
}

std::vector<double> SpectralGrid::points() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = (*this)[i];
    return out;
}

SpectralGrid make_grid(double center, double span, std::size_t n_points) {
    return SpectralGrid(center, span, n_points);
}

SpectralGrid make_grid_pm(AngularFrequency center, double step_pm, std::size_t n_points) {
    if (!(step_pm > 0.0)) throw DomainError("grid step must be positive");
    if (n_points < 2) throw DomainError("spectral grid needs at least 2 points");
    const auto lambda = angular_frequency_to_wavelength(center);
    const double step = wavelength_span_to_angular(step_pm * 1e-12, lambda);
    return SpectralGrid(center.value(), step * static_cast<double>(n_points - 1), n_points);
}

LorentzianLine::LorentzianLine(double center, double fwhm) : center_(center), fwhm_(fwhm) {
    if (!(fwhm > 0.0) || !std::isfinite(fwhm)) throw DomainError("Lorentzian FWHM must be positive");
    if (!std::isfinite(center)) throw DomainError("Lorentzian center must be finite");
}

cdouble lorentzian_amplitude(double omega, const LorentzianLine& line) noexcept {
    const double half = 0.5 * line.fwhm();
    return half / cdouble(half, omega - line.center());
}

double lorentzian_power(double omega, const LorentzianLine& line) noexcept {
    const double x = 2.0 * (omega - line.center()) / line.fwhm();
    return 1.0 / (1.0 + x * x);
}

}  // namespace ringlase
