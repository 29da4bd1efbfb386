#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace ringlase {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPi = 3.14159265358979323846;

using cdouble = std::complex<double>;

/// Vacuum wavelength in meters. Always > 0.
class Wavelength {
public:
    explicit Wavelength(double meters);
    static Wavelength from_nm(double nm) { return Wavelength(nm * 1e-9); }

    double meters() const noexcept { return m_; }
    double nm() const noexcept { return m_ * 1e9; }
    double pm() const noexcept { return m_ * 1e12; }

    friend bool operator==(Wavelength a, Wavelength b) noexcept { return a.m_ == b.m_; }
    friend auto operator<=>(Wavelength a, Wavelength b) noexcept { return a.m_ <=> b.m_; }

private:
    double m_;
};

/// Angular frequency in rad/s. Always > 0.
class AngularFrequency {
public:
    explicit AngularFrequency(double rad_per_s);

    double value() const noexcept { return w_; }

    friend bool operator==(AngularFrequency a, AngularFrequency b) noexcept { return a.w_ == b.w_; }
    friend auto operator<=>(AngularFrequency a, AngularFrequency b) noexcept { return a.w_ <=> b.w_; }

private:
    double w_;
};

AngularFrequency wavelength_to_angular_frequency(Wavelength lambda);
Wavelength angular_frequency_to_wavelength(AngularFrequency omega);

/// Width in rad/s of a wavelength interval `dlambda` at `center`, first order.
double wavelength_span_to_angular(double dlambda_m, Wavelength center);
/// Inverse of wavelength_span_to_angular.
double angular_span_to_wavelength(double domega, AngularFrequency center);

/// Uniform grid in angular frequency. Points run from center - span/2 to
/// center + span/2 inclusive.
class SpectralGrid {
public:
    SpectralGrid(double center, double span, std::size_t n_points);

    double center() const noexcept { return center_; }
    double span() const noexcept { return span_; }
    std::size_t size() const noexcept { return n_; }
    double step() const noexcept { return step_; }
    double front() const noexcept { return center_ - 0.5 * span_; }
    double back() const noexcept { return center_ + 0.5 * span_; }
    double operator[](std::size_t i) const noexcept {
        return front() + static_cast<double>(i) * step_;
    }
    // endpoints accepted up to rounding of front() + i * step()
    bool contains(double omega) const noexcept {
        const double slack = 1e-9 * step_ + 8.0 * 2.220446049250313e-16 * (std::abs(center_) + span_);
        return omega >= front() - slack && omega <= back() + slack;
    }
    std::vector<double> points() const;

private:
    double center_;
    double span_;
    std::size_t n_;
    double step_;
};

/// Grid in rad/s. `center` may be any real (zero is allowed for offset grids).
SpectralGrid make_grid(double center, double span, std::size_t n_points);

/// Grid specified at the CLI in picometres; the pm -> rad/s conversion is
/// taken at the grid center.
SpectralGrid make_grid_pm(AngularFrequency center, double step_pm, std::size_t n_points);

/// Single-pole resonance: center and full width at half maximum, both rad/s.
class LorentzianLine {
public:
    LorentzianLine(double center, double fwhm);

    double center() const noexcept { return center_; }
    double fwhm() const noexcept { return fwhm_; }

private:
    double center_;
    double fwhm_;
};

/// F(w) = (G/2) / (G/2 + i(w - w0)). |F(w0)| = 1.
cdouble lorentzian_amplitude(double omega, const LorentzianLine& line) noexcept;

/// |F(w)|^2 without forming the complex value.
double lorentzian_power(double omega, const LorentzianLine& line) noexcept;

}  // namespace ringlase
