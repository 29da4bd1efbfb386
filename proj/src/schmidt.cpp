#include "ringlase/schmidt.hpp"

#include <cmath>

#include "ringlase/errors.hpp"

namespace ringlase {

SchmidtSpectrum schmidt_decompose(const Eigen::MatrixXcd& amplitudes, double cell_area, double truncation) {
    if (!(cell_area > 0.0)) throw DomainError("cell area must be > 0");
    if (amplitudes.size() == 0 || !(amplitudes.cwiseAbs().maxCoeff() > 0.0))
        throw DomainError("all-zero amplitude matrix");
    const Eigen::MatrixXcd weighted = amplitudes * std::sqrt(cell_area);
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);
    const Eigen::VectorXd sigma = svd.singularValues();

    SchmidtSpectrum out;
    const double lead = sigma(0) * sigma(0);
    double total = 0.0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        const double l = sigma(k) * sigma(k);
        if (l < truncation * lead) break;
        out.coefficients.push_back(l);
        total += l;
    }
    for (auto& l : out.coefficients) l /= total;
    return out;
}

SchmidtSpectrum schmidt_decompose(const JointSpectralAmplitude& jsa, double truncation) {
    return schmidt_decompose(jsa.amplitudes, jsa.cell_area(), truncation);
}

double schmidt_number(const SchmidtSpectrum& s) {
    double purity = 0.0;
    for (double l : s.coefficients) purity += l * l;
    if (!(purity > 0.0)) throw DomainError("empty Schmidt spectrum");
    return 1.0 / purity;
}

double entanglement_entropy(const SchmidtSpectrum& s) {
    double h = 0.0;
    for (double l : s.coefficients)
        if (l > 0.0) h -= l * std::log2(l);
    return h;
}

}  // namespace ringlase
