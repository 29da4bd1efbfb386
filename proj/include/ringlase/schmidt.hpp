#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ringlase/biphoton.hpp"

namespace ringlase {

/// Schmidt coefficients, descending, summing to 1.
struct SchmidtSpectrum {
    std::vector<double> coefficients;
};

/// SVD of phi * sqrt(cell area). Coefficients below `truncation` times the
/// leading one are dropped and the rest renormalized.
SchmidtSpectrum schmidt_decompose(const Eigen::MatrixXcd& amplitudes, double cell_area,
                                  double truncation = 1e-12);
SchmidtSpectrum schmidt_decompose(const JointSpectralAmplitude& jsa, double truncation = 1e-12);

double schmidt_number(const SchmidtSpectrum& s);

/// Bits. 0 log 0 = 0.
double entanglement_entropy(const SchmidtSpectrum& s);

}  // namespace ringlase
