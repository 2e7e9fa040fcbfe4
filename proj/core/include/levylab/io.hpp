#pragma once

#include <string>
#include <vector>

#include "levylab/fixed_point.hpp"
#include "levylab/homogeneous.hpp"

namespace levylab {

/// {"beta": .., "thetas": [..], "values_re": [..], "values_im": [..]}
std::string homogeneous_to_json(const HomogeneousFn& f);
HomogeneousFn homogeneous_from_json(const std::string& text);

/// Checkpoint of a solve: the grid function plus z, α, residual, iteration count and
/// the quadrature configuration used.
void save_checkpoint(const FixedPointSolution& sol, const QuadratureConfig& q, const std::string& path);
FixedPointSolution load_checkpoint(const std::string& path, QuadratureConfig* q = nullptr);

/// Columns E,f_star,eta_used,extrapolation_error.
void write_density_csv(const std::vector<DensityPoint>& points, const std::string& path);
std::vector<DensityPoint> read_density_csv(const std::string& path);

}  // namespace levylab
