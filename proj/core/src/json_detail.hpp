#pragma once

#include <json.hpp>

#include "levylab/fixed_point.hpp"

namespace levylab::detail {

inline nlohmann::json quadrature_json(const QuadratureConfig& q) {
  return {{"theta_level", q.theta_level},
          {"psi_level", q.psi_level},
          {"y_nodes", q.y_nodes},
          {"table_points", q.table_points},
          {"laplace_gauss_nodes", q.laplace.gauss_nodes},
          {"laplace_geometric_levels", q.laplace.geometric_levels},
          {"laplace_cutoff", q.laplace.cutoff},
          {"laplace_max_phase", q.laplace.max_phase}};
}

inline QuadratureConfig quadrature_from(const nlohmann::json& j) {
  QuadratureConfig q;
  q.theta_level = j.value("theta_level", q.theta_level);
  q.psi_level = j.value("psi_level", q.psi_level);
  q.y_nodes = j.value("y_nodes", q.y_nodes);
  q.table_points = j.value("table_points", q.table_points);
  q.laplace.gauss_nodes = j.value("laplace_gauss_nodes", q.laplace.gauss_nodes);
  q.laplace.geometric_levels = j.value("laplace_geometric_levels", q.laplace.geometric_levels);
  q.laplace.cutoff = j.value("laplace_cutoff", q.laplace.cutoff);
  q.laplace.max_phase = j.value("laplace_max_phase", q.laplace.max_phase);
  return q;
}

}  // namespace levylab::detail
