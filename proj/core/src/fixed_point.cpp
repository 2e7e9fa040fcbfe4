#include "levylab/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include "levylab/error.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/special.hpp"

namespace levylab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kLinearCut = 1e-7;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
}

double min_real(const HomogeneousFn& f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : f.values()) m = std::min(m, v.real());
  return m;
}

// Evaluates body(j) for every j, rethrowing the first exception after the loop.
template <class Body>
void for_each_index(std::size_t n, Body body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
    try {
      body(static_cast<std::size_t>(j));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

QuadratureConfig coarsened(const QuadratureConfig& q) {
  QuadratureConfig c = q;
  c.theta_level = std::max(1, q.theta_level - 1);
  c.psi_level = std::max(1, q.psi_level - 1);
  c.y_nodes = std::max(8, 2 * q.y_nodes / 3);
  c.table_points = std::max(16, q.table_points / 2);
  c.laplace.gauss_nodes = std::max(8, q.laplace.gauss_nodes - 2);
  c.estimate_error = false;
  return c;
}

QuadratureConfig refined(const QuadratureConfig& q) {
  QuadratureConfig c = q;
  c.theta_level = q.theta_level + 1;
  c.psi_level = q.psi_level + 1;
  c.y_nodes = 3 * q.y_nodes / 2;
  c.table_points = 2 * q.table_points;
  c.laplace.gauss_nodes = q.laplace.gauss_nodes + 4;
  c.laplace.geometric_levels = q.laplace.geometric_levels + 2;
  return c;
}

DiagonalProfile::DiagonalProfile(int points, const std::function<cplx(double)>& fn) : points_(points) {
  if (points < 4) throw DomainError("profile needs at least 4 points per half");
  left_.resize(static_cast<std::size_t>(points) + 1);
  right_.resize(static_cast<std::size_t>(points) + 1);
  const double q = kHalfPi / 2.0;
  left_[0] = right_[0] = fn(q);
  std::vector<double> offsets(static_cast<std::size_t>(points) + 1);
  for (int i = 1; i <= points; ++i) {
    const double s = static_cast<double>(i) / points;
    offsets[static_cast<std::size_t>(i)] = q * s * s * s;
  }
  offsets.back() = q;
  for_each_index(2 * static_cast<std::size_t>(points), [&](std::size_t k) {
    const std::size_t i = k / 2 + 1;
    if (k % 2 == 0) {
      left_[i] = fn(i == offsets.size() - 1 ? 0.0 : q - offsets[i]);
    } else {
      right_[i] = fn(i == offsets.size() - 1 ? kHalfPi : q + offsets[i]);
    }
  });
}

cplx DiagonalProfile::operator()(double psi) const {
  const double q = kHalfPi / 2.0;
  const double off = psi - q;
  const auto& side = off < 0.0 ? left_ : right_;
  const double pos = std::cbrt(std::min(1.0, std::abs(off) / q)) * points_;
  const int i0 = std::clamp(static_cast<int>(pos) - 1, 0, points_ - 3);
  const double t = pos - i0;  // nodes at t = 0, 1, 2, 3
  const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  const auto i = static_cast<std::size_t>(i0);
  return l0 * side[i] + l1 * side[i + 1] + l2 * side[i + 2] + l3 * side[i + 3];
}

DifferenceTransform::DifferenceTransform(double alpha, const QuadratureConfig& q)
    : alpha_(alpha), beta_(alpha / 2.0), theta_level_(q.theta_level) {
  require_alpha(alpha);
  const double beta = beta_;
  theta_rule_ = tanh_sinh_for_singularity(q.theta_level, 1.0 - beta);
  psi_rule_ = tanh_sinh_for_singularity(q.psi_level, std::max(beta, 1.0 - 2.0 * beta));
  const double two_beta = std::pow(2.0, beta);
  // y = v^k / 2 on [0,1/2] with k = 1/(1-β) flattens y^{-β-1} times an O(y) difference
  const double k = 1.0 / (1.0 - beta);
  const GaussRule& g = gauss_legendre(q.y_nodes);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = g.x[i];
    y_inner_.push_back(0.5 * std::pow(v, k));
    w_inner_.push_back(g.w[i] * two_beta * k * std::pow(v, -k * beta - 1.0));
    // y = v^{-1/β} / 2 on [1/2,∞) turns y^{-β-1} dy into a constant multiple of dv
    y_outer_.push_back(0.5 * std::pow(v, -1.0 / beta));
    w_outer_.push_back(g.w[i] * two_beta / beta);
  }
  outer_constant_ = two_beta / beta;
}

double DifferenceTransform::remainder(double c) const {
  const double e = -beta_ / 2.0;
  double acc = outer_constant_;
  for (std::size_t j = 0; j < y_inner_.size(); ++j) {
    const double y = y_inner_[j];
    // 1 - (1+t)^e without cancellation
    acc -= w_inner_[j] * std::expm1(e * std::log1p(y * (2.0 * c + y)));
  }
  for (std::size_t j = 0; j < y_outer_.size(); ++j) {
    const double y = y_outer_[j];
    acc -= w_outer_[j] * std::pow(1.0 + y * (2.0 * c + y), e);
  }
  return acc;
}

cplx DifferenceTransform::inner(double theta, double phi, cplx q_theta, const DiagonalProfile& Q) const {
  const double d = std::abs(phi - theta);
  if (d < 1e-14) return 0.0;
  const double dir = phi > theta ? 1.0 : -1.0;
  const double beta = beta_;
  const double sd = std::pow(std::sin(d), 1.0 - beta);
  // x = |ψ - θ| in (0, d), split where ψ crosses the diagonal
  const double diag = std::abs(kHalfPi / 2.0 - theta);
  double breaks[3] = {0.0, d, d};
  int panels = 1;
  if ((kHalfPi / 2.0 - theta) * dir > 0.0 && diag < d && diag > 1e-12 * d && d - diag > 1e-12 * d) {
    breaks[1] = diag;
    panels = 2;
  }
  const cplx cut_diff = d > kLinearCut ? q_theta - Q(theta + dir * kLinearCut) : cplx(0.0);
  cplx acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double len = b - a;
    for (std::size_t i = 0; i < psi_rule_.size(); ++i) {
      const double x = a + len * psi_rule_.from_lo[i];
      const double rest = (d - b) + len * psi_rule_.from_hi[i];
      if (!(x > 0.0) || !(rest > 0.0)) continue;
      const double w = len * psi_rule_.w[i] * std::pow(std::sin(x), -beta - 1.0) *
                       std::pow(std::sin(rest), 2.0 * beta - 1.0);
      // below x_cut the difference is linearized: rounding would otherwise be amplified by x^{-β-1}
      const cplx diff = x >= kLinearCut ? q_theta - Q(theta + dir * x) : cut_diff * (x / kLinearCut);
      acc += w * diff;
    }
  }
  return sd * acc;
}

cplx DifferenceTransform::apply(double phi, const DiagonalProfile& Q) const {
  const double beta = beta_;
  double breaks[4] = {0.0, kHalfPi / 2.0, phi, kHalfPi};
  std::sort(breaks, breaks + 4);
  cplx total = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double len = b - a;
    if (len < 1e-14) continue;
    for (std::size_t i = 0; i < theta_rule_.size(); ++i) {
      const double lo = a + len * theta_rule_.from_lo[i];      // θ
      const double hi = (kHalfPi - b) + len * theta_rule_.from_hi[i];  // π/2 - θ
      const double theta = lo <= kHalfPi / 2.0 ? lo : kHalfPi - hi;
      const double s2 = lo <= kHalfPi / 2.0 ? std::sin(2.0 * lo) : std::sin(2.0 * hi);
      if (!(s2 > 0.0)) continue;
      const double w = len * theta_rule_.w[i] * std::pow(s2, beta - 1.0);
      if (!(w > 0.0) || !std::isfinite(w)) continue;
      const cplx q0 = Q(theta);
      total += w * (q0 * remainder(std::cos(theta - phi)) + inner(theta, phi, q0, Q));
    }
  }
  return total;
}

namespace {

void check_F_domain(cplx h, const HomogeneousFn& g) {
  if (h.real() < 0.0) throw DomainError("F_h needs Re h >= 0");
  if (!(h.real() > 0.0) && !(min_real(g) > 0.0)) {
    throw DomainError("F_h needs Re h > 0 or Re g > 0 on the grid");
  }
}

// F_h(g) at the unit vectors e^{iφ}, φ in `phis`.
std::vector<cplx> F_values(cplx h, const HomogeneousFn& g, const std::vector<double>& phis, const QuadratureConfig& q) {
  const double alpha = 2.0 * g.beta();
  const double beta = g.beta();
  const DifferenceTransform tr(alpha, q);
  const LaplaceRule rule = q.laplace;
  // q(v) = Ψ_β(h.v, g(v)) is homogeneous of degree -β, so its angular profile suffices
  const DiagonalProfile profile(q.table_points, [&](double psi) {
    return laplace_stable(beta, dot(h, std::polar(1.0, psi)), g.at_angle(psi), alpha, rule);
  });
  std::vector<cplx> out(phis.size());
  for_each_index(phis.size(), [&](std::size_t j) { out[j] = tr.apply(phis[j], profile); });
  return out;
}

std::vector<cplx> F_with_report(cplx h, const HomogeneousFn& g, const std::vector<double>& phis,
                                const std::vector<double>& report_angles, const QuadratureConfig& q,
                                QuadratureReport* report) {
  std::vector<cplx> fine = F_values(h, g, phis, q);
  if (!q.estimate_error && report == nullptr) return fine;
  const std::vector<cplx> coarse = F_values(h, g, phis, coarsened(q));
  QuadratureReport r;
  for (std::size_t j = 0; j < fine.size(); ++j) {
    const double e = std::abs(fine[j] - coarse[j]);
    if (e > r.error_estimate) {
      r.error_estimate = e;
      r.worst_angle = report_angles[j];
    }
  }
  if (report) *report = r;
  if (q.estimate_error && r.error_estimate > q.tolerance) {
    throw QuadratureError("F_h quadrature error estimate " + std::to_string(r.error_estimate) +
                              " above tolerance at angle " + std::to_string(r.worst_angle),
                          r.worst_angle, r.error_estimate);
  }
  return fine;
}

}  // namespace

HomogeneousFn eval_F(cplx h, const HomogeneousFn& g, const QuadratureConfig& q, QuadratureReport* report) {
  check_F_domain(h, g);
  return HomogeneousFn(g.beta(), g.thetas(), F_with_report(h, g, g.thetas(), g.thetas(), q, report));
}

HomogeneousFn eval_G(cplx z, const HomogeneousFn& f, const QuadratureConfig& q, QuadratureReport* report) {
  const cplx h = cplx(0.0, -1.0) * z;
  check_F_domain(h, f);
  // ǔ for u = e^{iθ_j} is e^{i(π/2 - θ_j)}
  std::vector<double> phis(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) phis[j] = kHalfPi - f.theta(j);
  std::vector<cplx> values = F_with_report(h, f, phis, f.thetas(), q, report);
  const double c = c_alpha(2.0 * f.beta());
  for (auto& v : values) v *= c;
  return HomogeneousFn(f.beta(), f.thetas(), std::move(values));
}

HomogeneousFn apply_K(const HomogeneousFn& f, const QuadratureConfig& q) {
  const double alpha = 2.0 * f.beta();
  const DifferenceTransform tr(alpha, q);
  const DiagonalProfile profile(q.table_points, [&](double psi) {
    return std::pow(std::cos(psi) + std::sin(psi), -alpha) * f.at_angle(kHalfPi - psi);
  });
  const cplx c = -c_prime_alpha(cplx(alpha, 0.0));
  std::vector<cplx> values(f.size());
  for_each_index(f.size(), [&](std::size_t j) { values[j] = c * tr.apply(f.theta(j), profile); });
  return HomogeneousFn(f.beta(), f.thetas(), std::move(values));
}

HomogeneousFn gamma_zero(double alpha, const std::vector<double>& thetas) {
  require_alpha(alpha);
  const double a0 = a0_alpha(alpha);
  return HomogeneousFn::sample(alpha / 2.0, thetas, [&](double t) {
    return cplx(a0 * std::pow(std::cos(t) + std::sin(t), alpha / 2.0), 0.0);
  });
}

double pure_imaginary_amplitude(double eta, double alpha, const LaplaceRule& rule) {
  require_alpha(alpha);
  if (eta < 0.0) throw DomainError("pure imaginary amplitude needs eta >= 0");
  const double a0 = a0_alpha(alpha);
  if (eta == 0.0) return a0;
  const double beta = alpha / 2.0;
  const double c = std::tgamma(1.0 - beta) / std::tgamma(beta);
  auto phi = [&](double a) { return a - c * laplace_stable(beta, eta, a, alpha, rule).real(); };
  double hi = a0;
  double lo = 1e-3 * std::min(a0, std::tgamma(1.0 - beta) * std::pow(eta, -beta));
  while (phi(lo) > 0.0) lo *= 1e-3;
  if (phi(hi) < 0.0) return hi;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = std::sqrt(lo * hi);
    (phi(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

HomogeneousFn gamma_pure_imaginary(double eta, double alpha, const std::vector<double>& thetas,
                                   const LaplaceRule& rule) {
  const double a = pure_imaginary_amplitude(eta, alpha, rule);
  return HomogeneousFn::sample(alpha / 2.0, thetas, [&](double t) {
    return cplx(a * std::pow(std::cos(t) + std::sin(t), alpha / 2.0), 0.0);
  });
}

namespace {

Eigen::VectorXcd as_vector(const HomogeneousFn& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t j = 0; j < f.size(); ++j) v(static_cast<Eigen::Index>(j)) = f.value(j);
  return v;
}

HomogeneousFn from_vector(const HomogeneousFn& like, const Eigen::VectorXcd& v) {
  std::vector<cplx> values(like.size());
  for (std::size_t j = 0; j < like.size(); ++j) values[j] = v(static_cast<Eigen::Index>(j));
  return HomogeneousFn(like.beta(), like.thetas(), std::move(values));
}

}  // namespace

FixedPointSolution solve_gamma_star(cplx z, double alpha, const SolverConfig& cfg, const HomogeneousFn* initial) {
  require_alpha(alpha);
  if (std::abs(z) > cfg.max_abs_z) {
    throw DomainError("|z| = " + std::to_string(std::abs(z)) + " exceeds the solver guard " +
                      std::to_string(cfg.max_abs_z));
  }
  if (z.imag() < 0.0 || (z.imag() == 0.0 && z != 0.0)) throw DomainError("solver needs Im z > 0 or z = 0");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw DomainError("damping must lie in (0,1]");

  FixedPointSolution sol;
  sol.z = z;
  sol.alpha = alpha;
  HomogeneousFn f = initial ? *initial
                            : gamma_pure_imaginary(z.imag(), alpha, angular_grid(cfg.grid_size),
                                                   cfg.quadrature.laplace);
  if (std::abs(f.beta() - alpha / 2.0) > 1e-15) throw DomainError("initial guess has the wrong degree");
  HomogeneousFn gf = eval_G(z, f, cfg.quadrature);
  double res = sup_distance(f, gf);
  sol.residual_history.push_back(res);

  double s = cfg.damping;
  int accepted_in_row = 0;
  double best = res;
  int best_iteration = 0;
  std::deque<Eigen::VectorXcd> xs, rs;  // Anderson history
  int it = 0;
  while (res > cfg.tolerance) {
    if (it >= cfg.max_iterations) {
      throw ConvergenceError("fixed point iteration cap reached, residual " + std::to_string(res));
    }
    ++it;
    const Eigen::VectorXcd x = as_vector(f);
    const Eigen::VectorXcd r = as_vector(gf) - x;
    Eigen::VectorXcd next = x + s * r;
    if (cfg.anderson && !xs.empty()) {
      const auto m = static_cast<Eigen::Index>(xs.size());
      Eigen::MatrixXcd dx(x.size(), m), dr(x.size(), m);
      for (Eigen::Index k = 0; k < m; ++k) {
        dx.col(k) = x - xs[static_cast<std::size_t>(k)];
        dr.col(k) = r - rs[static_cast<std::size_t>(k)];
      }
      const Eigen::VectorXcd g = dr.colPivHouseholderQr().solve(r);
      if (g.allFinite()) next = x + s * r - (dx + s * dr) * g;
    }
    HomogeneousFn trial = from_vector(f, next);
    bool ok = min_real(trial) >= cfg.min_real_part;
    HomogeneousFn gt;
    double rt = std::numeric_limits<double>::infinity();
    if (ok) {
      gt = eval_G(z, trial, cfg.quadrature);
      rt = sup_distance(trial, gt);
    }
    if (!ok || rt > res) {
      xs.clear();
      rs.clear();
      if (s / 2.0 < cfg.min_damping) {
        if (!ok) throw ConvergenceError("iterate left the cone Re f > 0");
        // accept the step anyway: the smallest damping did not reduce the residual
      } else {
        s /= 2.0;
        accepted_in_row = 0;
        sol.residual_history.push_back(res);
        continue;
      }
    }
    if (cfg.anderson) {
      xs.push_front(x);
      rs.push_front(r);
      while (static_cast<int>(xs.size()) > cfg.anderson_depth) {
        xs.pop_back();
        rs.pop_back();
      }
    }
    f = std::move(trial);
    gf = std::move(gt);
    res = rt;
    sol.residual_history.push_back(res);
    if (min_real(f) < cfg.min_real_part) throw ConvergenceError("iterate left the cone Re f > 0");
    if (res < best) {
      best = res;
      best_iteration = it;
    } else if (it - best_iteration > cfg.stagnation_window) {
      throw ConvergenceError("fixed point residual stagnated at " + std::to_string(best));
    }
    if (++accepted_in_row >= 5 && s < cfg.damping) {
      s = std::min(cfg.damping, 2.0 * s);
      accepted_in_row = 0;
    }
  }
  sol.gamma = std::move(f);
  sol.residual = res;
  sol.iterations = it;
  sol.damping = s;
  return sol;
}

std::vector<FixedPointSolution> continuation(const std::vector<cplx>& path, double alpha, const SolverConfig& cfg) {
  std::vector<FixedPointSolution> out;
  out.reserve(path.size());
  for (const auto& z : path) {
    out.push_back(solve_gamma_star(z, alpha, cfg, out.empty() ? nullptr : &out.back().gamma));
  }
  return out;
}

cplx r_p(cplx z, const HomogeneousFn& f, double p, const QuadratureConfig& q) {
  if (!(p > 0.0)) throw DomainError("r_p needs p > 0");
  const cplx h = cplx(0.0, -1.0) * z;
  if (!(h.real() > 0.0) && !(min_real(f) > 0.0)) throw DomainError("r_p needs Im z > 0 or Re f > 0");
  const double alpha = 2.0 * f.beta();
  const double half = p / 2.0;
  // two halves meeting at the diagonal, where the integrand has its ridge
  const TanhSinhRule ts = tanh_sinh_for_singularity(q.theta_level + 2, std::max(0.0, 1.0 - half));
  const double quarter = kHalfPi / 2.0;
  cplx acc = 0.0;
  for (int side = 0; side < 2; ++side) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      // distance to the nearer end of [0, π/2]
      const double edge = quarter * (side == 0 ? ts.from_lo[i] : ts.from_hi[i]);
      const double theta = side == 0 ? edge : kHalfPi - edge;
      const double s2 = std::sin(2.0 * edge);
      if (!(s2 > 0.0)) continue;
      const double w = quarter * ts.w[i] * std::pow(s2, half - 1.0);
      if (!(w > 0.0) || !std::isfinite(w)) continue;
      acc += w * laplace_stable(p, dot(h, std::polar(1.0, theta)), f.at_angle(theta), alpha, q.laplace);
    }
  }
  const double g = std::tgamma(half);
  return std::pow(2.0, 1.0 - half) / (g * g) * acc;
}

cplx s_p(cplx z, cplx x, double p, double alpha, const LaplaceRule& rule) {
  if (!(p > 0.0)) throw DomainError("s_p needs p > 0");
  const cplx h = cplx(0.0, -1.0) * z;
  if (!(h.real() > 0.0) && !(x.real() > 0.0)) throw DomainError("s_p needs Im z > 0 or Re x > 0");
  return laplace_stable(p, h, x, alpha, rule) / std::tgamma(p);
}

std::pair<double, double> richardson(const std::vector<double>& etas, const std::vector<double>& values) {
  if (etas.empty() || etas.size() != values.size()) throw DomainError("richardson needs matching rungs");
  const std::size_t n = etas.size();
  if (n == 1) return {values[0], std::numeric_limits<double>::quiet_NaN()};
  auto extrapolate = [&](std::size_t i) {
    return (etas[i] * values[i + 1] - etas[i + 1] * values[i]) / (etas[i] - etas[i + 1]);
  };
  const double f0 = extrapolate(n - 2);
  const double prev = n >= 3 ? extrapolate(n - 3) : values[n - 1];
  return {f0, std::abs(f0 - prev)};
}

std::vector<DensityPoint> spectral_density(const std::vector<double>& energies, double alpha, const DensityConfig& cfg) {
  require_alpha(alpha);
  if (cfg.eta_ladder.empty()) throw DomainError("density needs a non-empty eta ladder");
  for (std::size_t i = 0; i < cfg.eta_ladder.size(); ++i) {
    if (!(cfg.eta_ladder[i] > 0.0) || (i > 0 && !(cfg.eta_ladder[i] < cfg.eta_ladder[i - 1]))) {
      throw DomainError("eta ladder must be positive and decreasing");
    }
  }
  for (double E : energies) {
    if (!(std::abs(E) <= cfg.max_abs_energy)) {
      throw DomainError("energy " + std::to_string(E) + " outside the density guard");
    }
  }
  SolverConfig solver = cfg.solver;
  solver.max_abs_z = std::numeric_limits<double>::infinity();
  const auto thetas = angular_grid(solver.grid_size);
  const std::size_t rungs = cfg.eta_ladder.size();

  std::vector<DensityPoint> out(energies.size());
  // values per distinct energy, continued outward from 0 separately on each side
  std::map<double, std::vector<double>> cache;
  for (int side : {1, -1}) {
    std::vector<double> targets;
    for (double E : energies) {
      if ((side > 0 && E >= 0.0) || (side < 0 && E < 0.0)) targets.push_back(std::abs(E));
    }
    if (targets.empty()) continue;
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    std::vector<HomogeneousFn> current;
    for (double eta : cfg.eta_ladder) current.push_back(gamma_pure_imaginary(eta, alpha, thetas, solver.quadrature.laplace));
    double position = 0.0;
    for (double target : targets) {
      // intermediate continuation points
      while (position < target) {
        position = std::min(target, std::max(position + cfg.energy_step, position * (1.0 + cfg.relative_step)));
        for (std::size_t k = 0; k < rungs; ++k) {
          const cplx z(side * position, cfg.eta_ladder[k]);
          current[k] = solve_gamma_star(z, alpha, solver, &current[k]).gamma;
        }
      }
      if (target == 0.0) {
        for (std::size_t k = 0; k < rungs; ++k) {
          current[k] = solve_gamma_star(cplx(0.0, cfg.eta_ladder[k]), alpha, solver, &current[k]).gamma;
        }
      }
      std::vector<double> values(rungs);
      for (std::size_t k = 0; k < rungs; ++k) {
        const cplx z(side * target, cfg.eta_ladder[k]);
        values[k] = s_p(z, current[k].value(0), 1.0, alpha, solver.quadrature.laplace).real() / std::numbers::pi;
      }
      cache[side * target] = values;
    }
  }
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double key = energies[i] < 0.0 ? energies[i] : std::abs(energies[i]);
    DensityPoint& pt = out[i];
    pt.E = energies[i];
    pt.rung_values = cache.at(key);
    pt.eta_used = cfg.eta_ladder.back();
    std::tie(pt.f_star, pt.extrapolation_error) = richardson(cfg.eta_ladder, pt.rung_values);
  }
  return out;
}

MassEstimate density_mass(double alpha, const DensityConfig& cfg, double window, int nodes) {
  if (!(window > 2.0)) throw DomainError("mass window must exceed 2");
  const GaussRule& g = gauss_legendre(nodes);
  std::vector<double> energies, weights;
  for (std::size_t i = 0; i < g.size(); ++i) {
    energies.push_back(2.0 * g.x[i]);
    weights.push_back(2.0 * g.w[i]);
  }
  const double span = std::log(window / 2.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double E = 2.0 * std::exp(span * g.x[i]);
    energies.push_back(E);
    weights.push_back(span * g.w[i] * E);
  }
  MassEstimate m;
  m.points = spectral_density(energies, alpha, cfg);
  for (std::size_t i = 0; i < energies.size(); ++i) m.window += 2.0 * weights[i] * m.points[i].f_star;
  m.tail = std::pow(window, -alpha);
  m.mass = m.window + m.tail;
  return m;
}

}  // namespace levylab
