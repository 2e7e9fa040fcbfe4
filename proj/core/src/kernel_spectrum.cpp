#include "levylab/kernel_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "levylab/error.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/special.hpp"

namespace levylab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_alpha(cplx alpha) {
  if (!(alpha.real() > 0.0 && alpha.real() < 2.0)) throw DomainError("kernel needs Re alpha in (0,2)");
}

// k as a function of δ = |ψ - ω| and L, the distance from ψ to the end of [0, π/2]
// away from ω. The θ-integral runs over x = |θ - ψ| in (0, L).
cplx kernel_core(cplx alpha, double delta, double L, const TanhSinhRule& rule) {
  const cplx beta = alpha / 2.0;
  const double log_pref = std::log(std::sin(delta));
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = L * rule.from_lo[i];
    const double rest = L * rule.from_hi[i];
    if (!(x > 0.0) || !(rest > 0.0)) continue;
    const cplx e = (alpha - 1.0) * log_pref + (beta - 1.0) * std::log(std::sin(2.0 * rest)) -
                   beta * (std::log(std::sin(x)) + std::log(std::sin(x + delta)));
    acc += rule.w[i] * std::exp(e);
  }
  return L * acc;
}

TanhSinhRule theta_rule(cplx alpha, int level) {
  const double b = alpha.real() / 2.0;
  return tanh_sinh_for_singularity(level, std::max(b, 1.0 - b));
}

template <class Body>
void parallel_rows(int n, Body body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double one_dot(double t) { return std::cos(t) + std::sin(t); }

double kappa_weight(double t, double kappa) { return std::pow(std::abs(std::cos(t) - std::sin(t)), kappa); }

// Unweighted product-integration matrix W_ij = ∫ k(ω_i,ψ) φ_j(ψ) dψ.
Eigen::MatrixXcd product_integration(cplx alpha, const std::vector<double>& nodes, const KernelQuadrature& q) {
  const int n = static_cast<int>(nodes.size());
  const int cells = n - 1;
  const TanhSinhRule inner = theta_rule(alpha, q.theta_level);
  const TanhSinhRule singular = tanh_sinh_for_singularity(q.singular_level, 1.0 - alpha.real() / 2.0);
  const GaussRule& gauss = gauss_legendre(q.gauss_nodes);
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
  parallel_rows(n, [&](int i) {
    const double omega = nodes[static_cast<std::size_t>(i)];
    for (int c = 0; c < cells; ++c) {
      const double a = nodes[static_cast<std::size_t>(c)];
      const double b = nodes[static_cast<std::size_t>(c) + 1];
      const double len = b - a;
      const bool special = c == i || c + 1 == i || c == 0 || c == cells - 1;
      const std::vector<double>& lo = special ? singular.from_lo : gauss.x;
      const std::size_t count = special ? singular.size() : gauss.size();
      cplx left = 0.0, right = 0.0;
      for (std::size_t k = 0; k < count; ++k) {
        const double fl = lo[k];
        const double fh = special ? singular.from_hi[k] : 1.0 - gauss.x[k];
        const double w = len * (special ? singular.w[k] : gauss.w[k]);
        const double psi_lo = a + len * fl;                 // ψ
        const double psi_hi = (kHalfPi - b) + len * fh;      // π/2 - ψ
        double delta, L;
        if (omega <= a) {
          delta = (a - omega) + len * fl;
          L = psi_hi;
        } else {
          delta = (omega - b) + len * fh;
          L = psi_lo;
        }
        if (!(delta > 0.0) || !(L > 0.0)) continue;
        const cplx k_val = kernel_core(alpha, delta, L, inner);
        left += w * fh * k_val;
        right += w * fl * k_val;
      }
      W(i, c) += left;
      W(i, c + 1) += right;
    }
  });
  return W;
}

std::vector<double> nystrom_mesh(cplx alpha, int n_nodes) {
  if (n_nodes < 16) throw DomainError("need at least 16 nodes");
  if (n_nodes % 2 != 0) throw DomainError("node count must be even so that pi/4 is not a node");
  return graded_mesh(0.0, kHalfPi, n_nodes - 1, std::max(1.0, 2.0 / alpha.real()));
}

std::vector<double> hat_weights(const std::vector<double>& nodes) {
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
    const double h = nodes[c + 1] - nodes[c];
    w[c] += h / 2.0;
    w[c + 1] += h / 2.0;
  }
  return w;
}

constexpr const char* kDiagonalRule =
    "hat-basis product integration; tanh-sinh on cells touching the row node and the endpoints";

}  // namespace

cplx kernel_k(cplx alpha, double omega, double psi, int level) {
  check_alpha(alpha);
  if (!(omega >= 0.0 && omega <= kHalfPi && psi >= 0.0 && psi <= kHalfPi)) {
    throw DomainError("kernel angles must lie in [0, pi/2]");
  }
  if (omega == psi) throw DomainError("kernel is singular on the diagonal");
  const double L = psi > omega ? kHalfPi - psi : psi;
  if (!(L > 0.0)) throw DomainError("kernel needs psi inside (0, pi/2)");
  return kernel_core(alpha, std::abs(psi - omega), L, theta_rule(alpha, level));
}

NystromOperator assemble_P(cplx alpha, int n_nodes, double kappa, const KernelQuadrature& q) {
  check_alpha(alpha);
  if (!(kappa >= 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in [0,1)");
  NystromOperator op;
  op.alpha = alpha;
  op.kappa = kappa;
  op.nodes = nystrom_mesh(alpha, n_nodes);
  op.weights = hat_weights(op.nodes);
  op.blocks = 1;
  op.quadrature = q;
  op.diagonal_rule = kDiagonalRule;
  op.matrix = product_integration(alpha, op.nodes, q);
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = 0; j < n_nodes; ++j) {
      op.matrix(i, j) *= kappa_weight(op.nodes[static_cast<std::size_t>(i)], kappa) /
                         kappa_weight(op.nodes[static_cast<std::size_t>(j)], kappa);
    }
  }
  return op;
}

NystromOperator assemble_S(cplx alpha, int n_nodes, double kappa, const KernelQuadrature& q) {
  NystromOperator p = assemble_P(alpha, n_nodes, 0.0, q);
  const int n = n_nodes;
  const auto& t = p.nodes;
  Eigen::VectorXcd n0(n), n1(n), m00(n), m01(n), m0i(n);
  for (int j = 0; j < n; ++j) {
    const double d = one_dot(t[static_cast<std::size_t>(j)]);
    n0(j) = std::pow(cplx(d), -alpha - 1.0);
    n1(j) = std::pow(cplx(d), -alpha);
    m00(j) = -2.0 * d;
    m01(j) = 2.0 / alpha * std::cos(t[static_cast<std::size_t>(j)]);
    m0i(j) = 2.0 / alpha * std::sin(t[static_cast<std::size_t>(j)]);
  }
  const Eigen::MatrixXcd& W = p.matrix;
  const Eigen::MatrixXcd WN0 = W * n0.asDiagonal();
  const Eigen::MatrixXcd WN1 = W * n1.asDiagonal();
  NystromOperator op = p;
  op.kappa = kappa;
  op.blocks = 3;
  op.matrix = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
  // block order 0, 1, i; the 1/i rows differentiate (1.v)^{-α} to -α (1.v)^{-α-1}
  op.matrix.block(0, 0, n, n) = m00.asDiagonal() * WN0;
  op.matrix.block(0, n, n, n) = m01.asDiagonal() * WN1;
  op.matrix.block(0, 2 * n, n, n) = m0i.asDiagonal() * WN1;
  op.matrix.block(n, 0, n, n) = -alpha * WN0;
  op.matrix.block(n, n, n, n) = WN1;
  op.matrix.block(2 * n, 0, n, n) = -alpha * WN0;
  op.matrix.block(2 * n, 2 * n, n, n) = WN1;
  if (kappa != 0.0) {
    for (int b = 1; b < 3; ++b) {
      for (int i = 0; i < n; ++i) {
        const double wi = kappa_weight(t[static_cast<std::size_t>(i)], kappa);
        op.matrix.row(b * n + i) *= wi;
        op.matrix.col(b * n + i) /= wi;
      }
    }
  }
  return op;
}

NystromOperator assemble_H(cplx alpha, int n_nodes, double kappa, const KernelQuadrature& q) {
  NystromOperator s = assemble_S(alpha, n_nodes, kappa, q);
  const int n = n_nodes;
  const cplx cp = c_prime_alpha(alpha);
  NystromOperator op = s;
  op.matrix = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
  // (S J f)_ε = Σ_ε' S_εε' R f_σ(ε'), σ exchanging 1 and i, R the reflection j -> n-1-j
  const int sigma[3] = {0, 2, 1};
  for (int eps = 0; eps < 3; ++eps) {
    for (int e2 = 0; e2 < 3; ++e2) {
      const int target = sigma[e2];
      for (int k = 0; k < n; ++k) {
        op.matrix.block(eps * n, target * n + k, n, 1) = cp * s.matrix.block(eps * n, e2 * n + (n - 1 - k), n, 1);
      }
    }
  }
  return op;
}

std::vector<cplx> nystrom_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw DomainError("eigenvalues need a square matrix");
  Eigen::MatrixXcd a = m;
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<cplx> w(static_cast<std::size_t>(n));
  cplx dummy;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(), &dummy, 1, &dummy, 1);
  if (info != 0) throw ConvergenceError("zgeev failed with info " + std::to_string(info));
  std::sort(w.begin(), w.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
  return w;
}

cplx det_from_eigenvalues(const std::vector<cplx>& mu, int m) {
  cplx d = 1.0;
  for (const auto& x : mu) d *= 1.0 - std::pow(x, m);
  return d;
}

cplx direct_det(const Eigen::MatrixXcd& a, int m) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  for (int k = 0; k < m; ++k) p = p * a;
  return (Eigen::MatrixXcd::Identity(a.rows(), a.cols()) - p).partialPivLu().determinant();
}

int band_power(cplx alpha) {
  const double r = alpha.real();
  if (!(r > 0.0 && r < 2.0)) throw DomainError("band rule needs Re alpha in (0,2)");
  int best = std::numeric_limits<int>::max();
  for (int l = 0; l < 30; ++l) {
    const double lo = std::ldexp(1.0, -l);
    const double hi = std::ldexp(1.0, -l + 1);
    if (lo < r && r < hi) best = std::min(best, 1 << (l + 1));
    if (l >= 1 && lo < 3.0 * r && 3.0 * r < hi) best = std::min(best, 3 * (1 << (l + 1)));
  }
  if (best == std::numeric_limits<int>::max()) {
    throw DomainError("Re alpha lies on a band boundary; no trace-class power is available");
  }
  return best;
}

FredholmResult fredholm_det(const NystromOperator& H, int m) {
  if (H.blocks != 3) throw DomainError("fredholm_det expects the block operator H");
  if (m < 1 || m % 2 != 0) throw DomainError("determinant power must be a positive even integer");
  if (m < band_power(H.alpha)) throw DomainError("power below the trace-class power of the band");
  FredholmResult r;
  r.alpha = H.alpha;
  r.m = m;
  r.grid_size = H.n_nodes();
  r.det_value = det_from_eigenvalues(nystrom_eigenvalues(H.matrix), m);
  const NystromOperator fine = assemble_H(H.alpha, 2 * H.n_nodes(), H.kappa, H.quadrature);
  const cplx d2 = det_from_eigenvalues(nystrom_eigenvalues(fine.matrix), m);
  r.refinement_delta = std::abs(d2 - r.det_value) / std::abs(d2);
  return r;
}

std::vector<ScanPoint> alpha_scan(const std::vector<double>& alpha_grid, int n_nodes, double kappa,
                                  const KernelQuadrature& q) {
  for (double a : alpha_grid) {
    if (std::abs(a - 0.5) < 0.02 || std::abs(a - 1.0) < 0.02) {
      throw DomainError("scan grid must stay 0.02 away from 1/2 and 1");
    }
  }
  std::vector<ScanPoint> out(alpha_grid.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    ScanPoint& p = out[i];
    p.result.alpha = alpha_grid[i];
    p.result.grid_size = n_nodes;
    try {
      const cplx a(alpha_grid[i], 0.0);
      p.result = fredholm_det(assemble_H(a, n_nodes, kappa, q), band_power(a));
    } catch (const std::exception& e) {
      p.error = e.what();
    }
  }
  for (std::size_t i = 1; i + 1 < out.size(); ++i) {
    if (!out[i].error.empty() || !out[i - 1].error.empty() || !out[i + 1].error.empty()) continue;
    const double d = std::abs(out[i].result.det_value);
    out[i].candidate = d < std::abs(out[i - 1].result.det_value) && d < std::abs(out[i + 1].result.det_value);
  }
  return out;
}

void write_scan_csv(const std::vector<ScanPoint>& scan, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os << "re_alpha,im_alpha,m,n_nodes,det_re,det_im,abs_det,refinement_delta\n";
  char buf[512];
  for (const auto& p : scan) {
    const auto& r = p.result;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.alpha.real(), r.alpha.imag(), r.m,
                  r.grid_size, r.det_value.real(), r.det_value.imag(), std::abs(r.det_value), r.refinement_delta);
    os << buf;
  }
  if (!os) throw Error("failed writing " + path);
}

double kernel_bound_shape(double re_alpha, double omega, double psi) {
  const double s = std::min(std::sin(2.0 * psi), std::sin(2.0 * omega));
  const double gap = std::abs(psi - omega);
  if (std::abs(re_alpha - 1.0) < 1e-12) {
    return std::pow(s, -0.5) * std::max(1.0, std::log(std::sin(2.0 * psi) / gap));
  }
  if (re_alpha < 1.0) return std::pow(gap, re_alpha - 1.0) * std::pow(s, -re_alpha / 2.0);
  return std::pow(s, re_alpha / 2.0 - 1.0);
}

namespace {

KernelBoundFit fit_once(double alpha, int grid, int level) {
  KernelBoundFit f;
  f.alpha = alpha;
  const double h = kHalfPi / grid;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      if (a == b) continue;
      const double omega = (a + 0.5) * h;
      const double psi = (b + 0.5) * h;
      const double ratio = std::abs(kernel_k(alpha, omega, psi, level)) / kernel_bound_shape(alpha, omega, psi);
      if (ratio > f.C) {
        f.C = ratio;
        f.worst_omega = omega;
        f.worst_psi = psi;
      }
    }
  }
  return f;
}

}  // namespace

KernelBoundFit fit_kernel_bound(double alpha, int grid, int level) {
  if (grid < 2) throw DomainError("bound grid too small");
  KernelBoundFit f = fit_once(alpha, grid, level);
  f.C_refined = fit_once(alpha, 2 * grid, level + 1).C;
  f.relative_change = std::abs(f.C_refined - f.C) / f.C;
  return f;
}

}  // namespace levylab
