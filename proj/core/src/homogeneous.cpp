#include "levylab/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levylab/error.hpp"

namespace levylab {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

}  // namespace

cplx dot(cplx h, cplx u) noexcept {
  return {(u.real() + u.imag()) * h.real(), (u.real() - u.imag()) * h.imag()};
}

cplx check_involution(cplx u) noexcept { return {u.imag(), u.real()}; }

std::vector<double> angular_grid(int m) {
  if (m < 4) throw DomainError("angular grid needs at least 4 nodes");
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    out[static_cast<std::size_t>(j)] =
        std::numbers::pi / 4.0 * (1.0 - std::cos(std::numbers::pi * j / (m - 1)));
  }
  // exact symmetry θ_j + θ_{m-1-j} = π/2
  for (int j = 0; j < m / 2; ++j) {
    out[static_cast<std::size_t>(m - 1 - j)] = kHalfPi - out[static_cast<std::size_t>(j)];
  }
  out.front() = 0.0;
  out.back() = kHalfPi;
  if (m % 2 == 1) out[static_cast<std::size_t>(m / 2)] = std::numbers::pi / 4.0;
  return out;
}

HomogeneousFn::HomogeneousFn(double beta, std::vector<double> thetas, std::vector<cplx> values)
    : beta_(beta), thetas_(std::move(thetas)), values_(std::move(values)) {
  if (thetas_.empty()) throw DomainError("homogeneous function needs a non-empty grid");
  if (thetas_.size() != values_.size()) throw DomainError("grid and value sizes differ");
  if (thetas_.size() < 4) throw DomainError("homogeneous function needs at least 4 nodes");
  for (std::size_t j = 1; j < thetas_.size(); ++j) {
    if (!(thetas_[j] > thetas_[j - 1])) throw DomainError("angular grid must be strictly increasing");
  }
  if (thetas_.front() < 0.0 || thetas_.back() > kHalfPi + 1e-15) {
    throw DomainError("angular grid must lie in [0, pi/2]");
  }
  build_spline();
}

HomogeneousFn HomogeneousFn::sample(double beta, const std::vector<double>& thetas,
                                    const std::function<cplx(double)>& fn) {
  std::vector<cplx> values(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) values[j] = fn(thetas[j]);
  return HomogeneousFn(beta, thetas, std::move(values));
}

// Not-a-knot slopes (the tridiagonal system of MATLAB's spline).
void HomogeneousFn::build_spline() {
  const std::size_t n = thetas_.size();
  std::vector<double> h(n - 1);
  std::vector<cplx> del(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = thetas_[k + 1] - thetas_[k];
    del[k] = (values_[k + 1] - values_[k]) / h[k];
  }
  std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0);
  std::vector<cplx> rhs(n);
  diag[0] = h[1];
  upper[0] = h[0] + h[1];
  rhs[0] = ((h[0] + 2.0 * upper[0]) * h[1] * del[0] + h[0] * h[0] * del[1]) / upper[0];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    lower[k] = h[k];
    diag[k] = 2.0 * (h[k - 1] + h[k]);
    upper[k] = h[k - 1];
    rhs[k] = 3.0 * (h[k] * del[k - 1] + h[k - 1] * del[k]);
  }
  const double hl = h[n - 2], hp = h[n - 3];
  lower[n - 1] = hl + hp;
  diag[n - 1] = hp;
  rhs[n - 1] = (hl * hl * del[n - 3] + (2.0 * lower[n - 1] + hl) * hp * del[n - 2]) / lower[n - 1];

  // Thomas algorithm
  std::vector<double> c(n);
  std::vector<cplx> d(n);
  c[0] = upper[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double m = diag[k] - lower[k] * c[k - 1];
    c[k] = upper[k] / m;
    d[k] = (rhs[k] - lower[k] * d[k - 1]) / m;
  }
  slopes_.assign(n, cplx{});
  slopes_[n - 1] = d[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) slopes_[k] = d[k] - c[k] * slopes_[k + 1];
}

std::size_t HomogeneousFn::locate(double theta) const {
  const auto it = std::upper_bound(thetas_.begin(), thetas_.end(), theta);
  std::size_t k = static_cast<std::size_t>(it - thetas_.begin());
  if (k == 0) return 0;
  k -= 1;
  return std::min(k, thetas_.size() - 2);
}

cplx HomogeneousFn::at_angle(double theta) const {
  const std::size_t k = locate(theta);
  const double h = thetas_[k + 1] - thetas_[k];
  const double t = (theta - thetas_[k]) / h;
  if (t == 0.0) return values_[k];
  if (t == 1.0) return values_[k + 1];
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[k] + h10 * h * slopes_[k] + h01 * values_[k + 1] + h11 * h * slopes_[k + 1];
}

cplx HomogeneousFn::derivative_at_angle(double theta) const {
  const std::size_t k = locate(theta);
  const double h = thetas_[k + 1] - thetas_[k];
  const double t = (theta - thetas_[k]) / h;
  const double t2 = t * t;
  const double d00 = (6.0 * t2 - 6.0 * t) / h;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = (-6.0 * t2 + 6.0 * t) / h;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return d00 * values_[k] + d10 * slopes_[k] + d01 * values_[k + 1] + d11 * slopes_[k + 1];
}

std::pair<cplx, cplx> HomogeneousFn::gradient_at_angle(double theta) const {
  const cplx g = at_angle(theta);
  const cplx dg = derivative_at_angle(theta);
  const double c = std::cos(theta), s = std::sin(theta);
  return {beta_ * g * c - dg * s, beta_ * g * s + dg * c};
}

cplx HomogeneousFn::operator()(cplx u) const {
  const double r = std::abs(u);
  if (!(r > 0.0)) throw DomainError("homogeneous function evaluated at u = 0");
  if (u.real() < -1e-14 * r || u.imag() < -1e-14 * r) {
    throw DomainError("argument outside the closed first quadrant");
  }
  const double theta = std::clamp(std::atan2(u.imag(), u.real()), 0.0, kHalfPi);
  const cplx g = at_angle(theta);
  return r == 1.0 ? g : std::pow(r, beta_) * g;
}

bool HomogeneousFn::in_cone(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [tol](cplx v) { return v.real() >= -tol; });
}

double HomogeneousFn::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void require_same_grid(const HomogeneousFn& a, const HomogeneousFn& b) {
  if (a.thetas() != b.thetas() || a.beta() != b.beta()) {
    throw DomainError("homogeneous functions live on different grids or degrees");
  }
}

}  // namespace

HomogeneousFn& HomogeneousFn::operator+=(const HomogeneousFn& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    values_[j] += other.values_[j];
    slopes_[j] += other.slopes_[j];
  }
  return *this;
}

HomogeneousFn& HomogeneousFn::operator-=(const HomogeneousFn& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    values_[j] -= other.values_[j];
    slopes_[j] -= other.slopes_[j];
  }
  return *this;
}

HomogeneousFn& HomogeneousFn::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  for (auto& d : slopes_) d *= s;
  return *this;
}

HomogeneousFn operator+(HomogeneousFn a, const HomogeneousFn& b) { return a += b; }
HomogeneousFn operator-(HomogeneousFn a, const HomogeneousFn& b) { return a -= b; }
HomogeneousFn operator*(cplx s, HomogeneousFn a) { return a *= s; }

double sup_distance(const HomogeneousFn& f, const HomogeneousFn& g) {
  require_same_grid(f, g);
  double m = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f.value(j) - g.value(j)));
  return m;
}

KappaNorm kappa_norm(const HomogeneousFn& f, double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in [0,1)");
  KappaNorm out;
  out.kappa = kappa;
  double grad_sup = 0.0;
  const auto& th = f.thetas();
  constexpr int kOversample = 3;
  for (std::size_t k = 0; k < th.size(); ++k) {
    const int subs = (k + 1 < th.size()) ? kOversample : 1;
    for (int s = 0; s < subs; ++s) {
      const double theta = (s == 0) ? th[k] : th[k] + (th[k + 1] - th[k]) * s / kOversample;
      out.value_inf = std::max(out.value_inf, std::abs(f.at_angle(theta)));
      const auto [d1, di] = f.gradient_at_angle(theta);
      const double w = kappa == 0.0 ? 1.0 : std::pow(std::abs(std::cos(theta) - std::sin(theta)), kappa);
      grad_sup = std::max(grad_sup, w * std::sqrt(std::norm(d1) + std::norm(di)));
    }
  }
  out.value_kappa = out.value_inf + grad_sup;
  return out;
}

}  // namespace levylab
