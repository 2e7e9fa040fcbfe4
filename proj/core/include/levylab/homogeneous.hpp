#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace levylab {

using cplx = std::complex<double>;

/// h.u = Re(u) h + Im(u) conj(h).
cplx dot(cplx h, cplx u) noexcept;

/// ǔ = i conj(u) = Im(u) + i Re(u).
cplx check_involution(cplx u) noexcept;

/// Angles θ_j = (π/4)(1 - cos(π j/(m-1))) on [0, π/2]: symmetric under θ -> π/2 - θ and
/// clustered at both ends. π/4 is a node when m is odd.
std::vector<double> angular_grid(int m);

/// A degree-β positively homogeneous complex function on the closed first quadrant,
/// stored by its values on an angular grid and interpolated by a not-a-knot cubic
/// spline in θ.
class HomogeneousFn {
 public:
  HomogeneousFn() = default;
  HomogeneousFn(double beta, std::vector<double> thetas, std::vector<cplx> values);

  /// Samples g(e^{iθ_j}) from `fn`.
  static HomogeneousFn sample(double beta, const std::vector<double>& thetas,
                              const std::function<cplx(double)>& fn);

  double beta() const noexcept { return beta_; }
  const std::vector<double>& thetas() const noexcept { return thetas_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double theta(std::size_t j) const { return thetas_[j]; }
  cplx value(std::size_t j) const { return values_[j]; }

  /// |u|^β g(arg u). Throws outside the closed first quadrant or at u = 0.
  cplx operator()(cplx u) const;

  /// Spline value and θ-derivative at angle θ ∈ [0, π/2] on the unit circle.
  cplx at_angle(double theta) const;
  cplx derivative_at_angle(double theta) const;

  /// Cartesian partial derivatives (∂_1 g, ∂_i g) at e^{iθ}.
  std::pair<cplx, cplx> gradient_at_angle(double theta) const;

  /// Re g(e^{iθ_j}) >= -tol at every node.
  bool in_cone(double tol = 1e-10) const;

  /// sup_j |g(e^{iθ_j})|.
  double sup_norm() const;

  HomogeneousFn& operator+=(const HomogeneousFn& other);
  HomogeneousFn& operator-=(const HomogeneousFn& other);
  HomogeneousFn& operator*=(cplx s);

 private:
  std::size_t locate(double theta) const;
  void build_spline();

  double beta_ = 0.0;
  std::vector<double> thetas_;
  std::vector<cplx> values_;
  std::vector<cplx> slopes_;
};

HomogeneousFn operator+(HomogeneousFn a, const HomogeneousFn& b);
HomogeneousFn operator-(HomogeneousFn a, const HomogeneousFn& b);
HomogeneousFn operator*(cplx s, HomogeneousFn a);

/// max_j |f_j - g_j| for functions on the same grid.
double sup_distance(const HomogeneousFn& f, const HomogeneousFn& g);

struct KappaNorm {
  double kappa = 0.0;
  double value_inf = 0.0;
  double value_kappa = 0.0;
};

/// ‖g‖_∞ and ‖g‖_κ = ‖g‖_∞ + sup |i.u|^κ |∇g(u)| over |u| = 1, both sups taken on a
/// 3x refinement of the grid.
KappaNorm kappa_norm(const HomogeneousFn& f, double kappa);

}  // namespace levylab
