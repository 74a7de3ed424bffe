#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"

namespace momentcurve {

/// A polynomial curve gamma(t) in R^n of degree at most n: component i is
/// sum_s coeff(i, s) t^s, with coeff an n x (n+1) matrix.
class PolyCurve {
 public:
  explicit PolyCurve(Eigen::MatrixXd coeff) : coeff_(std::move(coeff)) {
    if (coeff_.rows() < 1 || coeff_.cols() != coeff_.rows() + 1)
      throw InvalidShape("curve coefficients must form an n x (n+1) matrix");
    if (!coeff_.allFinite()) throw InvalidShape("curve coefficients must be finite");
  }

  int n() const { return static_cast<int>(coeff_.rows()); }
  const Eigen::MatrixXd& coefficients() const { return coeff_; }

  /// gamma(t)
  std::vector<double> point_at(double t) const {
    Eigen::VectorXd powers(n() + 1);
    double p = 1.0;
    for (int s = 0; s <= n(); ++s) {
      powers(s) = p;
      p *= t;
    }
    Eigen::VectorXd y = coeff_ * powers;
    return std::vector<double>(y.data(), y.data() + n());
  }

  /// The linear part (columns for t^1..t^n) and the constant column.
  Eigen::MatrixXd linear_part() const { return coeff_.rightCols(n()); }
  Eigen::VectorXd constant_part() const { return coeff_.col(0); }

 private:
  Eigen::MatrixXd coeff_;
};

/// Atom of a naming carried onto a polynomial curve.
struct WeightedCurvePoint {
  double weight;
  std::vector<double> point;
};

/// Carries a naming of the moment curve onto gamma: the weights are
/// unchanged and each atom parameter maps to gamma(t_j).  The weighted sum
/// of the results is gamma's linear part applied to evaluate(P), plus the
/// constant.
inline std::vector<WeightedCurvePoint> push_naming(const Naming& P, const PolyCurve& curve) {
  if (curve.n() != P.n()) throw DomainMismatch("curve and naming dimensions differ");
  std::vector<WeightedCurvePoint> out;
  out.reserve(P.atoms().size());
  for (const Atom& a : P.atoms()) out.push_back({a.c, curve.point_at(a.t)});
  return out;
}

/// Pulls a point w of gamma's space back to moment coordinates by solving
/// the linear part: v with  A_lin v + a_const = w.  The linear part must be
/// invertible.
inline MomentPoint pull_point(const MomentPoint& w, const PolyCurve& curve) {
  if (curve.n() != w.n) throw DomainMismatch("curve and point dimensions differ");
  const Eigen::MatrixXd A = curve.linear_part();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible())
    throw NotInvertible("curve has a singular linear part");
  Eigen::VectorXd rhs(w.n);
  for (int k = 0; k < w.n; ++k) rhs(k) = w.v[static_cast<std::size_t>(k)] -
                                         curve.constant_part()(k);
  Eigen::VectorXd v = lu.solve(rhs);
  return MomentPoint(w.n, std::vector<double>(v.data(), v.data() + w.n));
}

}  // namespace momentcurve
