#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "momentcurve/errors.hpp"

namespace momentcurve {

/// Closed parameter interval [t_min, t_max] of the truncated curve.
class Interval {
 public:
  Interval(double t_min, double t_max) : t_min_(t_min), t_max_(t_max) {
    if (!std::isfinite(t_min) || !std::isfinite(t_max))
      throw InvalidNaming("interval endpoints must be finite");
    if (!(t_min < t_max)) throw InvalidNaming("interval requires t_min < t_max");
  }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double width() const { return t_max_ - t_min_; }
  bool contains(double t) const { return t >= t_min_ && t <= t_max_; }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.t_min_ == b.t_min_ && a.t_max_ == b.t_max_;
  }
  friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

 private:
  double t_min_;
  double t_max_;
};

/// Tolerance block shared by predicates and solvers.  The parameter
/// tolerance eps_t is relative to the interval width; everything else
/// is absolute.
struct Tolerances {
  double eps_t_rel = 1e-9;  ///< same-parameter test, relative to interval width
  double eps_c = 1e-12;     ///< zero-coefficient threshold
  double eps_sum = 1e-10;   ///< slack allowed on the coefficient sum
  double eps_mem = 1e-9;    ///< membership weight clamp band
  double eps_cond = 1e-12;  ///< refuse solves with condition number beyond 1/eps_cond
  double eps_fit = 1e-6;    ///< relative residual accepted for solver certificates
  int solver_n_cap = 12;    ///< principal solves refuse dimensions above this
  static constexpr int hard_n_cap = 20;

  double eps_t(const Interval& iv) const { return eps_t_rel * iv.width(); }
};

/// Exact integer-or-half value, stored as twice itself.
struct HalfInt {
  int twice = 0;

  static HalfInt whole(int k) { return HalfInt{2 * k}; }
  /// k - 1/2
  static HalfInt half_below(int k) { return HalfInt{2 * k - 1}; }

  bool is_whole() const { return twice % 2 == 0; }
  double value() const { return 0.5 * twice; }

  friend bool operator==(HalfInt a, HalfInt b) { return a.twice == b.twice; }
  friend bool operator!=(HalfInt a, HalfInt b) { return a.twice != b.twice; }
  friend bool operator<(HalfInt a, HalfInt b) { return a.twice < b.twice; }
  friend bool operator<=(HalfInt a, HalfInt b) { return a.twice <= b.twice; }
  friend bool operator>(HalfInt a, HalfInt b) { return a.twice > b.twice; }
  friend bool operator>=(HalfInt a, HalfInt b) { return a.twice >= b.twice; }

  std::string str() const {
    if (is_whole()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
  }
};

/// A point of R^n understood as the first n power moments (v_1, ..., v_n).
/// The zeroth moment is always 1 and is never stored.
struct MomentPoint {
  int n;
  std::vector<double> v;

  MomentPoint(int n_, std::vector<double> v_) : n(n_), v(std::move(v_)) {
    if (n < 1) throw InvalidShape("moment point dimension must be positive");
    if (static_cast<int>(v.size()) != n)
      throw InvalidShape("moment point needs exactly n coordinates");
    for (double x : v)
      if (!std::isfinite(x)) throw InvalidShape("moment point coordinates must be finite");
  }

  /// k-th moment for k = 0..n, with the implicit v_0 = 1.
  double moment(int k) const {
    if (k < 0 || k > n) throw InvalidShape("moment index out of range");
    return k == 0 ? 1.0 : v[static_cast<std::size_t>(k - 1)];
  }
};

/// One term of a convex combination: curve parameter and coefficient.
struct Atom {
  double t;
  double c;
};

/// Whether the combination is free (integer) or pinned at t_min (half-integer).
enum class Parity { Integer, HalfInteger };

/// An ordered convex combination of curve points.  Atoms are kept sorted by
/// parameter; coefficients are nonnegative and sum to one.  Half-integer
/// namings store t_1 = t_min exactly (copied from the interval).
class Naming {
 public:
  Naming(Interval interval, int n, Parity parity, std::vector<Atom> atoms,
         const Tolerances& tol = {})
      : interval_(interval), n_(n), parity_(parity), atoms_(std::move(atoms)) {
    if (n_ < 1) throw InvalidNaming("naming dimension must be positive");
    if (atoms_.empty()) throw InvalidNaming("a naming needs at least one atom");
    const double et = tol.eps_t(interval_);
    double sum = 0.0;
    for (Atom& a : atoms_) {
      if (!std::isfinite(a.t) || !std::isfinite(a.c))
        throw InvalidNaming("atom fields must be finite");
      if (a.t < interval_.t_min() - et || a.t > interval_.t_max() + et)
        throw InvalidNaming("atom parameter lies outside the interval");
      a.t = std::clamp(a.t, interval_.t_min(), interval_.t_max());
      if (a.c < -tol.eps_c || a.c > 1.0 + tol.eps_c)
        throw InvalidNaming("atom coefficient lies outside [0, 1]");
      a.c = std::clamp(a.c, 0.0, 1.0);
      sum += a.c;
    }
    if (std::abs(sum - 1.0) > tol.eps_sum)
      throw InvalidNaming("atom coefficients must sum to 1");
    // Equal parameters keep their insertion order.
    std::stable_sort(atoms_.begin(), atoms_.end(),
                     [](const Atom& x, const Atom& y) { return x.t < y.t; });
    if (parity_ == Parity::HalfInteger) {
      if (std::abs(atoms_.front().t - interval_.t_min()) > et)
        throw InvalidNaming("half-integer naming must have its first atom at t_min");
      atoms_.front().t = interval_.t_min();
    }
  }

  const Interval& interval() const { return interval_; }
  int n() const { return n_; }
  Parity parity() const { return parity_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }

 private:
  Interval interval_;
  int n_;
  Parity parity_;
  std::vector<Atom> atoms_;
};

/// Tally of the boundary features of a naming.
struct BoundaryReport {
  int zero_coefficient_count = 0;
  int adjacent_equal_count = 0;
  bool at_tmin = false;
  bool at_tmax = false;
  int total_l = 0;
};

/// Image of the parameter t on the curve (t, t^2, ..., t^n).
inline MomentPoint lift(double t, int n) {
  if (n < 1) throw InvalidShape("lift needs a positive dimension");
  if (!std::isfinite(t)) throw InvalidShape("lift needs a finite parameter");
  std::vector<double> v(static_cast<std::size_t>(n));
  double p = 1.0;
  for (int k = 0; k < n; ++k) {
    p *= t;
    v[static_cast<std::size_t>(k)] = p;
  }
  return MomentPoint(n, std::move(v));
}

/// Point of the hull named by P: the coefficient-weighted sum of lifted atoms.
inline MomentPoint evaluate(const Naming& P) {
  std::vector<double> acc(static_cast<std::size_t>(P.n()), 0.0);
  for (const Atom& a : P.atoms()) {
    double p = 1.0;
    for (int k = 0; k < P.n(); ++k) {
      p *= a.t;
      acc[static_cast<std::size_t>(k)] += a.c * p;
    }
  }
  return MomentPoint(P.n(), std::move(acc));
}

/// Index of a naming: the atom count M, lowered to M - 1/2 when the first
/// atom is pinned at t_min.
inline HalfInt index(const Naming& P) {
  if (P.parity() == Parity::HalfInteger) return HalfInt::half_below(P.atom_count());
  return HalfInt::whole(P.atom_count());
}

/// Largest index a canonical naming of dimension n may have, (n+1)/2.
inline HalfInt proper_index_bound(int n) { return HalfInt{n + 1}; }

/// True when some simplification applies: an adjacent equal-parameter pair,
/// or a zero coefficient.  A zero first coefficient of a half-integer naming
/// is not reducible; the pinned atom cannot be removed.
inline bool is_reducible(const Naming& P, const Tolerances& tol = {}) {
  const double et = tol.eps_t(P.interval());
  const auto& atoms = P.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const bool pinned = (P.parity() == Parity::HalfInteger && i == 0);
    if (!pinned && atoms[i].c <= tol.eps_c) return true;
    if (i + 1 < atoms.size() && atoms[i + 1].t - atoms[i].t <= et) return true;
  }
  return false;
}

/// Counts the boundary features of P.  Every zero coefficient counts one
/// (including a pinned first atom's), every adjacent equal-parameter pair
/// counts one, the last atom sitting at t_max counts one, and the first atom
/// sitting at t_min counts one only for integer namings (half-integer namings
/// sit there by definition).
inline BoundaryReport boundary_count(const Naming& P, const Tolerances& tol = {}) {
  BoundaryReport r;
  const double et = tol.eps_t(P.interval());
  const auto& atoms = P.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].c <= tol.eps_c) ++r.zero_coefficient_count;
    if (i + 1 < atoms.size() && atoms[i + 1].t - atoms[i].t <= et)
      ++r.adjacent_equal_count;
  }
  r.at_tmin = std::abs(atoms.front().t - P.interval().t_min()) <= et;
  r.at_tmax = std::abs(atoms.back().t - P.interval().t_max()) <= et;
  r.total_l = r.zero_coefficient_count + r.adjacent_equal_count;
  if (r.at_tmin && P.parity() == Parity::Integer) ++r.total_l;
  if (r.at_tmax) ++r.total_l;
  return r;
}

}  // namespace momentcurve
