#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"

namespace momentcurve {

namespace detail {

inline bool parity_matches_dimension(Parity parity, int n) {
  return (parity == Parity::Integer) == (n % 2 == 1);
}

}  // namespace detail

/// A naming certified non-reducible, of index at most (n+1)/2, with the
/// parity forced by the dimension (integer for odd n, half-integer for even).
/// Construction re-checks all three properties.
class CanonicalNaming {
 public:
  explicit CanonicalNaming(Naming naming, const Tolerances& tol = {})
      : naming_(std::move(naming)) {
    if (!detail::parity_matches_dimension(naming_.parity(), naming_.n()))
      throw ParityMismatch("canonical parity must match the dimension");
    if (is_reducible(naming_, tol))
      throw NotProper("canonical naming must be non-reducible");
    if (index(naming_) > proper_index_bound(naming_.n()))
      throw NotProper("canonical naming index exceeds (n+1)/2");
  }

  const Naming& naming() const { return naming_; }

 private:
  Naming naming_;
};

/// Applies the first simplification by atom index: a removable zero
/// coefficient is deleted, or an adjacent equal-parameter pair is merged
/// (coefficients summed, parameter kept).  The pinned first atom of a
/// half-integer naming is never deleted.  Exactly one atom disappears.
inline Naming simplify_once(const Naming& P, const Tolerances& tol = {}) {
  const double et = tol.eps_t(P.interval());
  std::vector<Atom> atoms = P.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const bool pinned = (P.parity() == Parity::HalfInteger && i == 0);
    if (!pinned && atoms[i].c <= tol.eps_c) {
      atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i));
      return Naming(P.interval(), P.n(), P.parity(), std::move(atoms), tol);
    }
    if (i + 1 < atoms.size() && atoms[i + 1].t - atoms[i].t <= et) {
      atoms[i].c += atoms[i + 1].c;
      atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i + 1));
      return Naming(P.interval(), P.n(), P.parity(), std::move(atoms), tol);
    }
  }
  throw NotReducible("naming has no reducible feature");
}

/// Simplifies until non-reducible.  The input must carry the parity forced
/// by its dimension; its index must not exceed (n+1)/2 once non-reducible
/// (higher-index namings go through reduce_to_principal first).
inline CanonicalNaming canonicalize(const Naming& P, const Tolerances& tol = {}) {
  if (!detail::parity_matches_dimension(P.parity(), P.n()))
    throw ParityMismatch("naming parity does not match its dimension");
  Naming cur = P;
  while (is_reducible(cur, tol)) cur = simplify_once(cur, tol);
  return CanonicalNaming(std::move(cur), tol);
}

/// True when both namings canonicalize to the same form: equal atom counts,
/// parameters within eps_t, coefficients within 1e-8.  The namings must share
/// dimension and interval.
inline bool equivalent(const Naming& P1, const Naming& P2, const Tolerances& tol = {}) {
  if (P1.n() != P2.n() || P1.interval() != P2.interval())
    throw DomainMismatch("equivalence needs a common dimension and interval");
  constexpr double eps_eq = 1e-8;
  const Naming c1 = canonicalize(P1, tol).naming();
  const Naming c2 = canonicalize(P2, tol).naming();
  if (c1.atom_count() != c2.atom_count()) return false;
  const double et = tol.eps_t(P1.interval());
  for (int i = 0; i < c1.atom_count(); ++i) {
    const Atom& a = c1.atoms()[static_cast<std::size_t>(i)];
    const Atom& b = c2.atoms()[static_cast<std::size_t>(i)];
    if (std::abs(a.t - b.t) > et || std::abs(a.c - b.c) > eps_eq) return false;
  }
  return true;
}

/// Shrinks a naming with more than n+1 atoms down to at most n+1 by moving
/// the coefficients along null vectors of the lifted node matrix until one
/// hits zero, then dropping that atom.  The evaluate is unchanged (the motion
/// stays in the kernel).  A half-integer naming keeps its pinned atom: when
/// the pinned coefficient would be first to vanish, the motion runs the other
/// way, so the atom survives (possibly at coefficient zero).
inline Naming caratheodory_linear_reduce(const Naming& P, const Tolerances& tol = {}) {
  const int n = P.n();
  std::vector<Atom> atoms = P.atoms();
  const bool half = P.parity() == Parity::HalfInteger;

  while (static_cast<int>(atoms.size()) > n + 1) {
    const int M = static_cast<int>(atoms.size());
    Eigen::MatrixXd A(n + 1, M);
    for (int j = 0; j < M; ++j) {
      double p = 1.0;
      for (int k = 0; k <= n; ++k) {
        A(k, j) = p;
        p *= atoms[static_cast<std::size_t>(j)].t;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    Eigen::VectorXd d = svd.matrixV().col(M - 1);

    // First coefficient to vanish in each signed direction.
    const double inf = std::numeric_limits<double>::infinity();
    double step_pos = inf, step_neg = inf;
    int hit_pos = -1, hit_neg = -1;
    for (int j = 0; j < M; ++j) {
      const double cj = atoms[static_cast<std::size_t>(j)].c;
      if (d(j) > 0.0 && cj / d(j) < step_pos) {
        step_pos = cj / d(j);
        hit_pos = j;
      }
      if (d(j) < 0.0 && cj / -d(j) < step_neg) {
        step_neg = cj / -d(j);
        hit_neg = j;
      }
    }
    if (hit_pos < 0 && hit_neg < 0)
      throw ReductionStalled("null vector moves no coefficient");

    bool use_pos = step_pos <= step_neg;
    if (hit_neg < 0) use_pos = true;
    if (hit_pos < 0) use_pos = false;
    // Never eliminate the pinned atom; the opposite direction zeroes another.
    if (half && use_pos && hit_pos == 0 && hit_neg >= 0) use_pos = false;
    if (half && !use_pos && hit_neg == 0 && hit_pos >= 0) use_pos = true;

    const double step = use_pos ? step_pos : step_neg;
    const int hit = use_pos ? hit_pos : hit_neg;
    for (int j = 0; j < M; ++j) {
      double& cj = atoms[static_cast<std::size_t>(j)].c;
      cj -= (use_pos ? step : -step) * d(j);
      if (cj < 0.0) cj = 0.0;
    }
    atoms[static_cast<std::size_t>(hit)].c = 0.0;
    if (half && hit == 0)
      throw ReductionStalled("pinned atom selected for elimination");
    atoms.erase(atoms.begin() + hit);
  }
  return Naming(P.interval(), n, P.parity(), std::move(atoms), tol);
}

}  // namespace momentcurve
