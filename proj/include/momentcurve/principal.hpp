#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"
#include "momentcurve/pvmat.hpp"
#include "momentcurve/reduction.hpp"

namespace momentcurve {

/// Hankel matrix of a moment point: entry (i, j) is v_{i+j}, or the shifted
/// difference v_{i+j+1} - shift * v_{i+j} when a shift is given (the moments
/// of (t - shift) d(mu)).  All referenced indices must stay within 0..n.
inline Eigen::MatrixXd hankel(const MomentPoint& point, int m,
                              std::optional<double> shift = std::nullopt) {
  if (m < 1) throw InvalidShape("hankel order must be positive");
  const int top = shift ? 2 * m - 1 : 2 * m - 2;
  if (top > point.n) throw InvalidShape("hankel order references moments beyond n");
  Eigen::MatrixXd H(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      H(i, j) = shift ? point.moment(i + j + 1) - *shift * point.moment(i + j)
                      : point.moment(i + j);
  return H;
}

/// Real roots of the monic polynomial x^m + coeffs[m-1] x^(m-1) + ... +
/// coeffs[0], sorted ascending.  Eigenvalues of the companion matrix,
/// sharpened by bisection wherever a sign change brackets the root.
/// Imaginary parts beyond 1e-8 are refused.
inline std::vector<double> orth_poly_roots(const std::vector<double>& coeffs) {
  const int m = static_cast<int>(coeffs.size());
  if (m == 0) return {};
  if (m > 10) throw InvalidShape("root finder accepts degree at most 10");
  constexpr double imag_tol = 1e-8;

  std::vector<double> roots;
  if (m == 1) {
    roots.push_back(-coeffs[0]);
    return roots;
  }

  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) C(i, m - 1) = -coeffs[static_cast<std::size_t>(i)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success)
    throw NonRealRoots("companion eigenvalue iteration failed");
  for (int i = 0; i < m; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > imag_tol)
      throw NonRealRoots("polynomial has a complex root pair");
    roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());

  auto p = [&](double x) {
    double y = 1.0;
    for (int k = m - 1; k >= 0; --k) y = y * x + coeffs[static_cast<std::size_t>(k)];
    return y;
  };
  for (int i = 0; i < m; ++i) {
    const double r = roots[static_cast<std::size_t>(i)];
    double lo = (i > 0) ? 0.5 * (roots[static_cast<std::size_t>(i - 1)] + r)
                        : r - std::max(1.0, std::abs(r));
    double hi = (i + 1 < m) ? 0.5 * (r + roots[static_cast<std::size_t>(i + 1)])
                            : r + std::max(1.0, std::abs(r));
    double flo = p(lo), fhi = p(hi);
    if (!(flo == 0.0 || fhi == 0.0) && ((flo < 0.0) != (fhi < 0.0))) {
      for (int it = 0; it < 100 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = p(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots[static_cast<std::size_t>(i)] = 0.5 * (lo + hi);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace detail {

/// Pascal-triangle binomial coefficients, exact for n <= 20.
inline double binomial(int n, int k) {
  static const auto table = [] {
    constexpr int N = Tolerances::hard_n_cap + 1;
    std::array<std::array<double, N>, N> t{};
    for (int i = 0; i < N; ++i) {
      t[static_cast<std::size_t>(i)][0] = 1.0;
      for (int j = 1; j <= i; ++j)
        t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
            (j < i ? t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] : 0.0);
    }
    return t;
  }();
  return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

/// Moments of s = (t - beta) / alpha given the moments of t (index 0..n).
inline std::vector<double> mapped_moments(const std::vector<double>& mom, double alpha,
                                          double beta) {
  const int n = static_cast<int>(mom.size()) - 1;
  std::vector<double> out(mom.size());
  double inv_alpha_k = 1.0;
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    double neg_beta_pow = 1.0;  // (-beta)^(k-j), built from j = k downward
    for (int j = k; j >= 0; --j) {
      acc += binomial(k, j) * neg_beta_pow * mom[static_cast<std::size_t>(j)];
      neg_beta_pow *= -beta;
    }
    out[static_cast<std::size_t>(k)] = acc * inv_alpha_k;
    inv_alpha_k /= alpha;
  }
  return out;
}

/// Numerical rank of a symmetric positive semidefinite matrix by diagonally
/// pivoted Cholesky.  Pivots at or below droptol end the factorization; a
/// clearly negative remaining diagonal flags the matrix as indefinite.
inline std::pair<int, bool> psd_rank(Eigen::MatrixXd A, double droptol) {
  const int m = static_cast<int>(A.rows());
  for (int k = 0; k < m; ++k) {
    int p = k;
    for (int i = k + 1; i < m; ++i)
      if (A(i, i) > A(p, p)) p = i;
    if (A(p, p) <= droptol) {
      double lowest = A(p, p);
      for (int i = k; i < m; ++i) lowest = std::min(lowest, A(i, i));
      return {k, lowest < -10.0 * droptol};
    }
    if (p != k) {
      A.row(k).swap(A.row(p));
      A.col(k).swap(A.col(p));
    }
    const double piv = std::sqrt(A(k, k));
    for (int i = k + 1; i < m; ++i) A(i, k) /= piv;
    for (int i = k + 1; i < m; ++i)
      for (int j = k + 1; j <= i; ++j) {
        A(i, j) -= A(i, k) * A(j, k);
        A(j, i) = A(i, j);
      }
  }
  return {m, false};
}

/// Monic coefficients (ascending) of the degree-r polynomial orthogonal to
/// all lower powers under the measure with the given raw moments: the
/// leading r x r Hankel system  H a = -(mom_r, ..., mom_{2r-1}).
inline std::vector<double> orth_poly_coeffs(const std::vector<double>& mom, int r) {
  Eigen::MatrixXd H(r, r);
  Eigen::VectorXd rhs(r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) H(i, j) = mom[static_cast<std::size_t>(i + j)];
    rhs(i) = -mom[static_cast<std::size_t>(r + i)];
  }
  Eigen::VectorXd a = Eigen::PartialPivLU<Eigen::MatrixXd>(H).solve(rhs);
  return std::vector<double>(a.data(), a.data() + r);
}

/// Weights of the nodes against the leading moments: square system rows
/// k = 0..r-1 of sum_j c_j s_j^k = mom_k.
inline std::vector<double> node_weights(const std::vector<double>& nodes,
                                        const std::vector<double>& mom) {
  const int r = static_cast<int>(nodes.size());
  Eigen::MatrixXd V(r, r);
  Eigen::VectorXd rhs(r);
  for (int j = 0; j < r; ++j) {
    double p = 1.0;
    for (int k = 0; k < r; ++k) {
      V(k, j) = p;
      p *= nodes[static_cast<std::size_t>(j)];
    }
  }
  for (int k = 0; k < r; ++k) rhs(k) = mom[static_cast<std::size_t>(k)];
  Eigen::VectorXd c = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(V).solve(rhs);
  return std::vector<double>(c.data(), c.data() + r);
}

/// Gauss-Newton polish of atoms against the target moments.  Variables are
/// all coefficients plus the parameters of non-pinned atoms; the Jacobian is
/// the pseudo-Vandermonde block matrix of the configuration.  Keeps the best
/// iterate by scaled residual and never moves atoms out of the interval.
inline void refine_atoms(std::vector<Atom>& atoms, bool pin_first,
                         const MomentPoint& target, const Interval& iv) {
  const int n = target.n;
  const int M = static_cast<int>(atoms.size());
  const int vars = M + (pin_first ? M - 1 : M);

  auto scaled_residual = [&](const std::vector<Atom>& a) {
    double worst = 0.0;
    std::vector<double> acc(static_cast<std::size_t>(n + 1), 0.0);
    for (const Atom& x : a) {
      double p = 1.0;
      for (int k = 0; k <= n; ++k) {
        acc[static_cast<std::size_t>(k)] += x.c * p;
        p *= x.t;
      }
    }
    for (int k = 0; k <= n; ++k) {
      const double ref = std::max(1.0, std::abs(target.moment(k)));
      worst = std::max(worst, std::abs(acc[static_cast<std::size_t>(k)] - target.moment(k)) / ref);
    }
    return worst;
  };

  double best = scaled_residual(atoms);
  for (int iter = 0; iter < 3; ++iter) {
    Eigen::MatrixXd J(n + 1, vars);
    Eigen::VectorXd F(n + 1);
    for (int k = 0; k <= n; ++k) F(k) = -target.moment(k);
    for (int j = 0; j < M; ++j) {
      double p = 1.0;
      for (int k = 0; k <= n; ++k) {
        J(k, j) = p;
        F(k) += atoms[static_cast<std::size_t>(j)].c * p;
        p *= atoms[static_cast<std::size_t>(j)].t;
      }
    }
    int col = M;
    for (int j = 0; j < M; ++j) {
      if (pin_first && j == 0) continue;
      J(0, col) = 0.0;
      double p = 1.0;
      for (int k = 1; k <= n; ++k) {
        J(k, col) = atoms[static_cast<std::size_t>(j)].c * k * p;
        p *= atoms[static_cast<std::size_t>(j)].t;
      }
      ++col;
    }
    Eigen::VectorXd delta = Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(J).solve(-F);
    if (!delta.allFinite()) break;

    std::vector<Atom> next = atoms;
    for (int j = 0; j < M; ++j)
      next[static_cast<std::size_t>(j)].c =
          std::max(0.0, next[static_cast<std::size_t>(j)].c + delta(j));
    col = M;
    for (int j = 0; j < M; ++j) {
      if (pin_first && j == 0) continue;
      next[static_cast<std::size_t>(j)].t = std::clamp(
          next[static_cast<std::size_t>(j)].t + delta(col), iv.t_min(), iv.t_max());
      ++col;
    }
    const double cand = scaled_residual(next);
    if (cand < best) {
      best = cand;
      atoms = std::move(next);
    } else {
      break;
    }
  }
}

struct PrincipalResult {
  CanonicalNaming certificate;
  int rank = 0;        ///< quadrature rank detected on the Hankel
  bool degenerate = false;  ///< rank-deficient path, or atoms lost to merging
};

/// Constructs the minimal representation of a hull point.  Work happens on
/// the interval mapped to [-1, 1].  Odd n = 2m-1: an m-node free quadrature
/// from the moment Hankel.  Even n = 2m: the moments are shifted by t_min so
/// the pinned mass drops out, an m-node quadrature is built for the shifted
/// measure, and its weights are divided back; the pinned atom takes the
/// complement.  A rank-deficient Hankel solves at its detected rank instead.
inline PrincipalResult solve_principal(const MomentPoint& point, const Interval& iv,
                                       const Tolerances& tol) {
  const int n = point.n;
  if (n > tol.solver_n_cap || n > Tolerances::hard_n_cap)
    throw InvalidShape("principal solve dimension exceeds the configured cap");

  const double alpha = 0.5 * iv.width();
  const double beta = 0.5 * (iv.t_min() + iv.t_max());
  std::vector<double> tmom(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) tmom[static_cast<std::size_t>(k)] = point.moment(k);
  const std::vector<double> w = mapped_moments(tmom, alpha, beta);

  const bool odd = (n % 2 == 1);
  const int m = odd ? (n + 1) / 2 : n / 2;
  constexpr double node_band = 1e-7;  // roots may overshoot the interval by rounding

  // Moment sequence whose quadrature carries the free nodes.
  std::vector<double> gmom;
  if (odd) {
    gmom = w;
  } else {
    gmom.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      gmom[static_cast<std::size_t>(k)] =
          w[static_cast<std::size_t>(k + 1)] + w[static_cast<std::size_t>(k)];
  }

  int rank = 0;
  std::vector<double> nodes, weights;
  if (m > 0) {
    Eigen::MatrixXd H(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) H(i, j) = gmom[static_cast<std::size_t>(i + j)];
    const double droptol = 1e-10 * std::max(H.trace(), 1e-8);
    auto [r, indefinite] = psd_rank(H, droptol);
    if (indefinite)
      throw OutsideHull("moment Hankel is indefinite: no representing measure");
    rank = r;
    if (rank > 0) {
      try {
        nodes = orth_poly_roots(orth_poly_coeffs(gmom, rank));
      } catch (const NonRealRoots& e) {
        throw OutsideHull(std::string("complex quadrature nodes: ") + e.what());
      }
      for (double& s : nodes) {
        if (s < -1.0 - node_band || s > 1.0 + node_band)
          throw OutsideHull("quadrature node falls outside the interval");
        s = std::clamp(s, -1.0, 1.0);
      }
      weights = node_weights(nodes, gmom);
    }
  }

  std::vector<Atom> atoms;
  if (odd) {
    double sum = 0.0;
    for (int j = 0; j < rank; ++j) {
      double c = weights[static_cast<std::size_t>(j)];
      if (c < -tol.eps_mem) throw OutsideHull("negative quadrature weight");
      c = std::max(c, 0.0);
      sum += c;
      atoms.push_back({alpha * nodes[static_cast<std::size_t>(j)] + beta, c});
    }
    if (sum <= 0.0) throw OutsideHull("representation carries no mass");
    for (Atom& a : atoms) a.c /= sum;
  } else {
    // Divide out the shift; the pinned atom absorbs the complement.
    double sum = 0.0;
    for (int j = 0; j < rank; ++j) {
      const double s = nodes[static_cast<std::size_t>(j)];
      if (s + 1.0 <= 1e-10)
        throw OutsideHull("shifted quadrature node collapses onto t_min");
      double c = weights[static_cast<std::size_t>(j)] / (s + 1.0);
      if (c < -tol.eps_mem) throw OutsideHull("negative quadrature weight");
      c = std::max(c, 0.0);
      sum += c;
      atoms.push_back({alpha * s + beta, c});
    }
    double c0 = 1.0 - sum;
    if (c0 < -tol.eps_mem) throw OutsideHull("mass at t_min would be negative");
    c0 = std::max(c0, 0.0);
    const double total = c0 + sum;
    c0 /= total;
    for (Atom& a : atoms) a.c /= total;
    atoms.insert(atoms.begin(), Atom{iv.t_min(), c0});
  }

  refine_atoms(atoms, !odd, point, iv);
  double mass = 0.0;
  for (const Atom& a : atoms) mass += a.c;
  if (mass <= 0.0) throw OutsideHull("representation carries no mass");
  for (Atom& a : atoms) a.c /= mass;

  Naming raw(iv, n, odd ? Parity::Integer : Parity::HalfInteger, std::move(atoms), tol);
  PrincipalResult result{canonicalize(raw, tol), rank, false};

  const int full = odd ? m : m + 1;
  result.degenerate = (rank < m) || (result.certificate.naming().atom_count() < full);

  const MomentPoint back = evaluate(result.certificate.naming());
  for (int k = 1; k <= n; ++k) {
    const double ref = std::max(1.0, std::abs(point.moment(k)));
    if (std::abs(back.moment(k) - point.moment(k)) > tol.eps_fit * ref) {
      std::ostringstream msg;
      msg << "certificate residual " << std::abs(back.moment(k) - point.moment(k))
          << " in component " << k << " exceeds the fit tolerance";
      throw OutsideHull(msg.str());
    }
  }
  return result;
}

}  // namespace detail

/// Minimal-representation solve: at most (n+1)/2 atoms for odd n, and for
/// even n at most (n+2)/2 atoms with the first pinned at t_min.  Throws
/// OutsideHull when the point admits no such representation.
inline CanonicalNaming principal_from_moments(const MomentPoint& point, const Interval& iv,
                                              const Tolerances& tol = {}) {
  return detail::solve_principal(point, iv, tol).certificate;
}

enum class Region { Inside, BoundaryFace, Outside };

/// Outcome of a membership query.  rank counts the certificate atoms.
struct MembershipVerdict {
  Region tag = Region::Outside;
  int rank = 0;
  std::optional<CanonicalNaming> certificate;
};

/// Classifies a point against the hull of the truncated curve.  Failures of
/// the principal solve become the Outside verdict; a degenerate rank or any
/// weight or free node at its bound means BoundaryFace.
inline MembershipVerdict membership(const MomentPoint& point, const Interval& iv,
                                    const Tolerances& tol = {}) {
  std::optional<detail::PrincipalResult> result;
  try {
    result = detail::solve_principal(point, iv, tol);
  } catch (const OutsideHull&) {
    return {Region::Outside, 0, std::nullopt};
  }

  const Naming& nm = result->certificate.naming();
  const double et = tol.eps_t(iv);
  bool at_bound = false;
  for (int j = 0; j < nm.atom_count(); ++j) {
    const Atom& a = nm.atoms()[static_cast<std::size_t>(j)];
    const bool pinned = (nm.parity() == Parity::HalfInteger && j == 0);
    if (a.c <= tol.eps_mem) at_bound = true;
    if (!pinned &&
        (a.t - iv.t_min() <= et || iv.t_max() - a.t <= et))
      at_bound = true;
  }
  const Region tag =
      (result->degenerate || at_bound) ? Region::BoundaryFace : Region::Inside;
  return {tag, nm.atom_count(), std::move(result->certificate)};
}

}  // namespace momentcurve
