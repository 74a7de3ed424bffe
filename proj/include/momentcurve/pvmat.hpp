#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"

namespace momentcurve {

/// Shape of an (n+1) x (n+1) pseudo-Vandermonde matrix: q plain power
/// columns over the given nodes, followed by the n+1-q derivative columns of
/// the first n+1-q power columns.  Requires (n+1)/2 <= q <= n+1 so the
/// derivative block never outruns the node list.
struct PVMatrix {
  int n;
  int q;
  std::vector<double> nodes;

  PVMatrix(int n_, int q_, std::vector<double> nodes_)
      : n(n_), q(q_), nodes(std::move(nodes_)) {
    if (n < 0 || n > Tolerances::hard_n_cap)
      throw InvalidShape("pseudo-Vandermonde dimension out of range");
    if (2 * q < n + 1 || q > n + 1)
      throw InvalidShape("pseudo-Vandermonde column split q out of range");
    if (static_cast<int>(nodes.size()) != q)
      throw InvalidShape("pseudo-Vandermonde needs exactly q nodes");
    for (double u : nodes)
      if (!std::isfinite(u)) throw InvalidShape("pseudo-Vandermonde nodes must be finite");
  }
};

/// Assembles the dense matrix.  Column j < q holds (1, u_j, ..., u_j^n);
/// column q+j holds the entrywise derivative (0, 1, 2 u_j, ..., n u_j^(n-1)).
inline Eigen::MatrixXd build(const PVMatrix& shape) {
  const int size = shape.n + 1;
  Eigen::MatrixXd A(size, size);
  for (int j = 0; j < shape.q; ++j) {
    double p = 1.0;
    for (int k = 0; k < size; ++k) {
      A(k, j) = p;
      p *= shape.nodes[static_cast<std::size_t>(j)];
    }
  }
  for (int j = 0; j < size - shape.q; ++j) {
    const double u = shape.nodes[static_cast<std::size_t>(j)];
    A(0, shape.q + j) = 0.0;
    double p = 1.0;
    for (int k = 1; k < size; ++k) {
      A(k, shape.q + j) = k * p;
      p *= u;
    }
  }
  return A;
}

namespace detail {

/// One elimination round of the determinant recursion.  Subtracting u_1
/// times each row from the next clears the first column; expanding along it
/// turns the q-1 remaining power columns into (u_j - u_1) times smaller power
/// columns and turns the u_1 derivative column into a plain u_1 power column.
/// Subtracting the matching power column from each remaining derivative
/// column leaves (u_j - u_1) times a smaller derivative column.  The
/// extracted factors multiply the determinant of the smaller matrix, whose
/// node order becomes (u_2, ..., u_q, u_1).
inline double det_recursive_step(int n, int q, std::vector<double> u) {
  if (n == 0) return 1.0;  // the single remaining entry is 1
  double factor = 1.0;
  for (int j = 1; j < q; ++j) factor *= u[static_cast<std::size_t>(j)] - u[0];
  const int deriv = n + 1 - q;
  for (int j = 1; j < deriv; ++j) factor *= u[static_cast<std::size_t>(j)] - u[0];

  std::vector<double> next;
  next.reserve(static_cast<std::size_t>(q));
  for (int j = 1; j < q; ++j) next.push_back(u[static_cast<std::size_t>(j)]);
  int next_q = q - 1;
  if (q <= n) {
    next.push_back(u[0]);  // the u_1 derivative column survives as a power column
    next_q = q;
  }
  return factor * det_recursive_step(n - 1, next_q, std::move(next));
}

}  // namespace detail

/// Determinant by the structured elimination recursion.  Exact node
/// duplicates are refused; the result is a signed product of node
/// differences, so it vanishes nowhere on distinct nodes.
inline double det_recursive(const PVMatrix& shape) {
  for (std::size_t i = 0; i < shape.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < shape.nodes.size(); ++j)
      if (shape.nodes[i] == shape.nodes[j])
        throw DegenerateNodes("duplicate pseudo-Vandermonde nodes");
  return detail::det_recursive_step(shape.n, shape.q, shape.nodes);
}

/// Determinant via partially pivoted elimination, as an independent route.
/// Singular input comes back as (numerically) zero rather than an error.
inline double det_lu(const PVMatrix& shape) {
  if (shape.n == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(build(shape)).determinant();
}

/// Solves the square truncated power system sum_j c_j t_j^k = v_k for
/// k = 0..K-1, where K is the node count and v_0 = 1.  Refuses duplicate
/// nodes and condition numbers beyond 1/eps_cond.
inline std::vector<double> solve_weights(const std::vector<double>& nodes,
                                         const MomentPoint& point,
                                         const Tolerances& tol = {}) {
  const int K = static_cast<int>(nodes.size());
  if (K < 1 || K > point.n + 1)
    throw InvalidShape("weight solve needs between 1 and n+1 nodes");
  if (point.n > Tolerances::hard_n_cap)
    throw InvalidShape("weight solve dimension out of range");
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j)
      if (nodes[static_cast<std::size_t>(i)] == nodes[static_cast<std::size_t>(j)])
        throw DegenerateNodes("duplicate nodes in weight solve");

  Eigen::MatrixXd V(K, K);
  Eigen::VectorXd rhs(K);
  for (int j = 0; j < K; ++j) {
    double p = 1.0;
    for (int k = 0; k < K; ++k) {
      V(k, j) = p;
      p *= nodes[static_cast<std::size_t>(j)];
    }
  }
  for (int k = 0; k < K; ++k) rhs(k) = point.moment(k);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(V);
  const double smin = svd.singularValues()(K - 1);
  const double smax = svd.singularValues()(0);
  if (!(smin > smax * tol.eps_cond))
    throw ConditioningFailure("weight solve condition number beyond 1/eps_cond");

  Eigen::VectorXd c = Eigen::PartialPivLU<Eigen::MatrixXd>(V).solve(rhs);
  return std::vector<double>(c.data(), c.data() + K);
}

}  // namespace momentcurve
