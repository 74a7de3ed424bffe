#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"
#include "momentcurve/principal.hpp"

namespace momentcurve {

namespace detail {

/// Deterministic 64-bit generator (splitmix64) with the distribution helpers
/// the samplers need.  Identical across platforms, unlike the standard
/// library distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform draw from [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard exponential via inversion.
  double exponential() { return -std::log1p(-uniform01()); }

  /// Symmetric Dirichlet(1) vector: normalized exponentials.
  std::vector<double> dirichlet(int k) {
    std::vector<double> w(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (double& x : w) {
      x = exponential();
      sum += x;
    }
    for (double& x : w) x /= sum;
    return w;
  }

  /// Uniform direction on the unit sphere of R^k (Box-Muller + normalize).
  std::vector<double> unit_vector(int k) {
    std::vector<double> d(static_cast<std::size_t>(k));
    while (true) {
      double norm2 = 0.0;
      for (int i = 0; i < k; i += 2) {
        const double u1 = std::max(uniform01(), 1e-300);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        d[static_cast<std::size_t>(i)] = r * std::cos(6.283185307179586 * u2);
        if (i + 1 < k) d[static_cast<std::size_t>(i + 1)] = r * std::sin(6.283185307179586 * u2);
      }
      for (double x : d) norm2 += x * x;
      if (norm2 > 1e-12) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : d) x *= inv;
        return d;
      }
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace detail

/// Discretization used by the LP membership check.
struct GridSpec {
  int points;
  double slack;

  GridSpec(int points_, double slack_) : points(points_), slack(slack_) {
    if (points < 2) throw InvalidShape("grid needs at least two points");
    if (!(slack > 0.0)) throw InvalidShape("grid slack must be positive");
  }
};

/// Membership against the polytope spanned by the curve sampled at
/// grid.points equally spaced parameters: a phase-1 feasibility LP on
/// { sum l_i lift(t_i) = v, sum l_i = 1, l >= 0 }, solved on a dense tableau
/// with Bland's rule.  True when every equality residual is within slack.
inline bool lp_membership(const MomentPoint& point, const Interval& iv,
                          const GridSpec& grid) {
  const int n = point.n;
  if (grid.points < n + 2) throw InvalidShape("grid must have at least n+2 points");
  const int G = grid.points;
  const int rows = n + 1;
  const int cols = G + rows;  // structural columns then one artificial per row

  // Tableau T holds the constraint matrix and right-hand side, rows
  // normalized so the right-hand side is nonnegative.
  std::vector<std::vector<double>> T(static_cast<std::size_t>(rows),
                                     std::vector<double>(static_cast<std::size_t>(cols), 0.0));
  std::vector<double> rhs(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) rhs[static_cast<std::size_t>(i)] = point.moment(i);
  for (int j = 0; j < G; ++j) {
    const double t = iv.t_min() + iv.width() * j / (G - 1);
    double p = 1.0;
    for (int i = 0; i < rows; ++i) {
      T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = p;
      p *= t;
    }
  }
  for (int i = 0; i < rows; ++i) {
    if (rhs[static_cast<std::size_t>(i)] < 0.0) {
      rhs[static_cast<std::size_t>(i)] = -rhs[static_cast<std::size_t>(i)];
      for (int j = 0; j < G; ++j)
        T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            -T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    T[static_cast<std::size_t>(i)][static_cast<std::size_t>(G + i)] = 1.0;
  }

  // Phase-1 objective: minimize the sum of artificials.  Reduced costs start
  // as cost row minus the sum of constraint rows (artificials are basic).
  std::vector<double> obj(static_cast<std::size_t>(cols), 0.0);
  double obj_rhs = 0.0;
  for (int j = 0; j < cols; ++j) {
    double s = (j >= G) ? 1.0 : 0.0;
    for (int i = 0; i < rows; ++i)
      s -= T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    obj[static_cast<std::size_t>(j)] = s;
  }
  for (int i = 0; i < rows; ++i) obj_rhs -= rhs[static_cast<std::size_t>(i)];

  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = G + i;

  constexpr double tiny = 1e-11;
  const long max_iter = 200L * (G + rows);
  for (long iter = 0;; ++iter) {
    if (iter > max_iter) throw OracleFailure("simplex iteration cap reached");
    int enter = -1;
    for (int j = 0; j < cols; ++j)
      if (obj[static_cast<std::size_t>(j)] < -tiny) {
        enter = j;
        break;  // Bland: lowest index
      }
    if (enter < 0) break;

    int leave = -1;
    double best = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double a = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
      if (a > tiny) {
        const double ratio = rhs[static_cast<std::size_t>(i)] / a;
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[static_cast<std::size_t>(i)] <
                                  basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) throw OracleFailure("phase-1 objective unbounded");

    auto& prow = T[static_cast<std::size_t>(leave)];
    const double piv = prow[static_cast<std::size_t>(enter)];
    for (double& x : prow) x /= piv;
    rhs[static_cast<std::size_t>(leave)] /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double f = T[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j)
        T[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * prow[static_cast<std::size_t>(j)];
      rhs[static_cast<std::size_t>(i)] -= f * rhs[static_cast<std::size_t>(leave)];
    }
    const double fo = obj[static_cast<std::size_t>(enter)];
    if (fo != 0.0) {
      for (int j = 0; j < cols; ++j)
        obj[static_cast<std::size_t>(j)] -= fo * prow[static_cast<std::size_t>(j)];
      obj_rhs -= fo * rhs[static_cast<std::size_t>(leave)];
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  double worst = 0.0;
  for (int i = 0; i < rows; ++i)
    if (basis[static_cast<std::size_t>(i)] >= G)
      worst = std::max(worst, rhs[static_cast<std::size_t>(i)]);
  return worst <= grid.slack;
}

/// Seeded random naming: parameters i.i.d. uniform on the interval, sorted;
/// coefficients symmetric Dirichlet(1).  Even dimensions get an extra pinned
/// atom at t_min whose coefficient joins the Dirichlet draw.
inline Naming random_naming(int n, const Interval& iv, int atom_count,
                            std::uint64_t seed) {
  if (n < 1) throw InvalidShape("random naming needs a positive dimension");
  if (atom_count < 1) throw InvalidShape("random naming needs at least one atom");
  detail::Rng rng(seed);
  const bool even = (n % 2 == 0);
  const int total = atom_count + (even ? 1 : 0);
  const std::vector<double> c = rng.dirichlet(total);
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(total));
  if (even) atoms.push_back({iv.t_min(), c[0]});
  for (int j = even ? 1 : 0; j < total; ++j)
    atoms.push_back({rng.uniform(iv.t_min(), iv.t_max()), c[static_cast<std::size_t>(j)]});
  return Naming(iv, n, even ? Parity::HalfInteger : Parity::Integer, std::move(atoms));
}

namespace detail {

/// Distance between two canonical atom lists: the worst |dt| + |dc| over
/// atoms paired in sorted order, or `whole` when the counts differ.
inline double canonical_distance(const std::vector<Atom>& a, const std::vector<Atom>& b,
                                 double whole) {
  if (a.size() != b.size()) return whole;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i].t - b[i].t) + std::abs(a[i].c - b[i].c));
  return worst;
}

}  // namespace detail

/// Worst canonical-naming movement over random perturbations of an interior
/// point.  Directions are drawn from the seed; each is probed along the
/// dyadic magnitude ladder radius, radius/2, ... down to a fixed floor.
/// Doubling the radius prepends one rung and keeps the rest of the ladder
/// bit-identical, and a direction is redrawn only when its bottom rung —
/// which does not depend on the radius — leaves the interior, so for a fixed
/// seed the probed set only grows with the radius and the result is monotone
/// in it.  Larger rungs that leave the interior are skipped.  Redraws stop
/// at ten times the sample budget.  A canonical rank change reports the
/// configured maximum distance (interval width plus one).
inline double continuity_probe(const MomentPoint& point, const Interval& iv,
                               double radius, int samples, std::uint64_t seed,
                               const Tolerances& tol = {}) {
  if (radius < 0.0) throw InvalidShape("probe radius must be nonnegative");
  if (samples < 1) throw InvalidShape("probe needs at least one sample");
  const MembershipVerdict base = membership(point, iv, tol);
  if (base.tag != Region::Inside)
    throw NotInterior("continuity probe needs a strictly interior point");
  if (radius == 0.0) return 0.0;

  const std::vector<Atom>& base_atoms = base.certificate->naming().atoms();
  const double whole = iv.width() + 1.0;
  constexpr double floor = 1e-12;

  // Descending rungs: radius, radius/2, ..., down to the last value >= floor.
  // Exact halving makes the ladder for radius a strict suffix of the ladder
  // for 2*radius.
  std::vector<double> rungs;
  for (double mag = radius; mag >= floor; mag *= 0.5) rungs.push_back(mag);

  auto probe_at = [&](double mag, const std::vector<double>& dir) {
    std::vector<double> v = point.v;
    for (int k = 0; k < point.n; ++k)
      v[static_cast<std::size_t>(k)] += mag * dir[static_cast<std::size_t>(k)];
    return membership(MomentPoint(point.n, std::move(v)), iv, tol);
  };

  detail::Rng rng(seed);
  double worst = 0.0;
  int accepted = 0;
  int budget = 10 * samples;
  while (accepted < samples) {
    if (budget-- <= 0)
      throw NotInterior("perturbations keep leaving the interior");
    const std::vector<double> dir = rng.unit_vector(point.n);
    if (rungs.empty()) {  // radius below the ladder floor: nothing to probe
      ++accepted;
      continue;
    }
    // Bottom rung first: its magnitude is shared by every radius above it,
    // so the accept/redraw decision does not depend on the radius.
    const MembershipVerdict bottom = probe_at(rungs.back(), dir);
    if (bottom.tag != Region::Inside) continue;
    double local = detail::canonical_distance(
        base_atoms, bottom.certificate->naming().atoms(), whole);
    for (std::size_t r = 0; r + 1 < rungs.size(); ++r) {
      const MembershipVerdict probe = probe_at(rungs[r], dir);
      if (probe.tag != Region::Inside) continue;
      local = std::max(local, detail::canonical_distance(
                                  base_atoms, probe.certificate->naming().atoms(), whole));
    }
    worst = std::max(worst, local);
    ++accepted;
  }
  return worst;
}

}  // namespace momentcurve
