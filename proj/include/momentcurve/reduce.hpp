#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"
#include "momentcurve/principal.hpp"
#include "momentcurve/reduction.hpp"

namespace momentcurve {

namespace detail {

/// Merges runs of atoms whose parameters agree within eps.
inline void merge_close_atoms(std::vector<Atom>& atoms, double eps) {
  std::size_t out = 0;
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].t - atoms[out].t <= eps) {
      atoms[out].c += atoms[i].c;
    } else {
      atoms[++out] = atoms[i];
    }
  }
  atoms.resize(out + 1);
}

}  // namespace detail

/// Reduces any naming of matching parity to the canonical one, preserving the
/// named point.  While the index exceeds (n+1)/2, the first Q atoms (Q chosen
/// so the extracted sub-naming has index (n+3)/2) are rescaled to unit mass,
/// re-named minimally by the principal solve, and spliced back scaled by the
/// extracted mass; equal parameters merge on the spot.  An integer naming of
/// even dimension is first given a zero-coefficient atom at t_min.
inline CanonicalNaming reduce_to_principal(const Naming& P, const Tolerances& tol = {}) {
  const int n = P.n();
  const bool odd = (n % 2 == 1);

  Naming cur = P;
  if (!odd && P.parity() == Parity::Integer) {
    std::vector<Atom> atoms;
    atoms.reserve(P.atoms().size() + 1);
    atoms.push_back({P.interval().t_min(), 0.0});
    atoms.insert(atoms.end(), P.atoms().begin(), P.atoms().end());
    cur = Naming(P.interval(), n, Parity::HalfInteger, std::move(atoms), tol);
  } else if (odd && P.parity() == Parity::HalfInteger) {
    throw ParityMismatch("odd dimension does not take half-integer namings");
  }

  const int Q = odd ? (n + 3) / 2 : (n + 4) / 2;
  const int max_iterations = 4 * cur.atom_count() + 8;
  int iterations = 0;

  while (true) {
    while (is_reducible(cur, tol)) cur = simplify_once(cur, tol);
    if (index(cur) <= proper_index_bound(n)) break;
    if (++iterations > max_iterations)
      throw ReductionStalled("dimension reduction made no progress");

    // Rescale the first Q atoms to a sub-naming of unit mass.
    std::vector<Atom> head(cur.atoms().begin(), cur.atoms().begin() + Q);
    double mass = 0.0;
    for (const Atom& a : head) mass += a.c;
    if (mass <= 0.0) throw ReductionStalled("leading atoms carry no mass");
    for (Atom& a : head) a.c /= mass;
    Naming sub(cur.interval(), n, cur.parity(), std::move(head), tol);

    const CanonicalNaming renamed =
        principal_from_moments(evaluate(sub), cur.interval(), tol);

    std::vector<Atom> spliced;
    spliced.reserve(static_cast<std::size_t>(renamed.naming().atom_count()) +
                    cur.atoms().size() - static_cast<std::size_t>(Q));
    for (const Atom& a : renamed.naming().atoms()) spliced.push_back({a.t, a.c * mass});
    spliced.insert(spliced.end(), cur.atoms().begin() + Q, cur.atoms().end());
    std::sort(spliced.begin(), spliced.end(),
              [](const Atom& x, const Atom& y) { return x.t < y.t; });
    detail::merge_close_atoms(spliced, tol.eps_t(cur.interval()));
    cur = Naming(cur.interval(), n, cur.parity(), std::move(spliced), tol);
  }
  return canonicalize(cur, tol);
}

}  // namespace momentcurve
