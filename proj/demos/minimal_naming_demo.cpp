// Walk one point through the full pipeline: build a redundant naming,
// evaluate it, recover the canonical minimal naming two independent ways,
// and classify nearby points.

#include <cstdio>

#include "momentcurve/momentcurve.hpp"

namespace mc = momentcurve;

int main() {
  const mc::Interval iv(0.0, 1.0);
  const mc::Tolerances tol;

  // A deliberately redundant five-atom naming of a degree-3 point.
  const mc::Naming loose(iv, 3, mc::Parity::Integer,
                         {{0.10, 0.20}, {0.30, 0.25}, {0.55, 0.15},
                          {0.70, 0.30}, {0.95, 0.10}},
                         tol);
  const mc::MomentPoint p = mc::evaluate(loose);
  std::printf("point:      (%.12f, %.12f, %.12f)\n", p.v[0], p.v[1], p.v[2]);
  std::printf("index of the loose naming: %s (proper bound %s)\n",
              mc::index(loose).str().c_str(),
              mc::proper_index_bound(loose.n()).str().c_str());

  // Route one: direct construction from the point.
  const mc::CanonicalNaming direct = mc::principal_from_moments(p, iv, tol);
  // Route two: stepwise reduction of the loose naming.
  const mc::CanonicalNaming reduced = mc::reduce_to_principal(loose, tol);

  auto show = [](const char* label, const mc::CanonicalNaming& c) {
    std::printf("%s", label);
    for (const mc::Atom& a : c.naming().atoms())
      std::printf("  (t=%.12f, c=%.12f)", a.t, a.c);
    std::printf("\n");
  };
  show("direct: ", direct);
  show("reduced:", reduced);
  std::printf("routes agree: %s\n",
              mc::equivalent(direct.naming(), reduced.naming(), tol) ? "yes" : "no");

  // Membership of the point itself and of a slightly lifted copy.
  auto classify = [&](const char* label, mc::MomentPoint q) {
    const mc::MembershipVerdict v = mc::membership(q, iv, tol);
    const char* word = v.tag == mc::Region::Inside       ? "inside"
                       : v.tag == mc::Region::BoundaryFace ? "boundary"
                                                           : "outside";
    std::printf("%s -> %s (rank %d)\n", label, word, v.rank);
  };
  classify("original point         ", p);
  mc::MomentPoint above = p;
  above.v[1] += 0.2;  // pushes the second power coordinate past the hull
  classify("second coordinate +0.2 ", above);
  return 0;
}
