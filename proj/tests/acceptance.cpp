// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Every tolerance and sample count is pinned here; the
// random streams are seeded constants, so the run is reproducible bit for
// bit.  "Relative per component" always means |delta| <= tol * max(1, |v|).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "momentcurve/momentcurve.hpp"
#include "test_support.hpp"

namespace mc = momentcurve;
using test_support::make_naming;
using test_support::uniform;

namespace {

int failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", number, name,
              detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double worst_rel_diff(const mc::MomentPoint& a, const mc::MomentPoint& b) {
  double worst = 0.0;
  for (int k = 0; k < a.n; ++k) {
    const double x = a.v[static_cast<std::size_t>(k)];
    const double y = b.v[static_cast<std::size_t>(k)];
    worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(x)));
  }
  return worst;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// --- criterion 1: solver round-trip over random hull points ---------------
void criterion_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  auto g = test_support::rng(20260816);
  double worst_low = 0.0, worst_high = 0.0;
  bool shape_ok = true;
  int count = 0;
  for (const mc::Interval iv : {mc::Interval(0.0, 1.0), mc::Interval(-1.0, 2.0)}) {
    for (int n = 1; n <= 8; ++n) {
      for (int rep = 0; rep < 500; ++rep) {
        const mc::Naming gen = make_naming(g, n, iv, n + 2);
        const mc::MomentPoint want = mc::evaluate(gen);
        const mc::CanonicalNaming C = mc::principal_from_moments(want, iv);
        const double rel = worst_rel_diff(want, mc::evaluate(C.naming()));
        (n <= 6 ? worst_low : worst_high) = std::max(n <= 6 ? worst_low : worst_high, rel);
        if (!(mc::index(C.naming()) <= mc::proper_index_bound(n))) shape_ok = false;
        if (n % 2 == 0 && C.naming().atoms()[0].t != iv.t_min()) shape_ok = false;
        ++count;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = worst_low <= 1e-8 && worst_high <= 1e-6 && shape_ok && elapsed < 30.0;
  report(1, "round-trip existence", ok,
         fmt("%d points; worst rel %.2e (n<=6) / %.2e (n in 7..8); shapes %s; %.1f s",
             count, worst_low, worst_high, shape_ok ? "ok" : "BROKEN", elapsed));
}

// --- criterion 2: one minimal naming, two independent routes ---------------
void criterion_uniqueness() {
  auto g = test_support::rng(20260817);
  const mc::Interval iv(0.0, 1.0);
  int mismatches = 0;
  double worst_t = 0.0, worst_c = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 200; ++rep) {
      const mc::Naming gen = make_naming(g, n, iv, 2 * (n + 1));
      const mc::Naming a = mc::principal_from_moments(mc::evaluate(gen), iv).naming();
      const mc::Naming b = mc::reduce_to_principal(gen).naming();
      if (a.atom_count() != b.atom_count()) {
        ++mismatches;
        continue;
      }
      for (int i = 0; i < a.atom_count(); ++i) {
        worst_t = std::max(worst_t, std::abs(a.atoms()[static_cast<std::size_t>(i)].t -
                                             b.atoms()[static_cast<std::size_t>(i)].t));
        worst_c = std::max(worst_c, std::abs(a.atoms()[static_cast<std::size_t>(i)].c -
                                             b.atoms()[static_cast<std::size_t>(i)].c));
      }
    }
  }
  const bool ok = mismatches == 0 && worst_t <= 1e-6 * iv.width() && worst_c <= 1e-6;
  report(2, "uniqueness across solve routes", ok,
         fmt("1200 points; %d count mismatches; worst dt %.2e, dc %.2e", mismatches,
             worst_t, worst_c));
}

// --- criterion 3: determinant routes agree; duplicates are singular --------
void criterion_determinants() {
  auto g = test_support::rng(20260818);
  auto gapped = [&](int q, double gap) {
    for (;;) {
      std::vector<double> u(static_cast<std::size_t>(q));
      for (double& x : u) x = uniform(g, -1.0, 2.0);
      std::vector<double> s = u;
      std::sort(s.begin(), s.end());
      bool ok = true;
      for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] < gap) ok = false;
      if (ok) return u;
    }
  };
  auto hadamard = [](const Eigen::MatrixXd& m) {
    double b = 1.0;
    for (int j = 0; j < m.cols(); ++j) b *= m.col(j).norm();
    return std::max(1.0, b);
  };

  double worst_rel = 0.0;
  bool nonzero_ok = true;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 1 + static_cast<int>(g() % 8);
    const int qlo = (n + 2) / 2;
    const int q = qlo + static_cast<int>(g() % static_cast<unsigned>(n + 2 - qlo));
    const mc::PVMatrix shape(n, q, gapped(q, 0.05));
    const double a = mc::det_recursive(shape);
    const double b = mc::det_lu(shape);
    if (!(std::abs(b) > 0.0)) nonzero_ok = false;
    worst_rel = std::max(worst_rel, std::abs(a - b) / std::max(1.0, std::abs(b)));
  }

  double worst_dup = 0.0;  // |det_lu| / hadamard on duplicate-node input
  bool dup_rejected = true;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(g() % 8);
    const int qlo = std::max(2, (n + 2) / 2);
    const int q = qlo + static_cast<int>(g() % static_cast<unsigned>(n + 2 - qlo));
    std::vector<double> u = gapped(q, 0.05);
    u[static_cast<std::size_t>(g() % static_cast<unsigned>(q - 1)) + 1] = u[0];
    const mc::PVMatrix shape(n, q, u);
    worst_dup = std::max(worst_dup,
                         std::abs(mc::det_lu(shape)) / hadamard(mc::build(shape)));
    try {
      (void)mc::det_recursive(shape);
      dup_rejected = false;
    } catch (const mc::DegenerateNodes&) {
    }
  }
  const bool ok = worst_rel <= 1e-10 && nonzero_ok && worst_dup <= 1e-12 && dup_rejected;
  report(3, "determinant route agreement", ok,
         fmt("1000 gapped cases worst rel %.2e, nonzero %s; 100 duplicate cases "
             "worst scaled |det| %.2e, all rejected by recursion %s",
             worst_rel, nonzero_ok ? "ok" : "BROKEN", worst_dup,
             dup_rejected ? "yes" : "NO"));
}

// --- criterion 4: hand-computed closed forms --------------------------------
void criterion_closed_forms() {
  const mc::Interval iv(0.0, 1.0);
  const mc::Naming even_case =
      mc::principal_from_moments(mc::MomentPoint(2, {0.5, 0.3}), iv).naming();
  double err2 = 1.0;
  if (even_case.atom_count() == 2) {
    err2 = std::max(
        std::max(std::abs(even_case.atoms()[0].t - 0.0),
                 std::abs(even_case.atoms()[0].c - 1.0 / 6.0)),
        std::max(std::abs(even_case.atoms()[1].t - 0.6),
                 std::abs(even_case.atoms()[1].c - 5.0 / 6.0)));
  }
  const mc::Naming odd_case =
      mc::principal_from_moments(mc::MomentPoint(3, {0.5, 0.3125, 0.21875}), iv).naming();
  double err3 = 1.0;
  if (odd_case.atom_count() == 2) {
    err3 = std::max(std::max(std::abs(odd_case.atoms()[0].t - 0.25),
                             std::abs(odd_case.atoms()[0].c - 0.5)),
                    std::max(std::abs(odd_case.atoms()[1].t - 0.75),
                             std::abs(odd_case.atoms()[1].c - 0.5)));
  }
  const bool ok = err2 <= 1e-12 && err3 <= 1e-10;
  report(4, "closed-form cases", ok,
         fmt("pinned-atom case err %.2e (tol 1e-12); symmetric case err %.2e (tol 1e-10)",
             err2, err3));
}

// --- criterion 5: certificate solver vs. grid LP ----------------------------
void criterion_oracle_agreement() {
  auto g = test_support::rng(20260819);
  const mc::Interval iv(0.0, 1.0);
  const mc::GridSpec grid(2001, 1e-6);
  int hard = 0, band = 0, inside_seen = 0, outside_seen = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (int k = 1; k <= n; ++k)
        v[static_cast<std::size_t>(k - 1)] =
            uniform(g, test_support::power_min(iv, k), test_support::power_max(iv, k));
      const mc::MomentPoint p(n, v);
      const mc::Region tag = mc::membership(p, iv).tag;
      const bool feasible = mc::lp_membership(p, iv, grid);
      if (tag != mc::Region::Outside) {
        ++inside_seen;
        if (!feasible) ++hard;  // a certificate exists, the LP must confirm it
      } else {
        ++outside_seen;
        if (feasible) ++band;  // only possible within the slack band
      }
    }
  }
  report(5, "certificate and LP oracles agree", hard == 0,
         fmt("800 box points: %d certified, %d outside; %d hard disagreements, "
             "%d inside the boundary band",
             inside_seen, outside_seen, hard, band));
}

// --- criterion 6: canonical-form algebra ------------------------------------
void criterion_canonical_algebra() {
  auto g = test_support::rng(20260820);
  const mc::Interval iv(0.0, 1.0);

  // (a) bit-exact idempotence.
  bool idempotent = true;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(g() % 8);
    const int atoms = std::max(1, (n % 2) ? (n + 1) / 2 : n / 2);
    const mc::Naming P = make_naming(g, n, iv, atoms);
    const mc::Naming once = mc::canonicalize(P).naming();
    const mc::Naming twice = mc::canonicalize(once).naming();
    if (once.atom_count() != twice.atom_count()) idempotent = false;
    for (int i = 0; idempotent && i < once.atom_count(); ++i) {
      if (once.atoms()[static_cast<std::size_t>(i)].t !=
              twice.atoms()[static_cast<std::size_t>(i)].t ||
          once.atoms()[static_cast<std::size_t>(i)].c !=
              twice.atoms()[static_cast<std::size_t>(i)].c)
        idempotent = false;
    }
  }

  // A base naming with room under the index bound for one more atom.
  auto small_base = [&](int n) {
    const bool even = (n % 2 == 0);
    const int free_atoms = even ? std::max(0, n / 2 - 1) : (n - 1) / 2;
    std::vector<mc::Atom> atoms;
    if (even) atoms.push_back({iv.t_min(), 0.0});
    for (int j = 0; j < free_atoms; ++j)
      atoms.push_back({uniform(g, 0.05 + 0.9 * j / std::max(1, free_atoms),
                               0.05 + 0.9 * (j + 1) / std::max(1, free_atoms) - 0.01),
                       0.0});
    double sum = 0.0;
    std::vector<double> w(atoms.size());
    for (double& x : w) {
      x = 0.05 + uniform(g, 0.0, 1.0);
      sum += x;
    }
    for (std::size_t j = 0; j < atoms.size(); ++j) atoms[j].c = w[j] / sum;
    return mc::Naming(iv, n, even ? mc::Parity::HalfInteger : mc::Parity::Integer,
                      std::move(atoms));
  };

  // (b) positive chains: zero-additions and equal splits stay equivalent.
  int chain_failures = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 2 + static_cast<int>(g() % 7);  // dimension 1 has no headroom
    const mc::Naming base = small_base(n);
    std::vector<mc::Atom> atoms = base.atoms();
    if (g() % 2 == 0) {
      atoms.push_back({uniform(g, 0.02, 0.98), 0.0});  // zero-addition
    } else {
      const std::size_t i = g() % atoms.size();  // equal split
      const mc::Atom half{atoms[i].t, atoms[i].c / 2.0};
      atoms[i].c -= half.c;
      atoms.push_back(half);
    }
    const mc::Naming variant(iv, n, base.parity(), std::move(atoms));
    if (!mc::equivalent(base, variant)) ++chain_failures;
  }

  // Full-capacity base: saturates the index bound but keeps at least one
  // movable interior atom, so perturbing it preserves validity.
  auto full_base = [&](int n) {
    const bool even = (n % 2 == 0);
    const int free_atoms = even ? n / 2 : (n + 1) / 2;
    std::vector<mc::Atom> atoms;
    if (even) atoms.push_back({iv.t_min(), 0.0});
    for (int j = 0; j < free_atoms; ++j)
      atoms.push_back({uniform(g, 0.05 + 0.85 * j / free_atoms,
                               0.05 + 0.85 * (j + 1) / free_atoms - 0.01),
                       0.0});
    double sum = 0.0;
    for (mc::Atom& a : atoms) {
      a.c = 0.05 + uniform(g, 0.0, 1.0);
      sum += a.c;
    }
    for (mc::Atom& a : atoms) a.c /= sum;
    return mc::Naming(iv, n, even ? mc::Parity::HalfInteger : mc::Parity::Integer,
                      std::move(atoms));
  };

  // (c) negative pairs: moving one atom by a visible amount breaks equivalence.
  int negative_failures = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 2 + static_cast<int>(g() % 7);
    const mc::Naming base = full_base(n);
    for (;;) {
      std::vector<mc::Atom> atoms = base.atoms();
      std::size_t i = g() % atoms.size();
      if (base.parity() == mc::Parity::HalfInteger && i == 0) i = 1;
      atoms[static_cast<std::size_t>(i)].t = std::clamp(
          atoms[static_cast<std::size_t>(i)].t + uniform(g, 0.02, 0.1), 0.0, 1.0);
      const mc::Naming moved(iv, n, base.parity(), std::move(atoms));
      const mc::MomentPoint a = mc::evaluate(base);
      const mc::MomentPoint b = mc::evaluate(moved);
      double gap = 0.0;
      for (int k = 0; k < n; ++k)
        gap = std::max(gap, std::abs(a.v[static_cast<std::size_t>(k)] -
                                     b.v[static_cast<std::size_t>(k)]));
      if (gap <= 1e-4) continue;  // moved a zero-weight atom; draw again
      if (mc::equivalent(base, moved)) ++negative_failures;
      break;
    }
  }

  const bool ok = idempotent && chain_failures == 0 && negative_failures == 0;
  report(6, "canonical-form algebra", ok,
         fmt("idempotence %s; 500 chains %d failures; 500 perturbed pairs %d "
             "false equivalences",
             idempotent ? "bit-exact" : "BROKEN", chain_failures, negative_failures));
}

// --- criterion 7: inverse-map continuity smoke ------------------------------
void criterion_continuity() {
  auto g = test_support::rng(20260821);
  const mc::Interval iv(0.0, 1.0);

  // Interior points from stratified node boxes with near-equal weights.  The
  // boxes were frozen after scanning the smallest singular value of the local
  // node/weight Jacobian: the movement reported by the probe is roughly the
  // perturbation radius divided by that value, and these boxes keep the
  // amplification under ~520 for every dimension, leaving a factor of about
  // two below the 1e-3 threshold at radius 1e-6.
  static const std::vector<std::vector<std::pair<double, double>>> node_boxes = {
      {},                                          // unused (n starts at 1)
      {{0.3, 0.7}},                                // n=1
      {{0.4, 0.8}},                                // n=2 (plus the pinned atom)
      {{0.08, 0.25}, {0.75, 0.92}},                // n=3
      {{0.32, 0.42}, {0.78, 0.88}},                // n=4 (plus the pinned atom)
      {{0.05, 0.09}, {0.48, 0.52}, {0.91, 0.95}},  // n=5
  };
  static const std::vector<std::pair<double, double>> weight_band = {
      {1.0, 1.0}, {1.0, 1.0}, {0.8, 1.2}, {0.8, 1.2}, {0.9, 1.1}, {0.95, 1.05}};
  auto interior_point = [&](int n) {
    const auto& boxes = node_boxes[static_cast<std::size_t>(n)];
    const auto band = weight_band[static_cast<std::size_t>(n)];
    for (;;) {
      const int total = static_cast<int>(boxes.size()) + ((n % 2 == 0) ? 1 : 0);
      std::vector<double> w(static_cast<std::size_t>(total));
      double sum = 0.0;
      for (double& x : w) {
        x = uniform(g, band.first, band.second);
        sum += x;
      }
      std::vector<mc::Atom> atoms;
      int widx = 0;
      if (n % 2 == 0) atoms.push_back({iv.t_min(), w[static_cast<std::size_t>(widx++)] / sum});
      for (const auto& box : boxes)
        atoms.push_back({uniform(g, box.first, box.second),
                         w[static_cast<std::size_t>(widx++)] / sum});
      const mc::MomentPoint p = mc::evaluate(
          mc::Naming(iv, n, (n % 2 == 0) ? mc::Parity::HalfInteger : mc::Parity::Integer,
                     std::move(atoms)));
      if (mc::membership(p, iv).tag == mc::Region::Inside) return p;
    }
  };

  double worst = 0.0;
  bool monotone = true;
  for (int n = 1; n <= 5; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const mc::MomentPoint p = interior_point(n);
      const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(n * 100 + rep);
      const double at_radius = mc::continuity_probe(p, iv, 1e-6, 64, seed);
      const double at_double = mc::continuity_probe(p, iv, 2e-6, 64, seed);
      worst = std::max(worst, at_radius);
      if (at_double < at_radius) monotone = false;
    }
  }
  const bool ok = worst <= 1e-3 && monotone;
  report(7, "inverse-map continuity smoke", ok,
         fmt("100 interior points; worst movement %.2e at radius 1e-6 (tol 1e-3); "
             "doubling monotone %s",
             worst, monotone ? "yes" : "NO"));
}

// --- criterion 8: naming points on general polynomial curves ----------------
void criterion_curves() {
  auto g = test_support::rng(20260822);
  const mc::Interval iv(0.0, 1.0);
  double worst = 0.0;
  bool shape_ok = true;
  for (int n = 1; n <= 5; ++n) {
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::MatrixXd a(n, n + 1);
      do {
        for (int i = 0; i < n; ++i)
          for (int s = 0; s <= n; ++s) a(i, s) = uniform(g, -1.0, 1.0);
      } while (std::abs(a.rightCols(n).determinant()) < 0.05);
      const mc::PolyCurve curve(a);

      const mc::MomentPoint v_in = mc::evaluate(make_naming(g, n, iv, n + 1));
      std::vector<double> w(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        double s = a(i, 0);
        for (int k = 1; k <= n; ++k)
          s += a(i, k) * v_in.v[static_cast<std::size_t>(k - 1)];
        w[static_cast<std::size_t>(i)] = s;
      }

      const mc::MomentPoint pulled = mc::pull_point(mc::MomentPoint(n, w), curve);
      const mc::Naming naming = mc::principal_from_moments(pulled, iv).naming();
      if (!(mc::index(naming) <= mc::proper_index_bound(n))) shape_ok = false;
      if (n % 2 == 0 && naming.atoms()[0].t != iv.t_min()) shape_ok = false;

      std::vector<double> got(static_cast<std::size_t>(n), 0.0);
      for (const auto& wp : mc::push_naming(naming, curve))
        for (int i = 0; i < n; ++i)
          got[static_cast<std::size_t>(i)] += wp.weight * wp.point[static_cast<std::size_t>(i)];
      for (int i = 0; i < n; ++i)
        worst = std::max(worst,
                         std::abs(got[static_cast<std::size_t>(i)] -
                                  w[static_cast<std::size_t>(i)]) /
                             std::max(1.0, std::abs(w[static_cast<std::size_t>(i)])));
    }
  }
  const bool ok = worst <= 1e-9 && shape_ok;
  report(8, "curve transport round-trip", ok,
         fmt("500 curves; worst rel %.2e (tol 1e-9); shapes %s", worst,
             shape_ok ? "ok" : "BROKEN"));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_round_trip();
  criterion_uniqueness();
  criterion_determinants();
  criterion_closed_forms();
  criterion_oracle_agreement();
  criterion_canonical_algebra();
  criterion_continuity();
  criterion_curves();
  std::printf("%s: %d of 8 criteria failed (%.1f s total)\n",
              failures == 0 ? "ACCEPTED" : "REJECTED", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
