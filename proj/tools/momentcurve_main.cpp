// Command-line front end: naming construction, evaluation, canonical forms,
// reduction, membership checks, pseudo-Vandermonde determinants, sampling,
// and polynomial-curve transport.
//
// Exit codes: 0 success, 1 usage or parse failure, 2 point outside the hull,
// 3 numerical failure.

#include <atomic>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "momentcurve/momentcurve.hpp"

namespace mc = momentcurve;

namespace {

struct ToleranceFlags {
  std::optional<double> eps_t;
  std::optional<double> eps_c;
  std::optional<double> eps_mem;
  int max_n = 12;

  mc::Tolerances resolve() const {
    mc::Tolerances tol;
    if (eps_t) tol.eps_t_rel = *eps_t;
    if (eps_c) tol.eps_c = *eps_c;
    if (eps_mem) tol.eps_mem = *eps_mem;
    tol.solver_n_cap = max_n;
    return tol;
  }
};

// Environment values fill in unset flags; explicit flags win.
void add_tolerance_flags(CLI::App* cmd, ToleranceFlags& tf) {
  cmd->add_option("--eps-t", tf.eps_t,
                  "same-parameter tolerance, relative to the interval width")
      ->envname("MOMENTCURVE_EPS_T");
  cmd->add_option("--eps-c", tf.eps_c, "zero-coefficient tolerance")
      ->envname("MOMENTCURVE_EPS_C");
  cmd->add_option("--eps-mem", tf.eps_mem, "membership weight clamp band")
      ->envname("MOMENTCURVE_EPS_MEM");
  cmd->add_option("--max-n", tf.max_n, "largest dimension the solver accepts (up to 20)")
      ->check(CLI::Range(1, static_cast<int>(mc::Tolerances::hard_n_cap)));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    mc::save_file(out_path, text);
  }
}

void warn_high_dimension(const ToleranceFlags& tf) {
  if (tf.max_n > 12)
    std::cerr << "warning: dimensions above 12 can be badly conditioned in"
                 " double precision\n";
}

const char* region_word(mc::Region r) {
  switch (r) {
    case mc::Region::Inside: return "inside";
    case mc::Region::BoundaryFace: return "boundary";
    default: return "outside";
  }
}

int run_name(const std::string& point_path, const std::string& out_path,
             const ToleranceFlags& tf) {
  warn_high_dimension(tf);
  const mc::PointFile pf = mc::read_points(mc::load_file(point_path));
  const mc::Tolerances tol = tf.resolve();
  std::ostringstream out;
  for (const mc::MomentPoint& p : pf.points)
    out << mc::write_naming(mc::principal_from_moments(p, pf.interval, tol).naming());
  emit(out.str(), out_path);
  return 0;
}

int run_eval(const std::string& naming_path, const std::string& out_path,
             const ToleranceFlags& tf) {
  const mc::Naming P = mc::read_naming(mc::load_file(naming_path), tf.resolve());
  mc::PointFile pf{P.interval(), P.n(), {mc::evaluate(P)}};
  emit(mc::write_points(pf), out_path);
  return 0;
}

int run_canon(const std::string& naming_path, const std::string& out_path,
              const ToleranceFlags& tf) {
  const mc::Tolerances tol = tf.resolve();
  const mc::Naming P = mc::read_naming(mc::load_file(naming_path), tol);
  emit(mc::write_naming(mc::canonicalize(P, tol).naming()), out_path);
  return 0;
}

int run_reduce(const std::string& naming_path, const std::string& out_path,
               const ToleranceFlags& tf) {
  const mc::Tolerances tol = tf.resolve();
  const mc::Naming P = mc::read_naming(mc::load_file(naming_path), tol);
  emit(mc::write_naming(mc::reduce_to_principal(P, tol).naming()), out_path);
  return 0;
}

int run_check_member(const std::string& point_path, bool oracle, int grid_points,
                     double slack, int jobs, const ToleranceFlags& tf) {
  warn_high_dimension(tf);
  const mc::PointFile pf = mc::read_points(mc::load_file(point_path));
  const mc::Tolerances tol = tf.resolve();
  const int count = static_cast<int>(pf.points.size());

  std::vector<mc::MembershipVerdict> verdicts(static_cast<std::size_t>(count));
  std::vector<int> lp(static_cast<std::size_t>(count), -1);
  std::atomic<int> cursor{0};
  auto worker = [&] {
    for (int i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
      const mc::MomentPoint& p = pf.points[static_cast<std::size_t>(i)];
      verdicts[static_cast<std::size_t>(i)] = mc::membership(p, pf.interval, tol);
      if (oracle)
        lp[static_cast<std::size_t>(i)] =
            mc::lp_membership(p, pf.interval, mc::GridSpec(grid_points, slack)) ? 1 : 0;
    }
  };
  if (jobs > 1 && count > 1) {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }

  bool any_outside = false;
  int hard_disagreements = 0;
  for (int i = 0; i < count; ++i) {
    const mc::MembershipVerdict& v = verdicts[static_cast<std::size_t>(i)];
    std::cout << region_word(v.tag) << " rank=" << v.rank;
    if (oracle) {
      const bool feasible = lp[static_cast<std::size_t>(i)] == 1;
      std::cout << " lp=" << (feasible ? "feasible" : "infeasible");
      if (v.tag != mc::Region::Outside && !feasible) {
        // A certificate proves membership; the grid polytope missing the
        // point beyond its slack is a genuine disagreement.
        std::cout << " agree=NO";
        ++hard_disagreements;
      } else if (v.tag == mc::Region::Outside && feasible) {
        std::cout << " agree=band";  // within slack of the hull
      } else {
        std::cout << " agree=yes";
      }
    }
    std::cout << "\n";
    if (v.tag == mc::Region::Outside) any_outside = true;
  }
  if (oracle) std::cout << "disagreements: " << hard_disagreements << "\n";
  if (hard_disagreements > 0) return 3;
  return any_outside ? 2 : 0;
}

int run_pv_det(int n, int q, const std::vector<double>& nodes, bool lu) {
  const mc::PVMatrix shape(n, q, nodes);
  const double d = lu ? mc::det_lu(shape) : mc::det_recursive(shape);
  std::cout << mc::detail::format_real(d) << "\n";
  return 0;
}

int run_sample(int n, double t_min, double t_max, int count, int atoms,
               std::uint64_t seed, const ToleranceFlags& tf) {
  const mc::Interval iv(t_min, t_max);
  mc::PointFile pf{iv, n, {}};
  for (int i = 0; i < count; ++i)
    pf.points.push_back(mc::evaluate(
        mc::random_naming(n, iv, atoms, seed + static_cast<std::uint64_t>(i))));
  (void)tf;
  std::cout << mc::write_points(pf);
  return 0;
}

int run_transform(const std::string& curve_path, const std::string& naming_path,
                  const std::string& point_path, const std::string& out_path,
                  const std::string& naming_out, const ToleranceFlags& tf) {
  const mc::PolyCurve curve = mc::read_curve(mc::load_file(curve_path));
  const mc::Tolerances tol = tf.resolve();

  std::optional<mc::Naming> naming;
  if (!naming_path.empty()) {
    naming = mc::read_naming(mc::load_file(naming_path), tol);
  } else {
    const mc::PointFile pf = mc::read_points(mc::load_file(point_path));
    const mc::MomentPoint pulled = mc::pull_point(pf.points.front(), curve);
    naming = mc::principal_from_moments(pulled, pf.interval, tol).naming();
  }
  if (!naming_out.empty()) mc::save_file(naming_out, mc::write_naming(*naming));

  const auto pushed = mc::push_naming(*naming, curve);
  std::ostringstream out;
  out << curve.n() << " " << pushed.size() << "\n";
  for (const auto& wp : pushed) {
    out << mc::detail::format_real(wp.weight);
    for (double y : wp.point) out << " " << mc::detail::format_real(y);
    out << "\n";
  }
  emit(out.str(), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal convex representations on the truncated power curve"};
  app.require_subcommand(1);

  ToleranceFlags tf;
  std::string in_path, out_path, curve_path, naming_path, point_path, naming_out;
  bool oracle = false, lu = false;
  int grid_points = 2001, jobs = 1;
  double slack = 1e-6;
  int n = 1, q = 1, count = 1, atoms = 1;
  double t_min = 0.0, t_max = 1.0;
  std::uint64_t seed = 1;
  std::vector<double> nodes;

  auto* c_name = app.add_subcommand("name", "minimal naming of a hull point");
  c_name->add_option("point-file", in_path)->required();
  c_name->add_option("-o,--out", out_path);
  add_tolerance_flags(c_name, tf);

  auto* c_eval = app.add_subcommand("eval", "point named by a naming file");
  c_eval->add_option("naming-file", in_path)->required();
  c_eval->add_option("-o,--out", out_path);
  add_tolerance_flags(c_eval, tf);

  auto* c_canon = app.add_subcommand("canon", "canonical form of a naming");
  c_canon->add_option("naming-file", in_path)->required();
  c_canon->add_option("-o,--out", out_path);
  add_tolerance_flags(c_canon, tf);

  auto* c_reduce = app.add_subcommand("reduce", "reduce a naming to canonical form");
  c_reduce->add_option("naming-file", in_path)->required();
  c_reduce->add_option("-o,--out", out_path);
  add_tolerance_flags(c_reduce, tf);

  auto* c_check = app.add_subcommand("check-member", "hull membership of points");
  c_check->add_option("point-file", in_path)->required();
  c_check->add_flag("--oracle", oracle, "cross-check against the grid LP");
  c_check->add_option("--grid", grid_points, "grid point count for the LP");
  c_check->add_option("--slack", slack, "LP equality slack");
  c_check->add_option("--jobs", jobs, "worker threads for batch input")
      ->check(CLI::Range(1, 64));
  add_tolerance_flags(c_check, tf);

  auto* c_pvdet = app.add_subcommand("pv-det", "pseudo-Vandermonde determinant");
  c_pvdet->add_option("--n", n)->required();
  c_pvdet->add_option("--q", q)->required();
  c_pvdet->add_option("--nodes", nodes, "q node values")->required()->expected(-1);
  c_pvdet->add_flag("--lu", lu, "use the pivoted-elimination route");

  auto* c_sample = app.add_subcommand("sample", "random hull points as a point stream");
  c_sample->add_option("--n", n)->required();
  c_sample->add_option("--t-min", t_min);
  c_sample->add_option("--t-max", t_max);
  c_sample->add_option("--count", count)->check(CLI::PositiveNumber);
  c_sample->add_option("--atoms", atoms)->check(CLI::PositiveNumber);
  c_sample->add_option("--seed", seed);
  add_tolerance_flags(c_sample, tf);

  auto* c_transform = app.add_subcommand("transform", "carry namings onto a polynomial curve");
  c_transform->add_option("--curve", curve_path)->required();
  c_transform->add_option("--naming", naming_path);
  c_transform->add_option("--point", point_path);
  c_transform->add_option("-o,--out", out_path);
  c_transform->add_option("--naming-out", naming_out);
  add_tolerance_flags(c_transform, tf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(c_name)) return run_name(in_path, out_path, tf);
    if (app.got_subcommand(c_eval)) return run_eval(in_path, out_path, tf);
    if (app.got_subcommand(c_canon)) return run_canon(in_path, out_path, tf);
    if (app.got_subcommand(c_reduce)) return run_reduce(in_path, out_path, tf);
    if (app.got_subcommand(c_check))
      return run_check_member(in_path, oracle, grid_points, slack, jobs, tf);
    if (app.got_subcommand(c_pvdet)) return run_pv_det(n, q, nodes, lu);
    if (app.got_subcommand(c_sample))
      return run_sample(n, t_min, t_max, count, atoms, seed, tf);
    if (app.got_subcommand(c_transform)) {
      if (naming_path.empty() == point_path.empty()) {
        std::cerr << "transform needs exactly one of --naming or --point\n";
        return 1;
      }
      return run_transform(curve_path, naming_path, point_path, out_path, naming_out, tf);
    }
  } catch (const mc::OutsideHull& e) {
    std::cerr << "outside: " << e.what() << "\n";
    return 2;
  } catch (const mc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const mc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
