#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"
#include "momentcurve/transform.hpp"

namespace momentcurve {

namespace detail {

/// Shortest representation that round-trips a double (17 significant digits).
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_real(const std::string& token) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError("bad real value: '" + token + "'");
  return x;
}

inline long parse_int(const std::string& token) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(token.c_str(), &end, 10);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError("bad integer value: '" + token + "'");
  return x;
}

inline std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

/// Next line with content, skipping blank lines.
inline bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch))) return true;
  }
  return false;
}

}  // namespace detail

/// Canonical naming serialization.  Fields in fixed order; atoms sorted by
/// parameter, one "t c" row each, reals at 17 significant digits.  Reading
/// back what was written reproduces the bytes exactly.
inline std::string write_naming(const Naming& P) {
  std::ostringstream out;
  out << "n " << P.n() << "\n";
  out << "t_min " << detail::format_real(P.interval().t_min()) << "\n";
  out << "t_max " << detail::format_real(P.interval().t_max()) << "\n";
  out << "parity " << (P.parity() == Parity::HalfInteger ? "half" : "integer") << "\n";
  out << "atoms " << P.atom_count() << "\n";
  for (const Atom& a : P.atoms())
    out << detail::format_real(a.t) << " " << detail::format_real(a.c) << "\n";
  return out.str();
}

inline Naming read_naming(const std::string& text, const Tolerances& tol = {}) {
  std::istringstream in(text);
  std::string line;
  auto field = [&](const char* name) -> std::vector<std::string> {
    if (!detail::next_line(in, line)) throw ParseError(std::string("missing field ") + name);
    auto toks = detail::tokens_of(line);
    if (toks.size() != 2 || toks[0] != name)
      throw ParseError(std::string("expected field ") + name + ", got '" + line + "'");
    toks.erase(toks.begin());
    return toks;
  };
  const int n = static_cast<int>(detail::parse_int(field("n")[0]));
  const double t_min = detail::parse_real(field("t_min")[0]);
  const double t_max = detail::parse_real(field("t_max")[0]);
  const std::string parity_word = field("parity")[0];
  Parity parity;
  if (parity_word == "integer") parity = Parity::Integer;
  else if (parity_word == "half") parity = Parity::HalfInteger;
  else throw ParseError("parity must be 'integer' or 'half'");
  const int count = static_cast<int>(detail::parse_int(field("atoms")[0]));
  if (count < 1) throw ParseError("atom count must be positive");
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (!detail::next_line(in, line)) throw ParseError("missing atom row");
    const auto toks = detail::tokens_of(line);
    if (toks.size() != 2) throw ParseError("atom row needs exactly 't c': '" + line + "'");
    atoms.push_back({detail::parse_real(toks[0]), detail::parse_real(toks[1])});
  }
  return Naming(Interval(t_min, t_max), n, parity, std::move(atoms), tol);
}

/// One or more points over a shared header "n t_min t_max"; each following
/// line holds the n coordinates of one point.
struct PointFile {
  Interval interval;
  int n;
  std::vector<MomentPoint> points;
};

inline std::string write_points(const PointFile& pf) {
  std::ostringstream out;
  out << pf.n << " " << detail::format_real(pf.interval.t_min()) << " "
      << detail::format_real(pf.interval.t_max()) << "\n";
  for (const MomentPoint& p : pf.points) {
    for (int k = 0; k < p.n; ++k) {
      if (k) out << " ";
      out << detail::format_real(p.v[static_cast<std::size_t>(k)]);
    }
    out << "\n";
  }
  return out.str();
}

inline PointFile read_points(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!detail::next_line(in, line)) throw ParseError("empty point file");
  const auto head = detail::tokens_of(line);
  if (head.size() != 3) throw ParseError("point header needs 'n t_min t_max'");
  const int n = static_cast<int>(detail::parse_int(head[0]));
  if (n < 1) throw ParseError("point dimension must be positive");
  Interval iv(detail::parse_real(head[1]), detail::parse_real(head[2]));
  PointFile pf{iv, n, {}};
  while (detail::next_line(in, line)) {
    const auto toks = detail::tokens_of(line);
    if (static_cast<int>(toks.size()) != n)
      throw ParseError("point row needs exactly n coordinates: '" + line + "'");
    std::vector<double> v;
    v.reserve(toks.size());
    for (const auto& t : toks) v.push_back(detail::parse_real(t));
    pf.points.emplace_back(n, std::move(v));
  }
  if (pf.points.empty()) throw ParseError("point file has no point rows");
  return pf;
}

/// Curve file: a line holding n, then n rows of the n+1 coefficients
/// a_i0 ... a_in of component i.
inline std::string write_curve(const PolyCurve& curve) {
  std::ostringstream out;
  out << curve.n() << "\n";
  for (int i = 0; i < curve.n(); ++i) {
    for (int s = 0; s <= curve.n(); ++s) {
      if (s) out << " ";
      out << detail::format_real(curve.coefficients()(i, s));
    }
    out << "\n";
  }
  return out.str();
}

inline PolyCurve read_curve(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!detail::next_line(in, line)) throw ParseError("empty curve file");
  const auto head = detail::tokens_of(line);
  if (head.size() != 1) throw ParseError("curve header is the single value n");
  const int n = static_cast<int>(detail::parse_int(head[0]));
  if (n < 1) throw ParseError("curve dimension must be positive");
  Eigen::MatrixXd coeff(n, n + 1);
  for (int i = 0; i < n; ++i) {
    if (!detail::next_line(in, line)) throw ParseError("missing curve row");
    const auto toks = detail::tokens_of(line);
    if (static_cast<int>(toks.size()) != n + 1)
      throw ParseError("curve row needs n+1 coefficients");
    for (int s = 0; s <= n; ++s) coeff(i, s) = detail::parse_real(toks[static_cast<std::size_t>(s)]);
  }
  return PolyCurve(std::move(coeff));
}

inline std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void save_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text;
}

}  // namespace momentcurve
