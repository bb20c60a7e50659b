#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyproj/core.hpp"
#include "polyproj/error.hpp"
#include "polyproj/lp_banach.hpp"

namespace polyproj::cli {

/// Malformed input file. line() is 1-based; 0 when the problem is not tied
/// to a single line (a missing point line, for instance).
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

//   polyproj v1
//   dim D
//   halfspace u_1 ... u_D eta     (one or more)
//   point x_1 ... x_D             (exactly one)
//   tol T                         (optional)
struct ProblemFile {
  std::vector<Halfspace> halfspaces;
  Vector point;
  std::optional<double> tol;

  std::size_t dim() const noexcept { return point.dim(); }
  Polyhedron polyhedron() const { return Polyhedron(halfspaces); }
};

//   polyproj-cone v1
//   dim D
//   basis b_1 ... b_D             (exactly D)
//   point x_1 ... x_D
struct ConeFile {
  std::vector<Vector> basis;
  Vector point;
};

//   polyproj-lp v1
//   p P
//   coord k delta eta             (k 1-based, delta = +1 or -1)
//   point x_1 ... x_m             (zero tail)
struct LpFile {
  double p;
  std::vector<lp::CoordinateConstraint> constraints;  // 0-based coordinates
  std::vector<double> point;
};

ProblemFile parse_problem(std::string_view text);
ConeFile parse_cone(std::string_view text);
LpFile parse_lp(std::string_view text);

/// Canonical form: one token per field, numbers with 17 significant digits.
std::string format_problem(const ProblemFile& problem);
std::string format_cone(const ConeFile& cone);
std::string format_lp(const LpFile& lp);

/// Whole file contents; InvalidInput if it cannot be opened.
std::string read_file(const std::string& path);

/// A finite real in decimal or scientific notation, nothing else.
std::optional<double> parse_real(std::string_view token);

/// Whitespace-separated reals, e.g. a --candidate argument.
std::vector<double> parse_reals(std::string_view text);

/// %.17g.
std::string format_real(double v);

}  // namespace polyproj::cli
