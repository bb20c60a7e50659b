#include "polyproj_cli/formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace polyproj::cli {
namespace {

std::string located(std::size_t line, const std::string& what) {
  return line == 0 ? what : "line " + std::to_string(line) + ": " + what;
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

/// Non-empty lines after stripping '#' comments.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty() || number == 0) {
    ++number;
    const auto eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    Line line{number, {}};
    std::size_t pos = 0;
    constexpr std::string_view ws = " \t\r\v\f";
    while ((pos = raw.find_first_not_of(ws, pos)) != std::string_view::npos) {
      const auto end = raw.find_first_of(ws, pos);
      line.tokens.push_back(raw.substr(pos, end == std::string_view::npos ? end : end - pos));
      pos = end;
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (eol == std::string_view::npos) break;
  }
  return lines;
}

double real_at(const Line& line, std::size_t k) {
  auto v = parse_real(line.tokens[k]);
  if (!v) {
    throw ParseError(line.number,
                     "'" + std::string(line.tokens[k]) + "' is not a finite real number");
  }
  return *v;
}

std::vector<double> reals_from(const Line& line, std::size_t first) {
  std::vector<double> out;
  for (std::size_t k = first; k < line.tokens.size(); ++k) out.push_back(real_at(line, k));
  return out;
}

void expect_count(const Line& line, std::size_t want, std::string_view what) {
  if (line.tokens.size() != want) {
    throw ParseError(line.number, std::string(what) + " expects " + std::to_string(want - 1) +
                                      " values, got " + std::to_string(line.tokens.size() - 1));
  }
}

void expect_header(const std::vector<Line>& lines, std::string_view magic) {
  if (lines.empty()) throw ParseError(0, "empty file, expected '" + std::string(magic) + " v1'");
  const Line& h = lines.front();
  if (h.tokens.size() != 2 || h.tokens[0] != magic || h.tokens[1] != "v1") {
    throw ParseError(h.number, "expected header '" + std::string(magic) + " v1'");
  }
}

std::size_t parse_dim(const std::vector<Line>& lines) {
  if (lines.size() < 2 || lines[1].tokens[0] != "dim") {
    throw ParseError(lines.size() < 2 ? 0 : lines[1].number, "expected 'dim D' after the header");
  }
  const Line& l = lines[1];
  expect_count(l, 2, "dim");
  const double d = real_at(l, 1);
  if (d < 1 || d != std::floor(d) || d > 1e6) {
    throw ParseError(l.number, "dim must be a positive integer");
  }
  return static_cast<std::size_t>(d);
}

Vector vector_at(const Line& line, std::size_t first) {
  return Vector(reals_from(line, first));
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : InvalidInput(located(line, what)), line_(line) {}

std::optional<double> parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<double> parse_reals(std::string_view text) {
  const auto lines = tokenize(text);
  std::vector<double> out;
  for (const auto& line : lines) {
    for (auto tok : line.tokens) {
      auto v = parse_real(tok);
      if (!v) throw InvalidInput("'" + std::string(tok) + "' is not a finite real number");
      out.push_back(*v);
    }
  }
  return out;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemFile parse_problem(std::string_view text) {
  const auto lines = tokenize(text);
  expect_header(lines, "polyproj");
  const std::size_t dim = parse_dim(lines);

  std::vector<Halfspace> hs;
  std::optional<Vector> point;
  std::optional<double> tol;
  for (std::size_t k = 2; k < lines.size(); ++k) {
    const Line& l = lines[k];
    const auto key = l.tokens[0];
    if (key == "halfspace") {
      expect_count(l, dim + 2, "halfspace");
      const double eta = real_at(l, dim + 1);
      std::vector<double> u;
      for (std::size_t t = 1; t <= dim; ++t) u.push_back(real_at(l, t));
      const bool zero = std::all_of(u.begin(), u.end(), [](double c) { return c == 0.0; });
      if (zero) throw ParseError(l.number, "halfspace has a zero normal");
      hs.emplace_back(Vector(std::move(u)), eta);
    } else if (key == "point") {
      if (point) throw ParseError(l.number, "second point line");
      expect_count(l, dim + 1, "point");
      point = vector_at(l, 1);
    } else if (key == "tol") {
      if (tol) throw ParseError(l.number, "second tol line");
      expect_count(l, 2, "tol");
      tol = real_at(l, 1);
      if (!(*tol >= 0)) throw ParseError(l.number, "tol must be nonnegative");
    } else if (key == "dim") {
      throw ParseError(l.number, "second dim line");
    } else {
      throw ParseError(l.number, "unknown keyword '" + std::string(key) + "'");
    }
  }
  if (hs.empty()) throw ParseError(0, "no halfspace lines");
  if (!point) throw ParseError(0, "no point line");
  return ProblemFile{std::move(hs), std::move(*point), tol};
}

ConeFile parse_cone(std::string_view text) {
  const auto lines = tokenize(text);
  expect_header(lines, "polyproj-cone");
  const std::size_t dim = parse_dim(lines);

  std::vector<Vector> basis;
  std::optional<Vector> point;
  for (std::size_t k = 2; k < lines.size(); ++k) {
    const Line& l = lines[k];
    const auto key = l.tokens[0];
    if (key == "basis") {
      if (basis.size() == dim) throw ParseError(l.number, "more than dim basis lines");
      expect_count(l, dim + 1, "basis");
      basis.push_back(vector_at(l, 1));
    } else if (key == "point") {
      if (point) throw ParseError(l.number, "second point line");
      expect_count(l, dim + 1, "point");
      point = vector_at(l, 1);
    } else {
      throw ParseError(l.number, "unknown keyword '" + std::string(key) + "'");
    }
  }
  if (basis.size() != dim) {
    throw ParseError(0, "expected " + std::to_string(dim) + " basis lines, got " +
                            std::to_string(basis.size()));
  }
  if (!point) throw ParseError(0, "no point line");
  return ConeFile{std::move(basis), std::move(*point)};
}

LpFile parse_lp(std::string_view text) {
  const auto lines = tokenize(text);
  expect_header(lines, "polyproj-lp");
  if (lines.size() < 2 || lines[1].tokens[0] != "p") {
    throw ParseError(lines.size() < 2 ? 0 : lines[1].number, "expected 'p P' after the header");
  }
  expect_count(lines[1], 2, "p");
  const double p = real_at(lines[1], 1);
  if (!(p > 1.0)) throw ParseError(lines[1].number, "p must be greater than 1");

  std::vector<lp::CoordinateConstraint> cons;
  std::optional<std::vector<double>> point;
  for (std::size_t k = 2; k < lines.size(); ++k) {
    const Line& l = lines[k];
    const auto key = l.tokens[0];
    if (key == "coord") {
      expect_count(l, 4, "coord");
      const double idx = real_at(l, 1);
      if (idx < 1 || idx != std::floor(idx) || idx > 1e9) {
        throw ParseError(l.number, "coordinate index must be a positive integer");
      }
      const double delta = real_at(l, 2);
      if (delta != 1.0 && delta != -1.0) throw ParseError(l.number, "delta must be 1 or -1");
      const auto coord = static_cast<std::size_t>(idx) - 1;
      for (const auto& c : cons) {
        if (c.coord == coord) throw ParseError(l.number, "coordinate constrained twice");
      }
      cons.push_back({coord, static_cast<int>(delta), real_at(l, 3)});
    } else if (key == "point") {
      if (point) throw ParseError(l.number, "second point line");
      if (l.tokens.size() < 2) throw ParseError(l.number, "point needs at least one value");
      point = reals_from(l, 1);
    } else {
      throw ParseError(l.number, "unknown keyword '" + std::string(key) + "'");
    }
  }
  if (!point) throw ParseError(0, "no point line");
  return LpFile{p, std::move(cons), std::move(*point)};
}

namespace {

void append_reals(std::string& out, std::span<const double> values) {
  for (double v : values) {
    out += ' ';
    out += format_real(v);
  }
}

}  // namespace

std::string format_problem(const ProblemFile& problem) {
  std::string out = "polyproj v1\ndim " + std::to_string(problem.dim()) + "\n";
  for (const auto& h : problem.halfspaces) {
    out += "halfspace";
    append_reals(out, h.normal().coords());
    out += ' ' + format_real(h.offset()) + "\n";
  }
  out += "point";
  append_reals(out, problem.point.coords());
  out += "\n";
  if (problem.tol) out += "tol " + format_real(*problem.tol) + "\n";
  return out;
}

std::string format_cone(const ConeFile& cone) {
  std::string out = "polyproj-cone v1\ndim " + std::to_string(cone.point.dim()) + "\n";
  for (const auto& b : cone.basis) {
    out += "basis";
    append_reals(out, b.coords());
    out += "\n";
  }
  out += "point";
  append_reals(out, cone.point.coords());
  return out + "\n";
}

std::string format_lp(const LpFile& lp) {
  std::string out = "polyproj-lp v1\np " + format_real(lp.p) + "\n";
  for (const auto& c : lp.constraints) {
    out += "coord " + std::to_string(c.coord + 1) + " " + std::to_string(c.sign) + " " +
           format_real(c.offset) + "\n";
  }
  out += "point";
  append_reals(out, lp.point);
  return out + "\n";
}

}  // namespace polyproj::cli
