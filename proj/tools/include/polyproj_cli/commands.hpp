#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace polyproj::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 1,
  kNoCertificate = 2,
  kRejected = 3,
};

struct ProjectOptions {
  std::string file;
  std::optional<double> tol;  // overrides the file's tol line
  std::size_t max_card = 0;   // 0: numerical rank
  unsigned parallel = 1;
  std::size_t max_halfspaces = 24;
  bool json = false;
};

struct VerifyOptions {
  std::string file;
  std::string candidate;
  std::optional<double> tol;
  std::size_t samples = 64;
  std::uint64_t seed = 1;
  bool json = false;
};

struct ConeOptions {
  std::string file;
  bool json = false;
};

struct LpOptions {
  std::string file;
  bool json = false;
};

struct BenchOptions {
  std::size_t dim = 5;
  std::size_t n = 6;
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::string oracle = "dykstra";
  unsigned parallel = 1;
  std::size_t max_halfspaces = 24;
  bool json = false;
};

struct GenerateOptions {
  std::size_t dim = 3;
  std::size_t n = 4;
  std::uint64_t seed = 1;
};

// Each command writes its report to `out` and diagnostics to `err`, and
// returns one of the ExitCode values. Indices in reports are 1-based.
int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_cone(const ConeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_lp(const LpOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one of the commands above.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyproj::cli
