#include "polyproj_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyproj/polyproj.hpp"
#include "polyproj_cli/formats.hpp"

namespace polyproj::cli {
namespace {

using Json = nlohmann::ordered_json;

double tidy(double v) { return v == 0.0 ? 0.0 : v; }

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, tidy(v));
  return std::string(buf, res.ptr);
}

/// Ordered key/value report rendered either as "key: value" lines or as one
/// JSON object with the same keys.
class Report {
 public:
  void text(const std::string& key, const std::string& v) { doc_[key] = v; }
  void num(const std::string& key, double v) { doc_[key] = tidy(v); }
  void count(const std::string& key, std::uint64_t v) { doc_[key] = v; }

  void nums(const std::string& key, std::span<const double> v) {
    Json a = Json::array();
    for (double x : v) a.push_back(tidy(x));
    doc_[key] = std::move(a);
  }

  /// 0-based indices, reported 1-based.
  void set(const std::string& key, const std::vector<std::size_t>& v) {
    Json a = Json::array();
    for (auto i : v) a.push_back(i + 1);
    doc_[key] = std::move(a);
    sets_.insert(key);
  }
  void set(const std::string& key, const IndexSet& s) {
    set(key, std::vector<std::size_t>(s.begin(), s.end()));
  }

  void violations(const std::vector<Violation>& vs) {
    Json a = Json::array();
    for (const auto& v : vs) {
      Json o;
      o["condition"] = v.condition;
      o["index"] = v.index ? Json(*v.index + 1) : Json(nullptr);
      o["magnitude"] = tidy(v.magnitude);
      a.push_back(std::move(o));
    }
    doc_["violations"] = std::move(a);
  }

  void write(std::ostream& out, bool json) const {
    if (json) {
      out << doc_.dump(2) << "\n";
      return;
    }
    for (const auto& [key, value] : doc_.items()) {
      const std::string v = render(key, value);
      out << key << ":" << (v.empty() ? "" : " ") << v << "\n";
    }
  }

 private:
  std::string render(const std::string& key, const Json& v) const {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return shortest(v.get<double>());
    if (v.is_number()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_null()) return "-";
    std::string s;
    if (sets_.count(key)) {
      s = "{";
      for (std::size_t k = 0; k < v.size(); ++k) {
        s += (k ? ", " : "") + std::to_string(v[k].get<std::size_t>());
      }
      return s + "}";
    }
    if (v.empty()) return key == "violations" ? "none" : "";
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k) s += ' ';
      const Json& e = v[k];
      if (e.is_object()) {
        s += e["condition"].get<std::string>();
        if (!e["index"].is_null()) s += "[" + std::to_string(e["index"].get<std::size_t>()) + "]";
        s += "=" + shortest(e["magnitude"].get<double>());
      } else {
        s += shortest(e.get<double>());
      }
    }
    return s;
  }

  Json doc_ = Json::object();
  std::set<std::string> sets_;
};

void put_stats(Report& r, const SearchStats& s) {
  r.count("subsets_examined", s.subsets_examined);
  r.count("singular_skipped", s.singular_skipped);
  r.count("solves_rejected", s.solves_rejected);
  r.count("feasibility_rejected", s.feasibility_rejected);
}

Tolerances tolerances(std::optional<double> flag, std::optional<double> file) {
  Tolerances tol;
  if (auto t = flag ? flag : file) {
    if (!(*t >= 0) || !std::isfinite(*t)) throw InvalidInput("--tol must be a finite value >= 0");
    tol.feas = *t;
    tol.stat = *t;
  }
  return tol;
}

/// Maps library errors onto the exit-code contract.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const NumericalBreakdown& e) {
    err << "error: " << e.what() << "\n";
    return kRejected;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

double elapsed_us(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile problem = parse_problem(read_file(opts.file));
    SearchConfig cfg;
    cfg.tol = tolerances(opts.tol, problem.tol);
    cfg.max_cardinality = opts.max_card;
    cfg.workers = std::max(1u, opts.parallel);
    cfg.max_halfspaces = opts.max_halfspaces;
    const Polyhedron poly = problem.polyhedron();

    Report r;
    std::optional<ProjectionResult> res;
    try {
      res = project(poly, problem.point, cfg);
    } catch (const NoCertificate& e) {
      r.text("status", "NO_CERTIFICATE");
      if (const auto& nm = e.near_miss()) {
        r.set("near_miss_support", nm->support);
        r.nums("near_miss_multipliers", nm->multipliers);
        r.num("near_miss_violation", nm->violation);
        r.count("near_miss_violated_index", nm->violated_index + 1);
      }
      put_stats(r, e.stats());
      r.write(out, opts.json);
      err << "error: " << e.what() << "\n";
      return static_cast<int>(kNoCertificate);
    }

    const Verdict verdict = kkt_verify(poly, problem.point, res->point, res->certificate, cfg.tol);
    r.text("status", "OK");
    r.nums("point", res->point.coords());
    if (res->certificate) {
      r.set("support", res->certificate->support);
      r.nums("multipliers", res->certificate->multipliers);
      r.num("det_gii", res->certificate->det_gii);
    } else {
      r.set("support", std::vector<std::size_t>{});
      r.nums("multipliers", {});
      r.num("det_gii", 1.0);
    }
    r.text("verification", verdict.accepted ? "ACCEPT" : "REJECT");
    r.violations(verdict.violations);
    put_stats(r, res->stats);
    r.write(out, opts.json);
    return static_cast<int>(verdict.accepted ? kSuccess : kRejected);
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemFile problem = parse_problem(read_file(opts.file));
    const Tolerances tol = tolerances(opts.tol, problem.tol);
    const auto values = parse_reals(opts.candidate);
    if (values.size() != problem.dim()) {
      throw DimensionMismatch("candidate has " + std::to_string(values.size()) +
                              " values, the problem has dimension " +
                              std::to_string(problem.dim()));
    }
    const Vector candidate(values);
    const Polyhedron poly = problem.polyhedron();
    const Vector& x = problem.point;

    const auto cert = certificate_from_candidate(poly, x, candidate, tol);
    Verdict verdict = kkt_verify(poly, x, candidate, cert, tol);
    std::optional<Verdict> vi;
    if (!verdict.has("feasibility")) {
      vi = vi_spot_check(poly, x, candidate, opts.samples, opts.seed);
      for (const auto& v : vi->violations) verdict.add(v.condition, v.index, v.magnitude);
    }

    Report r;
    r.text("verdict", verdict.accepted ? "ACCEPT" : "REJECT");
    r.nums("candidate", candidate.coords());
    r.set("support", cert ? cert->support : IndexSet{});
    r.nums("multipliers", cert ? std::span<const double>(cert->multipliers)
                               : std::span<const double>{});
    r.violations(verdict.violations);
    r.count("vi_samples", vi ? vi->samples_checked : 0);
    r.count("vi_seed", opts.seed);
    if (vi && vi->counterexample) r.nums("counterexample", vi->counterexample->coords());
    r.write(out, opts.json);
    return static_cast<int>(verdict.accepted ? kSuccess : kRejected);
  });
}

int cmd_cone(const ConeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ConeFile file = parse_cone(read_file(opts.file));
    const LatticialCone cone(file.basis);
    const Vector& x = file.point;
    const MoreauSplit split = project_cone(cone, x);
    const MixedRepresentation mix = mixed_representation(cone, x);

    Report r;
    r.nums("y", split.y.coords());
    r.nums("z", split.z.coords());
    r.set("support", mix.support);
    r.nums("beta", mix.beta);
    r.set("complement", mix.complement);
    r.nums("alpha", mix.alpha);
    r.num("moreau_sum_residual", (x - split.y - split.z).norm());
    r.num("moreau_inner", inner(split.y, split.z));
    r.write(out, opts.json);
    return static_cast<int>(kSuccess);
  });
}

int cmd_lp(const LpOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LpFile file = parse_lp(read_file(opts.file));
    const lp::LpVector x(file.point, file.p);
    const lp::CoordinateHalfspaceSystem system(file.constraints);
    const lp::LpVector zbar = lp::lp_clip_project(system, x);
    const auto functionals = lp::SparseFunctionalSystem::from_coordinates(system);
    const lp::CandidateVerdict verdict = lp::verify_candidate(functionals, x, zbar);

    std::vector<Violation> failed;
    for (const auto& f : verdict.failed_conditions) failed.push_back({f.condition, f.index, f.magnitude});
    std::vector<std::size_t> witness;
    for (auto i : verdict.witness_constraints) witness.push_back(system.constraints()[i].coord);

    Report r;
    r.num("p", file.p);
    r.nums("point", zbar.leading());
    r.text("verdict", verdict.accepted ? "ACCEPT" : "REJECT");
    r.violations(failed);
    r.set("witness_coordinates", witness);
    r.nums("multipliers", verdict.multipliers);
    r.write(out, opts.json);
    return static_cast<int>(verdict.accepted ? kSuccess : kRejected);
  });
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.oracle != "dykstra") throw InvalidInput("unknown oracle '" + opts.oracle + "'");
    if (opts.dim < 1) throw InvalidInput("--dim must be at least 1");
    if (opts.n < 1) throw InvalidInput("--n must be at least 1");
    if (opts.n > opts.max_halfspaces) {
      throw CapExceeded("--n " + std::to_string(opts.n) + " exceeds the enumeration cap of " +
                        std::to_string(opts.max_halfspaces) +
                        " halfspaces (2^n - 1 candidate supports); use the Dykstra oracle "
                        "directly for larger systems or raise --max-halfspaces");
    }
    constexpr double kAgreement = 1e-6;
    SearchConfig cfg;
    cfg.workers = std::max(1u, opts.parallel);
    cfg.max_halfspaces = opts.max_halfspaces;
    std::mt19937_64 rng(opts.seed);

    Json rows = Json::array();
    double worst = 0.0, total_p = 0.0, total_d = 0.0;
    std::uint64_t total_subsets = 0;
    std::size_t no_cert = 0, disagree = 0;
    for (std::size_t k = 0; k < opts.count; ++k) {
      const Instance inst = random_instance(rng, opts.dim, opts.n);
      Json row;
      row["instance"] = k + 1;
      auto t0 = std::chrono::steady_clock::now();
      std::optional<ProjectionResult> res;
      try {
        res = project(inst.poly, inst.point, cfg);
      } catch (const NoCertificate& e) {
        total_subsets += e.stats().subsets_examined;
        ++no_cert;
      }
      const double tp = elapsed_us(t0);
      t0 = std::chrono::steady_clock::now();
      std::optional<DykstraState> dy;
      try {
        dy = dykstra_run(inst.poly, inst.point, 1e-10);
      } catch (const MaxItersExceeded& e) {
        dy = e.last();
      }
      const double td = elapsed_us(t0);
      total_p += tp;
      total_d += td;

      double delta = std::numeric_limits<double>::infinity();
      std::string status = "NO_CERTIFICATE";
      if (res) {
        delta = (res->point - dy->iterate).norm();
        total_subsets += res->stats.subsets_examined;
        status = delta <= kAgreement ? "OK" : "DISAGREE";
        if (delta > kAgreement) ++disagree;
      }
      worst = std::max(worst, delta);
      row["status"] = status;
      row["max_delta"] = std::isfinite(delta) ? Json(delta) : Json(nullptr);
      row["subsets"] = res ? res->stats.subsets_examined : 0;
      row["support_size"] = res && res->certificate ? res->certificate->support.size() : 0;
      row["oracle_iters"] = dy->iterations;
      row["project_us"] = tp;
      row["oracle_us"] = td;
      rows.push_back(std::move(row));
    }

    Json summary;
    summary["count"] = opts.count;
    summary["max_delta"] = std::isfinite(worst) ? Json(worst) : Json(nullptr);
    summary["subsets"] = total_subsets;
    summary["no_certificate"] = no_cert;
    summary["disagreements"] = disagree;
    summary["project_us"] = total_p;
    summary["oracle_us"] = total_d;

    if (opts.json) {
      Json doc;
      doc["dim"] = opts.dim;
      doc["n"] = opts.n;
      doc["seed"] = opts.seed;
      doc["oracle"] = opts.oracle;
      doc["rows"] = std::move(rows);
      doc["summary"] = std::move(summary);
      out << doc.dump(2) << "\n";
    } else {
      auto cell = [](const Json& v) {
        if (v.is_null()) return std::string("-");
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.3g", v.get<double>());
          return std::string(buf);
        }
        return std::to_string(v.get<std::uint64_t>());
      };
      char line[256];
      std::snprintf(line, sizeof line, "%-9s %-14s %-10s %-9s %-7s %-7s %-11s %s\n", "instance",
                    "status", "max_delta", "subsets", "support", "iters", "project_us",
                    "oracle_us");
      out << line;
      for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%-9s %-14s %-10s %-9s %-7s %-7s %-11s %s\n",
                      cell(row["instance"]).c_str(), cell(row["status"]).c_str(),
                      cell(row["max_delta"]).c_str(), cell(row["subsets"]).c_str(),
                      cell(row["support_size"]).c_str(), cell(row["oracle_iters"]).c_str(),
                      cell(row["project_us"]).c_str(), cell(row["oracle_us"]).c_str());
        out << line;
      }
      out << "summary count=" << opts.count << " max_delta=" << cell(summary["max_delta"])
          << " subsets=" << total_subsets << " no_certificate=" << no_cert
          << " disagreements=" << disagree << " project_us=" << cell(summary["project_us"])
          << " oracle_us=" << cell(summary["oracle_us"]) << "\n";
    }
    if (no_cert > 0) return static_cast<int>(kNoCertificate);
    return static_cast<int>(disagree > 0 ? kRejected : kSuccess);
  });
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.dim < 1 || opts.n < 1) throw InvalidInput("--dim and --n must be at least 1");
    std::mt19937_64 rng(opts.seed);
    const Instance inst = random_instance(rng, opts.dim, opts.n);
    ProblemFile file{std::vector<Halfspace>(inst.poly.begin(), inst.poly.end()), inst.point,
                     std::nullopt};
    out << format_problem(file);
    return static_cast<int>(kSuccess);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact projection onto polyhedra with verifiable certificates", "polyproj"};
  app.require_subcommand(1);

  ProjectOptions project_opts;
  auto* project_cmd = app.add_subcommand("project", "Project the point of a problem file");
  project_cmd->add_option("file", project_opts.file, "Problem file")->required();
  project_cmd->add_option("--tol", project_opts.tol, "Feasibility and stationarity tolerance");
  project_cmd->add_option("--max-card", project_opts.max_card,
                          "Largest support cardinality (0: numerical rank)");
  project_cmd->add_option("--parallel", project_opts.parallel, "Worker threads per tier")
      ->check(CLI::PositiveNumber);
  project_cmd->add_option("--max-halfspaces", project_opts.max_halfspaces, "Enumeration cap");
  project_cmd->add_flag("--json", project_opts.json, "JSON report");

  VerifyOptions verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "Check a candidate projection");
  verify_cmd->add_option("file", verify_opts.file, "Problem file")->required();
  verify_cmd->add_option("--candidate", verify_opts.candidate, "Candidate coordinates")
      ->required();
  verify_cmd->add_option("--tol", verify_opts.tol, "Feasibility and stationarity tolerance");
  verify_cmd->add_option("--samples", verify_opts.samples, "Variational-inequality samples");
  verify_cmd->add_option("--seed", verify_opts.seed, "Sampling seed");
  verify_cmd->add_flag("--json", verify_opts.json, "JSON report");

  ConeOptions cone_opts;
  auto* cone_cmd = app.add_subcommand("cone", "Moreau split for a latticial cone file");
  cone_cmd->add_option("file", cone_opts.file, "Cone file")->required();
  cone_cmd->add_flag("--json", cone_opts.json, "JSON report");

  LpOptions lp_opts;
  auto* lp_cmd = app.add_subcommand("lp", "Clip projection in l_p for an lp file");
  lp_cmd->add_option("file", lp_opts.file, "lp file")->required();
  lp_cmd->add_flag("--json", lp_opts.json, "JSON report");

  BenchOptions bench_opts;
  auto* bench_cmd = app.add_subcommand("bench", "Compare against an iterative oracle");
  bench_cmd->add_option("--dim", bench_opts.dim, "Dimension");
  bench_cmd->add_option("--n", bench_opts.n, "Halfspaces per instance");
  bench_cmd->add_option("--count", bench_opts.count, "Number of instances");
  bench_cmd->add_option("--seed", bench_opts.seed, "Generator seed");
  bench_cmd->add_option("--oracle", bench_opts.oracle, "Oracle (dykstra)");
  bench_cmd->add_option("--parallel", bench_opts.parallel, "Worker threads per tier")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-halfspaces", bench_opts.max_halfspaces, "Enumeration cap");
  bench_cmd->add_flag("--json", bench_opts.json, "JSON output");

  GenerateOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("generate", "Write a random problem file to stdout");
  gen_cmd->add_option("--dim", gen_opts.dim, "Dimension");
  gen_cmd->add_option("--n", gen_opts.n, "Halfspaces");
  gen_cmd->add_option("--seed", gen_opts.seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kSuccess) : static_cast<int>(kInputError);
  }

  if (project_cmd->parsed()) return cmd_project(project_opts, out, err);
  if (verify_cmd->parsed()) return cmd_verify(verify_opts, out, err);
  if (cone_cmd->parsed()) return cmd_cone(cone_opts, out, err);
  if (lp_cmd->parsed()) return cmd_lp(lp_opts, out, err);
  if (bench_cmd->parsed()) return cmd_bench(bench_opts, out, err);
  return cmd_generate(gen_opts, out, err);
}

}  // namespace polyproj::cli
