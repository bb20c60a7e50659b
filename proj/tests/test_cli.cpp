#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyproj_cli/commands.hpp"

namespace polyproj::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "polyproj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_tmp(const std::string& name, const std::string& text) {
  fs::create_directories(POLYPROJ_TEST_TMP);
  const fs::path path = fs::path(POLYPROJ_TEST_TMP) / name;
  std::ofstream(path) << text;
  return path.string();
}

const std::string kOrthant =
    "polyproj v1\ndim 2\nhalfspace 1 0 0\nhalfspace 0 1 0\npoint 2 1\n";

std::string field(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key + ":", 0) == 0) {
      return line.size() > key.size() + 1 ? line.substr(key.size() + 2) : "";
    }
  }
  return "<missing " + key + ">";
}

std::vector<std::string> keys(const std::string& report) {
  std::vector<std::string> out;
  std::istringstream in(report);
  for (std::string line; std::getline(in, line);) out.push_back(line.substr(0, line.find(':')));
  return out;
}

TEST(CliProject, Orthant) {
  const auto path = write_tmp("orthant.txt", kOrthant);
  const auto r = invoke({"project", path});
  EXPECT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(field(r.out, "status"), "OK");
  EXPECT_EQ(field(r.out, "point"), "0 0");
  EXPECT_EQ(field(r.out, "support"), "{1, 2}");
  EXPECT_EQ(field(r.out, "multipliers"), "2 1");
  EXPECT_EQ(field(r.out, "verification"), "ACCEPT");
  EXPECT_EQ(field(r.out, "violations"), "none");
}

TEST(CliProject, InteriorPoint) {
  const auto path = write_tmp("interior.txt", "polyproj v1\ndim 2\nhalfspace 1 0 0\npoint -1 3\n");
  const auto r = invoke({"project", path});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(field(r.out, "point"), "-1 3");
  EXPECT_EQ(field(r.out, "support"), "{}");
}

TEST(CliProject, ZeroNormalIsAnInputError) {
  const auto path = write_tmp(
      "zero.txt", "polyproj v1\ndim 2\nhalfspace 1 0 0\nhalfspace 0 0 1\npoint 1 1\n");
  const auto r = invoke({"project", path});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliProject, EmptyPolyhedronHasNoCertificate) {
  const auto path =
      write_tmp("empty.txt", "polyproj v1\ndim 1\nhalfspace 1 -1\nhalfspace -1 -1\npoint 0\n");
  const auto r = invoke({"project", path});
  EXPECT_EQ(r.code, kNoCertificate);
  EXPECT_EQ(field(r.out, "status"), "NO_CERTIFICATE");
}

TEST(CliProject, MissingFileAndBadArguments) {
  EXPECT_EQ(invoke({"project", "/nonexistent/p.txt"}).code, kInputError);
  EXPECT_EQ(invoke({"project"}).code, kInputError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kInputError);
  EXPECT_EQ(invoke({}).code, kInputError);
  EXPECT_EQ(invoke({"--help"}).code, kSuccess);
  const auto path = write_tmp("orthant.txt", kOrthant);
  EXPECT_EQ(invoke({"project", path, "--tol", "-1"}).code, kInputError);
  EXPECT_EQ(invoke({"project", path, "--parallel", "0"}).code, kInputError);
}

TEST(CliProject, JsonCarriesTheSameFields) {
  const auto path = write_tmp("orthant.txt", kOrthant);
  const auto human = invoke({"project", path});
  const auto machine = invoke({"project", path, "--json"});
  ASSERT_EQ(machine.code, kSuccess);
  const Json doc = Json::parse(machine.out);
  std::vector<std::string> json_keys;
  for (const auto& [k, _] : doc.items()) json_keys.push_back(k);
  EXPECT_EQ(json_keys, keys(human.out));
  EXPECT_EQ(doc["support"], Json::array({1, 2}));
  EXPECT_EQ(doc["multipliers"], Json::array({2.0, 1.0}));
}

TEST(CliProject, WorkerCountDoesNotChangeTheReport) {
  for (int seed = 1; seed <= 10; ++seed) {
    const auto gen = invoke({"generate", "--dim", "4", "--n", "7", "--seed", std::to_string(seed)});
    ASSERT_EQ(gen.code, kSuccess);
    const auto path = write_tmp("gen.txt", gen.out);
    const auto one = invoke({"project", path});
    const auto eight = invoke({"project", path, "--parallel", "8"});
    EXPECT_EQ(one.code, eight.code);
    EXPECT_EQ(one.out, eight.out);
  }
}

TEST(CliProject, TolLineInFileIsHonoured) {
  const auto path = write_tmp("tol.txt", kOrthant + "tol 1e-3\n");
  EXPECT_EQ(invoke({"project", path}).code, kSuccess);
}

TEST(CliVerify, Examples) {
  const auto path = write_tmp("orthant.txt", kOrthant);
  {
    const auto r = invoke({"verify", path, "--candidate", "0 0"});
    EXPECT_EQ(r.code, kSuccess) << r.out << r.err;
    EXPECT_EQ(field(r.out, "verdict"), "ACCEPT");
  }
  {
    const auto r = invoke({"verify", path, "--candidate", "1 0"});
    EXPECT_EQ(r.code, kRejected);
    EXPECT_NE(field(r.out, "violations").find("feasibility"), std::string::npos) << r.out;
  }
  {
    const auto r = invoke({"verify", path, "--candidate", "-1 0"});
    EXPECT_EQ(r.code, kRejected);
    EXPECT_NE(field(r.out, "violations").find("stationarity"), std::string::npos) << r.out;
  }
  EXPECT_EQ(invoke({"verify", path, "--candidate", "0"}).code, kInputError);
  EXPECT_EQ(invoke({"verify", path, "--candidate", "0 x"}).code, kInputError);
}

TEST(CliCone, Example) {
  const auto path =
      write_tmp("cone.txt", "polyproj-cone v1\ndim 2\nbasis 1 0\nbasis 1 1\npoint 0 -1\n");
  const auto r = invoke({"cone", path});
  EXPECT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(field(r.out, "y"), "0 0");
  EXPECT_EQ(field(r.out, "z"), "0 -1");
  EXPECT_EQ(field(r.out, "support"), "{2}");
  EXPECT_EQ(field(r.out, "beta"), "1");
  EXPECT_EQ(field(r.out, "complement"), "{1}");
  EXPECT_EQ(field(r.out, "alpha"), "0");

  const auto singular =
      write_tmp("singular.txt", "polyproj-cone v1\ndim 2\nbasis 1 2\nbasis 2 4\npoint 0 -1\n");
  EXPECT_EQ(invoke({"cone", singular}).code, kInputError);
}

TEST(CliLp, Example) {
  const auto path = write_tmp("lp.txt", "polyproj-lp v1\np 3\ncoord 1 1 0\npoint 2 5\n");
  const auto r = invoke({"lp", path});
  EXPECT_EQ(r.code, kSuccess) << r.err;
  EXPECT_EQ(field(r.out, "point"), "0 5");
  EXPECT_EQ(field(r.out, "verdict"), "ACCEPT");
  const Json doc = Json::parse(invoke({"lp", path, "--json"}).out);
  EXPECT_EQ(doc["verdict"], "ACCEPT");
  EXPECT_EQ(doc["witness_coordinates"], Json::array({1}));

  const auto bad = write_tmp("lp1.txt", "polyproj-lp v1\np 1\ncoord 1 1 0\npoint 2 5\n");
  EXPECT_EQ(invoke({"lp", bad}).code, kInputError);
}

TEST(CliBench, AgreesWithOracle) {
  const auto r = invoke({"bench", "--dim", "4", "--n", "6", "--count", "20", "--seed", "7"});
  EXPECT_EQ(r.code, kSuccess) << r.out << r.err;
  EXPECT_NE(r.out.find("disagreements=0"), std::string::npos);
  EXPECT_NE(r.out.find("no_certificate=0"), std::string::npos);
}

TEST(CliBench, JsonSummary) {
  const auto r = invoke({"bench", "--count", "5", "--json"});
  ASSERT_EQ(r.code, kSuccess);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["rows"].size(), 5u);
  EXPECT_EQ(doc["summary"]["disagreements"], 0);
  EXPECT_LE(doc["summary"]["max_delta"].get<double>(), 1e-6);
}

TEST(CliBench, CapRefusesCleanly) {
  const auto r = invoke({"bench", "--n", "30", "--count", "1"});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("cap"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliBench, TwentyHalfspacesComplete) {
  const auto r = invoke({"bench", "--dim", "5", "--n", "20", "--count", "5"});
  EXPECT_EQ(r.code, kSuccess) << r.out << r.err;
}

TEST(CliBench, EdgeArguments) {
  EXPECT_EQ(invoke({"bench", "--count", "0"}).code, kSuccess);
  EXPECT_EQ(invoke({"bench", "--oracle", "magic"}).code, kInputError);
  EXPECT_EQ(invoke({"bench", "--n", "0"}).code, kInputError);
}

TEST(CliGenerate, IsDeterministicAndParses) {
  const auto a = invoke({"generate", "--dim", "3", "--n", "5", "--seed", "4"});
  const auto b = invoke({"generate", "--dim", "3", "--n", "5", "--seed", "4"});
  ASSERT_EQ(a.code, kSuccess);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(invoke({"project", write_tmp("g.txt", a.out)}).code, kSuccess);
}

}  // namespace
}  // namespace polyproj::cli
