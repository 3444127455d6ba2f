#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtd/cli.hpp"
#include "gtd/errors.hpp"

using namespace gtd;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "geothermo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("geothermo_test_" + name);
}

}  // namespace

TEST(Curvature, IdealEntropyIsFlat) {
  const auto r = run_cli({"curvature", "--system", "ideal_s", "--at", "u=1,v=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_LT(std::abs(j["ricci_scalar"].get<double>()), 1e-8);
  EXPECT_EQ(j["sign_factor"].get<double>(), 1.0);
}

TEST(Curvature, ChaplyginWithOverrides) {
  const auto r = run_cli({"curvature", "--system", "chap_s", "--param", "alpha=1,beta=1", "--at", "u=2,v=2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["ricci_scalar"].get<double>(), -2.0, 1e-6);
}

TEST(Curvature, DomainViolationNamesPredicate) {
  const auto r = run_cli({"curvature", "--system", "vdw_s", "--at", "u=1,v=0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("v > b"), std::string::npos) << r.err;
}

TEST(Curvature, SystemFile) {
  const auto path = temp_path("system.json");
  std::ofstream(path) << R"j({"id": "file_gas", "potential_name": "s", "relation": "(3/2)*ln(u) + ln(v)",
    "excluded_index": "u", "coords": [{"name": "u", "role": "extensive"}, {"name": "v", "role": "extensive"}],
    "params": {}, "domain": ["u > 0", "v > 0"]})j";
  const auto r = run_cli({"curvature", "--file", path.string(), "--at", "u=2,v=3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["system"], "file_gas");
  std::filesystem::remove(path);
}

TEST(SystemFile, SchemaErrors) {
  EXPECT_THROW(cli::parse_system_file("{"), Error);
  EXPECT_THROW(cli::parse_system_file(R"j({"id": "x"})j"), Error);
  EXPECT_THROW(cli::parse_system_file(R"j({"id": "x", "potential_name": "p", "relation": "u",
    "excluded_index": "u", "coords": []})j"),
               Error);
  const auto def = cli::parse_system_file(R"j({"id": "x", "potential_name": "p", "relation": "a*u + v",
    "excluded_index": "v", "coords": [{"name": "u"}, {"name": "v", "role": "intensive"}], "params": {"a": 2}})j");
  EXPECT_EQ(def.excluded, "v");
  EXPECT_EQ(def.coords[1].role, CoordRole::Intensive);
  EXPECT_EQ(def.params.at("a"), 2.0);
}

TEST(Assignments, Parse) {
  const auto m = cli::parse_assignments("a=1,b=-2.5e-1");
  EXPECT_EQ(m.at("a"), 1.0);
  EXPECT_EQ(m.at("b"), -0.25);
  for (const char* bad : {"", "a", "a=", "=1", "a=1x", "a=1,a=2"}) EXPECT_THROW(cli::parse_assignments(bad), Error) << bad;
}

TEST(Scan, VdwLocusRows) {
  const auto csv = temp_path("scan.csv"), loci = temp_path("scan.json");
  const auto r = run_cli({"scan", "--system", "vdw_s", "--chart", "reduced", "--grid", "v_r=0.4:3:200", "--grid",
                          "P_r=0.8:0.8:1", "--out", csv.string(), "--loci", loci.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(loci));
  ASSERT_EQ(j["singular"].size(), 2u);
  for (const auto& s : j["singular"]) {
    EXPECT_TRUE(s["on_locus"].get<bool>());
    EXPECT_LT(s["locus_distance"].get<double>(), 1e-4);
  }
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("# ", 0), 0u);
  EXPECT_NE(text.find("\nv_r,P_r,R,nonfinite\n"), std::string::npos);
  std::filesystem::remove(csv);
  std::filesystem::remove(loci);
}

TEST(Scan, IdealGasHasEmptyLoci) {
  const auto r = run_cli({"scan", "--system", "ideal_s", "--grid", "u=0.5:5:20", "--grid", "v=0.5:5:20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.err)["singular"].empty());
}

TEST(Scan, MalformedGrid) {
  EXPECT_EQ(run_cli({"scan", "--system", "ideal_s", "--grid", "u=0.5:5", "--grid", "v=1:2:3"}).code, 1);
  EXPECT_EQ(run_cli({"scan", "--system", "ideal_s", "--grid", "u=0.5:5:3"}).code, 1);
  EXPECT_EQ(run_cli({"scan", "--system", "ideal_s", "--grid", "v=1:2:3", "--grid", "u=1:2:3"}).code, 1);
}

TEST(Figure, ByteIdenticalRepeats) {
  for (const char* id : {"vdW1", "vdW2", "ising"}) {
    const auto a = temp_path(std::string(id) + "_a.csv"), b = temp_path(std::string(id) + "_b.csv");
    ASSERT_EQ(run_cli({"figure", "--id", id, "--out", a.string()}).code, 0);
    setenv("GEOTHERMO_THREADS", "1", 1);
    ASSERT_EQ(run_cli({"figure", "--id", id, "--out", b.string()}).code, 0);
    unsetenv("GEOTHERMO_THREADS");
    const std::string ta = slurp(a);
    EXPECT_FALSE(ta.empty());
    EXPECT_EQ(ta, slurp(b)) << id;
    EXPECT_EQ(ta.find('\r'), std::string::npos);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
  }
}

TEST(Figure, Columns) {
  const auto v1 = cli::figure_csv(cli::figure_recipe("vdW1"));
  EXPECT_NE(v1.find("\nv_r,R_entropy,R_energy,"), std::string::npos);
  const auto v2 = cli::figure_csv(cli::figure_recipe("vdW2"));
  EXPECT_NE(v2.find("\nv_r,R_energy,R_Helmholtz,"), std::string::npos);
  const auto is = cli::figure_csv(cli::figure_recipe("ising"));
  EXPECT_NE(is.find("\nT,H,R,nonfinite\n"), std::string::npos);
  EXPECT_THROW(cli::figure_recipe("vdW3"), Error);
}

// vdW2: the Helmholtz column stays finite on the locus rows.
TEST(Figure, HelmholtzFiniteOnLocus) {
  std::istringstream csv(cli::figure_csv(cli::figure_recipe("vdW2")));
  std::string line;
  int locus_rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'v') continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 6u);
    if (cols[5] == "1") {
      ++locus_rows;
      EXPECT_EQ(cols[4], "0");
      EXPECT_TRUE(std::isfinite(std::stod(cols[2])));
    }
  }
  EXPECT_EQ(locus_rows, 2);
}

TEST(Check, OracleSuitePasses) {
  const auto r = run_cli({"check", "oracle"});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Check, InvarianceSuite) {
  const auto r = run_cli({"check", "invariance"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("intentionally different"), std::string::npos);
}

TEST(Check, HomogeneitySuite) { EXPECT_EQ(run_cli({"check", "homogeneity"}).code, 0); }

TEST(Check, ExitCodeFollowsResults) {
  const auto r = run_cli({"check", "all"});
  bool all = true;
  for (const auto& c : cli::run_checks("all")) all = all && c.passed;
  EXPECT_EQ(r.code, all ? 0 : 5);
  const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  EXPECT_EQ(json::parse(last)["passed"].get<bool>(), all);
}

TEST(ExitCodes, Matrix) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"bogus"}).code, 1);
  EXPECT_EQ(run_cli({"check", "nope"}).code, 1);
  EXPECT_EQ(run_cli({"curvature", "--system", "nope", "--at", "u=1,v=1"}).code, 1);
  EXPECT_EQ(run_cli({"curvature", "--system", "ideal_s", "--at", "u=1"}).code, 1);
  EXPECT_EQ(run_cli({"curvature", "--system", "ideal_s", "--file", "x.json", "--at", "u=1,v=1"}).code, 1);
  EXPECT_EQ(run_cli({"curvature", "--system", "vdw_s", "--param", "c=1", "--at", "u=1,v=2"}).code, 1);
  EXPECT_EQ(run_cli({"curvature", "--system", "vdw_s", "--at", "u=-1,v=2"}).code, 2);
  EXPECT_EQ(run_cli({"curvature", "--system", "chap_s", "--param", "alpha=0,beta=0", "--at", "u=2,v=2"}).code, 3);
  EXPECT_EQ(run_cli({"figure", "--id", "ising", "--out", "/nonexistent-dir/x.csv"}).code, 4);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}
