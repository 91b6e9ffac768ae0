#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "infocrit/json.hpp"

using namespace infocrit;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "infocrit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("infocrit_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = (path_ / name).string();
    std::ofstream(p) << content;
    return p;
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string data_file(const std::string& name) { return std::string(INFOCRIT_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"criteria"}).code, 2);  // --input is required
  EXPECT_EQ(run({"criteria", "--input", "/nonexistent/file.csv"}).code, 2);
}

TEST(Cli, SingleCellMatrix) {
  TempDir dir;
  const auto f = dir.file("one.csv", "-2.3\n");
  const auto r = run({"criteria", "--input", f, "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["report"]["lppd"].get<double>(), -2.3);
  EXPECT_EQ(j["report"]["p_waic1"].get<double>(), 0.0);
  EXPECT_TRUE(j["report"]["p_waic2"].is_null());
  EXPECT_TRUE(j["report"]["aic"].is_null());
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), 12345u);
  const auto table = run({"criteria", "--input", f});
  EXPECT_NE(table.out.find("report.p_waic2"), std::string::npos);
  EXPECT_NE(table.out.find("unavailable"), std::string::npos);
}

TEST(Cli, FormatAndValueErrorsMapToExitCodes) {
  TempDir dir;
  const auto bad_header = dir.file("h.csv", "point_1,point_3\n-1,-2\n");
  const auto r = run({"criteria", "--input", bad_header});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("row 1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("column 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"criteria", "--input", dir.file("r.csv", "-1,-2\n-3\n")}).code, 2);
  EXPECT_EQ(run({"criteria", "--input", dir.file("n.csv", "-1,nan\n")}).code, 3);
  EXPECT_EQ(run({"criteria", "--input", dir.file("ok.csv", "-1\n-2\n"), "--lpd-mle", "-1"}).code, 2);
  EXPECT_EQ(run({"criteria", "--input", dir.file("ok2.csv", "-1\n-2\n"), "--waic-variant", "3"}).code, 2);
}

TEST(Cli, AicAndDicFromPointEstimates) {
  TempDir dir;
  const auto f = dir.file("m.csv", "point_1,point_2\n-1,-2\n-3,-4\n");
  const auto r = run({"criteria", "-i", f, "--lpd-at-mean", "-4", "--lpd-mle", "-3", "--k", "2", "-f", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = Json::parse(r.out)["report"];
  EXPECT_EQ(rep["aic"].get<double>(), 10.0);
  EXPECT_EQ(rep["p_dic"].get<double>(), 2.0);
  EXPECT_EQ(rep["dic"].get<double>(), 12.0);
}

TEST(Cli, NoPoolingLooIsRefused) {
  const auto r = run({"loo", "--model", "schools", "--pooling", "none", "--draws", "100"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("model cannot predict held-out point"), std::string::npos);
}

TEST(Cli, ExpectRejectsTooFewReplicates) {
  const auto r = run({"expect", "--n", "3", "--replicates", "5"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("too few replicates"), std::string::npos);
}

TEST(Cli, OracleSingleObservation) {
  const auto r = run({"oracle", "--n", "1", "--m", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["observed"]["p_waic1"].get<double>(), 0.3069, 1e-4);
  EXPECT_EQ(j["observed"]["p_waic2"].get<double>(), 0.5);
  EXPECT_FALSE(j.contains("expected_from_prior"));
  EXPECT_FALSE(j["flat_prior_expectations"].contains("expected_loo_gap"));
  const auto prior = Json::parse(run({"oracle", "--n", "4", "--m", "4"}).out);
  EXPECT_EQ(prior["expected_from_prior"]["p_dic"].get<double>(), 0.5);
}

TEST(Cli, OracleFromDataFile) {
  TempDir dir;
  const auto f = dir.file("y.csv", "y\n0\n2\n");
  const auto j = Json::parse(run({"oracle", "--data", f}).out);
  EXPECT_NEAR(j["observed"]["lppd_loo"].get<double>(), -4.53102, 1e-5);
}

TEST(Cli, ExpectStudy) {
  const auto r = run({"expect", "--n", "10", "--m", "0", "--estimator", "p_waic2", "-R", "20000", "-f", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto q = Json::parse(r.out)["result"]["quantities"];
  bool found = false;
  for (const auto& x : q) {
    if (x["name"] == "p_waic2") {
      found = true;
      EXPECT_NEAR(x["mc_mean"].get<double>(), 0.95, 0.01);
      EXPECT_LT(std::abs(x["z_score"].get<double>()), 3.0);
    }
  }
  EXPECT_TRUE(found);
  const auto curve = run({"expect", "--estimator", "cloo", "-R", "200", "--curve", "2,3"});
  ASSERT_EQ(curve.code, 0) << curve.err;
  EXPECT_EQ(curve.out.rfind("n,estimator,mc_mean,mc_se,oracle\n2,cloo,", 0), 0u);
  EXPECT_EQ(run({"expect", "--n", "2", "--theta-source", "prior"}).code, 2);
  EXPECT_EQ(run({"expect", "--estimator", "bic"}).code, 2);
}

TEST(Cli, JsonReportRoundTrips) {
  TempDir dir;
  const auto f = dir.file("m.csv", "0.1,-0.2,-1.7\n-0.33333333333333331,-2.5,-1e-7\n-1.25,-0.75,-3.1\n");
  const auto r = run({"criteria", "-i", f, "--lpd-at-mean", "-2.2", "-f", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  const auto report = j["report"].get<CriterionReport>();
  EXPECT_EQ(Json(report).dump(), j["report"].dump());

  const auto l = run({"loo", "--model", "normal", "-i", dir.file("y.csv", "y\n0.5\n1.0\n-0.2\n"), "--draws", "500",
                      "-f", "json"});
  ASSERT_EQ(l.code, 0) << l.err;
  const auto lj = Json::parse(l.out);
  const auto loo = lj["report"].get<LooReport>();
  EXPECT_EQ(Json(loo).dump(), lj["report"].dump());
}

TEST(Cli, SameSeedGivesByteIdenticalFiles) {
  TempDir dir;
  const auto y = dir.file("y.csv", "y\n0.5\n1.0\n-0.2\n2.2\n");
  for (const char* tag : {"a", "b"}) {
    const auto r = run({"fit", "--model", "normal", "-i", y, "--draws", "300", "--seed", "9", "-o",
                        dir.path(std::string(tag) + ".json"), "-f", "json", "--dump-loglik",
                        dir.path(std::string(tag) + ".csv")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_FALSE(slurp(dir.path("a.json")).empty());
  EXPECT_EQ(slurp(dir.path("a.json")), slurp(dir.path("b.json")));
  EXPECT_EQ(slurp(dir.path("a.csv")), slurp(dir.path("b.csv")));
  const auto other = run({"fit", "--model", "normal", "-i", y, "--draws", "300", "--seed", "10", "-f", "json"});
  EXPECT_NE(other.out, slurp(dir.path("a.json")));

  // the dumped matrix feeds back into criteria with identical numbers
  const auto back = run({"criteria", "-i", dir.path("a.csv"), "-f", "json"});
  const auto orig = Json::parse(slurp(dir.path("a.json")));
  EXPECT_EQ(Json::parse(back.out)["report"]["lppd"], orig["report"]["lppd"]);
  EXPECT_EQ(Json::parse(back.out)["report"]["p_waic2"], orig["report"]["p_waic2"]);
}

TEST(Cli, FitModels) {
  TempDir dir;
  const auto reg = run({"fit", "--model", "regression", "-i", data_file("election.csv"), "--draws", "2000", "-f",
                        "json"});
  ASSERT_EQ(reg.code, 0) << reg.err;
  EXPECT_NEAR(Json::parse(reg.out)["report"]["aic"].get<double>(), 86.6, 0.05);
  const auto grp = dir.file("g.csv", "group,y\na,0.1\na,0.4\nb,1.2\nb,0.8\n");
  const auto obs = Json::parse(run({"fit", "--model", "balanced", "-i", grp, "--draws", "500", "-f", "json"}).out);
  const auto byg = Json::parse(
      run({"fit", "--model", "balanced", "-i", grp, "--draws", "500", "--counting", "group", "-f", "json"}).out);
  EXPECT_EQ(obs["report"]["points"].get<int>(), 4);
  EXPECT_EQ(byg["report"]["points"].get<int>(), 2);
  EXPECT_EQ(run({"fit", "--model", "balanced", "-i", dir.file("u.csv", "group,y\na,1\na,2\nb,3\n")}).code, 2);
  const auto tau = dir.path("tau.csv");
  EXPECT_EQ(run({"fit", "--model", "schools", "--draws", "200", "--tau-density", tau}).code, 0);
  EXPECT_EQ(slurp(tau).substr(0, slurp(tau).find('\n')), "tau,density");
  EXPECT_EQ(run({"fit", "--model", "schools", "--pooling", "none", "--prediction-mode", "new"}).code, 4);
  EXPECT_EQ(run({"fit", "--model", "kalman"}).code, 2);
}

TEST(Cli, SchoolsTableMarksUndefinedCells) {
  const auto r = run({"schools-table", "--draws", "2000", "-i", data_file("eight_schools.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("undefined: AIC needs a maximum likelihood estimate"), std::string::npos);
  EXPECT_NE(r.out.find("undefined: a held-out school cannot be predicted"), std::string::npos);
  const auto csvr = run({"schools-table", "--draws", "2000", "-f", "csv"});
  ASSERT_EQ(csvr.code, 0);
  EXPECT_EQ(csvr.out.rfind("row,", 0), 0u);
  const auto j = Json::parse(run({"schools-table", "--draws", "2000", "-f", "json"}).out);
  EXPECT_TRUE(j["table"]["columns"][2]["aic"].is_string());
  EXPECT_TRUE(j["table"]["columns"][0]["loo"].is_string());
  EXPECT_TRUE(j["table"]["columns"][1]["loo"].is_object());
}

TEST(Cli, ElectionJsonMatchesTable) {
  TempDir dir;
  const auto hist = dir.path("h.csv");
  const auto r = run({"election", "--draws", "3000", "--seed", "4", "-f", "json", "--histogram", hist});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_NEAR(j["election"]["mle"]["a"].get<double>(), 45.9, 0.05);
  EXPECT_EQ(slurp(hist).substr(0, 15), "bin_left,count\n");
  const auto t = run({"election", "--draws", "3000", "--seed", "4"});
  // the table prints the same doubles as the JSON
  const auto aic = j["election"]["criteria"]["aic"].dump();
  EXPECT_NE(t.out.find(aic), std::string::npos) << aic;
}
