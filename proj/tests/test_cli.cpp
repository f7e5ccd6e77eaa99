#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "homi/data.hpp"
#include "homi/model_io.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using homi::Matrix;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = homi::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Matrix read_csv_matrix(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string cell;
    cols = 0;
    while (std::getline(cells, cell, ',')) {
      values.push_back(std::stod(cell));
      ++cols;
    }
    ++rows;
  }
  return Matrix(rows, cols, std::move(values));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("homi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path random_dataset(const std::string& name, std::size_t n, std::uint64_t seed) {
    oracle::Gen gen(seed);
    homi::data::Dataset d;
    d.relation = name;
    d.X = gen.matrix(n, 4, -2, 2);
    d.Y = gen.binary(n, 3, 0.5);
    d.feature_names = {"a", "b", "c", "d"};
    d.label_names = {"p", "q", "r"};
    const fs::path p = dir_ / (name + ".arff");
    std::ofstream out(p);
    homi::data::write_arff(out, d);
    return p;
  }

  fs::path dir_;
};

const char* kDeficient =
    "@relation r\n@attribute f numeric\n@attribute y1 {0,1}\n@attribute y2 {0,1}\n"
    "@data\n1,1,1\n2,0,0\n3,1,1\n";

}  // namespace

TEST_F(CliTest, RankReportsDeficiency) {
  const auto deficient = write("d.arff", kDeficient);
  auto r = run({"rank", deficient.string(), "--labels", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rank=1 labels=2 rank-deficient"), std::string::npos) << r.out;

  const auto full = write("f.arff",
                          "@relation r\n@attribute f numeric\n@attribute y1 {0,1}\n@attribute y2 {0,1}\n"
                          "@data\n1,1,0\n2,0,1\n");
  r = run({"rank", full.string(), "--labels", "2"});
  EXPECT_NE(r.out.find("rank=2 labels=2 full-rank"), std::string::npos) << r.out;
}

TEST_F(CliTest, LabelsFromSiblingXml) {
  const auto data = write("e.arff", kDeficient);
  write("e.xml", "<labels><label name=\"y1\"/><label name=\"y2\"/></labels>");
  const auto r = run({"rank", data.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("labels=2"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto data = write("a.arff", kDeficient);
  EXPECT_EQ(run({"rank", data.string()}).code, 1);  // no label source
  const auto bad = write("bad.arff", "@relation r\n@attribute f numeric\n@attribute y {0,1}\n@data\n1,7\n");
  const auto r = run({"rank", bad.string(), "--labels", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error:", 0), 0u) << r.err;
  const auto ok = random_dataset("z", 10, 1);
  const auto n = run({"train", ok.string(), "--labels", "3", "--out", (dir_ / "m.json").string(), "--beta", "0",
                      "--gamma", "0", "--lambda", "0"});
  EXPECT_EQ(n.code, 3);
  EXPECT_NE(n.err.find("DegenerateDenominator"), std::string::npos) << n.err;
}

TEST_F(CliTest, ZeroIterationsGiveZeroModel) {
  const auto data = random_dataset("t", 15, 2);
  const auto model = dir_ / "m.json";
  auto r = run({"train", data.string(), "--labels", "3", "--out", model.string(), "--iter", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "m.json.trace.csv"), "sweep,objective\n");
  r = run({"predict", model.string(), data.string(), "--out", (dir_ / "p.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_csv_matrix(dir_ / "p.csv"), Matrix(15, 3));
  EXPECT_EQ(read_csv_matrix(dir_ / "p.scores.csv"), Matrix(15, 3));
  // B starts at zero, so normalization has no column scale.
  r = run({"corr", model.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("ZeroColumn"), std::string::npos) << r.err;
  r = run({"corr", model.string(), "--raw"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "p,q,r\n0,0,0\n0,0,0\n0,0,0\n");
}

TEST_F(CliTest, TrainPredictMatchesLibrary) {
  const auto train = random_dataset("tr", 30, 3);
  const auto test = random_dataset("te", 9, 4);
  const auto model = dir_ / "m.json";
  auto r = run({"train", train.string(), "--labels", "3", "--out", model.string(), "--s", "4", "--iter", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"predict", model.string(), test.string(), "--out", (dir_ / "p.csv").string(), "--scores",
           (dir_ / "s.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;

  const auto saved = homi::load_model(model);
  const auto d = homi::data::read_arff(test, homi::data::LabelSpec::last(3));
  const Matrix expected = homi::score_raw(saved, d.X);
  EXPECT_EQ(read_csv_matrix(dir_ / "s.csv"), expected);
  EXPECT_EQ(read_csv_matrix(dir_ / "p.csv"), homi::threshold(expected));

  // Same inputs, same bytes.
  const auto model2 = dir_ / "m2.json";
  run({"train", train.string(), "--labels", "3", "--out", model2.string(), "--s", "4", "--iter", "20"});
  EXPECT_EQ(slurp(model), slurp(model2));
}

TEST_F(CliTest, PredictRejectsForeignFeatures) {
  const auto data = random_dataset("t", 12, 5);
  const auto model = dir_ / "m.json";
  ASSERT_EQ(run({"train", data.string(), "--labels", "3", "--out", model.string(), "--iter", "2"}).code, 0);
  const auto other = write("o.arff",
                           "@relation r\n@attribute x numeric\n@attribute p {0,1}\n@attribute q {0,1}\n"
                           "@attribute r {0,1}\n@data\n1,0,1,0\n");
  EXPECT_EQ(run({"predict", model.string(), other.string(), "--out", (dir_ / "p.csv").string()}).code, 2);
}

TEST_F(CliTest, EvalWritesSummaryAndDetail) {
  const auto data = random_dataset("ev", 25, 6);
  const auto detail = dir_ / "folds.csv";
  const auto r = run({"eval", data.string(), "--labels", "3", "--cv", "3", "--iter", "5", "--s", "3", "--detail",
                      detail.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("hamming_loss ", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("macro_auc "), std::string::npos);
  const std::string text = slurp(detail);
  EXPECT_EQ(text.rfind("fold,train_size,test_size,sweeps,converged,hamming_loss,ranking_loss,one_error,macro_auc\n", 0),
            0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(run({"eval", data.string(), "--labels", "3", "--cv", "1"}).code, 2);
}

TEST_F(CliTest, Describe) {
  const auto data = write("toy.arff", kDeficient);
  const auto r = run({"describe", data.string(), "--labels", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "dataset,n,m,l,lcard,lden,dl\ntoy,3,1,2,1.3333333333333333,0.6666666666666666,2\n");
}

TEST_F(CliTest, StatsFriedmanAndHolm) {
  const auto results = write("res.csv", "dataset,A,B,C\nd1,1,2,3\nd2,1,2,3\nd3,2,1,3\nd4,1,2,3\n");
  const auto r = run({"stats", results.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("chi2,6.5\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("f_f,13\n"), std::string::npos);
  EXPECT_NE(r.out.find("control,A\n"), std::string::npos);
  EXPECT_NE(r.out.find("method,avg_rank,z,p,threshold,significant\nC,3,"), std::string::npos);
  EXPECT_EQ(run({"stats", results.string(), "--alpha", "1.5"}).code, 2);
  EXPECT_EQ(run({"stats", results.string(), "--control", "Z"}).code, 1);
}
