#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qplr/config.hpp"
#include "qplr/runner.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kSource(QPLR_SOURCE_DIR);
constexpr double kRelTol = 1e-8;
constexpr double kAbsTol = 1e-10;

struct Table {
  std::vector<std::string> meta;
  std::string header;
  std::vector<std::vector<std::string>> rows;
};

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  EXPECT_TRUE(in.good()) << p;
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      t.meta.push_back(line);
    } else if (t.header.empty()) {
      t.header = line;
    } else {
      std::vector<std::string> cells;
      std::stringstream s(line);
      std::string cell;
      while (std::getline(s, cell, ',')) cells.push_back(cell);
      t.rows.push_back(cells);
    }
  }
  return t;
}

bool close(double a, double b) { return std::abs(a - b) <= kAbsTol + kRelTol * std::max(std::abs(a), std::abs(b)); }

class Golden : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    out_ = new fs::path(fs::temp_directory_path() / ("qplr_golden_" + std::to_string(::getpid())));
    fs::remove_all(*out_);
    qplr::run_verify(qplr::load_config(kSource / "configs" / "small.json"), *out_);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*out_);
    delete out_;
  }
  static fs::path* out_;
};

fs::path* Golden::out_ = nullptr;

class GoldenCsv : public Golden, public ::testing::WithParamInterface<const char*> {};

TEST_P(GoldenCsv, MatchesFrozenValues) {
  const auto expect = read_csv(kSource / "tests" / "golden" / "small" / GetParam());
  const auto got = read_csv(*out_ / GetParam());
  ASSERT_EQ(got.meta.size(), 3u);
  EXPECT_EQ(got.meta[2], expect.meta[2]);
  EXPECT_EQ(got.header, expect.header);
  ASSERT_EQ(got.rows.size(), expect.rows.size());
  for (std::size_t i = 0; i < got.rows.size(); ++i) {
    ASSERT_EQ(got.rows[i].size(), expect.rows[i].size());
    for (std::size_t j = 0; j < got.rows[i].size(); ++j)
      EXPECT_TRUE(close(std::stod(got.rows[i][j]), std::stod(expect.rows[i][j])))
          << GetParam() << " row " << i << " column " << j << ": " << got.rows[i][j] << " vs " << expect.rows[i][j];
  }
}

INSTANTIATE_TEST_SUITE_P(Files, GoldenCsv, ::testing::Values("ids.csv", "qnorm.csv", "dual.csv", "lrfit.csv"));

TEST_F(Golden, ReportMatchesFrozenValues) {
  std::ifstream a(kSource / "tests" / "golden" / "small" / "report.json"), b(*out_ / "report.json");
  const auto expect = qplr::Json::parse(a);
  const auto got = qplr::Json::parse(b);
  ASSERT_EQ(got.size(), expect.size());
  for (const auto& [key, value] : expect.items()) {
    if (key == "version") continue;
    ASSERT_TRUE(got.contains(key)) << key;
    if (value.is_number_float())
      EXPECT_TRUE(close(got[key].get<double>(), value.get<double>())) << key;
    else
      EXPECT_EQ(got[key], value) << key;
  }
}

}  // namespace
