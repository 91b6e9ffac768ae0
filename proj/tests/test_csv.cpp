#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "infocrit/csv.hpp"
#include "infocrit/datasets.hpp"

using namespace infocrit;

namespace {

LogLikMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return csv::read_matrix(in);
}

}  // namespace

TEST(ReadMatrix, HeaderlessAndHeadered) {
  const auto a = parse("-2.3\n");
  EXPECT_EQ(a.draws(), 1u);
  EXPECT_EQ(a(0, 0), -2.3);
  const auto b = parse("point_1,point_2\n-1,-2\n-3,-4\n");
  EXPECT_EQ(b.draws(), 2u);
  EXPECT_EQ(b.points(), 2u);
  EXPECT_EQ(b(1, 0), -3.0);
}

TEST(ReadMatrix, ToleratesBomWhitespaceAndBlankLines) {
  const auto m = parse("\xEF\xBB\xBFpoint_1, point_2\r\n\n 1e-3 , +2\n");
  EXPECT_EQ(m(0, 0), 1e-3);
  EXPECT_EQ(m(0, 1), 2.0);
}

TEST(ReadMatrix, HeaderMismatchReportsColumn) {
  try {
    parse("point_1,pt_2\n1,2\n");
    FAIL() << "expected throw";
  } catch (const InputFormatError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 2u);
    EXPECT_NE(std::string(e.what()).find("header mismatch"), std::string::npos);
  }
}

TEST(ReadMatrix, RaggedRowAndBadCell) {
  try {
    parse("1,2\n3\n");
    FAIL();
  } catch (const InputFormatError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.col(), 2u);
  }
  try {
    parse("1,2\n3,abc\n");
    FAIL();
  } catch (const InputFormatError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_EQ(e.col(), 2u);
  }
  EXPECT_THROW(parse(""), InputFormatError);
  EXPECT_THROW(parse("point_1\n"), InputFormatError);
  EXPECT_THROW(parse("1,,2\n"), InputFormatError);
}

TEST(ReadMatrix, NonFiniteIsNumericError) {
  EXPECT_THROW(parse("1,nan\n"), NumericError);
  EXPECT_THROW(parse("-inf\n"), NumericError);
}

TEST(WriteMatrix, RoundTripsExactly) {
  const auto m = LogLikMatrix::from_rows({{0.1, -1.0 / 3.0}, {-1e-300, 123456.789}});
  std::ostringstream out;
  csv::write_matrix(out, m);
  const auto back = parse(out.str());
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(back(s, i), m(s, i));
  }
}

TEST(Datasets, BundledFilesMatchEmbeddedCopies) {
  std::istringstream sch("school,y,sigma\nA,28,15\nB,8,10\nC,-3,16\nD,7,11\nE,-1,9\nF,1,11\nG,18,10\nH,12,18\n");
  const auto d = read_schools_csv(sch);
  const auto t1 = EightSchoolsData::rubin1981();
  EXPECT_EQ(d.y, t1.y);
  EXPECT_EQ(d.sigma, t1.sigma);
  EXPECT_EQ(d.labels, t1.labels);
}

TEST(Datasets, SchoolsColumnOrderIsFree) {
  std::istringstream sch("sigma,school,y\n15,A,28\n10,B,8\n");
  const auto d = read_schools_csv(sch);
  EXPECT_EQ(d.y, (std::vector<double>{28, 8}));
  EXPECT_EQ(d.sigma, (std::vector<double>{15, 10}));
  std::istringstream bad("school,y,sigma\nA,1,0\n");
  EXPECT_THROW(read_schools_csv(bad), InputFormatError);
  std::istringstream missing("school,y\nA,1\n");
  EXPECT_THROW(read_schools_csv(missing), InputFormatError);
}

TEST(Datasets, ElectionLoader) {
  std::istringstream in("year,growth,vote\n1952,2.40,44.60\n1956,2.89,57.76\n");
  const auto e = read_election_csv(in);
  EXPECT_EQ(e.year, (std::vector<int>{1952, 1956}));
  EXPECT_EQ(e.vote[1], 57.76);
  EXPECT_EQ(ElectionData::hibbs().year.size(), 15u);
}
