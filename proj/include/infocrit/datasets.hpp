#ifndef INFOCRIT_DATASETS_HPP
#define INFOCRIT_DATASETS_HPP

// Bundled datasets and their CSV loaders. The same values ship as files in
// data/ (see data/README.md for provenance).

#include <algorithm>
#include <istream>
#include <string>
#include <vector>

#include "infocrit/csv.hpp"
#include "infocrit/models/regression.hpp"
#include "infocrit/models/schools.hpp"

namespace infocrit {

struct ElectionData {
  std::vector<int> year;
  std::vector<double> growth;  // inflation-adjusted personal income growth, %
  std::vector<double> vote;    // incumbent party two-party vote share, %

  RegressionFlatSpec as_regression() const { return {growth, vote}; }

  /// Hibbs "bread and peace" series, presidential elections 1952-2008.
  static ElectionData hibbs() {
    return {{1952, 1956, 1960, 1964, 1968, 1972, 1976, 1980, 1984, 1988, 1992, 1996, 2000, 2004, 2008},
            {2.40, 2.89, 0.85, 4.21, 3.02, 3.62, 1.08, -0.39, 3.86, 2.27, 0.38, 1.04, 2.36, 1.72, 0.10},
            {44.60, 57.76, 49.91, 61.34, 49.60, 61.79, 48.95, 44.70, 59.17, 53.94, 46.55, 54.74, 50.27,
             51.24, 46.32}};
  }
};

/// Columns year,growth,vote.
inline ElectionData read_election_csv(std::istream& in) {
  const auto t = csv::read_table(in, {"year", "growth", "vote"});
  ElectionData d;
  for (double y : csv::numeric_column(t, "year")) d.year.push_back(static_cast<int>(y));
  d.growth = csv::numeric_column(t, "growth");
  d.vote = csv::numeric_column(t, "vote");
  return d;
}

/// Columns school,y,sigma.
inline EightSchoolsData read_schools_csv(std::istream& in) {
  const auto t = csv::read_table(in, {"school", "y", "sigma"});
  EightSchoolsData d;
  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(t.header.begin(), t.header.end(), name) - t.header.begin());
  };
  const std::size_t label_col = index_of("school");
  for (const auto& row : t.rows) d.labels.push_back(row[label_col]);
  d.y = csv::numeric_column(t, "y");
  d.sigma = csv::numeric_column(t, "sigma");
  for (std::size_t j = 0; j < d.sigma.size(); ++j) {
    if (!(d.sigma[j] > 0.0)) {
      throw InputFormatError("sigma must be positive", t.line_numbers[j], index_of("sigma") + 1);
    }
  }
  return d;
}

}  // namespace infocrit

#endif  // INFOCRIT_DATASETS_HPP
