#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "cogwear/core/csv.hpp"
#include "cogwear/core/feature_matrix.hpp"
#include "cogwear/core/stats.hpp"

namespace cogwear {

/// One line of the cohort characteristics table: either mean (SD) of a
/// numeric column or N (%) of one category. Percentages use the full
/// cohort size as denominator, so missing answers make them sum below 100.
struct SummaryRow {
  std::string section;  // group heading for categorical rows, else empty
  std::string label;
  bool categorical = false;
  double mean = kMissing;
  double sd = kMissing;
  int count = 0;
  double percent = kMissing;
};

struct CohortSummary {
  std::size_t n = 0;
  std::vector<SummaryRow> rows;

  const SummaryRow& row(const std::string& section, const std::string& label) const {
    for (const auto& r : rows)
      if (r.section == section && r.label == label) return r;
    throw Error("cohort summary has no row '" + section + "/" + label + "'");
  }
};

namespace detail {

struct Level {
  double code;
  const char* label;
};

}  // namespace detail

inline CohortSummary cohort_summary(const FeatureMatrix& m) {
  CohortSummary out;
  out.n = m.rows();
  const double n = static_cast<double>(m.rows());

  auto numeric = [&](const char* column, const char* label) {
    const auto v = m.column_values(m.column_index(column));
    SummaryRow r;
    r.label = label;
    r.mean = stats::mean(v);
    r.sd = stats::sd(v);
    r.count = static_cast<int>(stats::observed(v).size());
    out.rows.push_back(r);
  };
  auto categorical = [&](const char* column, const char* section, std::initializer_list<detail::Level> levels) {
    const auto v = m.column_values(m.column_index(column));
    for (const auto& lv : levels) {
      SummaryRow r;
      r.section = section;
      r.label = lv.label;
      r.categorical = true;
      for (double x : v)
        if (x == lv.code) ++r.count;
      r.percent = n > 0 ? 100.0 * r.count / n : kMissing;
      out.rows.push_back(r);
    }
  };

  numeric("age", "Age");
  categorical("sex", "Sex", {{1, "Female"}, {0, "Male"}});
  categorical("education", "Education",
              {{1, "<9th grade"}, {2, "9-11th grade"}, {3, "High school or GED"}, {4, "Some college"}, {5, "College graduate"}});
  categorical("marital", "Marital status",
              {{1, "Married"}, {2, "Widowed"}, {3, "Divorced"}, {4, "Separated"}, {5, "Never married"}, {6, "Living with partner"}});
  categorical("income", "Household income (1000s of USD)",
              {{1, "[0, 5)"},
               {2, "[5, 10)"},
               {3, "[10, 15)"},
               {4, "[15, 20)"},
               {5, "[20, 25)"},
               {6, "[25, 35)"},
               {7, "[35, 45)"},
               {8, "[45, 55)"},
               {9, "[55, 65)"},
               {10, "[65, 75)"},
               {11, "[75, 100)"},
               {12, "[100, Inf)"}});
  categorical("diabetic", "Diabetic status", {{1, "Has diabetes"}, {0, "Does not"}});
  numeric("phq9", "PHQ-9 score");
  numeric("adl_iadl", "ADL/IADL score");
  numeric("sleep_duration_mean", "Sleep duration (hours)");
  numeric("sleep_efficiency_mean", "Sleep efficiency");
  numeric("sedentary_mean", "Sedentary activity (min)");
  numeric("light_mean", "Light activity (min)");
  numeric("mvpa_mean", "Moderate-vigorous activity (min)");
  return out;
}

/// CSV with columns section,characteristic,kind,mean,sd,n,percent.
inline void write_cohort_summary_csv(std::ostream& os, const CohortSummary& s) {
  os << "section,characteristic,kind,mean,sd,n,percent\n";
  for (const auto& r : s.rows) {
    os << csv::quote(r.section) << ',' << csv::quote(r.label) << ',' << (r.categorical ? "count" : "mean_sd") << ','
       << csv::format_double(r.mean) << ',' << csv::format_double(r.sd) << ',' << r.count << ',' << csv::format_double(r.percent)
       << '\n';
  }
}

}  // namespace cogwear
