#pragma once

// Epoch and survey ingestion, exclusion criteria, outcome labelling.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cogwear/core/csv.hpp"
#include "cogwear/core/error.hpp"
#include "cogwear/core/stats.hpp"
#include "cogwear/core/time.hpp"

namespace cogwear {

inline constexpr std::string_view kEpochHeader = "participant_id,timestamp,mims,lux,wear";
inline constexpr std::string_view kSurveyHeader =
    "participant_id,age,sex,education,marital,income,diabetic,phq9,adl_iadl,cerad_wl,aft,dsst";

/// A calendar day counts toward wear time when it has at least this many
/// wear-flagged minutes.
inline constexpr int kValidDayWearMinutes = 960;

struct EpochRecord {
  MinuteStamp timestamp;
  double mims = 0.0;
  double lux = 0.0;
  bool wear = false;
};

struct EpochSeries {
  std::string participant_id;
  std::vector<EpochRecord> records;  // strictly increasing timestamps
  int valid_days = 0;
};

struct EpochParseReport {
  std::size_t rows = 0;
  std::size_t accepted = 0;
  std::size_t rejected_negative = 0;
  std::size_t duplicates = 0;
  std::size_t malformed = 0;
};

struct ParsedEpochs {
  std::vector<EpochSeries> series;  // sorted by participant_id
  EpochParseReport report;
};

inline int count_valid_days(std::span<const EpochRecord> records, int threshold = kValidDayWearMinutes) {
  std::map<std::int64_t, int> per_day;
  for (const auto& r : records)
    if (r.wear) ++per_day[r.timestamp.day()];
  return static_cast<int>(std::count_if(per_day.begin(), per_day.end(), [&](const auto& kv) { return kv.second >= threshold; }));
}

/// Sorts records by time, keeps the first of duplicated timestamps and
/// recomputes valid_days. Returns the number of duplicates dropped.
inline std::size_t normalize_series(EpochSeries& s) {
  std::stable_sort(s.records.begin(), s.records.end(),
                   [](const EpochRecord& a, const EpochRecord& b) { return a.timestamp < b.timestamp; });
  auto last = std::unique(s.records.begin(), s.records.end(),
                          [](const EpochRecord& a, const EpochRecord& b) { return a.timestamp == b.timestamp; });
  const auto dropped = static_cast<std::size_t>(s.records.end() - last);
  s.records.erase(last, s.records.end());
  s.valid_days = count_valid_days(s.records);
  return dropped;
}

/// Parses the epoch CSV. A wrong header is fatal; bad rows are counted and skipped.
inline ParsedEpochs parse_epochs(std::istream& is) {
  ParsedEpochs out;
  std::string line;
  if (!std::getline(is, line) || csv::trim_cr(line) != kEpochHeader)
    throw SchemaError("epoch CSV header must be '" + std::string(kEpochHeader) + "'");
  std::map<std::string, EpochSeries, std::less<>> by_id;
  while (std::getline(is, line)) {
    const auto sv = csv::trim_cr(line);
    if (sv.empty()) continue;
    ++out.report.rows;
    const auto f = csv::split(sv);
    if (f.size() != 5 || f[0].empty()) {
      ++out.report.malformed;
      continue;
    }
    const auto ts = MinuteStamp::parse(f[1]);
    const auto mims = csv::parse_double(f[2]);
    const auto lux = csv::parse_double(f[3]);
    if (!ts || !mims || !lux || (f[4] != "0" && f[4] != "1") || !std::isfinite(*mims) || !std::isfinite(*lux)) {
      ++out.report.malformed;
      continue;
    }
    if (*mims < 0.0 || *lux < 0.0) {
      ++out.report.rejected_negative;
      continue;
    }
    auto it = by_id.find(f[0]);
    if (it == by_id.end()) it = by_id.emplace(std::string(f[0]), EpochSeries{std::string(f[0]), {}, 0}).first;
    it->second.records.push_back({*ts, *mims, *lux, f[4] == "1"});
  }
  for (auto& [id, s] : by_id) {
    out.report.duplicates += normalize_series(s);
    out.report.accepted += s.records.size();
    out.series.push_back(std::move(s));
  }
  return out;
}

inline void write_epochs_header(std::ostream& os) { os << kEpochHeader << '\n'; }

inline void write_epoch_rows(std::ostream& os, const EpochSeries& s) {
  for (const auto& r : s.records)
    os << s.participant_id << ',' << r.timestamp.to_string() << ',' << csv::format_double(r.mims) << ','
       << csv::format_double(r.lux) << ',' << (r.wear ? '1' : '0') << '\n';
}

inline void write_epochs(std::ostream& os, std::span<const EpochSeries> series) {
  write_epochs_header(os);
  for (const auto& s : series) write_epoch_rows(os, s);
}

/// Dense per-minute view of a series from its first to last record. Minutes
/// without a record are non-wear with missing activity and light.
struct MinuteGrid {
  MinuteStamp start;
  std::vector<double> mims;
  std::vector<double> lux;
  std::vector<std::uint8_t> wear;

  std::size_t size() const noexcept { return wear.size(); }
  MinuteStamp stamp(std::size_t i) const noexcept { return start + static_cast<std::int64_t>(i); }

  /// Activity with non-wear minutes set to missing.
  std::vector<double> worn_mims() const {
    std::vector<double> out(size(), kMissing);
    for (std::size_t i = 0; i < size(); ++i)
      if (wear[i]) out[i] = mims[i];
    return out;
  }
  std::vector<double> worn_lux() const {
    std::vector<double> out(size(), kMissing);
    for (std::size_t i = 0; i < size(); ++i)
      if (wear[i]) out[i] = lux[i];
    return out;
  }
};

inline MinuteGrid to_grid(const EpochSeries& s) {
  MinuteGrid g;
  if (s.records.empty()) return g;
  g.start = s.records.front().timestamp;
  const auto n = static_cast<std::size_t>(s.records.back().timestamp - g.start + 1);
  g.mims.assign(n, kMissing);
  g.lux.assign(n, kMissing);
  g.wear.assign(n, 0);
  for (const auto& r : s.records) {
    const auto i = static_cast<std::size_t>(r.timestamp - g.start);
    g.mims[i] = r.mims;
    g.lux[i] = r.lux;
    g.wear[i] = r.wear ? 1 : 0;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Survey covariates and cognition

enum class Sex : int { male = 1, female = 2 };

struct ConventionalRecord {
  std::string participant_id;
  std::optional<int> age;
  std::optional<Sex> sex;
  std::optional<int> education;  // 1..5 ordinal
  std::optional<int> marital;    // 1..6 nominal
  std::optional<int> income;     // 1..12 ordinal
  std::optional<bool> diabetic;
  std::optional<int> phq9;      // 0..27
  std::optional<int> adl_iadl;  // 20..80
};

struct CognitiveScores {
  std::string participant_id;
  std::optional<int> cerad_wl;  // 0..40
  std::optional<int> aft;       // >= 0
  std::optional<int> dsst;      // 0..133

  bool complete() const noexcept { return cerad_wl && aft && dsst; }
};

struct SurveyParseReport {
  std::size_t rows = 0;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
  std::size_t out_of_range = 0;  // non-empty cells mapped to missing
};

struct ParsedSurvey {
  std::vector<ConventionalRecord> conventional;  // sorted by participant_id
  std::vector<CognitiveScores> scores;           // same order
  SurveyParseReport report;
};

/// Parses the survey CSV. Empty cells are missing. Values outside a field's
/// valid range (which covers the source "Refused" / "Don't know" codes)
/// are also mapped to missing and counted.
inline ParsedSurvey parse_survey(std::istream& is) {
  ParsedSurvey out;
  std::string line;
  if (!std::getline(is, line) || csv::trim_cr(line) != kSurveyHeader)
    throw SchemaError("survey CSV header must be '" + std::string(kSurveyHeader) + "'");
  std::set<std::string, std::less<>> seen;
  std::vector<std::pair<ConventionalRecord, CognitiveScores>> rows;
  while (std::getline(is, line)) {
    const auto sv = csv::trim_cr(line);
    if (sv.empty()) continue;
    ++out.report.rows;
    const auto f = csv::split(sv);
    if (f.size() != 12 || f[0].empty()) {
      ++out.report.malformed;
      continue;
    }
    bool bad = false;
    auto field = [&](std::size_t i, int lo, int hi) -> std::optional<int> {
      if (f[i].empty()) return std::nullopt;
      const auto v = csv::parse_int(f[i]);
      if (!v) {
        bad = true;
        return std::nullopt;
      }
      if (*v < lo || *v > hi) {
        ++out.report.out_of_range;
        return std::nullopt;
      }
      return static_cast<int>(*v);
    };
    ConventionalRecord c{std::string(f[0]), {}, {}, {}, {}, {}, {}, {}, {}};
    CognitiveScores s{std::string(f[0]), {}, {}, {}};
    c.age = field(1, 0, 130);
    if (auto v = field(2, 1, 2)) c.sex = static_cast<Sex>(*v);
    c.education = field(3, 1, 5);
    c.marital = field(4, 1, 6);
    c.income = field(5, 1, 12);
    if (auto v = field(6, 0, 1)) c.diabetic = (*v == 1);
    c.phq9 = field(7, 0, 27);
    c.adl_iadl = field(8, 20, 80);
    s.cerad_wl = field(9, 0, 40);
    s.aft = field(10, 0, 1000);
    s.dsst = field(11, 0, 133);
    if (bad) {
      ++out.report.malformed;
      continue;
    }
    if (!seen.insert(c.participant_id).second) {
      ++out.report.duplicates;
      continue;
    }
    rows.emplace_back(std::move(c), std::move(s));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.first.participant_id < b.first.participant_id;
  });
  for (auto& [c, s] : rows) {
    out.conventional.push_back(std::move(c));
    out.scores.push_back(std::move(s));
  }
  return out;
}

inline void write_survey(std::ostream& os, std::span<const ConventionalRecord> conv, std::span<const CognitiveScores> scores) {
  if (conv.size() != scores.size()) throw Error("survey writer: record count mismatch");
  auto opt = [](const auto& v) { return v ? std::to_string(static_cast<int>(*v)) : std::string(); };
  os << kSurveyHeader << '\n';
  for (std::size_t i = 0; i < conv.size(); ++i) {
    const auto& c = conv[i];
    const auto& s = scores[i];
    os << c.participant_id << ',' << opt(c.age) << ',' << opt(c.sex) << ',' << opt(c.education) << ','
       << opt(c.marital) << ',' << opt(c.income) << ',' << opt(c.diabetic) << ',' << opt(c.phq9) << ','
       << opt(c.adl_iadl) << ',' << opt(s.cerad_wl) << ',' << opt(s.aft) << ',' << opt(s.dsst) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Cohort construction

inline constexpr int kMinimumAge = 60;
inline constexpr int kMinimumValidDays = 3;

struct ExclusionResult {
  std::vector<std::string> cohort;  // sorted
  std::size_t under_age = 0;        // includes unknown age
  std::size_t insufficient_wear = 0;
  std::size_t incomplete_cognition = 0;
  std::size_t no_epochs = 0;
  std::vector<std::string> log;
};

/// Keeps participants aged >= 60 with >= 3 valid wear days and all three
/// cognitive scores. Every survey participant is considered; the first
/// failing criterion is the one counted.
inline ExclusionResult apply_exclusions(std::span<const EpochSeries> series, std::span<const CognitiveScores> scores,
                                        std::span<const ConventionalRecord> conv) {
  std::unordered_map<std::string, const EpochSeries*> by_series;
  for (const auto& s : series) by_series.emplace(s.participant_id, &s);
  std::unordered_map<std::string, const CognitiveScores*> by_scores;
  for (const auto& s : scores) by_scores.emplace(s.participant_id, &s);

  ExclusionResult out;
  for (const auto& c : conv) {
    const auto& id = c.participant_id;
    if (!c.age || *c.age < kMinimumAge) {
      ++out.under_age;
      continue;
    }
    auto sc = by_scores.find(id);
    if (sc == by_scores.end() || !sc->second->complete()) {
      ++out.incomplete_cognition;
      continue;
    }
    auto se = by_series.find(id);
    if (se == by_series.end()) {
      ++out.no_epochs;
      out.log.push_back(id + ": has cognitive scores but no epoch series");
      continue;
    }
    if (se->second->valid_days < kMinimumValidDays) {
      ++out.insufficient_wear;
      continue;
    }
    out.cohort.push_back(id);
  }
  std::sort(out.cohort.begin(), out.cohort.end());
  return out;
}

// ---------------------------------------------------------------------------
// Outcome labels

inline constexpr double kPoorCognitionQuantile = 0.25;

struct OutcomeLabels {
  std::string participant_id;
  bool poor_dsst = false;
  bool poor_cerad = false;
  bool poor_aft = false;
};

struct LabelSet {
  std::vector<OutcomeLabels> labels;
  double cutoff_dsst = kMissing;
  double cutoff_cerad = kMissing;
  double cutoff_aft = kMissing;
};

enum class CognitiveTest { dsst, cerad, aft };

inline const char* to_string(CognitiveTest t) {
  switch (t) {
    case CognitiveTest::dsst: return "dsst";
    case CognitiveTest::cerad: return "cerad";
    case CognitiveTest::aft: return "aft";
  }
  return "dsst";
}

inline CognitiveTest cognitive_test_from_string(std::string_view s) {
  if (s == "dsst") return CognitiveTest::dsst;
  if (s == "cerad") return CognitiveTest::cerad;
  if (s == "aft") return CognitiveTest::aft;
  throw Error("unknown cognitive test '" + std::string(s) + "'");
}

inline bool label_for(const OutcomeLabels& l, CognitiveTest t) {
  switch (t) {
    case CognitiveTest::dsst: return l.poor_dsst;
    case CognitiveTest::cerad: return l.poor_cerad;
    case CognitiveTest::aft: return l.poor_aft;
  }
  return false;
}

/// Poor cognition on a test = score strictly below the cohort's type-7
/// 25th percentile for that test. Scores must be complete.
inline LabelSet label_outcomes(std::span<const CognitiveScores> scores) {
  if (scores.empty()) throw Error("label_outcomes: empty cohort");
  std::vector<double> dsst, cerad, aft;
  for (const auto& s : scores) {
    if (!s.complete()) throw Error("label_outcomes: incomplete scores for " + s.participant_id);
    dsst.push_back(*s.dsst);
    cerad.push_back(*s.cerad_wl);
    aft.push_back(*s.aft);
  }
  LabelSet out;
  out.cutoff_dsst = stats::quantile(dsst, kPoorCognitionQuantile);
  out.cutoff_cerad = stats::quantile(cerad, kPoorCognitionQuantile);
  out.cutoff_aft = stats::quantile(aft, kPoorCognitionQuantile);
  for (const auto& s : scores)
    out.labels.push_back({s.participant_id, *s.dsst < out.cutoff_dsst, *s.cerad_wl < out.cutoff_cerad,
                          *s.aft < out.cutoff_aft});
  return out;
}

}  // namespace cogwear
