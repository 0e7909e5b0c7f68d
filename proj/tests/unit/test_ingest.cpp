#include <gtest/gtest.h>

#include <sstream>

#include "cogwear/core/random.hpp"
#include "cogwear/ingest.hpp"

using namespace cogwear;

namespace {

std::string epoch_csv(const std::vector<std::string>& rows) {
  std::string s(kEpochHeader);
  s += '\n';
  for (const auto& r : rows) s += r + '\n';
  return s;
}

ParsedEpochs parse(const std::string& text) {
  std::istringstream is(text);
  return parse_epochs(is);
}

}  // namespace

TEST(ParseEpochs, ThreeRowsOneParticipant) {
  auto p = parse(epoch_csv({"p1,2012-01-01T00:00,1.5,10,1", "p1,2012-01-01T00:01,2.5,11,1", "p1,2012-01-01T00:02,0,0,0"}));
  ASSERT_EQ(p.series.size(), 1u);
  EXPECT_EQ(p.series[0].participant_id, "p1");
  EXPECT_EQ(p.series[0].records.size(), 3u);
  EXPECT_EQ(p.report.accepted, 3u);
  EXPECT_FALSE(p.series[0].records[2].wear);
}

TEST(ParseEpochs, NegativeMimsRowRejected) {
  auto p = parse(epoch_csv({"p1,2012-01-01T00:00,1.5,10,1", "p1,2012-01-01T00:01,-1,11,1"}));
  EXPECT_EQ(p.series[0].records.size(), 1u);
  EXPECT_EQ(p.report.rejected_negative, 1u);
}

TEST(ParseEpochs, DuplicateTimestampKeepsFirst) {
  auto p = parse(epoch_csv({"p1,2012-01-01T00:01,7,1,1", "p1,2012-01-01T00:00,1,1,1", "p1,2012-01-01T00:01,9,1,1"}));
  ASSERT_EQ(p.series[0].records.size(), 2u);
  EXPECT_EQ(p.report.duplicates, 1u);
  EXPECT_DOUBLE_EQ(p.series[0].records[1].mims, 7.0);
  EXPECT_LT(p.series[0].records[0].timestamp, p.series[0].records[1].timestamp);
}

TEST(ParseEpochs, BadHeaderIsFatal) {
  std::istringstream is("id,time,mims,lux,wear\n");
  EXPECT_THROW(parse_epochs(is), SchemaError);
}

TEST(ParseEpochs, MalformedRowsCounted) {
  auto p = parse(epoch_csv({"p1,2012-01-01T00:00,1,1,1", "p1,2012-13-01T00:00,1,1,1", "p1,2012-01-01T00:02,x,1,1",
                            "p1,2012-01-01T00:03,1,1,2", "p1,2012-01-01T00:04,1,1"}));
  EXPECT_EQ(p.report.malformed, 4u);
  EXPECT_EQ(p.series[0].records.size(), 1u);
}

TEST(ParseEpochs, SevenFullDaysAllWorn) {
  std::ostringstream os;
  write_epochs_header(os);
  EpochSeries s{"p7", {}, 0};
  const auto start = MinuteStamp::from_civil(2012, 3, 5);
  for (int i = 0; i < 10080; ++i) s.records.push_back({start + i, 1.0, 2.0, true});
  write_epoch_rows(os, s);
  auto p = parse(os.str());
  ASSERT_EQ(p.series[0].records.size(), 10080u);
  // 10,080 minutes from midnight = 7 calendar days of 1440 wear minutes each.
  EXPECT_EQ(p.series[0].valid_days, 7);
}

TEST(ParseEpochs, ValidDayThresholdIs960WearMinutes) {
  EpochSeries s{"p", {}, 0};
  const auto start = MinuteStamp::from_civil(2012, 3, 5);
  for (int i = 0; i < 1440; ++i) s.records.push_back({start + i, 1.0, 1.0, i < 960});
  for (int i = 1440; i < 2880; ++i) s.records.push_back({start + i, 1.0, 1.0, i < 1440 + 959});
  EXPECT_EQ(count_valid_days(s.records), 1);
}

TEST(ParseEpochs, RoundTripIsByteStable) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<EpochSeries> series;
    for (int p = 0; p < 3; ++p) {
      EpochSeries s{"id" + std::to_string(p), {}, 0};
      auto t = MinuteStamp::from_civil(2013, 6, 1, static_cast<int>(rng.uniform_int(0, 23)), 0);
      for (int i = 0; i < 200; ++i) {
        t = t + (rng.bernoulli(0.05) ? rng.uniform_int(2, 90) : 1);
        s.records.push_back({t, rng.uniform(0, 80), rng.uniform(0, 5000), rng.bernoulli(0.8)});
      }
      series.push_back(s);
    }
    std::ostringstream first;
    write_epochs(first, series);
    auto parsed = parse(first.str());
    EXPECT_EQ(parsed.report.accepted, 600u);
    std::ostringstream second;
    write_epochs(second, parsed.series);
    EXPECT_EQ(first.str(), second.str());
  }
}

TEST(MinuteGrid, FillsGapsAsNonWear) {
  EpochSeries s{"p", {}, 0};
  const auto t0 = MinuteStamp::from_civil(2012, 1, 1, 10, 0);
  s.records = {{t0, 1, 1, true}, {t0 + 3, 2, 2, true}};
  const auto g = to_grid(s);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.wear[1], 0);
  EXPECT_TRUE(is_missing(g.mims[2]));
  EXPECT_EQ(g.wear[3], 1);
}

TEST(MinuteStamp, ParseFormatRoundTrip) {
  auto t = MinuteStamp::parse("2011-02-28T23:59");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->to_string(), "2011-02-28T23:59");
  EXPECT_EQ((*t + 1).to_string(), "2011-03-01T00:00");
  EXPECT_FALSE(MinuteStamp::parse("2011-02-29T00:00"));
  EXPECT_FALSE(MinuteStamp::parse("2011-02-28 23:59"));
  EXPECT_DOUBLE_EQ(MinuteStamp::parse("2011-02-28T13:30")->clock_hour(), 13.5);
}

TEST(ParseSurvey, RefusedAndDontKnowCodesBecomeMissing) {
  std::istringstream is(std::string(kSurveyHeader) + "\n" +
                        "a,70,2,7,77,99,9,5,25,20,15,50\n"
                        "b,65,1,3,1,4,0,,,30,18,60\n");
  auto s = parse_survey(is);
  ASSERT_EQ(s.conventional.size(), 2u);
  const auto& a = s.conventional[0];
  EXPECT_EQ(a.age, 70);
  EXPECT_EQ(a.sex, Sex::female);
  EXPECT_FALSE(a.education);
  EXPECT_FALSE(a.marital);
  EXPECT_FALSE(a.income);
  EXPECT_FALSE(a.diabetic);
  EXPECT_EQ(a.phq9, 5);
  EXPECT_EQ(s.report.out_of_range, 4u);
  const auto& b = s.conventional[1];
  EXPECT_FALSE(b.phq9);
  EXPECT_FALSE(b.adl_iadl);
  EXPECT_EQ(b.diabetic, false);
  EXPECT_EQ(s.scores[1].dsst, 60);
}

TEST(ParseSurvey, HeaderMismatchIsSchemaError) {
  std::istringstream is("participant_id,age\n");
  EXPECT_THROW(parse_survey(is), SchemaError);
}

namespace {
EpochSeries series_with_days(const std::string& id, int days) { return {id, {}, days}; }
CognitiveScores full_scores(const std::string& id) { return {id, 20, 15, 50}; }
ConventionalRecord person(const std::string& id, int age) { return {id, age, Sex::male, 3, 1, 5, false, 2, 22}; }
}  // namespace

TEST(ApplyExclusions, AgeBoundary) {
  std::vector<EpochSeries> s{series_with_days("a", 9), series_with_days("b", 9)};
  std::vector<CognitiveScores> sc{full_scores("a"), full_scores("b")};
  std::vector<ConventionalRecord> c{person("a", 59), person("b", 60)};
  auto r = apply_exclusions(s, sc, c);
  EXPECT_EQ(r.cohort, std::vector<std::string>{"b"});
  EXPECT_EQ(r.under_age, 1u);
}

TEST(ApplyExclusions, FewerThanThreeValidDays) {
  std::vector<EpochSeries> s{series_with_days("a", 2), series_with_days("b", 3)};
  std::vector<CognitiveScores> sc{full_scores("a"), full_scores("b")};
  std::vector<ConventionalRecord> c{person("a", 70), person("b", 70)};
  auto r = apply_exclusions(s, sc, c);
  EXPECT_EQ(r.cohort, std::vector<std::string>{"b"});
  EXPECT_EQ(r.insufficient_wear, 1u);
}

TEST(ApplyExclusions, IncompleteCognitionAndMissingSeries) {
  std::vector<EpochSeries> s{series_with_days("a", 5)};
  std::vector<CognitiveScores> sc{{"a", 20, std::nullopt, 50}, full_scores("b")};
  std::vector<ConventionalRecord> c{person("a", 70), person("b", 70)};
  auto r = apply_exclusions(s, sc, c);
  EXPECT_TRUE(r.cohort.empty());
  EXPECT_EQ(r.incomplete_cognition, 1u);
  EXPECT_EQ(r.no_epochs, 1u);
  ASSERT_EQ(r.log.size(), 1u);
}

TEST(LabelOutcomes, ConstantScoresNoPoor) {
  std::vector<CognitiveScores> sc;
  for (int i = 0; i < 10; ++i) sc.push_back({"p" + std::to_string(i), 20, 20, 20});
  auto l = label_outcomes(sc);
  for (const auto& x : l.labels) EXPECT_FALSE(x.poor_dsst || x.poor_cerad || x.poor_aft);
}

TEST(LabelOutcomes, InterpolatedQuartileStrictlyBelow) {
  std::vector<CognitiveScores> sc{{"a", 10, 10, 10}, {"b", 20, 20, 20}, {"c", 30, 30, 30}, {"d", 40, 40, 40}};
  auto l = label_outcomes(sc);
  EXPECT_DOUBLE_EQ(l.cutoff_dsst, 17.5);
  EXPECT_TRUE(l.labels[0].poor_dsst);
  EXPECT_FALSE(l.labels[1].poor_dsst);
  EXPECT_FALSE(l.labels[2].poor_cerad);
}

TEST(LabelOutcomes, EmptyCohortThrows) { EXPECT_THROW(label_outcomes({}), Error); }

TEST(LabelOutcomes, PrevalenceNearQuarterForSpreadScores) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    std::vector<CognitiveScores> sc;
    for (int i = 0; i < 200; ++i)
      sc.push_back({std::to_string(i), static_cast<int>(rng.uniform_int(0, 40)), static_cast<int>(rng.uniform_int(0, 40)),
                    static_cast<int>(rng.uniform_int(0, 133))});
    auto l = label_outcomes(sc);
    for (auto t : {CognitiveTest::dsst, CognitiveTest::cerad, CognitiveTest::aft}) {
      const double prev = static_cast<double>(std::count_if(l.labels.begin(), l.labels.end(),
                                                            [&](const auto& x) { return label_for(x, t); })) / 200.0;
      EXPECT_GE(prev, 0.20);
      EXPECT_LE(prev, 0.30);
    }
  }
}
