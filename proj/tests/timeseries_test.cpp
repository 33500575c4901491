#include <gtest/gtest.h>

#include <random>

#include "envnav/timeseries.hpp"
#include "support/test_support.hpp"

namespace envnav {
namespace {

using testing::grid;
using testing::ts;

TEST(TimestampTest, CivilRoundTrip) {
  CivilTime c{2010, 4, 29, 10, 30, 45};
  auto t = Timestamp::from_civil(c);
  EXPECT_EQ(t.civil(), c);
  EXPECT_EQ(t.iso(), "2010-04-29T10:30:45");
}

TEST(TimestampTest, ParsesBothSeparators) {
  EXPECT_EQ(Timestamp::parse_iso("2010-05-01 00:15:00"), Timestamp::parse_iso("2010-05-01T00:15:00"));
  EXPECT_FALSE(Timestamp::parse_iso("2010-02-30T00:00:00"));
  EXPECT_FALSE(Timestamp::parse_iso("2010-05-01T24:00:00"));
  EXPECT_FALSE(Timestamp::parse_iso("2010-05-01"));
}

TEST(TimestampTest, RejectsInvalidCivil) {
  EXPECT_THROW(Timestamp::from_civil({2009, 2, 29, 0, 0, 0}), std::invalid_argument);
  EXPECT_NO_THROW(Timestamp::from_civil({2008, 2, 29, 0, 0, 0}));
}

TEST(TimestampTest, CoversRequiredRange) {
  auto lo = Timestamp::from_civil({1970, 1, 1, 0, 0, 0});
  auto hi = Timestamp::from_civil({2100, 12, 31, 23, 59, 59});
  EXPECT_EQ(lo.seconds(), 0);
  EXPECT_EQ(hi.civil(), (CivilTime{2100, 12, 31, 23, 59, 59}));
  EXPECT_LT(lo, hi);
}

TEST(TimestampTest, WeekdayFromDate) {
  EXPECT_EQ(ts("2010-04-29T10:30:45").iso_weekday(), 4);  // Thursday
  EXPECT_EQ(ts("2010-05-01T00:00:00").iso_weekday(), 6);  // Saturday
  EXPECT_EQ(ts("1970-01-01T00:00:00").iso_weekday(), 4);
}

TEST(TimestampTest, DifferenceIsWholeSeconds) {
  auto a = ts("2010-01-01T00:00:00"), b = ts("2010-01-02T00:00:01");
  EXPECT_EQ(b - a, 86401);
  EXPECT_EQ(a + 86401, b);
}

TEST(TimeGridTest, FifteenMinuteGrid) {
  auto g = make_grid(ts("2010-05-01T00:00:00"), 900, 5);
  std::vector<std::string> got;
  for (std::size_t k = 0; k < g.count; ++k) got.push_back(g.at(k).iso().substr(11, 5));
  EXPECT_EQ(got, (std::vector<std::string>{"00:00", "00:15", "00:30", "00:45", "01:00"}));
}

TEST(TimeGridTest, EmptyAndHourly) {
  EXPECT_EQ(make_grid(ts("2010-05-01T00:00:00"), 900, 0).count, 0u);
  auto g = make_grid(ts("2010-01-01T00:00:00"), 3600, 24);
  EXPECT_EQ(g.at(23).iso(), "2010-01-01T23:00:00");
}

TEST(TimeGridTest, RejectsBadArguments) {
  EXPECT_THROW(make_grid(Timestamp{}, 0, 3), std::invalid_argument);
  EXPECT_THROW(make_grid(Timestamp{}, -900, 3), std::invalid_argument);
  EXPECT_THROW(make_grid(Timestamp{}, 900, -1), std::invalid_argument);
}

TEST(TimeGridTest, IndexOf) {
  auto g = grid("2010-05-01T00:00:00", 900, 4);
  EXPECT_EQ(g.index_of(ts("2010-05-01T00:30:00")), 2u);
  EXPECT_FALSE(g.index_of(ts("2010-05-01T00:31:00")));
  EXPECT_FALSE(g.index_of(ts("2010-05-01T01:00:00")));
}

TEST(SampleTest, NonFiniteBecomesUndefined) {
  EXPECT_TRUE(NumericSample::of(std::numeric_limits<double>::quiet_NaN()).is_undefined());
  EXPECT_TRUE(NumericSample::of(std::numeric_limits<double>::infinity()).is_undefined());
  EXPECT_EQ(NumericSample::of(2.5).value(), 2.5);
}

TEST(TimeSeriesTest, LengthMustMatchGrid) {
  auto g = grid("2010-05-01T00:00:00", 900, 3);
  EXPECT_THROW(TimeSeries::numeric(g, {NumericSample::of(1)}), std::invalid_argument);
  EXPECT_THROW(TimeSeries::logic(g, {LogicSample::True}), std::invalid_argument);
}

TEST(TimeSeriesTest, KindAccessorsThrowOnMismatch) {
  auto g = grid("2010-05-01T00:00:00", 900, 2);
  auto s = TimeSeries::filled(g, LogicSample::True);
  EXPECT_EQ(s.kind(), SeriesKind::Logic);
  EXPECT_THROW(s.numeric(), std::invalid_argument);
  auto n = as_numeric(s);
  EXPECT_EQ(n[0].value(), 1.0);
}

TEST(CoverageTest, Counting) {
  auto g = grid("2010-05-01T00:00:00", 900, 4);
  EXPECT_DOUBLE_EQ(coverage(testing::numeric(g, {10, std::nullopt, 20, std::nullopt})), 0.5);
  EXPECT_DOUBLE_EQ(coverage(testing::numeric(g, {1, 2, 3, 4})), 1.0);
  EXPECT_DOUBLE_EQ(coverage(TimeSeries::filled(g, NumericSample::undefined())), 0.0);
  EXPECT_DOUBLE_EQ(coverage(TimeSeries::filled(grid("2010-05-01T00:00:00", 900, 0), LogicSample::True)), 1.0);
  EXPECT_DOUBLE_EQ(coverage(testing::logic(g, {testing::T, testing::F, testing::M, testing::U})), 0.5);
}

TEST(IdentifierTest, Lexicon) {
  EXPECT_TRUE(is_identifier("ahu1.supply_temp"));
  EXPECT_TRUE(is_identifier("_x"));
  EXPECT_FALSE(is_identifier("1abc"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("a-b"));
}

TEST(PreprocessConfigTest, Validation) {
  PreprocessConfig c;
  EXPECT_NO_THROW(c.validate());
  c.outlier_window = 4;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.outlier_window = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.max_gap = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.outlier_threshold = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace envnav
