#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hybridtherm/core/civil.hpp"
#include "hybridtherm/timeseries/csv.hpp"
#include "hybridtherm/timeseries/frame.hpp"
#include "hybridtherm/timeseries/ops.hpp"
#include "hybridtherm/timeseries/scenario.hpp"
#include "hybridtherm/timeseries/standardizer.hpp"

using namespace hybridtherm;

namespace {

TimeSeriesFrame minute_frame(std::vector<double> values, const std::string& unit = "degC") {
    std::vector<std::int64_t> ts(values.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        ts[i] = 1609459200 + 60 * static_cast<std::int64_t>(i);
    TimeSeriesFrame f(std::move(ts), 1);
    f.add_column({"x", FeatureGroup::Weather, unit, std::move(values)});
    return f;
}

}  // namespace

TEST_CASE("civil time round trip and ISO parsing") {
    const std::int64_t t = to_epoch_seconds({2021, 3, 4, 12, 30, 15});
    const CivilTime c = from_epoch_seconds(t);
    CHECK(c.year == 2021);
    CHECK(c.month == 3);
    CHECK(c.day == 4);
    CHECK(c.hour == 12);
    CHECK(to_iso8601(t) == "2021-03-04T12:30:15Z");
    CHECK(parse_iso8601("2021-03-04T12:30:15Z") == t);
    CHECK(parse_iso8601("2021-03-04") == t - (12 * 3600 + 30 * 60 + 15));
    CHECK_THROWS(parse_iso8601("not-a-date"));
    CHECK(day_of_year(to_epoch_seconds({2021, 1, 1, 0, 0, 0})) == 1);
    CHECK(day_of_year(to_epoch_seconds({2021, 12, 31, 0, 0, 0})) == 365);
    CHECK(day_of_week(to_epoch_seconds({2021, 1, 4, 0, 0, 0})) == 0);  // a Monday
    CHECK(day_of_week(to_epoch_seconds({2021, 1, 3, 0, 0, 0})) == 6);  // a Sunday
}

TEST_CASE("frame invariants") {
    CHECK_THROWS_AS(TimeSeriesFrame({10, 10}, 1), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeriesFrame({20, 10}, 1), std::invalid_argument);

    TimeSeriesFrame f({0, 60, 120}, 1);
    f.add_column({"a", FeatureGroup::Weather, "degC", {1, 2, 3}});
    CHECK_THROWS_AS(f.add_column({"a", FeatureGroup::Weather, "degC", {1, 2, 3}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(f.add_column({"b", FeatureGroup::Weather, "degC", {1, 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(f.column("missing"), std::out_of_range);
    CHECK(f.column("a").values[1] == 2);
}

TEST_CASE("csv load: well-formed, blank cell, shuffled timestamps") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ht_csv_test";
    fs::create_directories(dir);
    const FrameSchema schema{{"temp", FeatureGroup::Weather, "degC"},
                             {"flow", FeatureGroup::Building, "kg/h"}};

    {
        std::FILE* f = std::fopen((dir / "ok.csv").c_str(), "w");
        std::fputs("timestamp,temp,flow\n2021-01-01T00:00:00Z,20.5,1\n"
                   "2021-01-01T00:01:00Z,,2\n2021-01-01T00:02:00Z,21.5,3\n", f);
        std::fclose(f);
        const TimeSeriesFrame frame = load_csv((dir / "ok.csv").string(), schema);
        CHECK(frame.rows() == 3);
        CHECK(frame.column("temp").values[0] == doctest::Approx(20.5));
        CHECK(is_missing(frame.column("temp").values[1]));
        CHECK_FALSE(is_missing(frame.column("flow").values[1]));
    }
    {
        std::FILE* f = std::fopen((dir / "shuffled.csv").c_str(), "w");
        std::fputs("timestamp,temp,flow\n2021-01-01T00:02:00Z,20,1\n"
                   "2021-01-01T00:00:00Z,21,2\n", f);
        std::fclose(f);
        CHECK_THROWS_WITH_AS(load_csv((dir / "shuffled.csv").string(), schema),
                             "non-monotonic timestamps", std::invalid_argument);
    }
    CHECK_THROWS_AS(load_csv((dir / "does_not_exist.csv").string(), schema),
                    std::runtime_error);
}

TEST_CASE("csv round trip reproduces numeric content exactly") {
    TimeSeriesFrame f({0, 60, 120, 180}, 1);
    f.add_column({"a", FeatureGroup::Weather, "degC",
                  {1.0 / 3.0, -2.718281828459045, 1e-17, 12345.6789012345}});
    f.add_column({"b", FeatureGroup::Room, "binary", {0, 1, missing_value(), 1}});

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ht_csv_test";
    fs::create_directories(dir);
    const std::string path = (dir / "roundtrip.csv").string();
    write_csv(f, path);
    write_schema(schema_of(f), path + ".schema");
    const TimeSeriesFrame g = load_csv_with_sidecar(path, path + ".schema");

    REQUIRE(g.rows() == f.rows());
    for (std::size_t i = 0; i < f.rows(); ++i) {
        CHECK(g.column("a").values[i] == f.column("a").values[i]);  // bit-exact
        if (is_missing(f.column("b").values[i]))
            CHECK(is_missing(g.column("b").values[i]));
        else
            CHECK(g.column("b").values[i] == f.column("b").values[i]);
    }
    CHECK(g.column("b").group == FeatureGroup::Room);
    CHECK(g.column("b").unit == "binary");

    // Write-out is bit-stable.
    const std::string path2 = (dir / "roundtrip2.csv").string();
    write_csv(g, path2);
    std::ifstream f1(path), f2(path2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
}

TEST_CASE("interpolate_missing: interior, identity, edges, all-missing") {
    SUBCASE("interior gap -> linear midpoint") {
        const auto out = interpolate_missing(minute_frame({20, missing_value(), 22}));
        CHECK(out.column("x").values[1] == doctest::Approx(21.0));
    }
    SUBCASE("no gaps -> unchanged") {
        const auto out = interpolate_missing(minute_frame({20, 21, 22}));
        CHECK(out.column("x").values == std::vector<double>{20, 21, 22});
    }
    SUBCASE("leading gap -> nearest value") {
        const auto out = interpolate_missing(minute_frame({missing_value(), 5, 7}));
        CHECK(out.column("x").values == std::vector<double>{5, 5, 7});
    }
    SUBCASE("trailing gap -> nearest value") {
        const auto out = interpolate_missing(minute_frame({5, 7, missing_value()}));
        CHECK(out.column("x").values == std::vector<double>{5, 7, 7});
    }
    SUBCASE("all-missing column") {
        CHECK_THROWS_AS(
            interpolate_missing(minute_frame({missing_value(), missing_value()})),
            std::runtime_error);
    }
}

TEST_CASE("resample: mean, identity, binary last-observed, divisibility") {
    std::vector<double> v(15);
    for (int i = 0; i < 15; ++i) v[i] = i + 1;
    SUBCASE("1..15 over one 15-minute bin -> 8") {
        const auto out = resample(minute_frame(v), 15);
        REQUIRE(out.rows() == 1);
        CHECK(out.column("x").values[0] == doctest::Approx(8.0));
        CHECK(out.step_minutes() == 15);
    }
    SUBCASE("step equal to nominal -> identity") {
        const auto out = resample(minute_frame(v), 1);
        CHECK(out.column("x").values == v);
    }
    SUBCASE("binary column -> last observed in bin") {
        const auto out = resample(minute_frame({0, 0, 1}, "binary"), 3);
        CHECK(out.column("x").values[0] == 1.0);
    }
    SUBCASE("non-divisible step") {
        const auto two_minute = resample(minute_frame({1, 2, 3, 4}), 2);
        CHECK_THROWS_AS(resample(two_minute, 5), std::invalid_argument);
    }
    SUBCASE("missing values rejected") {
        CHECK_THROWS_AS(resample(minute_frame({1, missing_value(), 3}), 3),
                        std::invalid_argument);
    }
}

TEST_CASE("resample composition: two-stage equals single-stage product") {
    std::vector<double> v(60);
    for (int i = 0; i < 60; ++i) v[i] = 0.1 * i * i - 3.0 * i + 7.0;
    const auto once = resample(minute_frame(v), 12);
    const auto twice = resample(resample(minute_frame(v), 4), 12);
    REQUIRE(once.rows() == twice.rows());
    for (std::size_t i = 0; i < once.rows(); ++i)
        CHECK(once.column("x").values[i] ==
              doctest::Approx(twice.column("x").values[i]).epsilon(1e-12));
}

TEST_CASE("split_train_test: partition, conservation, order, degenerate") {
    std::vector<double> v(10);
    for (int i = 0; i < 10; ++i) v[i] = i;
    const auto f = minute_frame(v);
    const std::int64_t boundary = f.timestamps()[6];
    const auto [train, test] = split_train_test(f, boundary);
    CHECK(train.rows() == 6);
    CHECK(test.rows() == 4);
    CHECK(train.rows() + test.rows() == f.rows());
    CHECK(train.column("x").values == std::vector<double>{0, 1, 2, 3, 4, 5});
    CHECK(test.column("x").values == std::vector<double>{6, 7, 8, 9});
    // Boundary at the first timestamp would leave train empty.
    CHECK_THROWS_AS(split_train_test(f, f.timestamps().front()), std::invalid_argument);
    CHECK_THROWS_AS(split_train_test(f, f.timestamps().back() + 60), std::invalid_argument);
}

TEST_CASE("standardizer: hand values, constants, determinism, inverse") {
    TimeSeriesFrame f({0, 60, 120}, 1);
    f.add_column({"a", FeatureGroup::Weather, "degC", {1, 2, 3}});
    f.add_column({"c", FeatureGroup::Weather, "degC", {5, 5, 5}});
    const Standardizer s = Standardizer::fit(f, {"a", "c"});

    const auto out = s.apply(f);
    // Population stddev of {1,2,3} is 0.8165.
    CHECK(out.column("a").values[0] == doctest::Approx(-1.224744871).epsilon(1e-8));
    CHECK(out.column("a").values[1] == doctest::Approx(0.0));
    CHECK(out.column("a").values[2] == doctest::Approx(1.224744871).epsilon(1e-8));
    CHECK(out.column("c").values == std::vector<double>{0, 0, 0});
    CHECK(s.stddev_of("c") == 1.0);

    // Same transform on identical test data.
    const auto out2 = s.apply(f);
    CHECK(out2.column("a").values == out.column("a").values);

    // Affine and invertible for non-constant columns.
    const auto back = s.invert(out);
    for (int i = 0; i < 3; ++i)
        CHECK(back.column("a").values[i] ==
              doctest::Approx(f.column("a").values[i]).epsilon(1e-9));

    CHECK_THROWS_AS(Standardizer::fit(f, {"nope"}), std::out_of_range);
}

TEST_CASE("scenario specs pin groups and tiers") {
    const auto w = scenario(ScenarioId::W);
    CHECK(w.allowed_groups ==
          std::set<FeatureGroup>{FeatureGroup::Datetime, FeatureGroup::Weather});
    CHECK(w.physics_tier == PhysicsTierKind::Archetype);
    const auto wb = scenario(ScenarioId::WB);
    CHECK(wb.allowed_groups.count(FeatureGroup::Building) == 1);
    CHECK(wb.physics_tier == PhysicsTierKind::UncalibratedDetailed);
    const auto wbr = scenario(ScenarioId::WBR);
    CHECK(wbr.allowed_groups.count(FeatureGroup::Room) == 1);
    CHECK(wbr.physics_tier == PhysicsTierKind::CalibratedDetailed);

    TimeSeriesFrame f({0, 60}, 1);
    f.add_column({"drybulb", FeatureGroup::Weather, "degC", {1, 2}});
    f.add_column({"occupancy_r1", FeatureGroup::Room, "binary", {0, 1}});
    f.add_column({"sim_r1", FeatureGroup::Simulated, "degC", {20, 20}});
    f.add_column({"temp_r1", FeatureGroup::Target, "degC", {20, 20}});
    CHECK(scenario_feature_columns(w, f) == std::vector<std::string>{"drybulb"});
    CHECK(scenario_feature_columns(wbr, f) ==
          std::vector<std::string>{"drybulb", "occupancy_r1"});
}

TEST_CASE("datetime features are ordinal integers") {
    // 2021-07-10 is a Saturday; 13:00 is afternoon; July is summer.
    // 2021-12-06 is a Monday; 02:00 is night; December is winter.
    TimeSeriesFrame f({to_epoch_seconds({2021, 7, 10, 13, 0, 0}),
                       to_epoch_seconds({2021, 12, 6, 2, 0, 0})},
                      1);
    f.add_column({"x", FeatureGroup::Weather, "degC", {1, 2}});
    const auto out = add_datetime_features(f);
    CHECK(out.column("season").values == std::vector<double>{2, 0});
    CHECK(out.column("week").values == std::vector<double>{1, 0});
    CHECK(out.column("daytime").values == std::vector<double>{1, 3});
    CHECK(out.column("season").group == FeatureGroup::Datetime);
}
