#include <doctest.h>

#include <fstream>
#include <stdexcept>

#include "esgm/csv.hpp"
#include "esgm/dates.hpp"
#include "esgm/errors.hpp"
#include "oracles.hpp"

using namespace esgm;

TEST_CASE("civil day conversions invert each other") {
    // Sweep a few decades with a stride that is coprime to 7 and 365.
    for (long z = -1000; z < 25000; z += 17) {
        const Date d = civil_from_days(z);
        CHECK(is_valid_date(d));
        CHECK(days_from_civil(d) == z);
    }
    CHECK(days_from_civil({1970, 1, 1}) == 0);
}

TEST_CASE("weekday anchors") {
    CHECK(weekday({1970, 1, 1}) == 3);   // Thursday
    CHECK(weekday({2024, 1, 1}) == 0);   // Monday
    CHECK(weekday({2026, 8, 14}) == 4);  // Friday
    CHECK(weekday({2000, 2, 29}) == 1);  // Tuesday (leap day)
}

TEST_CASE("date validation") {
    CHECK(is_valid_date({2024, 2, 29}));
    CHECK_FALSE(is_valid_date({2023, 2, 29}));
    CHECK_FALSE(is_valid_date({2023, 13, 1}));
    CHECK_FALSE(is_valid_date({2023, 4, 31}));
    CHECK_FALSE(is_valid_date({2023, 0, 10}));
}

TEST_CASE("ISO parsing is strict") {
    const Date d = parse_iso_date("2018-03-09");
    CHECK(d == Date{2018, 3, 9});
    CHECK(format_iso_date(d) == "2018-03-09");
    CHECK_THROWS_AS(parse_iso_date("2018-3-09"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso_date("2018/03/09"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso_date("2018-03-09 "), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso_date("2023-02-29"), std::invalid_argument);
    CHECK_THROWS_AS(parse_iso_date(""), std::invalid_argument);
}

TEST_CASE("ISO round-trip across years") {
    for (long z = 15000; z < 16500; z += 13) {
        const Date d = civil_from_days(z);
        CHECK(parse_iso_date(format_iso_date(d)) == d);
    }
}

TEST_CASE("number formatting") {
    CHECK(csv::format_fixed6(0.05) == "0.050000");
    CHECK(csv::format_fixed6(-1.0) == "-1.000000");
    CHECK(csv::format_fixed6(12.3456789) == "12.345679");
    CHECK(csv::format_sig10(1.0) == "1");
    // Shortest round-trip representation must parse back bit-identically.
    for (double v : {1.0 / 3.0, -0.1, 2.5e-9, 123456.789, 99.99999999, 0.0}) {
        CHECK(csv::parse_double(csv::format_roundtrip(v), "t") == v);
    }
    // 10 significant digits keep 1e-9 relative accuracy.
    const double v = -0.02341234987;
    const double back = csv::parse_double(csv::format_sig10(v), "t");
    CHECK(std::abs(back - v) <= 1e-9 * std::abs(v));
}

TEST_CASE("fixed6 strings re-print stably") {
    for (double v : {0.14, -0.333333, 70.000001, 0.123456789, 99.9999996}) {
        const std::string once = csv::format_fixed6(v);
        const std::string twice = csv::format_fixed6(csv::parse_double(once, "t"));
        CHECK(once == twice);
    }
}

TEST_CASE("strict numeric parsing") {
    CHECK(csv::parse_double("-0.5", "t") == -0.5);
    CHECK(csv::parse_int("42", "t") == 42);
    CHECK_THROWS_AS(csv::parse_double("", "t"), std::invalid_argument);
    CHECK_THROWS_AS(csv::parse_double("1.2.3", "t"), std::invalid_argument);
    CHECK_THROWS_AS(csv::parse_double("12a", "t"), std::invalid_argument);
    CHECK_THROWS_AS(csv::parse_double(" 1", "t"), std::invalid_argument);
    CHECK_THROWS_AS(csv::parse_int("1.5", "t"), std::invalid_argument);
}

TEST_CASE("table reader enforces the schema") {
    const auto dir = oracles::fresh_dir("csv");
    const auto path = dir / "t.csv";
    {
        std::ofstream out(path);
        out << "a,b,c\r\n";
        out << "1,2,3\n";
        out << "\n";
        out << "4,5,6\r\n";
    }
    const csv::Table t = csv::read_table(path, {"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"1", "2", "3"});
    CHECK(t.rows[1] == std::vector<std::string>{"4", "5", "6"});
    CHECK(t.line_numbers[1] == 4);

    CHECK_THROWS_AS(csv::read_table(dir / "absent.csv", {"a"}), IoError);
    CHECK_THROWS_AS(csv::read_table(path, {"a", "b", "z"}), SchemaError);
    {
        std::ofstream out(path);
        out << "a,b,c\n1,2\n";
    }
    CHECK_THROWS_AS(csv::read_table(path, {"a", "b", "c"}), SchemaError);
    {
        std::ofstream out(path);
    }
    CHECK_THROWS_AS(csv::read_table(path, {"a", "b", "c"}), SchemaError);
}

TEST_CASE("split handles empty fields") {
    CHECK(csv::split_line("a,,c") == std::vector<std::string>{"a", "", "c"});
    CHECK(csv::split_line(",") == std::vector<std::string>{"", ""});
    CHECK(csv::split_line("x") == std::vector<std::string>{"x"});
}
