#include <doctest.h>

#include <cmath>
#include <vector>

#include "esgm/risk.hpp"
#include "esgm/rank_stats.hpp"
#include "esgm/scoring.hpp"
#include "esgm/synthetic.hpp"

using namespace esgm;

namespace {

SyntheticSpec base_spec() {
    SyntheticSpec spec;
    spec.sectors = {{"Alpha", 3}, {"Beta", 4}};
    spec.years = {2017, 2018};
    spec.zero_prob.fill(0.3);
    spec.strength = 0.5;
    spec.seed = 7;
    return spec;
}

}  // namespace

TEST_CASE("generation is deterministic in the spec") {
    const auto [panel_a, prices_a] = generate_synthetic_panel(base_spec());
    const auto [panel_b, prices_b] = generate_synthetic_panel(base_spec());
    CHECK(panel_a == panel_b);
    CHECK(prices_a.series == prices_b.series);

    SyntheticSpec other = base_spec();
    other.seed = 8;
    const auto [panel_c, prices_c] = generate_synthetic_panel(other);
    CHECK_FALSE(panel_a == panel_c);
}

TEST_CASE("panel shape and naming") {
    const auto [panel, prices] = generate_synthetic_panel(base_spec());
    CHECK(panel.records.size() == 14);  // (3 + 4) assets x 2 years
    CHECK(panel.sectors == std::vector<std::string>{"Alpha", "Beta"});
    CHECK(panel.years == std::vector<int>{2017, 2018});
    CHECK(panel.find("Alpha_001", 2017) != nullptr);
    CHECK(panel.find("Beta_004", 2018) != nullptr);
    CHECK(panel.find("Beta_005", 2018) == nullptr);
    CHECK(prices.series.size() == 7);
}

TEST_CASE("records are complete and internally consistent") {
    const auto [panel, prices] = generate_synthetic_panel(base_spec());
    for (const auto& rec : panel.records) {
        REQUIRE(rec.complete());
        for (const auto& c : rec.categories) {
            CHECK(*c >= 0.0);
            CHECK(*c < 100.0);
        }
        const double e = (*rec.categories[0] + *rec.categories[1] + *rec.categories[2]) / 3.0;
        const double s =
            (*rec.categories[3] + *rec.categories[4] + *rec.categories[5] + *rec.categories[6]) / 4.0;
        const double g = (*rec.categories[7] + *rec.categories[8] + *rec.categories[9]) / 3.0;
        CHECK(*rec.e_pillar == e);
        CHECK(*rec.s_pillar == s);
        CHECK(*rec.g_pillar == g);
        CHECK(*rec.provider_esg == (e + s + g) / 3.0);
    }
}

TEST_CASE("zero inflation follows the configured rates") {
    SyntheticSpec spec = base_spec();
    spec.sectors = {{"Solo", 60}};
    spec.years = {2020};
    spec.zero_prob.fill(0.0);
    spec.zero_prob[0] = 1.0;   // ru always missing
    spec.zero_prob[5] = 0.5;   // co missing half the time
    const auto [panel, prices] = generate_synthetic_panel(spec);
    int co_zeros = 0;
    for (const auto& rec : panel.records) {
        CHECK(*rec.categories[0] == 0.0);
        CHECK(*rec.categories[1] > 0.0);
        if (*rec.categories[5] == 0.0) ++co_zeros;
        CHECK(zero_count(rec) >= 1);
    }
    CHECK(co_zeros > 10);
    CHECK(co_zeros < 50);
}

TEST_CASE("price paths cover the weekday calendar after each score year") {
    SyntheticSpec spec = base_spec();
    spec.sectors = {{"One", 1}};
    spec.years = {2018, 2019};
    const auto [panel, prices] = generate_synthetic_panel(spec);
    const auto& series = prices.series.at("One_001");

    int weekdays = 0;
    for (int year : {2019, 2020}) {
        const long first = days_from_civil({year, 1, 1});
        const long last = days_from_civil({year, 12, 31});
        for (long z = first; z <= last; ++z) {
            if (weekday(civil_from_days(z)) < 5) ++weekdays;
        }
    }
    CHECK(static_cast<int>(series.size()) == weekdays);
    CHECK(series.front().date.year == 2019);
    CHECK(series.back().date.year == 2020);
    for (std::size_t i = 0; i < series.size(); ++i) {
        CHECK(series[i].close > 0.0);
        CHECK(weekday(series[i].date) < 5);
        if (i > 0) CHECK(series[i - 1].date < series[i].date);
    }
}

TEST_CASE("a fully planted M-pillar drives next-year volatility") {
    SyntheticSpec spec;
    spec.sectors = {{"Planted", 40}};
    spec.years = {2018};
    spec.zero_prob.fill(0.4);
    spec.strength = 1.0;
    spec.planted_pillar = "m";
    spec.seed = 21;
    const auto [panel, prices] = generate_synthetic_panel(spec);
    const RiskTable risk = build_risk_table(prices, {2019});

    Eigen::VectorXd zeros(40), vol(40), vv(40);
    int i = 0;
    for (const auto& rec : panel.records) {
        const RiskRow* row = risk.find(rec.asset_id, 2019);
        REQUIRE(row != nullptr);
        zeros[i] = zero_count(rec);
        vol[i] = row->vol;
        vv[i] = row->vv;
        ++i;
    }
    // More missing categories => calmer prices: vol anti-correlated,
    // vv (a nonpositive product) positively correlated.
    CHECK(kendall_tau(zeros, vol).tau < -0.7);
    CHECK(kendall_tau(zeros, vv).tau > 0.7);
}

TEST_CASE("spec validation rejects malformed blueprints") {
    SyntheticSpec spec = base_spec();
    spec.sectors.clear();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = base_spec();
    spec.sectors = {{"A", 2}, {"A", 3}};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = base_spec();
    spec.sectors[0].n_assets = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = base_spec();
    spec.years = {2018, 2018};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = base_spec();
    spec.strength = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = base_spec();
    spec.planted_pillar = "x";
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = base_spec();
    spec.zero_prob[2] = -0.2;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
