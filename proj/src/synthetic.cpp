#include "esgm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "esgm/rng.hpp"
#include "esgm/scoring.hpp"

namespace esgm {

namespace {

// Provider category groups: E = {ru, em, ei}, S = {wf, hr, co, pr},
// G = {mg, sh, cs}.
double group_mean(const std::array<std::optional<double>, kNumCategories>& c, int first, int last) {
    double sum = 0.0;
    for (int i = first; i <= last; ++i) sum += *c[i];
    return sum / (last - first + 1);
}

constexpr double kSigmaMin = 0.005;
constexpr double kSigmaMax = 0.04;

std::string make_asset_id(const std::string& sector, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_%03d", index + 1);
    return sector + buf;
}

// All weekdays (Mon-Fri) of a calendar year, in order.
std::vector<Date> weekdays_of_year(int year) {
    std::vector<Date> days;
    const long first = days_from_civil({year, 1, 1});
    const long last = days_from_civil({year, 12, 31});
    for (long z = first; z <= last; ++z) {
        const Date d = civil_from_days(z);
        if (weekday(d) < 5) days.push_back(d);
    }
    return days;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (sectors.empty()) throw std::invalid_argument("SyntheticSpec: need at least one sector");
    std::set<std::string> names;
    for (const auto& s : sectors) {
        if (s.name.empty() || s.name.find(',') != std::string::npos)
            throw std::invalid_argument("SyntheticSpec: sector names must be nonempty and comma-free");
        if (!names.insert(s.name).second)
            throw std::invalid_argument("SyntheticSpec: duplicate sector '" + s.name + "'");
        if (s.n_assets < 1) throw std::invalid_argument("SyntheticSpec: sector sizes must be >= 1");
    }
    if (years.empty()) throw std::invalid_argument("SyntheticSpec: need at least one year");
    for (std::size_t i = 1; i < years.size(); ++i) {
        if (years[i] <= years[i - 1]) throw std::invalid_argument("SyntheticSpec: years must be strictly increasing");
    }
    for (double p : zero_prob) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("SyntheticSpec: zero_prob entries must be in [0,1]");
    }
    if (!(strength >= 0.0 && strength <= 1.0))
        throw std::invalid_argument("SyntheticSpec: strength must be in [0,1]");
    if (planted_pillar != "e" && planted_pillar != "s" && planted_pillar != "g" && planted_pillar != "m")
        throw std::invalid_argument("SyntheticSpec: planted_pillar must be one of e, s, g, m");
}

std::pair<AssetPanel, PriceHistory> generate_synthetic_panel(const SyntheticSpec& spec) {
    spec.validate();
    AssetPanel panel;
    PriceHistory prices;
    Rng rng(spec.seed);

    for (const auto& sector : spec.sectors) {
        for (int a = 0; a < sector.n_assets; ++a) {
            const std::string asset_id = make_asset_id(sector.name, a);
            std::vector<double> exponents;  // per score year, in order
            for (int year : spec.years) {
                AssetRecord rec;
                rec.asset_id = asset_id;
                rec.sector = sector.name;
                rec.year = year;
                for (int c = 0; c < kNumCategories; ++c) {
                    const bool missing = rng.uniform01() < spec.zero_prob[c];
                    rec.categories[c] = missing ? 0.0 : 1.0 + 99.0 * rng.uniform01();
                }
                rec.e_pillar = group_mean(rec.categories, 0, 2);
                rec.s_pillar = group_mean(rec.categories, 3, 6);
                rec.g_pillar = group_mean(rec.categories, 7, 9);
                rec.provider_esg = (*rec.e_pillar + *rec.s_pillar + *rec.g_pillar) / 3.0;

                // Normalized planted-pillar level in [0,1]; high level
                // means low volatility next year.
                double u = 0.0;
                if (spec.planted_pillar == "e") u = *rec.e_pillar / 100.0;
                else if (spec.planted_pillar == "s") u = *rec.s_pillar / 100.0;
                else if (spec.planted_pillar == "g") u = *rec.g_pillar / 100.0;
                else u = zero_count(rec) / 10.0;
                const double eta = rng.uniform01();
                exponents.push_back(spec.strength * (1.0 - u) + (1.0 - spec.strength) * eta);

                panel.records.push_back(std::move(rec));
            }

            auto& series = prices.series[asset_id];
            double price = rng.uniform(20.0, 200.0);
            for (std::size_t t = 0; t < spec.years.size(); ++t) {
                const double sigma = kSigmaMin * std::pow(kSigmaMax / kSigmaMin, exponents[t]);
                for (const Date& day : weekdays_of_year(spec.years[t] + 1)) {
                    price *= std::exp(sigma * rng.normal());
                    series.push_back({day, price});
                }
            }
        }
    }
    panel.refresh_index();
    return {std::move(panel), std::move(prices)};
}

}  // namespace esgm
