#ifndef ESGM_SYNTHETIC_HPP
#define ESGM_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "esgm/panel.hpp"

namespace esgm {

struct SectorSpec {
    std::string name;
    int n_assets = 0;
};

// Blueprint for a zero-inflated panel plus weekday price paths whose
// per-asset daily volatility is tied to one designated pillar.
struct SyntheticSpec {
    std::vector<SectorSpec> sectors;
    std::vector<int> years;                      // score years; prices cover each year + 1
    std::array<double, kNumCategories> zero_prob{};  // P(category score == 0)
    // 0 = risk independent of every pillar; 1 = volatility is an exact
    // monotone function of the planted pillar.
    double strength = 0.0;
    std::string planted_pillar = "m";  // one of e, s, g, m
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic given the spec: same spec => identical panel and prices.
// Category scores are uniform on [1,100) with exact zeros injected at
// the configured rates; pillar scores average their provider category
// groups; prices are geometric random walks on the weekday calendar of
// each risk year, with daily sigma decreasing in the planted pillar.
std::pair<AssetPanel, PriceHistory> generate_synthetic_panel(const SyntheticSpec& spec);

}  // namespace esgm

#endif  // ESGM_SYNTHETIC_HPP
