#ifndef ESGM_PANEL_HPP
#define ESGM_PANEL_HPP

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "esgm/dates.hpp"

namespace esgm {

// Category order: Resource Use, Emissions, Environmental Innovation,
// Workforce, Human Rights, Community, Product Responsibility,
// Management, Shareholders, CSR Strategy.
inline constexpr int kNumCategories = 10;
inline constexpr std::array<const char*, kNumCategories> kCategoryCodes = {"ru", "em", "ei", "wf", "hr",
                                                                           "co", "pr", "mg", "sh", "cs"};

// One (asset, year) row. Absent cells stay unset until imputation; a
// record is complete when every score is present.
struct AssetRecord {
    std::string asset_id;
    std::string sector;
    int year = 0;
    std::array<std::optional<double>, kNumCategories> categories;
    std::optional<double> e_pillar;
    std::optional<double> s_pillar;
    std::optional<double> g_pillar;
    std::optional<double> provider_esg;

    bool complete() const;
    bool operator==(const AssetRecord&) const = default;
};

// Canonical panel: records sorted by (asset_id, year); sectors and years
// are the sorted distinct values present. Immutable after ingestion.
struct AssetPanel {
    std::vector<AssetRecord> records;
    std::vector<std::string> sectors;
    std::vector<int> years;

    const AssetRecord* find(const std::string& asset_id, int year) const;
    std::set<std::string> asset_ids() const;
    // Recomputes sectors/years and restores canonical record order.
    void refresh_index();

    bool operator==(const AssetPanel&) const = default;
};

struct PricePoint {
    Date date;
    double close = 0.0;
    bool operator==(const PricePoint&) const = default;
};

// Per-asset series sorted by date.
struct PriceHistory {
    std::map<std::string, std::vector<PricePoint>> series;
};

struct ValidationIssue {
    std::string locator;  // e.g. "asset ABC year 2018"
    std::string note;
};

struct ValidationCounts {
    long records_read = 0;
    long accepted = 0;
    long imputed = 0;
    long dropped = 0;
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    ValidationCounts counts;
    // Assets to exclude before any sector-level computation.
    std::set<std::string> flagged_assets;

    bool accepted() const { return errors.empty(); }
};

// assets.csv:
//   asset_id,sector,year,ru,em,ei,wf,hr,co,pr,mg,sh,cs,e_pillar,s_pillar,g_pillar,esg
// Empty numeric cells are absent. Throws SchemaError / RangeError /
// DuplicateKeyError as appropriate.
AssetPanel load_asset_panel(const std::filesystem::path& path);
void save_asset_panel(const AssetPanel& panel, const std::filesystem::path& path);

// prices.csv: asset_id,date,close with ISO-8601 dates. Rows are sorted
// per asset by date; domain violations are reported by validate_panel.
PriceHistory load_price_history(const std::filesystem::path& path);
void save_price_history(const PriceHistory& prices, const std::filesystem::path& path);

struct ImputeResult {
    AssetPanel panel;
    int count = 0;
};

// Copies each asset's full source_year record into target_year when the
// target record is missing or incomplete. Assets already complete in
// target_year are untouched. Requires source_year < target_year, both
// present in panel.years.
ImputeResult impute_carry_forward(AssetPanel panel, int target_year, int source_year);

// Report-only check: flags assets lacking a complete record in every
// panel year or lacking enough prices to cover the one-year-ahead
// return window; reports domain violations in the price series as
// errors. Never throws on data content.
ValidationReport validate_panel(const AssetPanel& panel, const PriceHistory& prices);

// Removes all records of the given assets and reindexes.
AssetPanel drop_assets(const AssetPanel& panel, const std::set<std::string>& asset_ids);

}  // namespace esgm

#endif  // ESGM_PANEL_HPP
