#include "esgm/panel.hpp"

#include <algorithm>
#include <stdexcept>

#include "esgm/csv.hpp"
#include "esgm/errors.hpp"
#include "esgm/log.hpp"

namespace esgm {

namespace {

std::vector<std::string> asset_header() {
    std::vector<std::string> h = {"asset_id", "sector", "year"};
    for (const char* code : kCategoryCodes) h.emplace_back(code);
    h.insert(h.end(), {"e_pillar", "s_pillar", "g_pillar", "esg"});
    return h;
}

const std::vector<std::string> kAssetHeader = asset_header();
const std::vector<std::string> kPriceHeader = {"asset_id", "date", "close"};

bool record_key_less(const AssetRecord& a, const AssetRecord& b) {
    if (a.asset_id != b.asset_id) return a.asset_id < b.asset_id;
    return a.year < b.year;
}

std::optional<double> parse_score(const std::string& cell, const std::string& column, long line) {
    if (cell.empty()) return std::nullopt;
    const double v = csv::parse_double(cell, column + " at line " + std::to_string(line));
    if (!(v >= 0.0 && v <= 100.0))
        throw RangeError("score " + cell + " in column " + column + " at line " + std::to_string(line) +
                         " outside [0,100]");
    return v;
}

std::string cell_of(const std::optional<double>& v) { return v ? csv::format_roundtrip(*v) : std::string{}; }

// Number of price observations the asset has inside `year`; one more
// than the number of in-year daily returns.
int observations_in_year(const std::vector<PricePoint>& series, int year) {
    int count = 0;
    for (const auto& p : series) {
        if (p.date.year == year) ++count;
    }
    return count;
}

}  // namespace

bool AssetRecord::complete() const {
    for (const auto& c : categories) {
        if (!c) return false;
    }
    return e_pillar && s_pillar && g_pillar && provider_esg;
}

const AssetRecord* AssetPanel::find(const std::string& asset_id, int year) const {
    AssetRecord probe;
    probe.asset_id = asset_id;
    probe.year = year;
    auto it = std::lower_bound(records.begin(), records.end(), probe, record_key_less);
    if (it == records.end() || it->asset_id != asset_id || it->year != year) return nullptr;
    return &*it;
}

std::set<std::string> AssetPanel::asset_ids() const {
    std::set<std::string> ids;
    for (const auto& r : records) ids.insert(r.asset_id);
    return ids;
}

void AssetPanel::refresh_index() {
    std::sort(records.begin(), records.end(), record_key_less);
    std::set<std::string> sec;
    std::set<int> yrs;
    for (const auto& r : records) {
        sec.insert(r.sector);
        yrs.insert(r.year);
    }
    sectors.assign(sec.begin(), sec.end());
    years.assign(yrs.begin(), yrs.end());
}

AssetPanel load_asset_panel(const std::filesystem::path& path) {
    const csv::Table table = csv::read_table(path, kAssetHeader);
    AssetPanel panel;
    std::set<std::pair<std::string, int>> seen;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const long line = table.line_numbers[i];
        AssetRecord rec;
        rec.asset_id = row[0];
        rec.sector = row[1];
        if (rec.asset_id.empty())
            throw SchemaError("empty asset_id at line " + std::to_string(line));
        rec.year = csv::parse_int(row[2], "year at line " + std::to_string(line));
        for (int c = 0; c < kNumCategories; ++c)
            rec.categories[c] = parse_score(row[3 + c], kCategoryCodes[c], line);
        rec.e_pillar = parse_score(row[13], "e_pillar", line);
        rec.s_pillar = parse_score(row[14], "s_pillar", line);
        rec.g_pillar = parse_score(row[15], "g_pillar", line);
        rec.provider_esg = parse_score(row[16], "esg", line);
        if (!seen.emplace(rec.asset_id, rec.year).second)
            throw DuplicateKeyError("duplicate (asset_id, year) = (" + rec.asset_id + ", " + row[2] +
                                    ") at line " + std::to_string(line));
        panel.records.push_back(std::move(rec));
    }
    panel.refresh_index();
    return panel;
}

void save_asset_panel(const AssetPanel& panel, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    csv::write_row(out, kAssetHeader);
    for (const auto& rec : panel.records) {
        std::vector<std::string> row = {rec.asset_id, rec.sector, std::to_string(rec.year)};
        for (const auto& c : rec.categories) row.push_back(cell_of(c));
        row.push_back(cell_of(rec.e_pillar));
        row.push_back(cell_of(rec.s_pillar));
        row.push_back(cell_of(rec.g_pillar));
        row.push_back(cell_of(rec.provider_esg));
        csv::write_row(out, row);
    }
}

PriceHistory load_price_history(const std::filesystem::path& path) {
    const csv::Table table = csv::read_table(path, kPriceHeader);
    PriceHistory prices;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const long line = table.line_numbers[i];
        if (row[0].empty()) throw SchemaError("empty asset_id at line " + std::to_string(line));
        PricePoint point;
        try {
            point.date = parse_iso_date(row[1]);
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string(e.what()) + " at line " + std::to_string(line));
        }
        point.close = csv::parse_double(row[2], "close at line " + std::to_string(line));
        prices.series[row[0]].push_back(point);
    }
    // Canonical per-asset date order; duplicates and non-positive closes
    // are surfaced later by validate_panel.
    for (auto& [id, series] : prices.series) {
        std::stable_sort(series.begin(), series.end(),
                         [](const PricePoint& a, const PricePoint& b) { return a.date < b.date; });
    }
    return prices;
}

void save_price_history(const PriceHistory& prices, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    csv::write_row(out, kPriceHeader);
    for (const auto& [id, series] : prices.series) {
        for (const auto& point : series) {
            csv::write_row(out, {id, format_iso_date(point.date), csv::format_roundtrip(point.close)});
        }
    }
}

ImputeResult impute_carry_forward(AssetPanel panel, int target_year, int source_year) {
    if (source_year >= target_year)
        throw std::invalid_argument("impute_carry_forward: source_year must precede target_year");
    const auto has_year = [&panel](int y) {
        return std::find(panel.years.begin(), panel.years.end(), y) != panel.years.end();
    };
    if (!has_year(source_year) || !has_year(target_year))
        throw std::invalid_argument("impute_carry_forward: both years must be present in the panel");

    ImputeResult result;
    std::vector<AssetRecord> additions;
    for (const auto& rec : panel.records) {
        if (rec.year != source_year) continue;
        const AssetRecord* target = panel.find(rec.asset_id, target_year);
        if (target && target->complete()) continue;
        AssetRecord copy = rec;
        copy.year = target_year;
        additions.push_back(std::move(copy));
        ++result.count;
    }
    if (!additions.empty()) {
        // Replace incomplete target records with the carried-forward copy.
        std::erase_if(panel.records, [&](const AssetRecord& r) {
            if (r.year != target_year) return false;
            return std::any_of(additions.begin(), additions.end(),
                               [&](const AssetRecord& a) { return a.asset_id == r.asset_id; });
        });
        panel.records.insert(panel.records.end(), additions.begin(), additions.end());
        panel.refresh_index();
    }
    result.panel = std::move(panel);
    return result;
}

ValidationReport validate_panel(const AssetPanel& panel, const PriceHistory& prices) {
    ValidationReport report;
    report.counts.records_read = static_cast<long>(panel.records.size());

    for (const std::string& id : panel.asset_ids()) {
        const std::string locator = "asset " + id;
        bool flagged = false;
        for (int year : panel.years) {
            const AssetRecord* rec = panel.find(id, year);
            if (!rec) {
                report.warnings.push_back({locator, "no record for year " + std::to_string(year)});
                flagged = true;
            } else if (!rec->complete()) {
                report.warnings.push_back({locator, "incomplete record in year " + std::to_string(year)});
                flagged = true;
            }
        }
        auto it = prices.series.find(id);
        if (it == prices.series.end() || it->second.empty()) {
            report.warnings.push_back({locator, "no price data"});
            flagged = true;
        } else {
            // Each score year t needs enough prices in t+1 for a 30-return
            // risk row.
            for (int year : panel.years) {
                if (observations_in_year(it->second, year + 1) < 31) {
                    report.warnings.push_back(
                        {locator, "insufficient price coverage in year " + std::to_string(year + 1)});
                    flagged = true;
                }
            }
        }
        if (flagged) report.flagged_assets.insert(id);
    }

    for (const auto& [id, series] : prices.series) {
        const std::string locator = "asset " + id;
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (!(series[i].close > 0.0))
                report.errors.push_back({locator, "non-positive close " + csv::format_roundtrip(series[i].close) +
                                                      " on " + format_iso_date(series[i].date)});
            if (i > 0 && !(series[i - 1].date < series[i].date))
                report.errors.push_back({locator, "duplicate date " + format_iso_date(series[i].date)});
        }
    }

    for (const auto& rec : panel.records) {
        if (report.flagged_assets.count(rec.asset_id)) ++report.counts.dropped;
        else ++report.counts.accepted;
    }
    return report;
}

AssetPanel drop_assets(const AssetPanel& panel, const std::set<std::string>& asset_ids) {
    AssetPanel out;
    for (const auto& rec : panel.records) {
        if (!asset_ids.count(rec.asset_id)) out.records.push_back(rec);
    }
    out.refresh_index();
    return out;
}

}  // namespace esgm
