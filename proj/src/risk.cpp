#include "esgm/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esgm/csv.hpp"
#include "esgm/errors.hpp"
#include "esgm/log.hpp"

namespace esgm {

const RiskRow* RiskTable::find(const std::string& asset_id, int year) const {
    auto it = rows.find({asset_id, year});
    return it == rows.end() ? nullptr : &it->second;
}

std::vector<double> asset_log_returns(const std::vector<PricePoint>& series, int year) {
    std::vector<double> returns;
    bool have_prev = false;
    double prev = 0.0;
    for (const auto& point : series) {
        if (point.date.year != year) continue;
        if (!(point.close > 0.0))
            throw DomainError("non-positive close " + csv::format_roundtrip(point.close) + " on " +
                              format_iso_date(point.date));
        if (have_prev) returns.push_back(std::log(point.close) - std::log(prev));
        prev = point.close;
        have_prev = true;
    }
    return returns;
}

ReturnSeries log_returns(const PriceHistory& prices, int year, int min_returns) {
    ReturnSeries result;
    result.year = year;
    for (const auto& [asset_id, series] : prices.series) {
        std::vector<double> returns = asset_log_returns(series, year);
        if (static_cast<int>(returns.size()) < min_returns) {
            if (!returns.empty() || std::any_of(series.begin(), series.end(),
                                                [year](const PricePoint& p) { return p.date.year == year; }))
                log::warn("asset " + asset_id + " year " + std::to_string(year) + ": only " +
                          std::to_string(returns.size()) + " returns (< " + std::to_string(min_returns) +
                          "), omitted");
            continue;
        }
        result.returns.emplace(asset_id, std::move(returns));
    }
    return result;
}

double empirical_var(const std::vector<double>& returns, double level) {
    if (returns.empty()) throw std::invalid_argument("empirical_var: empty return list");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("empirical_var: level must lie in (0,1)");
    const int n = static_cast<int>(returns.size());
    // ceil((1-level)*n) with a guard against float dust pushing an exact
    // integer product (e.g. 0.05*20) over the next boundary.
    int k = static_cast<int>(std::ceil((1.0 - level) * static_cast<double>(n) - 1e-9));
    k = std::clamp(k, 1, n);
    std::vector<double> sorted(returns);
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    return sorted[k - 1];
}

double volatility(const std::vector<double>& returns) {
    const int n = static_cast<int>(returns.size());
    if (n < 2) throw std::invalid_argument("volatility: need at least 2 returns");
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= n;
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / (n - 1));
}

double vv_risk(double var95, double vol) {
    if (!(vol >= 0.0)) throw std::invalid_argument("vv_risk: vol must be nonnegative");
    return var95 * vol;
}

RiskTable build_risk_table(const PriceHistory& prices, const std::vector<int>& years) {
    RiskTable table;
    for (int year : years) {
        const ReturnSeries series = log_returns(prices, year);
        for (const auto& [asset_id, returns] : series.returns) {
            RiskRow row;
            row.var95 = empirical_var(returns);
            row.vol = volatility(returns);
            row.vv = vv_risk(row.var95, row.vol);
            table.rows.emplace(std::make_pair(asset_id, year), row);
        }
    }
    return table;
}

namespace {
const std::vector<std::string> kRiskHeader = {"asset_id", "year", "var95", "vol", "vv"};
}

void save_risk_table(const RiskTable& table, const std::filesystem::path& path) {
    auto out = csv::open_out(path);
    csv::write_row(out, kRiskHeader);
    for (const auto& [key, row] : table.rows) {
        csv::write_row(out, {key.first, std::to_string(key.second), csv::format_sig10(row.var95),
                             csv::format_sig10(row.vol), csv::format_sig10(row.vv)});
    }
}

RiskTable load_risk_table(const std::filesystem::path& path) {
    const csv::Table data = csv::read_table(path, kRiskHeader);
    RiskTable table;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const auto& row = data.rows[i];
        const std::string at = "'" + path.string() + "' line " + std::to_string(data.line_numbers[i]);
        RiskRow r;
        r.var95 = csv::parse_double(row[2], at + " var95");
        r.vol = csv::parse_double(row[3], at + " vol");
        r.vv = csv::parse_double(row[4], at + " vv");
        auto key = std::make_pair(row[0], csv::parse_int(row[1], at + " year"));
        if (!table.rows.emplace(key, r).second)
            throw DuplicateKeyError(at + ": duplicate (asset_id, year) = (" + row[0] + ", " + row[1] + ")");
    }
    return table;
}

}  // namespace esgm
