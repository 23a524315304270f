#ifndef ESGM_RISK_HPP
#define ESGM_RISK_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "esgm/panel.hpp"

namespace esgm {

// Daily log returns of every retained asset inside one calendar year.
struct ReturnSeries {
    int year = 0;
    std::map<std::string, std::vector<double>> returns;
};

struct RiskRow {
    double var95 = 0.0;  // lower 5% empirical quantile of daily log returns
    double vol = 0.0;    // sample standard deviation of daily log returns
    double vv = 0.0;     // var95 * vol, exactly
};

struct RiskTable {
    std::map<std::pair<std::string, int>, RiskRow> rows;  // keyed by (asset_id, year)

    const RiskRow* find(const std::string& asset_id, int year) const;
};

// ln(close_d / close_{d-1}) over consecutive in-year observations of one
// asset's series. Throws DomainError on a non-positive close.
std::vector<double> asset_log_returns(const std::vector<PricePoint>& series, int year);

// Per-asset in-year returns; assets with fewer than min_returns are
// omitted with a warning.
ReturnSeries log_returns(const PriceHistory& prices, int year, int min_returns = 30);

// Inverse-ECDF quantile: sort ascending, take x_(k) with k = ceil((1-level)*n),
// 1-indexed. Raw (typically negative) value, no sign flip.
double empirical_var(const std::vector<double>& returns, double level = 0.95);

// Sample standard deviation (denominator n-1). No annualization: every
// downstream use is rank-based, so a positive scale factor is inert.
double volatility(const std::vector<double>& returns);

double vv_risk(double var95, double vol);

// One row per (asset, year) with enough return coverage.
RiskTable build_risk_table(const PriceHistory& prices, const std::vector<int>& years);

// risk.csv: asset_id,year,var95,vol,vv at 10 significant digits.
void save_risk_table(const RiskTable& table, const std::filesystem::path& path);
RiskTable load_risk_table(const std::filesystem::path& path);

}  // namespace esgm

#endif  // ESGM_RISK_HPP
