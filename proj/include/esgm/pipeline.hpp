#ifndef ESGM_PIPELINE_HPP
#define ESGM_PIPELINE_HPP

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esgm/optimizer.hpp"
#include "esgm/panel.hpp"
#include "esgm/rank_stats.hpp"
#include "esgm/risk.hpp"
#include "esgm/scoring.hpp"
#include "esgm/synthetic.hpp"

namespace esgm {

struct ImputePair {
    int source = 0;
    int target = 0;
};

struct RunConfig {
    std::filesystem::path assets_path;
    std::filesystem::path prices_path;
    std::vector<int> score_years;
    // Derived as score year + 1 when absent from the config file; if
    // present it must match, pair by pair.
    std::vector<int> risk_years;
    std::vector<RiskKind> risk_kinds = {RiskKind::vvrisk, RiskKind::var, RiskKind::vol};
    // Weights of this kind produce the esgm column and rating classes.
    RiskKind rating_kind = RiskKind::vvrisk;
    std::vector<ImputePair> imputations;
    std::filesystem::path output_dir;
    OptimizerConfig optimizer;
    // Optional per-sector provider pillar weights (E, S, G); fed to the
    // optimizer as extra starts (w_E, w_S, w_G, 0) so the optimized
    // objective always dominates the provider's configuration.
    std::map<std::string, std::array<double, 3>> provider_weights;
    int jobs = 1;

    void validate() const;  // throws ConfigError
};

// JSON loaders; relative paths resolve against the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

struct MissingnessRow {
    std::string sector;
    int year = 0;
    int n_assets = 0;
    double avg_zero = 0.0;
    int max_zero = 0;
    double share_with_zero = 0.0;  // share of assets with >= 1 zero category
};

struct DependenceRow {
    std::string sector;
    int year = 0;            // score year; risk measured in year + 1
    std::string series;      // "esg" or "esgm"
    RiskKind kind = RiskKind::vvrisk;
    int n = 0;
    double tau = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::normal_approx;
};

struct PooledRow {
    std::string scope;  // score year as text, or "all"
    std::string series;
    RiskKind kind = RiskKind::vvrisk;
    int n = 0;
    double tau = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::normal_approx;
};

struct WeightRow {
    std::string sector;
    int year = 0;
    RiskKind kind = RiskKind::vvrisk;
    WeightVector weights;
    double objective = 0.0;
    long evals = 0;
};

struct RatingRow {
    int year = 0;
    std::string series;  // "esgm" or "provider"
    std::string klass;
    long count = 0;
};

struct ClassRiskRow {
    int year = 0;  // score year; risk from year + 1
    std::string series;
    std::string klass;
    int n = 0;
    double var_q25 = 0.0, var_med = 0.0, var_q75 = 0.0;
    double vol_q25 = 0.0, vol_med = 0.0, vol_q75 = 0.0;
};

struct PillarTauRow {
    int year = 0;
    std::string pair_name;  // e.g. "e_vs_esg"
    double tau = 0.0;
};

// One row per surviving (asset, year); esgm fields are absent when the
// sector-year was too small to optimize.
struct ScoreRow {
    std::string asset_id;
    std::string sector;
    int year = 0;
    double e = 0.0, s = 0.0, g = 0.0, m = 0.0;
    double provider_esg = 0.0;
    int zero_count = 0;
    std::optional<double> esgm;
    std::optional<EsgmClass> esgm_class;
    ProviderClass provider_class = ProviderClass::D;
};

struct ReportBundle {
    std::vector<MissingnessRow> missingness;
    std::vector<DependenceRow> sector_dependence;
    std::vector<WeightRow> weights;
    std::vector<PooledRow> pooled;
    std::vector<RatingRow> ratings;
    std::vector<ClassRiskRow> class_risk;
    std::vector<PillarTauRow> pillar_tau;
    std::vector<ScoreRow> scores;
    RiskTable risk;
    ValidationCounts counts;
    std::vector<std::string> notes;  // deterministic summary lines
};

// Full study pass: ingest, impute, validate/drop, risk table, M-pillar,
// per-(sector, year, kind) weight optimization, scoring, dependence
// tests, ratings. Writes the data artifacts (risk.csv, scores.csv,
// pillars.csv) and the report files into config.output_dir.
ReportBundle run_pipeline(const RunConfig& config);

// Writes missingness.csv, sector_dependence.csv, weights.csv,
// pooled_dependence.csv, ratings.csv, class_risk_summary.csv and
// esgm_summary.txt into outdir; returns the written paths.
std::vector<std::filesystem::path> emit_reports(const ReportBundle& bundle,
                                                const std::filesystem::path& outdir);

// Reconstructs the report tables from the data artifacts already in
// `dir` (risk.csv, scores.csv, pillars.csv, weights.csv) and rewrites
// the report files there. A rerun over an untouched run directory
// reproduces the report CSVs byte for byte.
std::vector<std::filesystem::path> rebuild_reports(const std::filesystem::path& dir);

}  // namespace esgm

#endif  // ESGM_PIPELINE_HPP
