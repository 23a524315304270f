#include "esgm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "esgm/csv.hpp"
#include "esgm/errors.hpp"
#include "esgm/log.hpp"
#include "esgm/rng.hpp"

namespace esgm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Value of the 6-decimal cell a weight is published as; scoring uses
// these so every reported tau can be re-derived from the artifacts.
double round6(double v) { return csv::parse_double(csv::format_fixed6(v), "round6"); }

Eigen::Vector4d published_weights(const WeightVector& w) {
    return {round6(w.e), round6(w.s), round6(w.g), round6(w.m)};
}

// Lower type-1 quantile (same rule as the VaR estimator).
double quantile_type1(std::vector<double> v, double q) {
    const int n = static_cast<int>(v.size());
    int k = static_cast<int>(std::ceil(q * static_cast<double>(n) - 1e-9));
    k = std::clamp(k, 1, n);
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
    return v[k - 1];
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string sig_marker(double p) {
    if (p <= 0.05) return "**";
    if (p <= 0.1) return "*";
    return "";
}

std::string tau_cell(double tau, double p) {
    const std::string cell = csv::format_fixed6(tau);
    const std::string marker = sig_marker(p);
    return marker.empty() ? cell : cell + "(" + marker + ")";
}

const char* method_name(TestMethod m) { return m == TestMethod::exact ? "exact" : "normal_approx"; }

// var and vvrisk expect positive dependence with scores, vol negative.
Alternative alternative_for(RiskKind kind) {
    return kind == RiskKind::vol ? Alternative::less : Alternative::greater;
}

double risk_value(const RiskRow& r, RiskKind kind) {
    switch (kind) {
        case RiskKind::vvrisk: return r.vv;
        case RiskKind::var: return r.var95;
        case RiskKind::vol: return r.vol;
    }
    throw std::invalid_argument("invalid RiskKind");
}

ProviderClass provider_class_from_string(const std::string& s) {
    if (s == "A") return ProviderClass::A;
    if (s == "B") return ProviderClass::B;
    if (s == "C") return ProviderClass::C;
    if (s == "D") return ProviderClass::D;
    throw std::invalid_argument("unknown provider class '" + s + "'");
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
}

fs::path resolve_against(const fs::path& base_dir, const fs::path& p) {
    return p.is_absolute() ? p : base_dir / p;
}

std::vector<RiskKind> parse_kind_list(const json& j, const std::string& where) {
    std::vector<RiskKind> kinds;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "all") return {RiskKind::vvrisk, RiskKind::var, RiskKind::vol};
        return {risk_kind_from_string(s)};
    }
    if (!j.is_array()) throw ConfigError(where + ": risk_kinds must be an array or \"all\"");
    for (const auto& item : j) kinds.push_back(risk_kind_from_string(item.get<std::string>()));
    return kinds;
}

// ------------------------------------------------------------- artifacts

const std::vector<std::string> kScoresHeader = {"asset_id", "sector",     "year",      "m_pillar",
                                                "esgm",     "esgm_class", "provider_class"};
const std::vector<std::string> kPillarsHeader = {"asset_id", "sector", "year",       "e", "s", "g", "m",
                                                 "esg",      "zero_count"};
const std::vector<std::string> kWeightsHeader = {"sector", "year",      "risk_kind", "w_e", "w_s",
                                                 "w_g",    "w_m",       "objective", "evals"};

void save_scores(const std::vector<ScoreRow>& scores, const fs::path& dir) {
    auto s_out = csv::open_out(dir / "scores.csv");
    csv::write_row(s_out, kScoresHeader);
    auto p_out = csv::open_out(dir / "pillars.csv");
    csv::write_row(p_out, kPillarsHeader);
    for (const auto& row : scores) {
        csv::write_row(s_out, {row.asset_id, row.sector, std::to_string(row.year), csv::format_fixed6(row.m),
                               row.esgm ? csv::format_fixed6(*row.esgm) : std::string{},
                               row.esgm_class ? std::string(to_string(*row.esgm_class)) : std::string{},
                               to_string(row.provider_class)});
        csv::write_row(p_out, {row.asset_id, row.sector, std::to_string(row.year), csv::format_roundtrip(row.e),
                               csv::format_roundtrip(row.s), csv::format_roundtrip(row.g),
                               csv::format_roundtrip(row.m), csv::format_roundtrip(row.provider_esg),
                               std::to_string(row.zero_count)});
    }
}

std::vector<ScoreRow> load_scores(const fs::path& dir) {
    const csv::Table st = csv::read_table(dir / "scores.csv", kScoresHeader);
    const csv::Table pt = csv::read_table(dir / "pillars.csv", kPillarsHeader);
    if (st.rows.size() != pt.rows.size())
        throw SchemaError("scores.csv and pillars.csv disagree on row count");
    std::vector<ScoreRow> rows;
    rows.reserve(st.rows.size());
    for (std::size_t i = 0; i < st.rows.size(); ++i) {
        const auto& s = st.rows[i];
        const auto& p = pt.rows[i];
        if (s[0] != p[0] || s[2] != p[2] || s[1] != p[1])
            throw SchemaError("scores.csv and pillars.csv disagree at data row " + std::to_string(i + 1));
        ScoreRow row;
        row.asset_id = s[0];
        row.sector = s[1];
        row.year = csv::parse_int(s[2], "year");
        row.e = csv::parse_double(p[3], "e");
        row.s = csv::parse_double(p[4], "s");
        row.g = csv::parse_double(p[5], "g");
        row.m = csv::parse_double(p[6], "m");
        row.provider_esg = csv::parse_double(p[7], "esg");
        row.zero_count = csv::parse_int(p[8], "zero_count");
        if (!s[4].empty()) row.esgm = csv::parse_double(s[4], "esgm");
        if (!s[5].empty()) row.esgm_class = esgm_class_from_string(s[5]);
        row.provider_class = provider_class_from_string(s[6]);
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_weights(const std::vector<WeightRow>& weights, const fs::path& dir) {
    auto out = csv::open_out(dir / "weights.csv");
    csv::write_row(out, kWeightsHeader);
    for (const auto& row : weights) {
        csv::write_row(out, {row.sector, std::to_string(row.year), to_string(row.kind),
                             csv::format_fixed6(row.weights.e), csv::format_fixed6(row.weights.s),
                             csv::format_fixed6(row.weights.g), csv::format_fixed6(row.weights.m),
                             csv::format_fixed6(row.objective), std::to_string(row.evals)});
    }
}

std::vector<WeightRow> load_weights(const fs::path& dir) {
    const csv::Table table = csv::read_table(dir / "weights.csv", kWeightsHeader);
    std::vector<WeightRow> rows;
    for (const auto& r : table.rows) {
        WeightRow row;
        row.sector = r[0];
        row.year = csv::parse_int(r[1], "year");
        row.kind = risk_kind_from_string(r[2]);
        row.weights = {csv::parse_double(r[3], "w_e"), csv::parse_double(r[4], "w_s"),
                       csv::parse_double(r[5], "w_g"), csv::parse_double(r[6], "w_m")};
        row.objective = csv::parse_double(r[7], "objective");
        row.evals = csv::parse_int(r[8], "evals");
        rows.push_back(std::move(row));
    }
    return rows;
}

// --------------------------------------------------------------- analyze

struct Observation {
    const ScoreRow* score = nullptr;
    const RiskRow* risk = nullptr;  // for score->year + 1; may be null
};

struct AnalysisInput {
    std::vector<ScoreRow> scores;
    RiskTable risk;
    std::vector<WeightRow> weights;
    std::vector<RiskKind> kinds;
    std::vector<int> years;
};

struct TestOutcome {
    int n = 0;
    double tau = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::normal_approx;
};

// Runs the one-sided test appropriate for `kind`; returns nothing when
// tau is undefined (constant column) or n < 10.
std::optional<TestOutcome> run_test(const Eigen::VectorXd& scores, const Eigen::VectorXd& risk, RiskKind kind,
                                    std::vector<std::string>& notes, const std::string& label) {
    if (scores.size() < 10) {
        notes.push_back("skipped " + label + ": n = " + std::to_string(scores.size()) + " < 10");
        return std::nullopt;
    }
    try {
        const TestResult t = independence_test(scores, risk, alternative_for(kind));
        return TestOutcome{static_cast<int>(scores.size()), t.tau, t.p_value, t.method};
    } catch (const UndefinedStatError&) {
        notes.push_back("skipped " + label + ": tau undefined (constant column)");
        return std::nullopt;
    }
}

ReportBundle analyze(AnalysisInput input) {
    ReportBundle bundle;
    bundle.scores = std::move(input.scores);
    bundle.risk = std::move(input.risk);
    bundle.weights = std::move(input.weights);

    // Published (6-decimal) weights per (sector, year, kind).
    std::map<std::tuple<std::string, int, int>, Eigen::Vector4d> weight_of;
    for (const auto& w : bundle.weights)
        weight_of.emplace(std::make_tuple(w.sector, w.year, static_cast<int>(w.kind)),
                          published_weights(w.weights));

    // Group observations by (sector, year); scores are in canonical
    // (asset_id, year) order, so groups inherit a deterministic order.
    std::map<std::pair<std::string, int>, std::vector<Observation>> groups;
    for (const auto& row : bundle.scores) {
        Observation obs;
        obs.score = &row;
        obs.risk = bundle.risk.find(row.asset_id, row.year + 1);
        groups[{row.sector, row.year}].push_back(obs);
    }

    // ---- missingness (zero-count profile per sector-year)
    for (const auto& [key, obs] : groups) {
        MissingnessRow row;
        row.sector = key.first;
        row.year = key.second;
        row.n_assets = static_cast<int>(obs.size());
        long total = 0;
        int with_zero = 0;
        for (const auto& o : obs) {
            total += o.score->zero_count;
            row.max_zero = std::max(row.max_zero, o.score->zero_count);
            if (o.score->zero_count > 0) ++with_zero;
        }
        row.avg_zero = static_cast<double>(total) / row.n_assets;
        row.share_with_zero = static_cast<double>(with_zero) / row.n_assets;
        bundle.missingness.push_back(std::move(row));
    }

    // ---- per-sector dependence with next-year risk
    for (const auto& [key, obs] : groups) {
        const auto& [sector, year] = key;
        std::vector<const Observation*> usable;
        for (const auto& o : obs)
            if (o.risk) usable.push_back(&o);
        const int n = static_cast<int>(usable.size());
        if (n == 0) continue;
        Eigen::VectorXd esg(n);
        PillarMatrix pillars(n, 4);
        for (int i = 0; i < n; ++i) {
            esg[i] = usable[i]->score->provider_esg;
            pillars.row(i) << usable[i]->score->e, usable[i]->score->s, usable[i]->score->g,
                usable[i]->score->m;
        }
        for (RiskKind kind : input.kinds) {
            Eigen::VectorXd risk_col(n);
            for (int i = 0; i < n; ++i) risk_col[i] = risk_value(*usable[i]->risk, kind);
            const std::string label_base =
                "sector " + sector + " year " + std::to_string(year) + " kind " + to_string(kind);
            if (auto t = run_test(esg, risk_col, kind, bundle.notes, label_base + " series esg")) {
                bundle.sector_dependence.push_back(
                    {sector, year, "esg", kind, t->n, t->tau, t->p_value, t->method});
            }
            auto wit = weight_of.find(std::make_tuple(sector, year, static_cast<int>(kind)));
            if (wit == weight_of.end()) continue;  // sector-year too small to optimize
            const Eigen::VectorXd esgm_col = (pillars * wit->second).cwiseMax(0.0).cwiseMin(100.0);
            if (auto t = run_test(esgm_col, risk_col, kind, bundle.notes, label_base + " series esgm")) {
                bundle.sector_dependence.push_back(
                    {sector, year, "esgm", kind, t->n, t->tau, t->p_value, t->method});
            }
        }
    }

    // ---- pooled dependence (per year and overall); assets are scored
    // with their own sector-year weights, then pooled, so only sectors
    // with weights participate (in both series, for comparability).
    for (RiskKind kind : input.kinds) {
        std::vector<std::string> scopes;
        for (int y : input.years) scopes.push_back(std::to_string(y));
        scopes.push_back("all");
        for (const std::string& scope : scopes) {
            std::vector<double> esg_v, esgm_v, risk_v;
            for (const auto& [key, obs] : groups) {
                if (scope != "all" && std::to_string(key.second) != scope) continue;
                auto wit = weight_of.find(std::make_tuple(key.first, key.second, static_cast<int>(kind)));
                if (wit == weight_of.end()) continue;
                for (const auto& o : obs) {
                    if (!o.risk) continue;
                    const Eigen::Vector4d p(o.score->e, o.score->s, o.score->g, o.score->m);
                    esg_v.push_back(o.score->provider_esg);
                    esgm_v.push_back(std::clamp(p.dot(wit->second), 0.0, 100.0));
                    risk_v.push_back(risk_value(*o.risk, kind));
                }
            }
            const int n = static_cast<int>(risk_v.size());
            if (n == 0) continue;
            const Eigen::VectorXd esg = Eigen::Map<const Eigen::VectorXd>(esg_v.data(), n);
            const Eigen::VectorXd esgm = Eigen::Map<const Eigen::VectorXd>(esgm_v.data(), n);
            const Eigen::VectorXd risk_col = Eigen::Map<const Eigen::VectorXd>(risk_v.data(), n);
            const std::string label_base = "pooled " + scope + " kind " + std::string(to_string(kind));
            if (auto t = run_test(esg, risk_col, kind, bundle.notes, label_base + " series esg"))
                bundle.pooled.push_back({scope, "esg", kind, t->n, t->tau, t->p_value, t->method});
            if (auto t = run_test(esgm, risk_col, kind, bundle.notes, label_base + " series esgm"))
                bundle.pooled.push_back({scope, "esgm", kind, t->n, t->tau, t->p_value, t->method});
        }
    }

    // ---- pillar tau matrix per year, pooled over all sectors
    for (int year : input.years) {
        std::vector<double> cols[5];
        for (const auto& row : bundle.scores) {
            if (row.year != year) continue;
            cols[0].push_back(row.e);
            cols[1].push_back(row.s);
            cols[2].push_back(row.g);
            cols[3].push_back(row.m);
            cols[4].push_back(row.provider_esg);
        }
        if (cols[0].size() < 2) continue;
        static const char* names[5] = {"e", "s", "g", "m", "esg"};
        const int n = static_cast<int>(cols[0].size());
        for (int a = 0; a < 5; ++a) {
            for (int b = a + 1; b < 5; ++b) {
                const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(cols[a].data(), n);
                const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(cols[b].data(), n);
                try {
                    bundle.pillar_tau.push_back(
                        {year, std::string(names[a]) + "_vs_" + names[b], kendall_tau(x, y).tau});
                } catch (const UndefinedStatError&) {
                    bundle.notes.push_back("skipped pillar tau " + std::string(names[a]) + "_vs_" + names[b] +
                                           " year " + std::to_string(year) + ": constant column");
                }
            }
        }
    }

    // ---- rating distributions and per-class next-year risk profiles
    static const char* esgm_classes[5] = {"A", "B", "C", "D", "Unrated"};
    static const char* provider_classes[4] = {"A", "B", "C", "D"};
    for (int year : input.years) {
        std::map<std::string, long> esgm_count, provider_count;
        std::map<std::string, std::vector<double>> esgm_var, esgm_vol, prov_var, prov_vol;
        for (const auto& row : bundle.scores) {
            if (row.year != year) continue;
            const RiskRow* risk = bundle.risk.find(row.asset_id, row.year + 1);
            if (row.esgm_class) {
                const std::string k = to_string(*row.esgm_class);
                ++esgm_count[k];
                if (risk) {
                    esgm_var[k].push_back(risk->var95);
                    esgm_vol[k].push_back(risk->vol);
                }
            }
            const std::string pk = to_string(row.provider_class);
            ++provider_count[pk];
            if (risk) {
                prov_var[pk].push_back(risk->var95);
                prov_vol[pk].push_back(risk->vol);
            }
        }
        for (const char* k : esgm_classes)
            bundle.ratings.push_back({year, "esgm", k, esgm_count.count(k) ? esgm_count[k] : 0});
        for (const char* k : provider_classes)
            bundle.ratings.push_back({year, "provider", k, provider_count.count(k) ? provider_count[k] : 0});
        const auto summarize = [&](const char* series, const char* k, std::vector<double>& var_v,
                                   std::vector<double>& vol_v) {
            if (var_v.empty()) return;
            ClassRiskRow row;
            row.year = year;
            row.series = series;
            row.klass = k;
            row.n = static_cast<int>(var_v.size());
            row.var_q25 = quantile_type1(var_v, 0.25);
            row.var_med = median_of(var_v);
            row.var_q75 = quantile_type1(var_v, 0.75);
            row.vol_q25 = quantile_type1(vol_v, 0.25);
            row.vol_med = median_of(vol_v);
            row.vol_q75 = quantile_type1(vol_v, 0.75);
            bundle.class_risk.push_back(std::move(row));
        };
        for (const char* k : esgm_classes) summarize("esgm", k, esgm_var[k], esgm_vol[k]);
        for (const char* k : provider_classes) summarize("provider", k, prov_var[k], prov_vol[k]);
    }

    return bundle;
}

}  // namespace

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
    if (assets_path.empty() || prices_path.empty()) throw ConfigError("assets and prices paths are required");
    if (output_dir.empty()) throw ConfigError("output_dir is required");
    if (score_years.empty()) throw ConfigError("score_years must be nonempty");
    for (std::size_t i = 1; i < score_years.size(); ++i) {
        if (score_years[i] <= score_years[i - 1]) throw ConfigError("score_years must be strictly increasing");
    }
    if (!risk_years.empty()) {
        if (risk_years.size() != score_years.size())
            throw ConfigError("risk_years must pair off with score_years");
        for (std::size_t i = 0; i < risk_years.size(); ++i) {
            if (risk_years[i] != score_years[i] + 1)
                throw ConfigError("risk year " + std::to_string(risk_years[i]) + " must equal score year " +
                                  std::to_string(score_years[i]) + " + 1");
        }
    }
    if (risk_kinds.empty()) throw ConfigError("risk_kinds must be nonempty");
    std::set<int> seen;
    for (RiskKind k : risk_kinds) {
        if (!seen.insert(static_cast<int>(k)).second) throw ConfigError("duplicate risk kind in risk_kinds");
    }
    if (!seen.count(static_cast<int>(rating_kind)))
        throw ConfigError("rating_kind must be one of risk_kinds");
    for (const auto& pair : imputations) {
        if (pair.source >= pair.target)
            throw ConfigError("imputation source year must precede target year");
        const auto in_years = [this](int y) {
            return std::find(score_years.begin(), score_years.end(), y) != score_years.end();
        };
        if (!in_years(pair.source) || !in_years(pair.target))
            throw ConfigError("imputation years must be score years");
    }
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
    try {
        optimizer.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (const auto& [sector, w] : provider_weights) {
        double sum = 0.0;
        for (double v : w) {
            if (!(v >= 0.0)) throw ConfigError("provider weights for '" + sector + "' must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-8)
            throw ConfigError("provider weights for '" + sector + "' must sum to 1");
    }
}

RunConfig load_run_config(const fs::path& path) {
    const json j = load_json(path);
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    RunConfig config;
    try {
        config.assets_path = resolve_against(base, fs::path(j.at("assets").get<std::string>()));
        config.prices_path = resolve_against(base, fs::path(j.at("prices").get<std::string>()));
        config.output_dir = resolve_against(base, fs::path(j.at("output_dir").get<std::string>()));
        const auto& years = j.contains("score_years") ? j.at("score_years") : j.at("years");
        config.score_years = years.get<std::vector<int>>();
        if (j.contains("risk_years")) config.risk_years = j.at("risk_years").get<std::vector<int>>();
        if (j.contains("risk_kinds"))
            config.risk_kinds = parse_kind_list(j.at("risk_kinds"), path.string());
        config.rating_kind = j.contains("rating_kind")
                                 ? risk_kind_from_string(j.at("rating_kind").get<std::string>())
                                 : config.risk_kinds.front();
        if (j.contains("imputations")) {
            for (const auto& item : j.at("imputations")) {
                config.imputations.push_back(
                    {item.at("source").get<int>(), item.at("target").get<int>()});
            }
        }
        if (j.contains("optimizer")) {
            const auto& opt = j.at("optimizer");
            if (opt.contains("n_starts")) config.optimizer.n_starts = opt.at("n_starts").get<int>();
            if (opt.contains("initial_step")) config.optimizer.initial_step = opt.at("initial_step").get<double>();
            if (opt.contains("final_step")) config.optimizer.final_step = opt.at("final_step").get<double>();
            if (opt.contains("max_evals")) config.optimizer.max_evals = opt.at("max_evals").get<long>();
            if (opt.contains("seed")) config.optimizer.seed = opt.at("seed").get<std::uint64_t>();
        }
        if (j.contains("provider_weights")) {
            for (const auto& [sector, arr] : j.at("provider_weights").items()) {
                const auto v = arr.get<std::vector<double>>();
                if (v.size() != 3)
                    throw ConfigError("provider weights for '" + sector + "' must have 3 entries");
                config.provider_weights[sector] = {v[0], v[1], v[2]};
            }
        }
        if (j.contains("jobs")) config.jobs = j.at("jobs").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    config.validate();
    return config;
}

SyntheticSpec load_synthetic_spec(const fs::path& path) {
    const json j = load_json(path);
    SyntheticSpec spec;
    spec.zero_prob.fill(0.3);
    try {
        for (const auto& item : j.at("sectors")) {
            spec.sectors.push_back(
                {item.at("name").get<std::string>(), item.at("assets").get<int>()});
        }
        spec.years = j.at("years").get<std::vector<int>>();
        if (j.contains("zero_prob")) {
            const auto& zp = j.at("zero_prob");
            if (zp.is_number()) {
                spec.zero_prob.fill(zp.get<double>());
            } else {
                const auto v = zp.get<std::vector<double>>();
                if (v.size() != spec.zero_prob.size())
                    throw ConfigError("zero_prob must be a number or an array of 10");
                std::copy(v.begin(), v.end(), spec.zero_prob.begin());
            }
        }
        if (j.contains("strength")) spec.strength = j.at("strength").get<double>();
        if (j.contains("planted_pillar")) spec.planted_pillar = j.at("planted_pillar").get<std::string>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

// --------------------------------------------------------------- pipeline

ReportBundle run_pipeline(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.output_dir);

    // Canonical kind order; report row order then never depends on the
    // order kinds were listed in, so artifact-driven rebuilds agree.
    std::vector<RiskKind> kinds;
    for (RiskKind k : {RiskKind::vvrisk, RiskKind::var, RiskKind::vol}) {
        if (std::find(config.risk_kinds.begin(), config.risk_kinds.end(), k) != config.risk_kinds.end())
            kinds.push_back(k);
    }

    AssetPanel panel = load_asset_panel(config.assets_path);
    PriceHistory prices = load_price_history(config.prices_path);
    ValidationCounts counts;
    counts.records_read = static_cast<long>(panel.records.size());
    log::info("loaded " + std::to_string(counts.records_read) + " asset records and " +
              std::to_string(prices.series.size()) + " price series");

    // Keep only configured score years so stray years cannot distort
    // coverage checks or rankings.
    std::erase_if(panel.records, [&config](const AssetRecord& r) {
        return std::find(config.score_years.begin(), config.score_years.end(), r.year) ==
               config.score_years.end();
    });
    panel.refresh_index();

    for (const auto& pair : config.imputations) {
        ImputeResult imputed = impute_carry_forward(std::move(panel), pair.target, pair.source);
        panel = std::move(imputed.panel);
        counts.imputed += imputed.count;
        log::info("imputed " + std::to_string(imputed.count) + " assets from " +
                  std::to_string(pair.source) + " into " + std::to_string(pair.target));
    }

    const ValidationReport report = validate_panel(panel, prices);
    for (const auto& issue : report.warnings) log::warn(issue.locator + ": " + issue.note);
    if (!report.accepted()) {
        std::string msg = "panel validation failed:";
        for (const auto& issue : report.errors) msg += "\n  " + issue.locator + ": " + issue.note;
        throw Error(msg);
    }
    const long before_drop = static_cast<long>(panel.records.size());
    panel = drop_assets(panel, report.flagged_assets);
    counts.accepted = static_cast<long>(panel.records.size());
    counts.dropped = before_drop - counts.accepted;
    if (panel.records.empty()) throw Error("no usable assets after validation");
    for (int y : config.score_years) {
        if (std::find(panel.years.begin(), panel.years.end(), y) == panel.years.end())
            throw Error("no usable records for score year " + std::to_string(y));
    }

    std::vector<int> risk_years;
    for (int y : config.score_years) risk_years.push_back(y + 1);
    const RiskTable computed_risk = build_risk_table(prices, risk_years);
    save_risk_table(computed_risk, config.output_dir / "risk.csv");
    // Reload so every downstream statistic is computed from exactly the
    // published 10-significant-digit values.
    RiskTable risk = load_risk_table(config.output_dir / "risk.csv");
    log::info("risk table: " + std::to_string(risk.rows.size()) + " asset-year rows");

    // M-pillar per (sector, year), then the per-asset score skeleton.
    std::map<std::pair<std::string, int>, std::vector<const AssetRecord*>> sector_year;
    for (const auto& rec : panel.records) sector_year[{rec.sector, rec.year}].push_back(&rec);

    std::map<std::pair<std::string, int>, double> m_pillar_of;  // (asset_id, year)
    std::map<std::pair<std::string, int>, int> zero_of;
    for (const auto& [key, records] : sector_year) {
        std::vector<int> zeros;
        zeros.reserve(records.size());
        for (const auto* rec : records) zeros.push_back(zero_count(*rec));
        const std::vector<double> m_scores = missing_pillar_scores(zeros);
        for (std::size_t i = 0; i < records.size(); ++i) {
            m_pillar_of[{records[i]->asset_id, key.second}] = m_scores[i];
            zero_of[{records[i]->asset_id, key.second}] = zeros[i];
        }
    }

    // One optimization problem per (sector, year, kind) with n >= 10.
    struct Problem {
        std::string sector;
        int year = 0;
        RiskKind kind = RiskKind::vvrisk;
        PillarMatrix pillars;
        Eigen::VectorXd risk_col;
        OptimizerConfig opt;
    };
    std::vector<Problem> problems;
    std::vector<std::string> skip_notes;
    for (const auto& [key, records] : sector_year) {
        const auto& [sector, year] = key;
        std::vector<const AssetRecord*> usable;
        for (const auto* rec : records) {
            if (risk.find(rec->asset_id, year + 1)) usable.push_back(rec);
        }
        if (static_cast<int>(usable.size()) < 10) {
            skip_notes.push_back("skipped optimization for sector " + sector + " year " +
                                 std::to_string(year) + ": " + std::to_string(usable.size()) +
                                 " usable assets (< 10)");
            continue;
        }
        PillarMatrix pillars(usable.size(), 4);
        for (std::size_t i = 0; i < usable.size(); ++i) {
            pillars.row(static_cast<Eigen::Index>(i))
                << *usable[i]->e_pillar, *usable[i]->s_pillar, *usable[i]->g_pillar,
                m_pillar_of.at({usable[i]->asset_id, year});
        }
        for (RiskKind kind : kinds) {
            Problem problem;
            problem.sector = sector;
            problem.year = year;
            problem.kind = kind;
            problem.pillars = pillars;
            problem.risk_col.resize(static_cast<Eigen::Index>(usable.size()));
            for (std::size_t i = 0; i < usable.size(); ++i)
                problem.risk_col[static_cast<Eigen::Index>(i)] =
                    risk_value(*risk.find(usable[i]->asset_id, year + 1), kind);
            problem.opt = config.optimizer;
            problem.opt.seed = mix_seed(config.optimizer.seed,
                                        fnv1a64(sector + "|" + std::to_string(year) + "|" + to_string(kind)));
            auto pw = config.provider_weights.find(sector);
            if (pw != config.provider_weights.end())
                problem.opt.extra_starts.push_back(
                    {pw->second[0], pw->second[1], pw->second[2], 0.0});
            problems.push_back(std::move(problem));
        }
    }

    std::vector<OptResult> results(problems.size());
    std::vector<std::exception_ptr> failures(problems.size());
    const auto solve_range = [&](std::atomic<std::size_t>& next) {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= problems.size()) return;
            try {
                results[i] = optimize_weights(problems[i].pillars, problems[i].risk_col, problems[i].kind,
                                              problems[i].opt);
                log::debug("solved sector " + problems[i].sector + " year " +
                           std::to_string(problems[i].year) + " kind " + to_string(problems[i].kind) +
                           ": objective " + csv::format_fixed6(results[i].objective) + " in " +
                           std::to_string(results[i].evals) + " evals");
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::atomic<std::size_t> next{0};
    const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(problems.size())));
    log::info("optimizing " + std::to_string(problems.size()) + " sector-year-kind problems on " +
              std::to_string(jobs) + (jobs == 1 ? " thread" : " threads"));
    if (jobs == 1) {
        solve_range(next);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) pool.emplace_back([&] { solve_range(next); });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < problems.size(); ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            throw Error("optimization failed for sector " + problems[i].sector + " year " +
                        std::to_string(problems[i].year) + " kind " + to_string(problems[i].kind) + ": " +
                        e.what());
        }
    }

    std::vector<WeightRow> weight_rows;
    weight_rows.reserve(problems.size());
    for (std::size_t i = 0; i < problems.size(); ++i) {
        weight_rows.push_back({problems[i].sector, problems[i].year, problems[i].kind, results[i].weights,
                               results[i].objective, results[i].evals});
    }

    // Published rating-kind weights per (sector, year).
    std::map<std::pair<std::string, int>, Eigen::Vector4d> rating_weights;
    for (const auto& row : weight_rows) {
        if (row.kind == config.rating_kind)
            rating_weights.emplace(std::make_pair(row.sector, row.year), published_weights(row.weights));
    }

    std::vector<ScoreRow> scores;
    scores.reserve(panel.records.size());
    for (const auto& rec : panel.records) {
        ScoreRow row;
        row.asset_id = rec.asset_id;
        row.sector = rec.sector;
        row.year = rec.year;
        row.e = *rec.e_pillar;
        row.s = *rec.s_pillar;
        row.g = *rec.g_pillar;
        row.m = m_pillar_of.at({rec.asset_id, rec.year});
        row.provider_esg = *rec.provider_esg;
        row.zero_count = zero_of.at({rec.asset_id, rec.year});
        row.provider_class = assign_provider_class(row.provider_esg);
        auto wit = rating_weights.find({rec.sector, rec.year});
        if (wit != rating_weights.end()) {
            const Eigen::Vector4d p(row.e, row.s, row.g, row.m);
            const double value = std::clamp(p.dot(wit->second), 0.0, 100.0);
            row.esgm = value;
            row.esgm_class = assign_esgm_class(value);
        }
        scores.push_back(std::move(row));
    }
    save_scores(scores, config.output_dir);
    save_weights(weight_rows, config.output_dir);

    AnalysisInput input;
    input.scores = std::move(scores);
    input.risk = std::move(risk);
    input.weights = std::move(weight_rows);
    input.kinds = kinds;
    input.years = config.score_years;
    ReportBundle bundle = analyze(std::move(input));
    bundle.counts = counts;

    std::vector<std::string> notes;
    {
        std::string line = "score years:";
        for (int y : config.score_years) line += " " + std::to_string(y);
        notes.push_back(line);
        line = "risk kinds:";
        for (RiskKind k : kinds) line += std::string(" ") + to_string(k);
        notes.push_back(line);
        notes.push_back(std::string("rating kind: ") + to_string(config.rating_kind));
        notes.push_back("records read: " + std::to_string(counts.records_read));
        notes.push_back("records imputed: " + std::to_string(counts.imputed));
        notes.push_back("records accepted: " + std::to_string(counts.accepted));
        notes.push_back("records dropped: " + std::to_string(counts.dropped));
        notes.push_back("assets flagged: " + std::to_string(report.flagged_assets.size()));
        notes.push_back("optimization problems solved: " + std::to_string(problems.size()));
        notes.insert(notes.end(), skip_notes.begin(), skip_notes.end());
    }
    notes.insert(notes.end(), bundle.notes.begin(), bundle.notes.end());
    bundle.notes = std::move(notes);

    emit_reports(bundle, config.output_dir);
    return bundle;
}

std::vector<fs::path> emit_reports(const ReportBundle& bundle, const fs::path& outdir) {
    fs::create_directories(outdir);
    std::vector<fs::path> written;

    {
        const fs::path path = outdir / "missingness.csv";
        auto out = csv::open_out(path);
        csv::write_row(out, {"sector", "year", "n_assets", "avg_zero_count", "max_zero_count",
                             "share_with_zero"});
        for (const auto& row : bundle.missingness) {
            csv::write_row(out, {row.sector, std::to_string(row.year), std::to_string(row.n_assets),
                                 csv::format_fixed6(row.avg_zero), std::to_string(row.max_zero),
                                 csv::format_fixed6(row.share_with_zero)});
        }
        written.push_back(path);
    }
    {
        const fs::path path = outdir / "sector_dependence.csv";
        auto out = csv::open_out(path);
        csv::write_row(out, {"sector", "year", "series", "risk_kind", "n", "tau", "p_value", "method", "sig"});
        for (const auto& row : bundle.sector_dependence) {
            csv::write_row(out, {row.sector, std::to_string(row.year), row.series, to_string(row.kind),
                                 std::to_string(row.n), tau_cell(row.tau, row.p_value),
                                 csv::format_fixed6(row.p_value), method_name(row.method),
                                 sig_marker(row.p_value)});
        }
        written.push_back(path);
    }
    {
        const fs::path path = outdir / "weights.csv";
        save_weights(bundle.weights, outdir);
        written.push_back(path);
    }
    {
        const fs::path path = outdir / "pooled_dependence.csv";
        auto out = csv::open_out(path);
        csv::write_row(out, {"scope", "series", "risk_kind", "n", "tau", "p_value", "method", "sig"});
        for (const auto& row : bundle.pooled) {
            csv::write_row(out, {row.scope, row.series, to_string(row.kind), std::to_string(row.n),
                                 tau_cell(row.tau, row.p_value), csv::format_fixed6(row.p_value),
                                 method_name(row.method), sig_marker(row.p_value)});
        }
        written.push_back(path);
    }
    {
        const fs::path path = outdir / "ratings.csv";
        auto out = csv::open_out(path);
        csv::write_row(out, {"year", "series", "class", "count"});
        for (const auto& row : bundle.ratings) {
            csv::write_row(out, {std::to_string(row.year), row.series, row.klass, std::to_string(row.count)});
        }
        written.push_back(path);
    }
    {
        const fs::path path = outdir / "class_risk_summary.csv";
        auto out = csv::open_out(path);
        csv::write_row(out, {"year", "series", "class", "n", "var95_q25", "var95_median", "var95_q75",
                             "vol_q25", "vol_median", "vol_q75"});
        for (const auto& row : bundle.class_risk) {
            csv::write_row(out, {std::to_string(row.year), row.series, row.klass, std::to_string(row.n),
                                 csv::format_fixed6(row.var_q25), csv::format_fixed6(row.var_med),
                                 csv::format_fixed6(row.var_q75), csv::format_fixed6(row.vol_q25),
                                 csv::format_fixed6(row.vol_med), csv::format_fixed6(row.vol_q75)});
        }
        written.push_back(path);
    }
    {
        const fs::path path = outdir / "esgm_summary.txt";
        auto out = csv::open_out(path);
        out << "esgm run summary\n";
        out << "================\n";
        for (const auto& line : bundle.notes) out << line << '\n';
        if (!bundle.pillar_tau.empty()) {
            out << "\npillar rank correlations (pooled per year)\n";
            for (const auto& row : bundle.pillar_tau) {
                out << "  year " << row.year << ' ' << row.pair_name << " tau=" << csv::format_fixed6(row.tau)
                    << '\n';
            }
        }
        out << "\nreport files: missingness.csv sector_dependence.csv weights.csv pooled_dependence.csv "
               "ratings.csv class_risk_summary.csv\n";
        out << "data artifacts: risk.csv scores.csv pillars.csv\n";
        written.push_back(path);
    }
    return written;
}

std::vector<fs::path> rebuild_reports(const fs::path& dir) {
    AnalysisInput input;
    input.scores = load_scores(dir);
    input.risk = load_risk_table(dir / "risk.csv");
    input.weights = load_weights(dir);

    std::set<int> kind_set;
    for (const auto& w : input.weights) kind_set.insert(static_cast<int>(w.kind));
    for (RiskKind k : {RiskKind::vvrisk, RiskKind::var, RiskKind::vol}) {
        if (kind_set.count(static_cast<int>(k))) input.kinds.push_back(k);
    }
    std::set<int> year_set;
    for (const auto& s : input.scores) year_set.insert(s.year);
    input.years.assign(year_set.begin(), year_set.end());

    ReportBundle bundle = analyze(std::move(input));
    std::vector<std::string> notes;
    notes.push_back("rebuilt from data artifacts in " + dir.filename().string());
    notes.insert(notes.end(), bundle.notes.begin(), bundle.notes.end());
    bundle.notes = std::move(notes);
    return emit_reports(bundle, dir);
}

}  // namespace esgm
