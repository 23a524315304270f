// Acceptance gate: ten self-contained checks, one PASS/FAIL line each.
// Exit status is zero only when every check passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esgm/csv.hpp"
#include "esgm/optimizer.hpp"
#include "esgm/pipeline.hpp"
#include "esgm/rank_stats.hpp"
#include "esgm/risk.hpp"
#include "esgm/rng.hpp"
#include "esgm/scoring.hpp"
#include "esgm/synthetic.hpp"
#include "oracles.hpp"

using namespace esgm;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool condition, const std::string& note) {
        if (!condition && ok) {
            ok = false;
            detail << note;
        }
    }
};

Eigen::VectorXd to_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// ---------------------------------------------------------------- 1 & 2

bool provider_example(std::string& detail) {
    const double got = provider_esg_score(0.00, 63.01, 54.77, {0.140, 0.394, 0.466});
    detail = "provider_esg_score = " + csv::format_fixed6(got);
    return std::abs(got - 50.35) <= 0.005;
}

bool m_pillar_example(std::string& detail) {
    const std::vector<double> got = missing_pillar_scores({3, 0, 3, 2});
    const std::vector<double> want = {75.0, 12.5, 75.0, 37.5};
    detail = "scores = {" + csv::format_roundtrip(got[0]) + ", " + csv::format_roundtrip(got[1]) + ", " +
             csv::format_roundtrip(got[2]) + ", " + csv::format_roundtrip(got[3]) + "}";
    const double mean = (got[0] + got[1] + got[2] + got[3]) / 4.0;
    return got == want && mean == 50.0;
}

// ------------------------------------------------------------------- 3

bool m_pillar_properties(std::string& detail) {
    const auto start = Clock::now();
    Rng rng(1001);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + rng.uniform_int(200);
        std::vector<int> counts(n);
        // Mix heavy and light tie structures.
        const int levels = trial % 2 ? 11 : 2 + rng.uniform_int(9);
        for (auto& c : counts) c = rng.uniform_int(levels);
        const std::vector<double> scores = missing_pillar_scores(counts);
        double sum = 0.0;
        for (double s : scores) {
            if (!(s >= 0.0 && s <= 100.0)) {
                detail = "score out of range in trial " + std::to_string(trial);
                return false;
            }
            sum += s;
        }
        if (std::abs(sum / n - 50.0) > 1e-9) {
            detail = "group mean " + csv::format_roundtrip(sum / n) + " in trial " + std::to_string(trial);
            return false;
        }
    }
    const double elapsed = seconds_since(start);
    detail = "1000 sector-years in " + csv::format_fixed6(elapsed) + " s";
    return elapsed < 5.0;
}

// ------------------------------------------------------------------- 4

bool tau_oracle_equivalence(std::string& detail) {
    const auto start = Clock::now();
    Rng rng(2002);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + rng.uniform_int(199);
        std::vector<double> x(n), y(n);
        const int lx = trial % 3 == 0 ? 1 + rng.uniform_int(8) : 0;
        const int ly = trial % 4 == 0 ? 1 + rng.uniform_int(8) : 0;
        for (int i = 0; i < n; ++i) {
            x[i] = lx ? static_cast<double>(rng.uniform_int(lx + 1)) : rng.uniform01();
            y[i] = ly ? static_cast<double>(rng.uniform_int(ly + 1)) : rng.uniform01();
        }
        const auto constant = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [&v](double a) { return a == v[0]; });
        };
        if (constant(x) || constant(y)) continue;

        const double got = kendall_tau(to_vec(x), to_vec(y)).tau;
        const double want = oracles::tau_b(x, y);
        if (std::abs(got - want) > 1e-12) {
            detail = "oracle mismatch " + csv::format_roundtrip(got - want) + " in trial " +
                     std::to_string(trial);
            return false;
        }
        // Monotone invariance and antisymmetry must hold bit-exactly.
        std::vector<double> fx(x), ny(y);
        for (auto& v : fx) v = 5.0 * v + 2.0;
        for (auto& v : ny) v = -v;
        if (kendall_tau(to_vec(fx), to_vec(y)).tau != got ||
            kendall_tau(to_vec(x), to_vec(ny)).tau != -got) {
            detail = "invariance violated in trial " + std::to_string(trial);
            return false;
        }
    }
    const double elapsed = seconds_since(start);
    detail = "500 pairs in " + csv::format_fixed6(elapsed) + " s";
    return elapsed < 10.0;
}

// ------------------------------------------------------------------- 5

bool test_calibration(std::string& detail) {
    const auto start = Clock::now();
    Rng rng(3003);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = trial % 2 ? 60 : 30;
        std::vector<double> x(n), y(n);
        // Mixed ties: a few discrete levels against contaminated ranks.
        const int lx = 3 + rng.uniform_int(6);
        for (int i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.uniform_int(lx));
            y[i] = 0.3 * x[i] + rng.normal();
            if (trial % 3 == 0) y[i] = std::floor(y[i] * 2.0) / 2.0;  // tie y too
        }
        const Alternative alt = trial % 2 ? Alternative::less : Alternative::greater;
        const TestResult approx = independence_test(to_vec(x), to_vec(y), alt);
        if (approx.method != TestMethod::normal_approx) {
            detail = "expected the tie-corrected path in trial " + std::to_string(trial);
            return false;
        }
        const double p_perm = permutation_pvalue(to_vec(x), to_vec(y), alt, 10000,
                                                 9000 + static_cast<std::uint64_t>(trial));
        worst = std::max(worst, std::abs(approx.p_value - p_perm));
        if (std::abs(approx.p_value - p_perm) > 0.02) {
            detail = "p mismatch " + csv::format_fixed6(approx.p_value) + " vs " +
                     csv::format_fixed6(p_perm) + " in trial " + std::to_string(trial);
            return false;
        }
    }
    const double elapsed = seconds_since(start);
    detail = "max |p_approx - p_perm| = " + csv::format_fixed6(worst) + " over 50 instances in " +
             csv::format_fixed6(elapsed) + " s";
    return elapsed < 60.0;
}

// --------------------------------------------------------------- 6 & 8

struct Instance {
    PillarMatrix pillars;
    Eigen::VectorXd risk;
    RiskKind kind = RiskKind::vvrisk;
};

// Pillar scores uniform, risk a noisy monotone blend of the pillars so
// the optimum is interior and nontrivial.
Instance make_instance(int n, std::uint64_t seed) {
    Instance inst;
    inst.pillars.resize(n, 4);
    inst.risk.resize(n);
    Rng rng(seed);
    Eigen::Vector4d blend = rng.simplex_point();
    const double noise = 0.2 + 0.6 * rng.uniform01();
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < 4; ++c) inst.pillars(i, c) = 100.0 * rng.uniform01();
        inst.risk[i] = inst.pillars.row(i).dot(blend) / 100.0 + noise * rng.normal();
    }
    inst.kind = static_cast<RiskKind>(seed % 3);
    if (inst.kind == RiskKind::vol) inst.risk = -inst.risk;
    return inst;
}

std::vector<Instance> benchmark_instances() {
    std::vector<Instance> instances;
    const int sizes[3] = {23, 40, 82};
    for (int which = 0; which < 30; ++which) {
        instances.push_back(make_instance(sizes[which % 3], 4000 + static_cast<std::uint64_t>(which)));
    }
    return instances;
}

bool optimizer_vs_grid(std::string& detail) {
    const auto start = Clock::now();
    double worst = 0.0;
    int which = 0;
    for (const Instance& inst : benchmark_instances()) {
        OptimizerConfig config;
        config.seed = 500 + static_cast<std::uint64_t>(which);
        const OptResult got = optimize_weights(inst.pillars, inst.risk, inst.kind, config);
        const OptResult grid = grid_search_weights(inst.pillars, inst.risk, inst.kind, 0.02);
        worst = std::max(worst, grid.objective - got.objective);
        if (got.objective < grid.objective - 0.01) {
            detail = "instance " + std::to_string(which) + ": search " +
                     csv::format_fixed6(got.objective) + " < grid " + csv::format_fixed6(grid.objective) +
                     " - 0.01";
            return false;
        }
        ++which;
    }
    const double elapsed = seconds_since(start);
    detail = "worst shortfall vs grid = " + csv::format_fixed6(worst) + " over 30 instances in " +
             csv::format_fixed6(elapsed) + " s";
    return elapsed < 120.0;
}

bool dominance_property(std::string& detail) {
    Rng rng(6006);
    int which = 0;
    for (const Instance& inst : benchmark_instances()) {
        OptimizerConfig config;
        config.seed = 700 + static_cast<std::uint64_t>(which);
        for (int p = 0; p < 3; ++p) {
            // A provider vector never weights the M-pillar.
            Eigen::Vector4d v = rng.simplex_point();
            const double esg_mass = v[0] + v[1] + v[2];
            const WeightVector provider{v[0] / esg_mass, v[1] / esg_mass, v[2] / esg_mass, 0.0};
            config.extra_starts.push_back(provider);
        }
        const OptResult got = optimize_weights(inst.pillars, inst.risk, inst.kind, config);
        for (const WeightVector& provider : config.extra_starts) {
            const double at_provider = risk_objective(provider, inst.pillars, inst.risk, inst.kind);
            if (!(got.objective >= at_provider)) {
                detail = "instance " + std::to_string(which) + ": optimized " +
                         csv::format_fixed6(got.objective) + " < provider " +
                         csv::format_fixed6(at_provider);
                return false;
            }
        }
        config.extra_starts.clear();
        ++which;
    }
    detail = "optimized objective dominates 90 embedded provider vectors";
    return true;
}

// ------------------------------------------------------------------- 7

bool planted_recovery(std::string& detail) {
    int hits = 0;
    for (int seed = 0; seed < 100; ++seed) {
        SyntheticSpec spec;
        spec.sectors = {{"Planted", 40}};
        spec.years = {2018};
        spec.zero_prob.fill(0.4);
        spec.strength = 1.0;
        spec.planted_pillar = "m";
        spec.seed = static_cast<std::uint64_t>(seed);
        const auto [panel, prices] = generate_synthetic_panel(spec);
        const RiskTable risk = build_risk_table(prices, {2019});

        std::vector<int> zeros;
        zeros.reserve(panel.records.size());
        for (const auto& rec : panel.records) zeros.push_back(zero_count(rec));
        const std::vector<double> m_scores = missing_pillar_scores(zeros);

        PillarMatrix pillars(static_cast<Eigen::Index>(panel.records.size()), 4);
        Eigen::VectorXd vv(static_cast<Eigen::Index>(panel.records.size()));
        for (std::size_t i = 0; i < panel.records.size(); ++i) {
            const auto& rec = panel.records[i];
            pillars.row(static_cast<Eigen::Index>(i))
                << *rec.e_pillar, *rec.s_pillar, *rec.g_pillar, m_scores[i];
            vv[static_cast<Eigen::Index>(i)] = risk.find(rec.asset_id, 2019)->vv;
        }
        OptimizerConfig config;
        config.seed = static_cast<std::uint64_t>(seed);
        const OptResult result = optimize_weights(pillars, vv, RiskKind::vvrisk, config);
        if (result.weights.m >= 0.9) ++hits;
    }
    detail = "w_m >= 0.9 in " + std::to_string(hits) + "/100 seeds";
    return hits >= 95;
}

// ------------------------------------------------------------------- 9

bool pipeline_structure(std::string& detail) {
    const fs::path dir = oracles::fresh_dir("accept_structure");
    SyntheticSpec spec;
    for (int s = 0; s < 10; ++s) spec.sectors.push_back({"Sector" + std::to_string(s), 12});
    spec.years = {2016, 2017, 2018};
    spec.zero_prob.fill(0.35);
    spec.strength = 0.8;
    spec.planted_pillar = "m";
    spec.seed = 909;
    const auto [panel, prices] = generate_synthetic_panel(spec);
    save_asset_panel(panel, dir / "assets.csv");
    save_price_history(prices, dir / "prices.csv");

    RunConfig config;
    config.assets_path = dir / "assets.csv";
    config.prices_path = dir / "prices.csv";
    config.score_years = spec.years;
    config.output_dir = dir / "out";
    config.optimizer.n_starts = 8;
    config.optimizer.seed = 42;
    config.jobs = 4;
    run_pipeline(config);

    const csv::Table weights = csv::read_table(
        config.output_dir / "weights.csv",
        {"sector", "year", "risk_kind", "w_e", "w_s", "w_g", "w_m", "objective", "evals"});
    if (weights.rows.size() != 90) {
        detail = "expected 90 weight rows, found " + std::to_string(weights.rows.size());
        return false;
    }

    const csv::Table scores = csv::read_table(
        dir / "out" / "scores.csv",
        {"asset_id", "sector", "year", "m_pillar", "esgm", "esgm_class", "provider_class"});
    const std::set<std::string> classes = {"A", "B", "C", "D", "Unrated"};
    for (const auto& row : scores.rows) {
        if (row[4].empty() || !classes.count(row[5])) {
            detail = "asset " + row[0] + " year " + row[2] + " lacks exactly one rating class";
            return false;
        }
    }

    // Interval boundaries from the rating map.
    const bool boundaries_ok =
        assign_esgm_class(40.0) == EsgmClass::Unrated && assign_esgm_class(40.5) == EsgmClass::D &&
        assign_esgm_class(50.0) == EsgmClass::D && assign_esgm_class(50.5) == EsgmClass::C &&
        assign_esgm_class(60.0) == EsgmClass::C && assign_esgm_class(60.5) == EsgmClass::B &&
        assign_esgm_class(70.0) == EsgmClass::B && assign_esgm_class(70.5) == EsgmClass::A;
    if (!boundaries_ok) {
        detail = "class boundaries at 40/50/60/70 are misassigned";
        return false;
    }
    detail = "90 weight rows; " + std::to_string(scores.rows.size()) +
             " scored assets each carry exactly one class";
    return true;
}

// ------------------------------------------------------------------ 10

bool determinism(std::string& detail) {
    const fs::path dir = oracles::fresh_dir("accept_determinism");
    SyntheticSpec spec;
    spec.sectors = {{"North", 12}, {"South", 12}, {"East", 12}, {"West", 12}};
    spec.years = {2017, 2018};
    spec.zero_prob.fill(0.3);
    spec.strength = 0.6;
    spec.seed = 777;
    const auto [panel, prices] = generate_synthetic_panel(spec);
    save_asset_panel(panel, dir / "assets.csv");
    save_price_history(prices, dir / "prices.csv");

    const auto run_into = [&](const fs::path& out, int jobs) {
        RunConfig config;
        config.assets_path = dir / "assets.csv";
        config.prices_path = dir / "prices.csv";
        config.score_years = spec.years;
        config.output_dir = out;
        config.optimizer.n_starts = 8;
        config.optimizer.seed = 1234;
        config.jobs = jobs;
        run_pipeline(config);
    };
    run_into(dir / "out_a", 1);
    run_into(dir / "out_b", 4);

    std::set<std::string> names_a, names_b;
    for (const auto& entry : fs::directory_iterator(dir / "out_a")) names_a.insert(entry.path().filename());
    for (const auto& entry : fs::directory_iterator(dir / "out_b")) names_b.insert(entry.path().filename());
    if (names_a != names_b || names_a.empty()) {
        detail = "output directories disagree on their file sets";
        return false;
    }
    for (const std::string& name : names_a) {
        std::ifstream fa(dir / "out_a" / name, std::ios::binary);
        std::ifstream fb(dir / "out_b" / name, std::ios::binary);
        const std::string a((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        const std::string b((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        if (a != b) {
            detail = name + " differs between identical runs";
            return false;
        }
    }
    detail = std::to_string(names_a.size()) + " files byte-identical across reruns";
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "provider three-pillar worked example", provider_example},
        {2, "missing-pillar worked example", m_pillar_example},
        {3, "missing-pillar bounds and mean-50 property suite", m_pillar_properties},
        {4, "tau oracle equivalence and exact invariances", tau_oracle_equivalence},
        {5, "approximate p-values calibrated against permutation", test_calibration},
        {6, "pattern search vs exhaustive grid oracle", optimizer_vs_grid},
        {7, "planted M-pillar weight recovery", planted_recovery},
        {8, "optimized objective dominates provider weights", dominance_property},
        {9, "pipeline emits the full weight/rating structure", pipeline_structure},
        {10, "byte-identical reruns", determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("criterion %2d: %s - %s (%s)\n", criterion.id, ok ? "PASS" : "FAIL",
                    criterion.title, detail.c_str());
        std::fflush(stdout);
    }
    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
