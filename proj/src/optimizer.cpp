#include "esgm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "esgm/errors.hpp"
#include "esgm/rank_stats.hpp"
#include "esgm/rng.hpp"

namespace esgm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Big-wins comparison key for equal objectives: larger w_m first, then
// lexicographically larger (w_e, w_s, w_g).
std::tuple<double, double, double, double> tie_key(const WeightVector& w) {
    return {w.m, w.e, w.s, w.g};
}

bool better(double obj_a, const WeightVector& a, double obj_b, const WeightVector& b) {
    if (obj_a != obj_b) return obj_a > obj_b;
    return tie_key(a) > tie_key(b);
}

struct Evaluator {
    const Eigen::Ref<const PillarMatrix>& pillars;
    const Eigen::Ref<const Eigen::VectorXd>& risk;
    RiskKind kind;
    long max_evals;
    long evals = 0;

    bool exhausted() const { return evals >= max_evals; }

    // Consumes one unit of budget; call exhausted() first.
    double operator()(const WeightVector& w) {
        ++evals;
        return risk_objective(w, pillars, risk, kind);
    }
};

// One pattern-search descent from `start`. Polls the twelve simplex-
// tangent moves in a fixed order, accepts the first strict improvement,
// and halves the step once a full poll fails. Stops when the step falls
// below final_step or the budget runs out.
void local_search(Evaluator& eval, const OptimizerConfig& config, const WeightVector& start,
                  WeightVector& best_w, double& best_obj) {
    if (eval.exhausted()) return;
    WeightVector w = start;
    double obj = eval(w);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double delta = config.initial_step; delta >= config.final_step; delta /= 2.0) {
        const double d = delta * inv_sqrt2;
        bool improved = true;
        while (improved) {
            improved = false;
            for (int i = 0; i < 4 && !improved; ++i) {
                for (int j = 0; j < 4 && !improved; ++j) {
                    if (i == j) continue;
                    Eigen::Vector4d v = w.vec();
                    if (v[j] < d) continue;  // move would leave the simplex
                    v[i] += d;
                    v[j] -= d;
                    if (eval.exhausted()) {
                        if (better(obj, w, best_obj, best_w)) {
                            best_obj = obj;
                            best_w = w;
                        }
                        return;
                    }
                    const WeightVector cand = WeightVector::from_vec(v);
                    const double cand_obj = eval(cand);
                    if (cand_obj > obj) {
                        w = cand;
                        obj = cand_obj;
                        improved = true;
                    }
                }
            }
        }
    }
    if (better(obj, w, best_obj, best_w)) {
        best_obj = obj;
        best_w = w;
    }
}

}  // namespace

const char* to_string(RiskKind kind) {
    switch (kind) {
        case RiskKind::vvrisk: return "vvrisk";
        case RiskKind::var: return "var";
        case RiskKind::vol: return "vol";
    }
    throw std::invalid_argument("invalid RiskKind");
}

RiskKind risk_kind_from_string(const std::string& s) {
    if (s == "vvrisk") return RiskKind::vvrisk;
    if (s == "var") return RiskKind::var;
    if (s == "vol") return RiskKind::vol;
    throw std::invalid_argument("unknown risk kind '" + s + "' (expected vvrisk, var, or vol)");
}

void OptimizerConfig::validate() const {
    if (n_starts < 1) throw std::invalid_argument("OptimizerConfig: n_starts must be >= 1");
    if (!(final_step > 0.0 && final_step < initial_step && initial_step <= 1.0))
        throw std::invalid_argument("OptimizerConfig: need 0 < final_step < initial_step <= 1");
    if (max_evals < 1) throw std::invalid_argument("OptimizerConfig: max_evals must be >= 1");
    for (const auto& w : extra_starts) w.validate();
}

double risk_objective(const WeightVector& w, const Eigen::Ref<const PillarMatrix>& pillars,
                      const Eigen::Ref<const Eigen::VectorXd>& risk, RiskKind kind) {
    if (pillars.rows() != risk.size())
        throw std::invalid_argument("risk_objective: pillar rows and risk length differ");
    if (pillars.rows() < 10) throw std::invalid_argument("risk_objective: need at least 10 assets");
    w.validate();
    const Eigen::VectorXd scores = pillars * w.vec();
    try {
        const double tau = kendall_tau(scores, risk).tau;
        return kind == RiskKind::vol ? -tau : tau;
    } catch (const UndefinedStatError&) {
        return kNegInf;
    }
}

OptResult optimize_weights(const Eigen::Ref<const PillarMatrix>& pillars,
                           const Eigen::Ref<const Eigen::VectorXd>& risk, RiskKind kind,
                           const OptimizerConfig& config) {
    config.validate();
    if (pillars.rows() != risk.size())
        throw std::invalid_argument("optimize_weights: pillar rows and risk length differ");
    if (pillars.rows() < 10) throw std::invalid_argument("optimize_weights: need at least 10 assets");

    std::vector<WeightVector> starts = config.extra_starts;
    int n_random = config.n_starts;
    if (config.n_starts >= 5) {
        starts.push_back({1.0, 0.0, 0.0, 0.0});
        starts.push_back({0.0, 1.0, 0.0, 0.0});
        starts.push_back({0.0, 0.0, 1.0, 0.0});
        starts.push_back({0.0, 0.0, 0.0, 1.0});
        starts.push_back({0.25, 0.25, 0.25, 0.25});
        n_random -= 5;
    }
    Rng rng(config.seed);
    for (int i = 0; i < n_random; ++i) starts.push_back(WeightVector::from_vec(rng.simplex_point()));

    Evaluator eval{pillars, risk, kind, config.max_evals};
    OptResult result;
    result.objective = kNegInf;
    bool have_candidate = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (eval.exhausted()) break;
        WeightVector w = starts[i];
        double obj = kNegInf;
        local_search(eval, config, starts[i], w, obj);
        if (!have_candidate || better(obj, w, result.objective, result.weights)) {
            result.objective = obj;
            result.weights = w;
            result.start_index = static_cast<int>(i);
            have_candidate = true;
        }
    }
    result.evals = eval.evals;
    if (eval.evals == 0) throw SearchError("optimize_weights: budget exhausted before any feasible evaluation");
    if (!have_candidate || result.objective == kNegInf)
        throw DegenerateInstanceError("optimize_weights: objective undefined at every evaluated point");
    return result;
}

OptResult grid_search_weights(const Eigen::Ref<const PillarMatrix>& pillars,
                              const Eigen::Ref<const Eigen::VectorXd>& risk, RiskKind kind, double step) {
    if (!(step > 0.0 && step <= 0.5)) throw std::invalid_argument("grid_search_weights: step must be in (0, 0.5]");
    const long m = std::lround(1.0 / step);
    if (std::abs(m * step - 1.0) > 1e-9)
        throw std::invalid_argument("grid_search_weights: step must divide 1 evenly");
    if (pillars.rows() != risk.size())
        throw std::invalid_argument("grid_search_weights: pillar rows and risk length differ");
    if (pillars.rows() < 10) throw std::invalid_argument("grid_search_weights: need at least 10 assets");

    OptResult result;
    result.objective = kNegInf;
    bool any = false;
    long evals = 0;
    const double dm = static_cast<double>(m);
    for (long i = 0; i <= m; ++i) {
        for (long j = 0; i + j <= m; ++j) {
            for (long k = 0; i + j + k <= m; ++k) {
                const long l = m - i - j - k;
                const WeightVector w{static_cast<double>(i) / dm, static_cast<double>(j) / dm,
                                     static_cast<double>(k) / dm, static_cast<double>(l) / dm};
                const double obj = risk_objective(w, pillars, risk, kind);
                ++evals;
                if (obj == kNegInf) continue;
                if (!any || better(obj, w, result.objective, result.weights)) {
                    result.objective = obj;
                    result.weights = w;
                    any = true;
                }
            }
        }
    }
    result.evals = evals;
    if (!any) throw DegenerateInstanceError("grid_search_weights: objective undefined at every lattice point");
    return result;
}

}  // namespace esgm
