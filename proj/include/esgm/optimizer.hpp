#ifndef ESGM_OPTIMIZER_HPP
#define ESGM_OPTIMIZER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esgm/scoring.hpp"

namespace esgm {

// Which downstream risk column the objective targets. var and vvrisk
// seek positive rank dependence; vol seeks negative, so its tau enters
// with a flipped sign and one maximization routine covers all three.
enum class RiskKind { vvrisk, var, vol };

const char* to_string(RiskKind kind);
RiskKind risk_kind_from_string(const std::string& s);

struct OptimizerConfig {
    int n_starts = 20;
    double initial_step = 1e-1;
    double final_step = 1e-5;
    long max_evals = 100000;  // shared across all starts of one problem
    std::uint64_t seed = 0;
    // Deterministic extra starting points evaluated before the standard
    // ones, e.g. a data provider's (w_E, w_S, w_G, 0); guarantees the
    // returned objective dominates these points even on a tight budget.
    std::vector<WeightVector> extra_starts;

    void validate() const;
};

struct OptResult {
    WeightVector weights;
    double objective = 0.0;
    long evals = 0;
    // Index into the evaluated start list (extra starts first, then
    // vertices/barycenter/random draws); -1 for grid search.
    int start_index = -1;
};

// Rows are assets, columns are the E, S, G, M pillar scores.
using PillarMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4>;

// Kendall tau-b between the weighted pillar score and the risk column,
// sign-flipped for vol. Returns -infinity when the weighted score is
// constant (tau undefined), so searches avoid degenerate regions.
double risk_objective(const WeightVector& w, const Eigen::Ref<const PillarMatrix>& pillars,
                      const Eigen::Ref<const Eigen::VectorXd>& risk, RiskKind kind);

// Multi-start pattern search over the weight simplex. Moves are
// w +- delta * (e_i - e_j)/sqrt(2), first strict improvement accepted,
// delta halved from initial_step while it stays >= final_step. Starts:
// extra_starts, then the four vertices and the barycenter (when
// n_starts >= 5), then Dirichlet(1,1,1,1) draws up to n_starts. Ties
// across starts break toward larger w_m, then lexicographically larger
// (w_e, w_s, w_g).
OptResult optimize_weights(const Eigen::Ref<const PillarMatrix>& pillars,
                           const Eigen::Ref<const Eigen::VectorXd>& risk, RiskKind kind,
                           const OptimizerConfig& config);

// Exhaustive lattice oracle over {(i,j,k,l)/m : i+j+k+l = m = 1/step};
// same tie-break as optimize_weights. step must divide 1 evenly.
OptResult grid_search_weights(const Eigen::Ref<const PillarMatrix>& pillars,
                              const Eigen::Ref<const Eigen::VectorXd>& risk, RiskKind kind, double step);

}  // namespace esgm

#endif  // ESGM_OPTIMIZER_HPP
