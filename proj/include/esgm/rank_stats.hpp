#ifndef ESGM_RANK_STATS_HPP
#define ESGM_RANK_STATS_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace esgm {

enum class Alternative { greater, less };
enum class TestMethod { exact, normal_approx };

struct TauResult {
    double tau = 0.0;
    int n = 0;
    bool tied_x = false;
    bool tied_y = false;
};

struct TestResult {
    double tau = 0.0;
    Alternative alternative = Alternative::greater;
    double p_value = 1.0;
    TestMethod method = TestMethod::normal_approx;
};

// Exact integer pair counts underlying the tau-b estimator and the
// tie-corrected null variance. n0 = n(n-1)/2; n1/n2 are tied pairs in
// x/y; n3 tied in both; s = concordant minus discordant.
struct KendallCounts {
    long long n = 0;
    long long n0 = 0, n1 = 0, n2 = 0, n3 = 0;
    long long s = 0;
    // Tie-group sums over x groups of size t and y groups of size u.
    long long sum_t2 = 0, sum_u2 = 0;        // sum t(t-1), sum u(u-1)
    long long sum_t3 = 0, sum_u3 = 0;        // sum t(t-1)(t-2), sum u(u-1)(u-2)
    long long sum_tv = 0, sum_uv = 0;        // sum t(t-1)(2t+5), sum u(u-1)(2u+5)
};

// Merge-sort (O(n log n)) pair counting; all counts are exact integers,
// so any algorithm producing the same counts yields a bit-identical tau.
KendallCounts kendall_counts(const double* x, const double* y, int n);

inline double tau_b_from_counts(const KendallCounts& c) {
    return static_cast<double>(c.s) /
           std::sqrt(static_cast<double>(c.n0 - c.n1) * static_cast<double>(c.n0 - c.n2));
}

// Tie-corrected Kendall tau-b. Throws std::invalid_argument on length
// mismatch, n < 2, or non-finite input; UndefinedStatError when either
// vector is constant.
TauResult kendall_tau(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

// One-sided test of independence (null: tau = 0). Exact enumeration of
// the pair-statistic distribution for tie-free n < 50, otherwise a
// normal approximation with tie-corrected variance and a continuity
// correction of one unit toward zero. Requires n >= 10.
TestResult independence_test(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                             Alternative alternative);

// Seeded Monte-Carlo permutation p-value with the add-one correction
// p = (1 + #{permutations at least as extreme}) / (n_perm + 1).
// Requires n_perm >= 1000.
double permutation_pvalue(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                          Alternative alternative, int n_perm, std::uint64_t seed);

// Standard normal upper/lower tail.
double normal_cdf(double z);
double normal_sf(double z);

}  // namespace esgm

#endif  // ESGM_RANK_STATS_HPP
