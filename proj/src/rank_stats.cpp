#include "esgm/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "esgm/errors.hpp"
#include "esgm/rng.hpp"

namespace esgm {

namespace {

void check_pair(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("kendall: vectors differ in length");
    if (x.size() < 2) throw std::invalid_argument("kendall: need at least 2 observations");
    if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("kendall: non-finite input");
}

// Counts pairs i<j (in the x-sorted order) with y_i > y_j via merge sort.
long long merge_count_inversions(std::vector<double>& y, std::vector<double>& tmp, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    long long inv = merge_count_inversions(y, tmp, lo, mid) + merge_count_inversions(y, tmp, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (y[j] < y[i]) {
            inv += static_cast<long long>(mid - i);
            tmp[k++] = y[j++];
        } else {
            tmp[k++] = y[i++];
        }
    }
    while (i < mid) tmp[k++] = y[i++];
    while (j < hi) tmp[k++] = y[j++];
    std::copy(tmp.begin() + static_cast<long>(lo), tmp.begin() + static_cast<long>(hi),
              y.begin() + static_cast<long>(lo));
    return inv;
}

void accumulate_tie_group(long long size, long long& s2, long long& s3, long long& sv) {
    if (size < 2) return;
    s2 += size * (size - 1);
    s3 += size * (size - 1) * (size - 2);
    sv += size * (size - 1) * (2 * size + 5);
}

// Null variance of the pair statistic S with tie correction.
double null_variance(const KendallCounts& c) {
    const double n = static_cast<double>(c.n);
    const double v0 = n * (n - 1.0) * (2.0 * n + 5.0);
    double var = (v0 - static_cast<double>(c.sum_tv) - static_cast<double>(c.sum_uv)) / 18.0;
    var += static_cast<double>(c.sum_t3) * static_cast<double>(c.sum_u3) / (9.0 * n * (n - 1.0) * (n - 2.0));
    var += static_cast<double>(c.sum_t2) * static_cast<double>(c.sum_u2) / (2.0 * n * (n - 1.0));
    return var;
}

// P(D <= d_obs) and P(D >= d_obs) where D is the inversion count of a
// uniform random permutation of n distinct items. Counts held as
// doubles; they stay below 50! which is well inside double range.
void exact_inversion_tails(int n, long long d_obs, double& p_le, double& p_ge) {
    const long long max_inv = static_cast<long long>(n) * (n - 1) / 2;
    std::vector<double> row(static_cast<std::size_t>(max_inv) + 1, 0.0);
    std::vector<double> next(row.size(), 0.0);
    row[0] = 1.0;
    long long cur_max = 0;
    for (int k = 2; k <= n; ++k) {
        const long long new_max = cur_max + (k - 1);
        // next[d] = sum_{j=0..min(d,k-1)} row[d-j], via a sliding window.
        double window = 0.0;
        for (long long d = 0; d <= new_max; ++d) {
            if (d <= cur_max) window += row[static_cast<std::size_t>(d)];
            if (d - k >= 0 && d - k <= cur_max) window -= row[static_cast<std::size_t>(d - k)];
            next[static_cast<std::size_t>(d)] = window;
        }
        std::swap(row, next);
        cur_max = new_max;
    }
    double below = 0.0, above = 0.0, total = 0.0;
    for (long long d = 0; d <= max_inv; ++d) {
        const double c = row[static_cast<std::size_t>(d)];
        total += c;
        if (d <= d_obs) below += c;
        if (d >= d_obs) above += c;
    }
    p_le = below / total;
    p_ge = above / total;
}

}  // namespace

KendallCounts kendall_counts(const double* x, const double* y, int n) {
    KendallCounts c;
    c.n = n;
    c.n0 = static_cast<long long>(n) * (n - 1) / 2;

    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // Tie runs in x, and joint (x, y) tie runs inside them.
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && x[idx[static_cast<std::size_t>(j)]] == x[idx[static_cast<std::size_t>(i)]]) ++j;
        const long long t = j - i;
        c.n1 += t * (t - 1) / 2;
        accumulate_tie_group(t, c.sum_t2, c.sum_t3, c.sum_tv);
        for (int a = i; a < j;) {
            int b = a;
            while (b < j && y[idx[static_cast<std::size_t>(b)]] == y[idx[static_cast<std::size_t>(a)]]) ++b;
            const long long v = b - a;
            c.n3 += v * (v - 1) / 2;
            a = b;
        }
        i = j;
    }

    // Tie runs in y.
    {
        std::vector<double> ys(y, y + n);
        std::sort(ys.begin(), ys.end());
        for (int i = 0; i < n;) {
            int j = i;
            while (j < n && ys[static_cast<std::size_t>(j)] == ys[static_cast<std::size_t>(i)]) ++j;
            const long long u = j - i;
            c.n2 += u * (u - 1) / 2;
            accumulate_tie_group(u, c.sum_u2, c.sum_u3, c.sum_uv);
            i = j;
        }
    }

    // Discordant pairs = y-inversions in x-sorted order (x ties were
    // sorted by y, so equal-x pairs never count; equal y never counts).
    std::vector<double> yseq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) yseq[static_cast<std::size_t>(i)] = y[idx[static_cast<std::size_t>(i)]];
    std::vector<double> tmp(yseq.size());
    const long long discordant = merge_count_inversions(yseq, tmp, 0, yseq.size());

    c.s = c.n0 - c.n1 - c.n2 + c.n3 - 2 * discordant;
    return c;
}

TauResult kendall_tau(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
    check_pair(x, y);
    const int n = static_cast<int>(x.size());
    const KendallCounts c = kendall_counts(x.data(), y.data(), n);
    if (c.n1 == c.n0) throw UndefinedStatError("kendall: x is constant, tau undefined");
    if (c.n2 == c.n0) throw UndefinedStatError("kendall: y is constant, tau undefined");
    TauResult r;
    r.tau = tau_b_from_counts(c);
    r.n = n;
    r.tied_x = c.n1 > 0;
    r.tied_y = c.n2 > 0;
    return r;
}

TestResult independence_test(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                             Alternative alternative) {
    check_pair(x, y);
    const int n = static_cast<int>(x.size());
    if (n < 10) throw std::invalid_argument("independence_test: need n >= 10");

    const KendallCounts c = kendall_counts(x.data(), y.data(), n);
    if (c.n1 == c.n0) throw UndefinedStatError("independence_test: x is constant");
    if (c.n2 == c.n0) throw UndefinedStatError("independence_test: y is constant");

    TestResult res;
    res.tau = tau_b_from_counts(c);
    res.alternative = alternative;

    const bool ties = c.n1 > 0 || c.n2 > 0;
    if (!ties && n < 50) {
        res.method = TestMethod::exact;
        // S = n0 - 2D for tie-free data.
        const long long d_obs = (c.n0 - c.s) / 2;
        double p_le, p_ge;
        exact_inversion_tails(n, d_obs, p_le, p_ge);
        // Larger S means fewer inversions.
        res.p_value = alternative == Alternative::greater ? p_le : p_ge;
    } else {
        res.method = TestMethod::normal_approx;
        const double sd = std::sqrt(null_variance(c));
        const double s = static_cast<double>(c.s);
        if (alternative == Alternative::greater) {
            res.p_value = normal_sf((s - 1.0) / sd);
        } else {
            res.p_value = normal_cdf((s + 1.0) / sd);
        }
    }
    res.p_value = std::min(1.0, std::max(0.0, res.p_value));
    return res;
}

double permutation_pvalue(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                          Alternative alternative, int n_perm, std::uint64_t seed) {
    check_pair(x, y);
    if (n_perm < 1000) throw std::invalid_argument("permutation_pvalue: need n_perm >= 1000");
    const int n = static_cast<int>(x.size());

    const KendallCounts obs = kendall_counts(x.data(), y.data(), n);
    if (obs.n1 == obs.n0) throw UndefinedStatError("permutation_pvalue: x is constant");
    if (obs.n2 == obs.n0) throw UndefinedStatError("permutation_pvalue: y is constant");

    // Permuting y preserves both marginal tie multisets, so the tau-b
    // denominator is invariant and comparing the integer statistic S is
    // equivalent to comparing tau.
    Rng rng(seed);
    std::vector<double> perm(y.data(), y.data() + n);
    long long at_least_as_extreme = 0;
    for (int b = 0; b < n_perm; ++b) {
        rng.shuffle(perm);
        const KendallCounts cb = kendall_counts(x.data(), perm.data(), n);
        if (alternative == Alternative::greater ? cb.s >= obs.s : cb.s <= obs.s) ++at_least_as_extreme;
    }
    return static_cast<double>(1 + at_least_as_extreme) / static_cast<double>(n_perm + 1);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace esgm
