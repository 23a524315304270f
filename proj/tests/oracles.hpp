#ifndef ESGM_TESTS_ORACLES_HPP
#define ESGM_TESTS_ORACLES_HPP

// Slow, independent reimplementations used only to cross-check the
// library: every pair is enumerated explicitly and tie groups are
// counted via sorting, so none of the production shortcuts are shared.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace oracles {

struct PairCounts {
    long long n = 0;
    long long n0 = 0;          // all pairs
    long long concordant = 0;
    long long discordant = 0;
    long long tied_x = 0;      // pairs with x_i == x_j
    long long tied_y = 0;      // pairs with y_i == y_j
    long long tied_both = 0;   // pairs tied in both
    long long sum_t2 = 0, sum_u2 = 0;  // sum t(t-1) over x / y tie groups
    long long sum_t3 = 0, sum_u3 = 0;  // sum t(t-1)(t-2)
    long long sum_tv = 0, sum_uv = 0;  // sum t(t-1)(2t+5)
};

inline PairCounts pair_counts(const std::vector<double>& x, const std::vector<double>& y) {
    PairCounts c;
    c.n = static_cast<long long>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            ++c.n0;
            const bool ex = x[i] == x[j];
            const bool ey = y[i] == y[j];
            if (ex) ++c.tied_x;
            if (ey) ++c.tied_y;
            if (ex && ey) ++c.tied_both;
            if (!ex && !ey) {
                const bool same = (x[i] < x[j]) == (y[i] < y[j]);
                if (same)
                    ++c.concordant;
                else
                    ++c.discordant;
            }
        }
    }
    const auto group_sums = [](std::vector<double> v, long long& s2, long long& s3, long long& sv) {
        std::sort(v.begin(), v.end());
        std::size_t i = 0;
        while (i < v.size()) {
            std::size_t j = i;
            while (j < v.size() && v[j] == v[i]) ++j;
            const long long t = static_cast<long long>(j - i);
            s2 += t * (t - 1);
            s3 += t * (t - 1) * (t - 2);
            sv += t * (t - 1) * (2 * t + 5);
            i = j;
        }
    };
    group_sums(x, c.sum_t2, c.sum_t3, c.sum_tv);
    group_sums(y, c.sum_u2, c.sum_u3, c.sum_uv);
    return c;
}

// Tie-corrected tau-b straight from the definition.
inline double tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const PairCounts c = pair_counts(x, y);
    const double s = static_cast<double>(c.concordant - c.discordant);
    const double dx = static_cast<double>(c.n0 - c.tied_x);
    const double dy = static_cast<double>(c.n0 - c.tied_y);
    return s / std::sqrt(dx * dy);
}

inline std::filesystem::path fresh_dir(const std::string& name) {
    const std::filesystem::path p = std::filesystem::temp_directory_path() / ("esgm_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace oracles

#endif  // ESGM_TESTS_ORACLES_HPP
