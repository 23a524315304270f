#ifndef ESGM_SCORING_HPP
#define ESGM_SCORING_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace esgm {

struct AssetRecord;

// Nonnegative E/S/G/M pillar weights summing to one.
struct WeightVector {
    double e = 0.25;
    double s = 0.25;
    double g = 0.25;
    double m = 0.25;

    // Throws std::invalid_argument unless all components are >= 0 and
    // the sum is 1 within 1e-8.
    void validate() const;
    bool is_valid() const;

    Eigen::Vector4d vec() const { return {e, s, g, m}; }
    static WeightVector from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
};

enum class EsgmClass { A, B, C, D, Unrated };
enum class ProviderClass { A, B, C, D };

const char* to_string(EsgmClass c);
const char* to_string(ProviderClass c);
EsgmClass esgm_class_from_string(const std::string& s);

// Number of category scores exactly equal to zero (zero encodes missing
// disclosure, so no epsilon band). Requires all ten categories present.
int zero_count(const AssetRecord& record);

// Percentile score of each element of `counts` within the group:
// 100 * (#strictly_below + #equal/2) / n. Higher count => higher score;
// group mean is always 50.
std::vector<double> missing_pillar_scores(const std::vector<int>& counts);

// Same ranking keyed by asset id for one sector-year.
std::map<std::string, double> missing_pillar(const std::map<std::string, int>& zero_counts);

// Provider-style three-pillar score: w_e*e + w_s*s + w_g*g with weights
// on the 3-simplex (sum 1 within 1e-8, nonnegative).
double provider_esg_score(double e, double s, double g, const std::array<double, 3>& weights);

// Four-pillar weighted score; always inside [0,100] for valid inputs.
double esgm_score(double e, double s, double g, double m, const WeightVector& w);

// Interval classes over [0,100]:
//   A (70,100], B (60,70], C (50,60], D (40,50], Unrated [0,40].
EsgmClass assign_esgm_class(double score);

// Provider classes over [0,100]:
//   A (75,100], B (50,75], C [25,50], D [0,25).
ProviderClass assign_provider_class(double score);

}  // namespace esgm

#endif  // ESGM_SCORING_HPP
