#include "esgm/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esgm/errors.hpp"
#include "esgm/panel.hpp"

namespace esgm {

void WeightVector::validate() const {
    for (double w : {e, s, g, m}) {
        if (!(w >= 0.0)) throw std::invalid_argument("weight components must be nonnegative");
    }
    if (std::abs(e + s + g + m - 1.0) > 1e-8) throw std::invalid_argument("weights must sum to 1");
}

bool WeightVector::is_valid() const {
    for (double w : {e, s, g, m}) {
        if (!(w >= 0.0)) return false;
    }
    return std::abs(e + s + g + m - 1.0) <= 1e-8;
}

const char* to_string(EsgmClass c) {
    switch (c) {
        case EsgmClass::A: return "A";
        case EsgmClass::B: return "B";
        case EsgmClass::C: return "C";
        case EsgmClass::D: return "D";
        case EsgmClass::Unrated: return "Unrated";
    }
    throw std::invalid_argument("invalid EsgmClass");
}

const char* to_string(ProviderClass c) {
    switch (c) {
        case ProviderClass::A: return "A";
        case ProviderClass::B: return "B";
        case ProviderClass::C: return "C";
        case ProviderClass::D: return "D";
    }
    throw std::invalid_argument("invalid ProviderClass");
}

EsgmClass esgm_class_from_string(const std::string& s) {
    if (s == "A") return EsgmClass::A;
    if (s == "B") return EsgmClass::B;
    if (s == "C") return EsgmClass::C;
    if (s == "D") return EsgmClass::D;
    if (s == "Unrated") return EsgmClass::Unrated;
    throw std::invalid_argument("unknown rating class '" + s + "'");
}

int zero_count(const AssetRecord& record) {
    int count = 0;
    for (const auto& score : record.categories) {
        if (!score.has_value())
            throw std::invalid_argument("zero_count requires all category scores present (asset " +
                                        record.asset_id + ")");
        if (*score == 0.0) ++count;
    }
    return count;
}

std::vector<double> missing_pillar_scores(const std::vector<int>& zero_counts) {
    if (zero_counts.empty()) throw std::invalid_argument("missing_pillar_scores: empty sector-year");
    const auto n = static_cast<double>(zero_counts.size());
    std::vector<double> scores(zero_counts.size());
    for (std::size_t p = 0; p < zero_counts.size(); ++p) {
        // lower[p] = assets p outranks (strictly fewer zeros), equal[p]
        // includes p itself; the half-weight on ties keeps the group
        // mean at exactly 50.
        int lower = 0;
        int equal = 0;
        for (int c : zero_counts) {
            if (c < zero_counts[p]) ++lower;
            else if (c == zero_counts[p]) ++equal;
        }
        scores[p] = 100.0 * (lower + equal / 2.0) / n;
    }
    return scores;
}

std::map<std::string, double> missing_pillar(const std::map<std::string, int>& zero_counts) {
    std::vector<int> counts;
    counts.reserve(zero_counts.size());
    for (const auto& [id, c] : zero_counts) counts.push_back(c);
    const std::vector<double> scores = missing_pillar_scores(counts);
    std::map<std::string, double> result;
    std::size_t i = 0;
    for (const auto& [id, c] : zero_counts) result.emplace(id, scores[i++]);
    return result;
}

namespace {

void check_score_range(double x, const char* name) {
    if (!(x >= 0.0 && x <= 100.0))
        throw std::invalid_argument(std::string(name) + " score must lie in [0,100]");
}

}  // namespace

double provider_esg_score(double e, double s, double g, const std::array<double, 3>& weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("provider weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-8) throw std::invalid_argument("provider weights must sum to 1");
    check_score_range(e, "e_pillar");
    check_score_range(s, "s_pillar");
    check_score_range(g, "g_pillar");
    return weights[0] * e + weights[1] * s + weights[2] * g;
}

double esgm_score(double e, double s, double g, double m, const WeightVector& w) {
    w.validate();
    check_score_range(e, "e_pillar");
    check_score_range(s, "s_pillar");
    check_score_range(g, "g_pillar");
    check_score_range(m, "m_pillar");
    const double score = w.e * e + w.s * s + w.g * g + w.m * m;
    // Convexity bounds the score in [0,100]; clamp only float dust.
    return std::clamp(score, 0.0, 100.0);
}

EsgmClass assign_esgm_class(double score) {
    check_score_range(score, "esgm");
    if (score <= 40.0) return EsgmClass::Unrated;
    if (score <= 50.0) return EsgmClass::D;
    if (score <= 60.0) return EsgmClass::C;
    if (score <= 70.0) return EsgmClass::B;
    return EsgmClass::A;
}

ProviderClass assign_provider_class(double score) {
    check_score_range(score, "provider esg");
    if (score > 75.0) return ProviderClass::A;
    if (score > 50.0) return ProviderClass::B;
    if (score >= 25.0) return ProviderClass::C;
    return ProviderClass::D;
}

}  // namespace esgm
