#pragma once

// Material similarity and substitutability scoring. Attribute values are
// min-max normalized, fuzzified against configurable level sets, weighted by
// attribute dispersion and compared with an intuitionistic similarity ratio;
// single-link grouping at a threshold yields the substitution groups.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "prepos/common.hpp"

namespace prepos::classify {

/// Rows are materials (or cases), columns are decision factors.
struct AttributeMatrix {
    std::vector<std::string> factor_names;
    std::vector<std::vector<double>> rows;

    std::size_t factor_count() const {
        return rows.empty() ? factor_names.size() : rows[0].size();
    }

    void validate() const {
        const std::size_t k = factor_count();
        for (const auto& row : rows)
            if (row.size() != k) throw DimensionError("attribute rows differ in arity");
    }
};

struct NormalizedMatrix {
    AttributeMatrix matrix;
    std::vector<bool> constant_column;  // flagged, mapped to 0
};

/// Column-wise (x - min) / (max - min). Constant columns map to 0 and carry a
/// flag instead of producing NaN.
inline NormalizedMatrix min_max_normalize(const AttributeMatrix& input) {
    if (input.rows.empty())
        throw EmptyInput("attribute matrix has no rows");
    input.validate();
    const std::size_t k = input.factor_count();
    NormalizedMatrix out;
    out.matrix.factor_names = input.factor_names;
    out.matrix.rows.assign(input.rows.size(), std::vector<double>(k, 0.0));
    out.constant_column.assign(k, false);
    for (std::size_t j = 0; j < k; ++j) {
        double lo = input.rows[0][j], hi = input.rows[0][j];
        for (const auto& row : input.rows) {
            lo = std::min(lo, row[j]);
            hi = std::max(hi, row[j]);
        }
        if (hi == lo) {
            out.constant_column[j] = true;
            continue;
        }
        for (std::size_t i = 0; i < input.rows.size(); ++i)
            out.matrix.rows[i][j] = (input.rows[i][j] - lo) / (hi - lo);
    }
    return out;
}

/// Fuzzy level over an attribute axis: ramp up on (a, b), full scale D on
/// [b, c], ramp down on (c, d). Triangles set c == b; a degenerate ramp
/// (a == b or c == d) collapses to a shoulder.
struct TriangularFuzzySet {
    double a{0};
    double b{0};
    double c{0};
    double d{0};
    double scale{1.0};  // D in (0, 1]
    std::string label;

    static TriangularFuzzySet triangle(double a, double peak, double c, double scale = 1.0,
                                       std::string label = {}) {
        return {a, peak, peak, c, scale, std::move(label)};
    }
    static TriangularFuzzySet trapezoid(double a, double b, double c, double d,
                                        double scale = 1.0, std::string label = {}) {
        return {a, b, c, d, scale, std::move(label)};
    }

    void validate() const {
        if (!(a <= b && b <= c && c <= d))
            throw RangeError("fuzzy set vertices must be ordered a <= b <= c <= d");
        if (!(scale > 0.0) || scale > 1.0)
            throw RangeError("fuzzy set scale must be in (0, 1]");
    }
};

enum class MembershipVariant { standard, as_printed };

struct Membership {
    double mu{0};
    double nu{0};
};

namespace detail {

inline double standard_mu(double x, const TriangularFuzzySet& s) {
    if (x >= s.b && x <= s.c) return s.scale;  // plateau (a single point for triangles)
    if (x < s.b) {
        if (s.a == s.b || x <= s.a) return 0.0;  // left shoulder or out of support
        return s.scale * (x - s.a) / (s.b - s.a);
    }
    if (s.c == s.d) return 0.0;  // right shoulder: nothing beyond the plateau
    if (x >= s.d) return 0.0;
    return s.scale * (s.d - x) / (s.d - s.c);
}

/// The ramp formulas exactly as the source prints them: descending from D at
/// the left vertex, rising back toward the right one, and 1 everywhere else.
/// Kept selectable for reproducing published tables; not the default.
inline double as_printed_mu(double x, const TriangularFuzzySet& s) {
    double left = s.a, peak = s.b, right = s.d;
    if (x >= left && x < peak && peak > left)
        return (1.0 - (x - left) / (peak - left)) * s.scale;
    if (x >= peak && x < right && right > peak)
        return (1.0 - (right - x) / (right - peak)) * s.scale;
    return 1.0;
}

}  // namespace detail

/// Membership and non-membership of a value in one fuzzy level. The
/// non-membership is derived from mu with a hesitation margin so that
/// mu + nu <= 1 always holds.
inline Membership membership(double x, const TriangularFuzzySet& set,
                             MembershipVariant variant = MembershipVariant::standard,
                             double hesitation_margin = 0.1) {
    set.validate();
    if (!std::isfinite(x))
        throw RangeError("membership input must be finite");
    if (hesitation_margin < 0.0 || hesitation_margin > 1.0)
        throw RangeError("hesitation margin must be in [0, 1]");
    Membership m;
    m.mu = variant == MembershipVariant::standard ? detail::standard_mu(x, set)
                                                  : detail::as_printed_mu(x, set);
    m.nu = (1.0 - m.mu) * (1.0 - hesitation_margin);
    return m;
}

struct DispersionWeights {
    WeightVector weights;
    bool degenerate{false};  // all dispersions zero -> uniform
};

/// Factor weights proportional to the population standard deviation of each
/// column.
inline DispersionWeights dispersion_weights(const AttributeMatrix& input) {
    if (input.rows.size() < 2)
        throw InstanceTooSmall("dispersion weights need at least 2 rows");
    input.validate();
    const std::size_t k = input.factor_count();
    const double n = static_cast<double>(input.rows.size());
    std::vector<double> sd(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double mean = 0.0;
        for (const auto& row : input.rows) mean += row[j];
        mean /= n;
        double var = 0.0;
        for (const auto& row : input.rows) var += (row[j] - mean) * (row[j] - mean);
        sd[j] = std::sqrt(var / n);
    }
    DispersionWeights out;
    double total = std::accumulate(sd.begin(), sd.end(), 0.0);
    out.degenerate = total == 0.0;
    out.weights = normalized_weights(std::move(sd));
    return out;
}

/// Intuitionistic profile of one item: (mu, nu) per decision factor.
struct FuzzyProfile {
    std::vector<Membership> factors;
};

struct SimilarityResult {
    double value{0};
    std::string first;
    std::string second;
};

/// Weighted min/max ratio similarity over membership and non-membership
/// channels. A channel whose max-side sum is zero denotes perfect agreement
/// (min == max == 0), so its ratio is defined as 1.
inline SimilarityResult similarity(const FuzzyProfile& a, const FuzzyProfile& b,
                                   const WeightVector& weights) {
    if (a.factors.size() != b.factors.size() || a.factors.size() != weights.size())
        throw DimensionError("profiles and weights must agree in factor count");
    check_weights(weights);
    double mu_min = 0.0, mu_max = 0.0, nu_min = 0.0, nu_max = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        mu_min += weights[i] * std::min(a.factors[i].mu, b.factors[i].mu);
        mu_max += weights[i] * std::max(a.factors[i].mu, b.factors[i].mu);
        nu_min += weights[i] * std::min(a.factors[i].nu, b.factors[i].nu);
        nu_max += weights[i] * std::max(a.factors[i].nu, b.factors[i].nu);
    }
    double mu_ratio = mu_max == 0.0 ? 1.0 : mu_min / mu_max;
    double nu_ratio = nu_max == 0.0 ? 1.0 : nu_min / nu_max;
    return {0.5 * (mu_ratio + nu_ratio), {}, {}};
}

/// Weighted aggregation of similarity values.
inline double comprehensive_evaluation(const std::vector<SimilarityResult>& sims,
                                       const WeightVector& weights) {
    if (sims.size() != weights.size())
        throw DimensionError("similarities and weights differ in length");
    check_weights(weights);
    double acc = 0.0;
    for (std::size_t i = 0; i < sims.size(); ++i) acc += weights[i] * sims[i].value;
    return acc;
}

/// One material's catalog entry for classification.
struct MaterialProfile {
    std::string id;
    std::string kind_hint;  // "special" | "general" | empty
    std::vector<double> attributes;
};

struct SubstitutionGroup {
    std::vector<std::string> members;
    std::string kind_tag;  // majority kind hint; ties resolve to special
};

struct ClassificationResult {
    std::vector<std::string> material_ids;
    std::vector<std::vector<double>> similarity;  // symmetric, unit diagonal
    std::vector<SubstitutionGroup> groups;
    WeightVector weights;
    std::vector<bool> constant_column;
};

/// The four transport-convenience levels used as defaults when the config
/// supplies none. The last level is a trapezoid whose plateau runs to the
/// upper edge of its support.
inline std::vector<TriangularFuzzySet> default_levels() {
    return {
        TriangularFuzzySet::triangle(0.0, 0.0, 0.2, 1.0, "very_convenient"),
        TriangularFuzzySet::triangle(0.12, 0.32, 0.52, 1.0, "convenient"),
        TriangularFuzzySet::triangle(0.44, 0.64, 0.84, 1.0, "fair"),
        TriangularFuzzySet::trapezoid(0.76, 0.96, 1.16, 1.16, 1.0, "inconvenient"),
    };
}

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

/// Single-link partition of items given their pairwise similarity matrix:
/// any pair at or above the threshold joins, and joins are transitive.
/// Groups come out ordered by their smallest member index.
inline std::vector<std::vector<std::size_t>> group_by_similarity(
    const std::vector<std::vector<double>>& sims, double threshold) {
    const std::size_t n = sims.size();
    detail::UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (sims[i].size() != n)
            throw DimensionError("similarity matrix must be square");
        for (std::size_t j = i + 1; j < n; ++j)
            if (sims[i][j] >= threshold) uf.unite(i, j);
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::optional<std::size_t>> group_of_root(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = uf.find(i);
        if (!group_of_root[root]) {
            group_of_root[root] = groups.size();
            groups.emplace_back();
        }
        groups[*group_of_root[root]].push_back(i);
    }
    return groups;
}

/// Full classification pipeline: normalize -> fuzzify against every level ->
/// dispersion weights -> pairwise similarity -> single-link groups at
/// `threshold`. Thresholds above 1 leave every material alone.
inline ClassificationResult cluster_materials(
    const std::vector<MaterialProfile>& catalog, double threshold,
    const std::vector<TriangularFuzzySet>& levels = default_levels(),
    MembershipVariant variant = MembershipVariant::standard, double hesitation_margin = 0.1) {
    if (catalog.empty())
        throw EmptyInput("material catalog is empty");
    AttributeMatrix raw;
    for (const auto& m : catalog) raw.rows.push_back(m.attributes);
    auto normalized = min_max_normalize(raw);

    ClassificationResult result;
    result.constant_column = normalized.constant_column;
    for (const auto& m : catalog) result.material_ids.push_back(m.id);
    result.weights = catalog.size() >= 2
                         ? dispersion_weights(normalized.matrix).weights
                         : WeightVector(raw.factor_count(), 1.0 / raw.factor_count());

    // One intuitionistic channel per (factor, level) pair keeps the profile
    // sensitive to where a value sits on its axis; a factor's weight is split
    // evenly over its channels.
    if (levels.empty())
        throw EmptyInput("no fuzzy levels configured");
    const double level_count = static_cast<double>(levels.size());
    WeightVector channel_weights;
    for (double w : result.weights)
        for (std::size_t l = 0; l < levels.size(); ++l)
            channel_weights.push_back(w / level_count);
    std::vector<FuzzyProfile> profiles(catalog.size());
    for (std::size_t i = 0; i < catalog.size(); ++i)
        for (double x : normalized.matrix.rows[i])
            for (const auto& level : levels)
                profiles[i].factors.push_back(membership(x, level, variant, hesitation_margin));

    const std::size_t n = catalog.size();
    result.similarity.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto sim = similarity(profiles[i], profiles[j], channel_weights);
            result.similarity[i][j] = result.similarity[j][i] = sim.value;
        }

    for (const auto& members : group_by_similarity(result.similarity, threshold)) {
        SubstitutionGroup group;
        for (std::size_t idx : members) group.members.push_back(catalog[idx].id);
        result.groups.push_back(std::move(group));
    }
    for (auto& group : result.groups) {
        std::size_t specials = 0, generals = 0;
        for (const auto& id : group.members) {
            auto it = std::find_if(catalog.begin(), catalog.end(),
                                   [&](const MaterialProfile& m) { return m.id == id; });
            if (it->kind_hint == "special") ++specials;
            else if (it->kind_hint == "general") ++generals;
        }
        group.kind_tag = specials >= generals && specials > 0 ? "special" : "general";
    }
    return result;
}

}  // namespace prepos::classify
