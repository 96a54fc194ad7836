#pragma once

// Disaster-coupling analysis: AHP indicator weights with consistency check,
// grey relational coefficients, composite/efficiency scores and the
// multi-subsystem coupling degree.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "prepos/common.hpp"

namespace prepos::coupling {

/// Square judgment matrix on the Saaty 1-9 scale. Stored verbatim: inputs
/// that are only approximately reciprocal (rounded entries such as 0.33 vs 3)
/// are kept as-is and reported through `reciprocal()`.
struct PairwiseMatrix {
    std::vector<double> entries;  // row-major n x n
    std::size_t n{0};

    double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }

    static PairwiseMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        PairwiseMatrix m;
        m.n = rows.size();
        m.entries.reserve(m.n * m.n);
        for (const auto& row : rows) {
            if (row.size() != m.n)
                throw InvalidMatrix("judgment matrix must be square");
            m.entries.insert(m.entries.end(), row.begin(), row.end());
        }
        return m;
    }

    /// Positivity and unit diagonal. Throws InvalidMatrix / InstanceTooSmall.
    void validate() const {
        if (n < 2)
            throw InstanceTooSmall("judgment matrix needs at least 2 indicators");
        if (entries.size() != n * n)
            throw InvalidMatrix("judgment matrix entry count does not match n*n");
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double v = at(i, j);
                if (!std::isfinite(v) || v <= 0.0)
                    throw InvalidMatrix("judgment matrix entries must be positive");
            }
            if (std::abs(at(i, i) - 1.0) > 1e-12)
                throw InvalidMatrix("judgment matrix diagonal must be 1");
        }
    }

    /// True when entries[i][j] * entries[j][i] stays within `tol` of 1.
    bool reciprocal(double tol = 1e-6) const {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(at(i, j) * at(j, i) - 1.0) > tol) return false;
        return true;
    }
};

struct ConsistencyReport {
    double lambda_max{0};
    double cr{0};
    double ri_used{0};
    bool consistent{false};   // cr < 0.1
    bool ri_degenerate{false};  // n <= 2, RI = 0
};

/// Saaty random consistency index. Defined for n up to 7.
inline double ri_value(std::size_t n) {
    static constexpr std::array<double, 8> table{0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32};
    if (n >= table.size())
        throw InvalidMatrix("no RI value tabulated for n > 7");
    return table[n];
}

/// Row geometric means, normalized to sum 1.
inline WeightVector ahp_weights(const PairwiseMatrix& m) {
    m.validate();
    WeightVector w(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        double log_sum = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) log_sum += std::log(m.at(i, j));
        w[i] = std::exp(log_sum / static_cast<double>(m.n));
    }
    return normalized_weights(std::move(w));
}

namespace detail {

/// Power iteration on a positive matrix, seeded from `v`. Returns the
/// dominant eigenvalue as the mean Rayleigh ratio (1/n) * sum (Bv)_i / v_i,
/// which is exact once the ratios have collapsed to a common value.
inline double dominant_eigenvalue(const PairwiseMatrix& m, std::vector<double> v,
                                  double tol = 1e-13, int max_iter = 20000) {
    const std::size_t n = m.n;
    std::vector<double> u(n);
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += m.at(i, j) * v[j];
            u[i] = acc;
            sum += acc;
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ratio = u[i] / v[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            mean += ratio;
        }
        lambda = mean / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = u[i] / sum;
        if (hi - lo < tol * std::max(1.0, hi)) break;
    }
    return lambda;
}

}  // namespace detail

/// Consistency check for a judgment matrix. `weights` (normally the
/// ahp_weights output) seed the eigenvalue iteration; lambda_max is the
/// converged dominant eigenvalue, CR = (lambda_max - n) / ((n-1) * RI).
inline ConsistencyReport consistency_ratio(const PairwiseMatrix& m, const WeightVector& weights) {
    m.validate();
    if (weights.size() != m.n)
        throw DimensionError("weights length does not match matrix order");
    ConsistencyReport rep;
    rep.lambda_max = detail::dominant_eigenvalue(m, weights);
    rep.ri_used = ri_value(m.n);
    if (m.n <= 2) {
        rep.cr = 0.0;
        rep.ri_degenerate = true;
    } else {
        rep.cr = (rep.lambda_max - static_cast<double>(m.n)) /
                 ((static_cast<double>(m.n) - 1.0) * rep.ri_used);
    }
    rep.consistent = rep.cr < 0.1;
    return rep;
}

/// Indicator series together with its optimal reference vector.
struct GreySeries {
    std::vector<double> values;
    std::vector<double> reference;
};

/// Grey relational coefficients
///   lambda_k = (dmin + rho*dmax) / (d_k + rho*dmax),  d_k = |value_k - ref_k|
/// with dmin/dmax taken over the series. A series identical to its reference
/// yields all-ones without a division error.
inline std::vector<double> grey_relational(const GreySeries& s, double rho = 0.5) {
    if (s.values.size() != s.reference.size())
        throw DimensionError("series and reference differ in length");
    if (s.values.empty())
        throw EmptyInput("grey series is empty");
    if (!(rho > 0.0) || rho > 1.0)
        throw RangeError("resolution coefficient must be in (0, 1]");
    std::vector<double> dev(s.values.size());
    for (std::size_t k = 0; k < dev.size(); ++k) dev[k] = std::abs(s.values[k] - s.reference[k]);
    double dmin = *std::min_element(dev.begin(), dev.end());
    double dmax = *std::max_element(dev.begin(), dev.end());
    std::vector<double> out(dev.size());
    for (std::size_t k = 0; k < dev.size(); ++k) {
        double denom = dev[k] + rho * dmax;
        out[k] = denom == 0.0 ? 1.0 : (dmin + rho * dmax) / denom;
    }
    return out;
}

/// Weighted composite of grey coefficients: X = w . p.
inline double composite_index(const WeightVector& weights, const std::vector<double>& coefficients) {
    if (weights.size() != coefficients.size())
        throw DimensionError("weights and coefficients differ in length");
    check_weights(weights);
    double x = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) x += weights[i] * coefficients[i];
    return x;
}

enum class Polarity { positive, negative };

struct EfficiencyResult {
    double value{0};
    bool clamped{false};
};

/// Linear efficiency of a composite index over [beta, alpha]. Composites that
/// drift marginally outside the range are clamped and flagged instead of
/// rejected.
inline EfficiencyResult efficiency_score(double x, Polarity polarity,
                                         double alpha = 1.0, double beta = 0.0) {
    if (!(alpha > beta))
        throw DegenerateRange("efficiency range requires alpha > beta");
    EfficiencyResult r;
    double clamped_x = std::clamp(x, beta, alpha);
    r.clamped = clamped_x != x;
    r.value = polarity == Polarity::positive ? (clamped_x - beta) / (alpha - beta)
                                             : (alpha - clamped_x) / (alpha - beta);
    return r;
}

/// One subsystem's efficiency record, as emitted in coupling reports.
struct SubsystemEfficiency {
    std::string name;
    double composite{0};   // X_i
    double efficiency{0};  // mu in [0,1]
    Polarity polarity{Polarity::positive};
    double alpha{1.0};
    double beta{0.0};
    bool clamped{false};
};

/// How the pair products in the coupling denominator are enumerated.
/// `ordered` walks the printed double index (i != j), counting each pair
/// twice under the square root; this reproduces the reported double-disaster
/// couplings near 0.5. `unordered` takes each pair once.
enum class PairConvention { ordered, unordered };

/// Multi-subsystem coupling degree
///   C = prod(U) / sqrt(prod over pairs (U_i + U_j)).
/// Zero whenever any efficiency is zero; all-zero input returns 0.
inline double coupling_degree(const std::vector<double>& efficiencies,
                              PairConvention convention = PairConvention::ordered) {
    const std::size_t m = efficiencies.size();
    if (m < 2)
        throw InstanceTooSmall("coupling degree needs at least 2 subsystems");
    for (double u : efficiencies)
        if (!std::isfinite(u) || u < 0.0 || u > 1.0)
            throw RangeError("subsystem efficiencies must lie in [0, 1]");
    double log_num = 0.0;
    bool zero = false;
    for (double u : efficiencies) {
        if (u == 0.0) zero = true;
        else log_num += std::log(u);
    }
    if (zero) return 0.0;
    double log_pairs = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double s = efficiencies[i] + efficiencies[j];
            if (s == 0.0) return 0.0;
            log_pairs += std::log(s);
        }
    // ordered: sqrt of the doubled product == the unordered product itself
    double log_denom = convention == PairConvention::ordered ? log_pairs : 0.5 * log_pairs;
    return std::exp(log_num - log_denom);
}

}  // namespace prepos::coupling
