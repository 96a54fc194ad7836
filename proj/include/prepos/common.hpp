#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace prepos {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidMatrix : public Error { public: using Error::Error; };
class InstanceTooSmall : public Error { public: using Error::Error; };
class DimensionError : public Error { public: using Error::Error; };
class DegenerateRange : public Error { public: using Error::Error; };
class EmptyDataset : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };
class RangeError : public Error { public: using Error::Error; };
class SchemaError : public Error { public: using Error::Error; };
class IntegrityError : public Error { public: using Error::Error; };
class UnknownScenario : public Error { public: using Error::Error; };
class NotEvaluated : public Error { public: using Error::Error; };
class SpaceTooLarge : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

/// One weight per indicator; non-negative, summing to 1.
using WeightVector = std::vector<double>;

inline double weight_sum(const WeightVector& w) {
    return std::accumulate(w.begin(), w.end(), 0.0);
}

/// Throws RangeError unless all weights are finite, non-negative and sum to 1
/// within `tol`.
inline void check_weights(const WeightVector& w, double tol = 1e-9) {
    if (w.empty())
        throw EmptyInput("weight vector is empty");
    for (double v : w) {
        if (!std::isfinite(v) || v < 0.0)
            throw RangeError("weights must be finite and non-negative");
    }
    if (std::abs(weight_sum(w) - 1.0) > tol)
        throw RangeError("weights must sum to 1");
}

/// Rescales a non-negative vector to sum 1. All-zero input yields uniform
/// weights so degenerate dispersion cases stay usable.
inline WeightVector normalized_weights(std::vector<double> w) {
    if (w.empty())
        throw EmptyInput("cannot normalize an empty vector");
    double s = weight_sum(w);
    if (s <= 0.0) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
        return w;
    }
    for (double& v : w) v /= s;
    return w;
}

}  // namespace prepos
