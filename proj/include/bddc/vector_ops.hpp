/// @file vector_ops.hpp
/// @brief Small dense-vector helpers shared across the library.

#ifndef BDDC_VECTOR_OPS_HPP
#define BDDC_VECTOR_OPS_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bddc {

inline double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

/// Throws when the vector carries a NaN or Inf; used at public API
/// boundaries (solver entry points, file ingestion).
inline void ensure_finite(std::span<const double> x, const char* context) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw std::invalid_argument(std::string(context) +
                                        ": non-finite entry at index " +
                                        std::to_string(i));
        }
    }
}

}  // namespace bddc

#endif
