#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gvae/error.hpp"

namespace gvae {

// Central-difference gradient estimate of a scalar function. Test oracle only;
// shares no code with the reverse-mode pass it is used to check.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& fn,
    const std::vector<double>& at, double step) {
    if (!(step > 0.0)) throw ContractError("fd_gradient: step must be positive");
    std::vector<double> grad(at.size());
    std::vector<double> probe = at;
    for (std::size_t i = 0; i < at.size(); ++i) {
        probe[i] = at[i] + step;
        const double hi = fn(probe);
        probe[i] = at[i] - step;
        const double lo = fn(probe);
        probe[i] = at[i];
        grad[i] = (hi - lo) / (2.0 * step);
    }
    return grad;
}

// Worst per-component relative disagreement; `floor` bounds the denominator
// so components near zero are judged on an absolute scale.
inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b,
                          double floor = 1e-3) {
    if (a.size() != b.size()) throw DimensionError("max_rel_err: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
        worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
    }
    return worst;
}

}  // namespace gvae
