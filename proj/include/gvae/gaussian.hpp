#pragma once

#include <span>
#include <vector>

#include "gvae/graph.hpp"

namespace gvae {

// Variance floor applied wherever a network output is turned into a variance
// or precision. Aggregation itself is exact and never clamps.
inline constexpr double kVarianceFloor = 1e-6;

// Diagonal Gaussian over R^n: per-dimension mean and strictly positive
// variance. Plain values; used by evaluation, analysis, and tests.
struct DiagGaussian {
    std::vector<double> mean;
    std::vector<double> variance;

    std::size_t dim() const { return mean.size(); }
    void validate() const;  // lengths equal, variance >= floor
};

// KL(q || N(0, I)) in closed form: 0.5 * sum(mean^2 + var - ln var - 1).
double kl_to_standard(const DiagGaussian& q);

// mean + sqrt(variance) * noise, componentwise.
std::vector<double> reparam_sample(const DiagGaussian& q, std::span<const double> noise);

// log N(x; x_hat, I) = -0.5 * ||x - x_hat||^2 - (D/2) * ln(2*pi).
double recon_log_density(std::span<const double> x, std::span<const double> x_hat);

// Group aggregation rules. Average: mean and variance are arithmetic means of
// the members'. Product: the normalized product of the member densities, i.e.
// precision-weighted mean with precisions summing exactly.
DiagGaussian aggregate_average(std::span<const DiagGaussian> members);
DiagGaussian aggregate_product(std::span<const DiagGaussian> members);

// Graph-level counterparts, used inside training objectives. A GaussianVar
// holds rank-1 mean/variance nodes; GaussianRows stacks one member per row.
struct GaussianVar {
    Var mean;
    Var variance;
};

struct GaussianRows {
    Var mean;      // [K x dim]
    Var variance;  // [K x dim]
};

Var kl_to_standard(Graph& g, const GaussianVar& q);
// Sum of the members' KL terms in one expression.
Var kl_to_standard_rows(Graph& g, const GaussianRows& q);
Var reparam_sample(Graph& g, const GaussianVar& q, Var noise);
Var reparam_sample_rows(Graph& g, const GaussianRows& q, Var noise);
Var recon_log_density(Graph& g, Var x, Var x_hat);
GaussianVar aggregate_average(Graph& g, const GaussianRows& members);
GaussianVar aggregate_product(Graph& g, const GaussianRows& members);
// Product aggregation straight from member precisions (rows): avoids the
// intermediate variance when the encoder already parameterizes precision.
GaussianVar aggregate_from_precisions(Graph& g, Var mean_rows, Var precision_rows);

}  // namespace gvae
