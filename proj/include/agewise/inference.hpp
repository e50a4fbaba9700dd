#pragma once

#include "agewise/distribution.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agewise {

/// n inverse-transform draws from a 64-bit Mersenne twister seeded with `seed`.
std::vector<double> sample(const Model& model, std::size_t n, std::uint64_t seed);

/// Seed of replication `index` derived from a base seed by splitmix64.
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t index);

/// Sum of log pdf. Data must be positive and inside the support; the error
/// names the first offending index. -inf when some point has zero density.
double loglik(const Model& model, std::span<const double> data);
double loglik(std::string_view family, std::span<const double> params, std::span<const double> data);

struct FitOptions
{
    int restarts = 3;
    double simplex_tolerance = 1e-8; ///< diameter in log-parameter space
    std::size_t max_iterations = 20000; ///< per simplex run
    std::uint64_t seed = 1;
};

struct FitResult
{
    std::string family;
    std::vector<std::string> names;
    std::vector<double> params;
    std::vector<double> init;
    double loglik = 0.0;
    double init_loglik = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// 1 / sqrt(-d2 loglik / d theta_i^2) by central differences, when all are finite.
    std::optional<std::vector<double>> stderr_proxy;
};

/// Default starting point: moment-based where a closed form exists, else ones.
std::vector<double> default_init(std::string_view family, std::span<const double> data);

/// Maximum likelihood over log-parameters by Nelder-Mead with seeded restarts.
/// Full-API families only (see is_full_api_family); all their parameters are positive.
FitResult fit_mle(std::string_view family, std::span<const double> data,
                  std::optional<std::vector<double>> init = std::nullopt, const FitOptions& opts = {});

} // namespace agewise
