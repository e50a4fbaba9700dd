#pragma once

#include "agewise/distribution.hpp"

#include <functional>
#include <string>
#include <vector>

namespace agewise {

inline constexpr std::size_t kDefaultGridPoints = 512;

/// Sampled (t, value) trace with optional derivative estimates.
struct Curve
{
    std::vector<double> t;
    std::vector<double> value;
    std::vector<double> derivative;
    std::string grid_policy;

    std::size_t size() const { return t.size(); }
    /// Throws DomainError unless t is strictly increasing and lengths agree.
    void validate() const;
};

/// n points between quantile(1e-4) and quantile(1 - 1e-4): geometric spacing
/// on unbounded supports, linear on bounded ones.
std::vector<double> default_grid(const Model& model, std::size_t n = kDefaultGridPoints);
std::string default_grid_policy(const Model& model, std::size_t n = kDefaultGridPoints);

/// Three-point derivative estimate on a nonuniform grid.
std::vector<double> finite_derivative(const std::vector<double>& t, const std::vector<double>& y);

Curve make_curve(std::vector<double> t, const std::function<double(double)>& f, std::string policy);

Curve hazard_curve(const Model& model, std::size_t n = kDefaultGridPoints);
Curve hazard_curve(const Model& model, const std::vector<double>& grid);

} // namespace agewise
