#include "agewise/curve.hpp"

#include "agewise/error.hpp"
#include "agewise/numeric.hpp"

namespace agewise {

void Curve::validate() const
{
    if (t.size() != value.size()) throw DomainError("curve: abscissae and values differ in length");
    if (!derivative.empty() && derivative.size() != t.size())
        throw DomainError("curve: derivative length mismatch");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw DomainError("curve: abscissae not strictly increasing");
}

std::vector<double> default_grid(const Model& model, std::size_t n)
{
    if (n < 2) throw DomainError("grid needs at least two points");
    const double lo = model.quantile(1e-4);
    const double hi = model.quantile(1.0 - 1e-4);
    if (model.support().bounded()) return numeric::linear_grid(lo, hi, n);
    return numeric::geometric_grid(lo, hi, n);
}

std::string default_grid_policy(const Model& model, std::size_t n)
{
    return std::string(model.support().bounded() ? "linear" : "geometric") + ":" + std::to_string(n) +
           ":q(1e-4)..q(1-1e-4)";
}

std::vector<double> finite_derivative(const std::vector<double>& t, const std::vector<double>& y)
{
    const std::size_t n = t.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    d[0] = (y[1] - y[0]) / (t[1] - t[0]);
    d[n - 1] = (y[n - 1] - y[n - 2]) / (t[n - 1] - t[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = t[i] - t[i - 1];
        const double h1 = t[i + 1] - t[i];
        d[i] = (-h1 / (h0 * (h0 + h1))) * y[i - 1] + ((h1 - h0) / (h0 * h1)) * y[i] +
               (h0 / (h1 * (h0 + h1))) * y[i + 1];
    }
    return d;
}

Curve make_curve(std::vector<double> t, const std::function<double(double)>& f, std::string policy)
{
    Curve c;
    c.value.reserve(t.size());
    for (double x : t) c.value.push_back(f(x));
    c.t = std::move(t);
    c.derivative = finite_derivative(c.t, c.value);
    c.grid_policy = std::move(policy);
    c.validate();
    return c;
}

Curve hazard_curve(const Model& model, std::size_t n)
{
    return make_curve(default_grid(model, n), [&](double x) { return model.hazard(x); },
                      default_grid_policy(model, n));
}

Curve hazard_curve(const Model& model, const std::vector<double>& grid)
{
    return make_curve(grid, [&](double x) { return model.hazard(x); }, "explicit");
}

} // namespace agewise
