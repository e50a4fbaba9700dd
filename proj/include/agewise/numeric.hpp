#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace agewise::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kE = 2.718281828459045235360287471352662;
inline constexpr double kEm1 = 1.718281828459045235360287471352662;

using Fn = std::function<double(double)>;

struct QuadratureOptions
{
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 2000;
    /// Length scale of the substitution t = a + scale * u / (1 - u) used for
    /// infinite upper limits.
    double tail_scale = 1.0;
};

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]. An infinite b
/// is mapped onto [0, 1) first. Non-finite integrand samples are treated as 0,
/// which is what integrable endpoint singularities need.
QuadratureResult integrate(const Fn& f, double a, double b, const QuadratureOptions& opts = {});

/// Convenience wrapper returning only the value.
double quad(const Fn& f, double a, double b, const QuadratureOptions& opts = {});

struct RootOptions
{
    double x_rel_tol = 1e-14;
    double x_abs_tol = 1e-300;
    int max_iter = 300;
};

/// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign. Secant steps
/// with bisection fallback (Illinois variant), so progress is guaranteed.
double solve_bracketed(const Fn& f, double lo, double hi, double flo, double fhi,
                       const RootOptions& opts = {});

std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slope limiting,
/// which keeps the interpolant monotone wherever the data are.
class MonotoneCubic
{
  public:
    MonotoneCubic() = default;
    /// Slopes estimated from the data (PCHIP).
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    /// Caller-supplied knot slopes, limited where they would break monotonicity.
    MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes);

    double operator()(double t) const;
    double derivative(double t) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    std::span<const double> knots() const { return x_; }
    std::span<const double> values() const { return y_; }

  private:
    void limit_slopes();
    std::size_t segment(double t) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;
};

double median(std::vector<double> v);

} // namespace agewise::numeric
