#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agewise {

/// Closed interval [lo, hi] of admissible lifetimes; hi may be +inf.
struct Support
{
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool bounded() const { return std::isfinite(hi); }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct Param
{
    std::string name;
    double value;
};

/// Which functions a model provides in closed form; everything else falls
/// back to quadrature or root-finding.
struct Capabilities
{
    bool quantile = false;
    bool mean = false;
    bool eta = false;
};

struct Evaluation
{
    double pdf;
    double cdf;
    double survival;
    double hazard;
};

/// Implementation interface for a lifetime law. Functions are called only with
/// points inside support(); the Model wrapper does the checking.
class ModelImpl
{
  public:
    virtual ~ModelImpl() = default;

    virtual std::string family() const = 0;
    virtual std::vector<Param> params() const = 0;
    virtual Support support() const { return {}; }

    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double survival(double x) const = 0;
    virtual double hazard(double x) const;

    virtual std::optional<double> quantile(double) const { return std::nullopt; }
    virtual std::optional<double> mean() const { return std::nullopt; }
    /// Glaser's eta, -f'(x)/f(x).
    virtual std::optional<double> eta(double) const { return std::nullopt; }
    /// Whether E[X^k] is finite, when the family can tell analytically.
    virtual std::optional<bool> moment_exists(double) const { return std::nullopt; }
    /// Typical magnitude of the variable; seeds quantile bracketing.
    virtual double scale_hint() const { return 1.0; }

    Capabilities capabilities() const;
};

/// Immutable value handle on a lifetime law. Copies share the implementation;
/// every member is const and thread-safe.
class Model
{
  public:
    explicit Model(std::shared_ptr<const ModelImpl> impl);

    std::string family() const { return impl_->family(); }
    std::vector<Param> params() const { return impl_->params(); }
    Support support() const { return impl_->support(); }
    Capabilities capabilities() const { return impl_->capabilities(); }
    /// "family:name=value,..." using shortest round-trip number formatting.
    std::string spec() const;

    double pdf(double x) const;
    double cdf(double x) const;
    double survival(double x) const;
    double hazard(double x) const;

    double quantile(double p) const;
    double mean() const;
    double raw_moment(double k) const;
    bool moment_exists(double k) const;
    double eta(double x) const;

    const ModelImpl& impl() const { return *impl_; }
    std::shared_ptr<const ModelImpl> share() const { return impl_; }

  private:
    void check_point(double x) const;

    std::shared_ptr<const ModelImpl> impl_;
};

/// Families: exponential(theta), weibull(lambda, k), gamma(shape, rate),
/// lindley(theta), lomax(alpha, beta), inverse-weibull(alpha, beta),
/// kumaraswamy(alpha, beta), exp-weibull-mixture(alpha, lambda).
Model make_baseline(std::string_view family, std::span<const double> params);
Model make_baseline(std::string_view family, std::initializer_list<double> params);

std::vector<std::string> baseline_families();
/// Ordered parameter names of a baseline family; throws on unknown family.
std::vector<std::string> baseline_parameter_names(std::string_view family);

Evaluation evaluate(const Model& model, double x);
double quantile(const Model& model, double p);
double raw_moment(const Model& model, double k);

/// The law of c * X for c > 0.
Model scaled(const Model& model, double c);

/// Finite-difference eta used when a family has no closed derivative.
double numeric_eta(const ModelImpl& impl, double x);

/// Generic inverse of the cdf: bracket by doubling from the scale hint, then
/// secant/bisection. Exposed for implementations that want the fallback.
double solve_quantile(const ModelImpl& impl, double p);

std::string format_number(double v);

} // namespace agewise
