#include "agewise/dus.hpp"

#include "agewise/error.hpp"
#include "agewise/numeric.hpp"

#include <cmath>
#include <sstream>

namespace agewise {

namespace {

using numeric::kE;
using numeric::kEm1;

class Dus final : public ModelImpl
{
  public:
    explicit Dus(Model base) : base_(std::move(base)) {}
    std::string family() const override { return "dus-" + base_.family(); }
    std::vector<Param> params() const override { return base_.params(); }
    Support support() const override { return base_.support(); }

    double pdf(double x) const override { return b().pdf(x) * std::exp(b().cdf(x)) / kEm1; }
    double cdf(double x) const override { return std::expm1(b().cdf(x)) / kEm1; }
    // e - e^F = -e * expm1(-S), exact in the upper tail.
    double survival(double x) const override { return -kE * std::expm1(-b().survival(x)) / kEm1; }
    double hazard(double x) const override
    {
        const double s = b().survival(x);
        return b().pdf(x) / std::expm1(s);
    }
    std::optional<double> quantile(double p) const override { return base_.quantile(std::log1p(p * kEm1)); }
    std::optional<double> eta(double x) const override { return base_.eta(x) - b().pdf(x); }
    std::optional<bool> moment_exists(double k) const override { return base_.moment_exists(k); }
    double scale_hint() const override { return b().scale_hint(); }

  private:
    const ModelImpl& b() const { return base_.impl(); }
    Model base_;
};

class Gdus final : public ModelImpl
{
  public:
    Gdus(Model base, double alpha) : base_(std::move(base)), alpha_(alpha) {}
    std::string family() const override { return "gdus-" + base_.family(); }
    std::vector<Param> params() const override
    {
        auto p = base_.params();
        p.push_back({"gdus_alpha", alpha_});
        return p;
    }
    Support support() const override { return base_.support(); }

    double pdf(double x) const override
    {
        const double F = b().cdf(x);
        const double Fa = std::pow(F, alpha_);
        const double f = b().pdf(x);
        if (F == 0.0) return alpha_ < 1.0 ? (f > 0 ? numeric::kInf : 0.0) : (alpha_ == 1.0 ? f / kEm1 : 0.0);
        return alpha_ * f * Fa / F * std::exp(Fa) / kEm1;
    }
    double cdf(double x) const override { return std::expm1(std::pow(b().cdf(x), alpha_)) / kEm1; }
    double survival(double x) const override { return -kE * std::expm1(fa_minus_one(x)) / kEm1; }
    double hazard(double x) const override
    {
        const double F = b().cdf(x);
        const double f = b().pdf(x);
        if (F == 0.0) return pdf(x);
        const double Fa = std::pow(F, alpha_);
        const double denom = -kE * std::expm1(fa_minus_one(x));
        return alpha_ * f * Fa / F * std::exp(Fa) / denom;
    }
    std::optional<double> quantile(double p) const override
    {
        return base_.quantile(std::pow(std::log1p(p * kEm1), 1.0 / alpha_));
    }
    std::optional<double> eta(double x) const override
    {
        const double F = b().cdf(x);
        const double f = b().pdf(x);
        return base_.eta(x) - (alpha_ - 1.0) * f / F - alpha_ * std::pow(F, alpha_ - 1.0) * f;
    }
    std::optional<bool> moment_exists(double k) const override { return base_.moment_exists(k); }
    double scale_hint() const override { return b().scale_hint(); }

  private:
    const ModelImpl& b() const { return base_.impl(); }

    // F^alpha - 1 without cancellation when F is close to 1.
    double fa_minus_one(double x) const
    {
        const double s = b().survival(x);
        const double log_f = s < 0.5 ? std::log1p(-s) : std::log(b().cdf(x));
        return std::expm1(alpha_ * log_f);
    }

    Model base_;
    double alpha_;
};

/// Closed form: with N(x) = lambda^2 e^{-lambda x} + alpha lambda^alpha x^{alpha-1} e^{-(lambda x)^alpha}
/// and V(x) = (lambda e^{-lambda x} + e^{-(lambda x)^alpha}) / (1 + lambda),
///   g(x) = N(x) e^{1-V(x)} / ((e - 1)(1 + lambda)),
///   h(x) = N(x) e^{1-V(x)} / ((e - e^{1-V(x)})(1 + lambda)).
class DusExpWeibull final : public ModelImpl
{
  public:
    DusExpWeibull(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {}
    std::string family() const override { return "dus-ew"; }
    std::vector<Param> params() const override { return {{"alpha", alpha_}, {"lambda", lambda_}}; }

    double pdf(double x) const override { return numerator(x) * std::exp(1.0 - v(x)) / (kEm1 * (1.0 + lambda_)); }
    double cdf(double x) const override
    {
        // e^{1-V} - 1 with 1 - V = (lambda (1 - e^{-lambda x}) + (1 - e^{-(lambda x)^alpha})) / (1 + lambda)
        const double one_minus_v =
            (-lambda_ * std::expm1(-lambda_ * x) - std::expm1(-std::pow(lambda_ * x, alpha_))) / (1.0 + lambda_);
        return std::expm1(one_minus_v) / kEm1;
    }
    double survival(double x) const override { return e_minus_e1mv(x) / kEm1; }
    double hazard(double x) const override
    {
        return numerator(x) * std::exp(1.0 - v(x)) / (e_minus_e1mv(x) * (1.0 + lambda_));
    }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return 1.0 / lambda_; }

  private:
    double numerator(double x) const
    {
        const double l = lambda_;
        const double a = alpha_;
        return l * l * std::exp(-l * x) + a * std::pow(l, a) * std::pow(x, a - 1.0) * std::exp(-std::pow(l * x, a));
    }
    double v(double x) const
    {
        return (lambda_ * std::exp(-lambda_ * x) + std::exp(-std::pow(lambda_ * x, alpha_))) / (1.0 + lambda_);
    }
    // e - e^{1-V} = e (1 - e^{-V})
    double e_minus_e1mv(double x) const { return -kE * std::expm1(-v(x)); }

    double alpha_;
    double lambda_;
};

} // namespace

Model dus(const Model& base) { return Model(std::make_shared<Dus>(base)); }

Model gdus(const Model& base, double alpha)
{
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << "gdus: parameter 'alpha' must be a finite positive number, got " << alpha;
        throw DomainError(os.str());
    }
    return Model(std::make_shared<Gdus>(base, alpha));
}

Model dus_ew(double alpha, double lambda)
{
    for (auto [name, v] : {std::pair{"alpha", alpha}, std::pair{"lambda", lambda}}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "dus-ew: parameter '" << name << "' must be a finite positive number, got " << v;
            throw DomainError(os.str());
        }
    }
    return Model(std::make_shared<DusExpWeibull>(alpha, lambda));
}

} // namespace agewise
