#include "agewise/distribution.hpp"

#include "agewise/error.hpp"
#include "agewise/numeric.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace agewise {

namespace {

using numeric::kInf;

void require_positive(std::string_view family, std::string_view name, double v)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << family << ": parameter '" << name << "' must be a finite positive number, got " << v;
        throw DomainError(os.str());
    }
}

class Exponential final : public ModelImpl
{
  public:
    explicit Exponential(double theta) : theta_(theta) {}
    std::string family() const override { return "exponential"; }
    std::vector<Param> params() const override { return {{"theta", theta_}}; }
    double pdf(double x) const override { return theta_ * std::exp(-theta_ * x); }
    double cdf(double x) const override { return -std::expm1(-theta_ * x); }
    double survival(double x) const override { return std::exp(-theta_ * x); }
    double hazard(double) const override { return theta_; }
    std::optional<double> quantile(double p) const override { return -std::log1p(-p) / theta_; }
    std::optional<double> mean() const override { return 1.0 / theta_; }
    std::optional<double> eta(double) const override { return theta_; }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return 1.0 / theta_; }

  private:
    double theta_;
};

/// Scale parameterization: S(x) = exp(-(x/lambda)^k).
class Weibull final : public ModelImpl
{
  public:
    Weibull(double lambda, double k) : lambda_(lambda), k_(k) {}
    std::string family() const override { return "weibull"; }
    std::vector<Param> params() const override { return {{"lambda", lambda_}, {"k", k_}}; }
    double pdf(double x) const override
    {
        const double z = x / lambda_;
        return k_ / lambda_ * std::pow(z, k_ - 1.0) * std::exp(-std::pow(z, k_));
    }
    double cdf(double x) const override { return -std::expm1(-std::pow(x / lambda_, k_)); }
    double survival(double x) const override { return std::exp(-std::pow(x / lambda_, k_)); }
    double hazard(double x) const override { return k_ / lambda_ * std::pow(x / lambda_, k_ - 1.0); }
    std::optional<double> quantile(double p) const override
    {
        return lambda_ * std::pow(-std::log1p(-p), 1.0 / k_);
    }
    std::optional<double> mean() const override { return lambda_ * std::tgamma(1.0 + 1.0 / k_); }
    std::optional<double> eta(double x) const override
    {
        return -(k_ - 1.0) / x + k_ * std::pow(x, k_ - 1.0) / std::pow(lambda_, k_);
    }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return lambda_; }

  private:
    double lambda_;
    double k_;
};

class Gamma final : public ModelImpl
{
  public:
    Gamma(double shape, double rate) : shape_(shape), rate_(rate) {}
    std::string family() const override { return "gamma"; }
    std::vector<Param> params() const override { return {{"shape", shape_}, {"rate", rate_}}; }
    double pdf(double x) const override
    {
        if (x == 0.0) return shape_ < 1.0 ? kInf : (shape_ == 1.0 ? rate_ : 0.0);
        return rate_ * boost::math::gamma_p_derivative(shape_, rate_ * x);
    }
    double cdf(double x) const override { return boost::math::gamma_p(shape_, rate_ * x); }
    double survival(double x) const override { return boost::math::gamma_q(shape_, rate_ * x); }
    std::optional<double> quantile(double p) const override
    {
        if (p > 0.5) return boost::math::gamma_q_inv(shape_, 1.0 - p) / rate_;
        return boost::math::gamma_p_inv(shape_, p) / rate_;
    }
    std::optional<double> mean() const override { return shape_ / rate_; }
    std::optional<double> eta(double x) const override { return rate_ - (shape_ - 1.0) / x; }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return shape_ / rate_; }

  private:
    double shape_;
    double rate_;
};

/// f(x) = theta^2 / (1 + theta) (1 + x) exp(-theta x).
class Lindley final : public ModelImpl
{
  public:
    explicit Lindley(double theta) : theta_(theta) {}
    std::string family() const override { return "lindley"; }
    std::vector<Param> params() const override { return {{"theta", theta_}}; }
    double pdf(double x) const override
    {
        return theta_ * theta_ / (1.0 + theta_) * (1.0 + x) * std::exp(-theta_ * x);
    }
    double survival(double x) const override
    {
        return (1.0 + theta_ + theta_ * x) / (1.0 + theta_) * std::exp(-theta_ * x);
    }
    double cdf(double x) const override
    {
        // 1 - (1 + a) e^{-t} with a = theta x / (1 + theta), t = theta x
        const double t = theta_ * x;
        const double a = t / (1.0 + theta_);
        return -std::expm1(-t) - a * std::exp(-t);
    }
    double hazard(double x) const override
    {
        return theta_ * theta_ * (1.0 + x) / (1.0 + theta_ + theta_ * x);
    }
    std::optional<double> mean() const override { return (theta_ + 2.0) / (theta_ * (theta_ + 1.0)); }
    std::optional<double> eta(double x) const override { return theta_ - 1.0 / (1.0 + x); }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return 1.0 / theta_; }

  private:
    double theta_;
};

/// S(x) = (1 + beta x)^{-alpha}.
class Lomax final : public ModelImpl
{
  public:
    Lomax(double alpha, double beta) : alpha_(alpha), beta_(beta) {}
    std::string family() const override { return "lomax"; }
    std::vector<Param> params() const override { return {{"alpha", alpha_}, {"beta", beta_}}; }
    double pdf(double x) const override
    {
        return alpha_ * beta_ * std::exp(-(alpha_ + 1.0) * std::log1p(beta_ * x));
    }
    double cdf(double x) const override { return -std::expm1(-alpha_ * std::log1p(beta_ * x)); }
    double survival(double x) const override { return std::exp(-alpha_ * std::log1p(beta_ * x)); }
    double hazard(double x) const override { return alpha_ * beta_ / (1.0 + beta_ * x); }
    std::optional<double> quantile(double p) const override
    {
        return std::expm1(-std::log1p(-p) / alpha_) / beta_;
    }
    std::optional<double> mean() const override
    {
        if (alpha_ <= 1.0) return std::nullopt;
        return 1.0 / (beta_ * (alpha_ - 1.0));
    }
    std::optional<double> eta(double x) const override { return (alpha_ + 1.0) * beta_ / (1.0 + beta_ * x); }
    std::optional<bool> moment_exists(double k) const override { return alpha_ > k; }
    double scale_hint() const override { return 1.0 / beta_; }

  private:
    double alpha_;
    double beta_;
};

/// F(x) = exp(-(x/beta)^{-alpha}).
class InverseWeibull final : public ModelImpl
{
  public:
    InverseWeibull(double alpha, double beta) : alpha_(alpha), beta_(beta) {}
    std::string family() const override { return "inverse-weibull"; }
    std::vector<Param> params() const override { return {{"alpha", alpha_}, {"beta", beta_}}; }
    double pdf(double x) const override
    {
        if (x == 0.0) return 0.0;
        const double z = x / beta_;
        return alpha_ / beta_ * std::pow(z, -alpha_ - 1.0) * std::exp(-std::pow(z, -alpha_));
    }
    double cdf(double x) const override
    {
        if (x == 0.0) return 0.0;
        return std::exp(-std::pow(x / beta_, -alpha_));
    }
    double survival(double x) const override
    {
        if (x == 0.0) return 1.0;
        return -std::expm1(-std::pow(x / beta_, -alpha_));
    }
    std::optional<double> quantile(double p) const override
    {
        return beta_ * std::pow(-std::log(p), -1.0 / alpha_);
    }
    std::optional<double> mean() const override
    {
        if (alpha_ <= 1.0) return std::nullopt;
        return beta_ * std::tgamma(1.0 - 1.0 / alpha_);
    }
    std::optional<double> eta(double x) const override
    {
        return (alpha_ + 1.0) / x - alpha_ / beta_ * std::pow(x / beta_, -alpha_ - 1.0);
    }
    std::optional<bool> moment_exists(double k) const override { return alpha_ > k; }
    double scale_hint() const override { return beta_; }

  private:
    double alpha_;
    double beta_;
};

/// F(x) = 1 - (1 - x^alpha)^beta on (0, 1).
class Kumaraswamy final : public ModelImpl
{
  public:
    Kumaraswamy(double a, double b) : a_(a), b_(b) {}
    std::string family() const override { return "kumaraswamy"; }
    std::vector<Param> params() const override { return {{"alpha", a_}, {"beta", b_}}; }
    Support support() const override { return {0.0, 1.0}; }
    double pdf(double x) const override
    {
        const double xa = std::pow(x, a_);
        return a_ * b_ * std::pow(x, a_ - 1.0) * std::pow(1.0 - xa, b_ - 1.0);
    }
    double cdf(double x) const override { return -std::expm1(b_ * std::log1p(-std::pow(x, a_))); }
    double survival(double x) const override { return std::exp(b_ * std::log1p(-std::pow(x, a_))); }
    std::optional<double> quantile(double p) const override
    {
        return std::pow(-std::expm1(std::log1p(-p) / b_), 1.0 / a_);
    }
    std::optional<double> mean() const override { return b_ * boost::math::beta(1.0 + 1.0 / a_, b_); }
    std::optional<double> eta(double x) const override
    {
        const double xa = std::pow(x, a_);
        return -(a_ - 1.0) / x + (b_ - 1.0) * a_ * std::pow(x, a_ - 1.0) / (1.0 - xa);
    }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return 0.5; }

  private:
    double a_;
    double b_;
};

/// f(x) = (lambda^2 e^{-lambda x} + alpha lambda^alpha x^{alpha-1} e^{-(lambda x)^alpha}) / (1 + lambda).
class ExpWeibullMixture final : public ModelImpl
{
  public:
    ExpWeibullMixture(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {}
    std::string family() const override { return "exp-weibull-mixture"; }
    std::vector<Param> params() const override { return {{"alpha", alpha_}, {"lambda", lambda_}}; }
    double pdf(double x) const override
    {
        const double l = lambda_;
        const double a = alpha_;
        return (l * l * std::exp(-l * x) + a * std::pow(l, a) * std::pow(x, a - 1.0) * std::exp(-std::pow(l * x, a))) /
               (1.0 + l);
    }
    double cdf(double x) const override
    {
        const double l = lambda_;
        return (-l * std::expm1(-l * x) - std::expm1(-std::pow(l * x, alpha_))) / (1.0 + l);
    }
    double survival(double x) const override
    {
        const double l = lambda_;
        return (l * std::exp(-l * x) + std::exp(-std::pow(l * x, alpha_))) / (1.0 + l);
    }
    std::optional<double> mean() const override
    {
        return (1.0 + std::tgamma(1.0 + 1.0 / alpha_) / lambda_) / (1.0 + lambda_);
    }
    std::optional<double> eta(double x) const override
    {
        const double l = lambda_;
        const double a = alpha_;
        const double w = std::exp(-std::pow(l * x, a));
        const double la = std::pow(l, a);
        const double d_exp = -l * l * l * std::exp(-l * x);
        const double d_weib = a * la * w * ((a - 1.0) * std::pow(x, a - 2.0) - a * la * std::pow(x, 2.0 * a - 2.0));
        const double f = l * l * std::exp(-l * x) + a * la * std::pow(x, a - 1.0) * w;
        return -(d_exp + d_weib) / f;
    }
    std::optional<bool> moment_exists(double) const override { return true; }
    double scale_hint() const override { return 1.0 / lambda_; }

  private:
    double alpha_;
    double lambda_;
};

/// Law of c * X.
class Scaled final : public ModelImpl
{
  public:
    Scaled(Model base, double c) : base_(std::move(base)), c_(c) {}
    std::string family() const override { return "scaled-" + base_.family(); }
    std::vector<Param> params() const override
    {
        auto p = base_.params();
        p.push_back({"scale", c_});
        return p;
    }
    Support support() const override
    {
        const Support s = base_.support();
        return {s.lo * c_, s.hi * c_};
    }
    double pdf(double x) const override { return base_.impl().pdf(x / c_) / c_; }
    double cdf(double x) const override { return base_.impl().cdf(x / c_); }
    double survival(double x) const override { return base_.impl().survival(x / c_); }
    double hazard(double x) const override { return base_.impl().hazard(x / c_) / c_; }
    std::optional<double> quantile(double p) const override { return c_ * base_.quantile(p); }
    std::optional<double> mean() const override
    {
        auto m = base_.impl().mean();
        if (!m) return std::nullopt;
        return c_ * *m;
    }
    std::optional<double> eta(double x) const override { return base_.eta(x / c_) / c_; }
    std::optional<bool> moment_exists(double k) const override { return base_.moment_exists(k); }
    double scale_hint() const override { return c_ * base_.impl().scale_hint(); }

  private:
    Model base_;
    double c_;
};

struct FamilyInfo
{
    std::string_view name;
    std::vector<std::string> params;
};

const std::vector<FamilyInfo>& families()
{
    static const std::vector<FamilyInfo> table = {
        {"exponential", {"theta"}},
        {"weibull", {"lambda", "k"}},
        {"gamma", {"shape", "rate"}},
        {"lindley", {"theta"}},
        {"lomax", {"alpha", "beta"}},
        {"inverse-weibull", {"alpha", "beta"}},
        {"kumaraswamy", {"alpha", "beta"}},
        {"exp-weibull-mixture", {"alpha", "lambda"}},
    };
    return table;
}

} // namespace

double ModelImpl::hazard(double x) const
{
    const double s = survival(x);
    if (!(s > 1e-300)) return kInf;
    return pdf(x) / s;
}

Capabilities ModelImpl::capabilities() const
{
    const double probe = scale_hint();
    return {quantile(0.5).has_value(), mean().has_value(), eta(probe).has_value()};
}

Model::Model(std::shared_ptr<const ModelImpl> impl) : impl_(std::move(impl))
{
    if (!impl_) throw DomainError("Model: null implementation");
}

std::string Model::spec() const
{
    std::string s = family() + ":";
    bool first = true;
    for (const auto& p : params()) {
        if (!first) s += ",";
        first = false;
        s += p.name + "=" + format_number(p.value);
    }
    return s;
}

void Model::check_point(double x) const
{
    const Support s = support();
    if (std::isnan(x) || !s.contains(x)) {
        std::ostringstream os;
        os << family() << ": x = " << x << " outside support [" << s.lo << ", " << s.hi << "]";
        throw DomainError(os.str());
    }
}

double Model::pdf(double x) const
{
    check_point(x);
    return impl_->pdf(x);
}

double Model::cdf(double x) const
{
    check_point(x);
    return impl_->cdf(x);
}

double Model::survival(double x) const
{
    check_point(x);
    return impl_->survival(x);
}

double Model::hazard(double x) const
{
    check_point(x);
    return impl_->hazard(x);
}

double Model::quantile(double p) const
{
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << family() << ": quantile probability " << p << " outside (0, 1)";
        throw DomainError(os.str());
    }
    if (auto q = impl_->quantile(p)) return *q;
    return solve_quantile(*impl_, p);
}

bool Model::moment_exists(double k) const
{
    if (auto known = impl_->moment_exists(k)) return *known;
    // Tail test: x^k S(x) must decay along the upper quantiles. The slope of
    // log(x^k S) against log S is 1 - k/tail_index for power tails.
    const Support s = support();
    if (s.bounded()) return true;
    const double s1 = 1e-6;
    const double s2 = 1e-12;
    const double x1 = solve_quantile(*impl_, 1.0 - s1);
    const double x2 = solve_quantile(*impl_, 1.0 - s2);
    const double slope = (k * std::log(x2 / x1) + std::log(s2 / s1)) / std::log(s2 / s1);
    return slope > 0.02;
}

double Model::raw_moment(double k) const
{
    if (!(k > 0.0)) throw DomainError("raw_moment: order k must be positive");
    if (!moment_exists(k)) {
        std::ostringstream os;
        os << family() << ": moment of order " << k << " is infinite";
        throw InfiniteMomentError(os.str());
    }
    const Support s = support();
    const double med = quantile(0.5);
    numeric::QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-10;
    opts.max_intervals = 4000;
    auto integrand = [&](double x) { return std::pow(x, k) * impl_->pdf(x); };
    double total = numeric::quad(integrand, s.lo, med, opts);
    opts.tail_scale = std::max(med, 1e-300);
    total += numeric::quad(integrand, med, s.hi, opts);
    return total;
}

double Model::mean() const
{
    if (auto m = impl_->mean()) return *m;
    if (!moment_exists(1.0)) throw InfiniteMomentError(family() + ": mean is infinite");
    return raw_moment(1.0);
}

double Model::eta(double x) const
{
    check_point(x);
    if (impl_->pdf(x) <= 1e-300) throw DomainError(family() + ": eta undefined where the density vanishes");
    if (auto e = impl_->eta(x)) return *e;
    return numeric_eta(*impl_, x);
}

double numeric_eta(const ModelImpl& impl, double x)
{
    const Support s = impl.support();
    const double h = std::max(1e-6, 1e-4 * x);
    const double f0 = impl.pdf(x);
    double deriv;
    if (x - h >= s.lo && x + h <= s.hi) {
        deriv = (impl.pdf(x + h) - impl.pdf(x - h)) / (2.0 * h);
    } else if (x + 2 * h <= s.hi) {
        deriv = (-3.0 * f0 + 4.0 * impl.pdf(x + h) - impl.pdf(x + 2 * h)) / (2.0 * h);
    } else {
        deriv = (3.0 * f0 - 4.0 * impl.pdf(x - h) + impl.pdf(x - 2 * h)) / (2.0 * h);
    }
    return -deriv / f0;
}

double solve_quantile(const ModelImpl& impl, double p)
{
    const Support s = impl.support();
    const bool upper = p > 0.5;
    const double q = 1.0 - p;
    // g is increasing in x and vanishes at the quantile.
    numeric::Fn g = [&](double x) { return upper ? q - impl.survival(x) : impl.cdf(x) - p; };

    double lo = s.lo;
    double hi = s.hi;
    if (!s.bounded()) {
        double x = std::max(impl.scale_hint(), 1e-300);
        double gx = g(x);
        if (gx < 0.0) {
            lo = x;
            int n = 0;
            while (true) {
                x *= 2.0;
                gx = g(x);
                if (gx >= 0.0) break;
                lo = x;
                if (++n > 2100 || !std::isfinite(x))
                    throw ConvergenceError(impl.family() + ": quantile bracketing failed");
            }
            hi = x;
        } else {
            hi = x;
            int n = 0;
            while (x > s.lo && n < 1100) {
                x *= 0.5;
                if (g(x) < 0.0) break;
                hi = x;
                ++n;
            }
            lo = (g(x) < 0.0) ? x : s.lo;
        }
    }
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo >= 0.0) return lo;
    if (ghi <= 0.0) return hi;
    return numeric::solve_bracketed(g, lo, hi, glo, ghi);
}

Model make_baseline(std::string_view family, std::span<const double> params)
{
    const auto names = baseline_parameter_names(family);
    if (params.size() != names.size()) {
        std::ostringstream os;
        os << family << ": expected " << names.size() << " parameter(s) (";
        for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
        os << "), got " << params.size();
        throw DomainError(os.str());
    }
    for (std::size_t i = 0; i < names.size(); ++i) require_positive(family, names[i], params[i]);
    const auto& p = params;
    std::shared_ptr<const ModelImpl> impl;
    if (family == "exponential") impl = std::make_shared<Exponential>(p[0]);
    else if (family == "weibull") impl = std::make_shared<Weibull>(p[0], p[1]);
    else if (family == "gamma") impl = std::make_shared<Gamma>(p[0], p[1]);
    else if (family == "lindley") impl = std::make_shared<Lindley>(p[0]);
    else if (family == "lomax") impl = std::make_shared<Lomax>(p[0], p[1]);
    else if (family == "inverse-weibull") impl = std::make_shared<InverseWeibull>(p[0], p[1]);
    else if (family == "kumaraswamy") impl = std::make_shared<Kumaraswamy>(p[0], p[1]);
    else impl = std::make_shared<ExpWeibullMixture>(p[0], p[1]);
    return Model(std::move(impl));
}

Model make_baseline(std::string_view family, std::initializer_list<double> params)
{
    std::vector<double> v(params);
    return make_baseline(family, std::span<const double>(v));
}

std::vector<std::string> baseline_families()
{
    std::vector<std::string> out;
    for (const auto& f : families()) out.emplace_back(f.name);
    return out;
}

std::vector<std::string> baseline_parameter_names(std::string_view family)
{
    for (const auto& f : families())
        if (f.name == family) return f.params;
    throw DomainError("unknown family '" + std::string(family) + "'");
}

Evaluation evaluate(const Model& model, double x)
{
    const double f = model.pdf(x);
    const double s = model.survival(x);
    return {f, model.cdf(x), s, model.hazard(x)};
}

double quantile(const Model& model, double p) { return model.quantile(p); }

double raw_moment(const Model& model, double k) { return model.raw_moment(k); }

Model scaled(const Model& model, double c)
{
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaled: factor must be positive");
    return Model(std::make_shared<Scaled>(model, c));
}

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

} // namespace agewise
