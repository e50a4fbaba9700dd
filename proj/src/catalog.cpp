#include "agewise/catalog.hpp"

#include "agewise/dus.hpp"
#include "agewise/error.hpp"
#include "agewise/numeric.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace agewise {

namespace bm = boost::math;
using numeric::kE;
using numeric::kInf;

bool CatalogParam::admits(double v) const
{
    if (!std::isfinite(v)) return false;
    if (lo_open ? !(v > lo) : !(v >= lo)) return false;
    if (hi_open ? !(v < hi) : !(v <= hi)) return false;
    if (integer && v != std::floor(v)) return false;
    return true;
}

std::string CatalogParam::range_text() const
{
    std::ostringstream os;
    os << (lo_open ? "(" : "[") << format_number(lo) << ", " << (std::isinf(hi) ? "inf" : format_number(hi))
       << (hi_open ? ")" : "]");
    if (integer) os << " integer";
    return os.str();
}

std::vector<std::string> CatalogEntry::parameter_names() const
{
    std::vector<std::string> out;
    for (const auto& p : params) out.push_back(p.name);
    return out;
}

namespace {

using P = std::span<const double>;

CatalogParam positive(std::string name, double draw_lo = 0.3, double draw_hi = 4.0)
{
    return {std::move(name), 0.0, kInf, true, true, false, draw_lo, draw_hi};
}

CatalogParam unit_open(std::string name) { return {std::move(name), 0.0, 1.0, true, true, false, 0.05, 0.95}; }

// Lindley survival (1 + t + t x) / (1 + t) e^{-t x}.
double lindley_sf(double th, double x) { return (1.0 + th + th * x) / (1.0 + th) * std::exp(-th * x); }

// log of the Lindley cdf, accurate in both tails.
double lindley_log_cdf(double th, double x) { return std::log1p(-lindley_sf(th, x)); }

// 1 - V^a with log V given.
double one_minus_pow(double log_v, double a) { return -std::expm1(a * log_v); }

double rate_exponential_geometric(P p, double x, std::string_view)
{
    const double beta = p[0], q = p[1];
    return beta / (1.0 - q * std::exp(-beta * x));
}

double rate_binomial_exponential2(P p, double x, std::string_view)
{
    const double l = p[0], th = p[1];
    return l * (1.0 - th / (2.0 - th + l * th * x));
}

double rate_rayleigh_logarithmic(P p, double x, std::string_view)
{
    const double s = p[0], q = p[1];
    const double u = std::exp(-x * x / (2.0 * s * s)) * q;
    return -(x * u / (1.0 - u)) / (s * s * std::log1p(-u));
}

double rate_x_exponential(P p, double x, std::string_view)
{
    const double a = p[0], l = p[1];
    const double inner = 1.0 - (1.0 + l * x * x) * std::exp(-l * x);
    const double num = a * std::pow(inner, a - 1.0) * (l * x * x - 2.0 * x + 1.0) * l * std::exp(-l * x);
    return num / (1.0 - std::pow(inner, a));
}

double rate_arshad(P p, double x, std::string_view)
{
    const double a = p[0], b = p[1], g = p[2];
    return b * (a + 1.0) / (a * g * (1.0 - x / g) * (1.0 + x / (a * g)));
}

double rate_nadarajah(P p, double x, std::string_view)
{
    const double a = p[0], l = p[1];
    const double lv = lindley_log_cdf(l, x);
    return a * l * l / (1.0 + l) * (1.0 + x) * std::exp((a - 1.0) * lv) * std::exp(-l * x) / one_minus_pow(lv, a);
}

// Default reading divides the whole numerator; "alpha-only" divides only lambda*alpha.
double rate_extended_lindley(P p, double x, std::string_view variant)
{
    const double a = p[0], b = p[1], l = p[2];
    const double d = 1.0 + l + l * x;
    const double lead = b * d * std::pow(l, b) * std::pow(x, b - 1.0);
    if (variant == "alpha-only") return lead - l * a / d;
    return (lead - l * a) / d;
}

double rate_ibrahim(P p, double x, std::string_view)
{
    const double a = p[0], b = p[1], th = p[2];
    const double num = (std::pow(th, a + 1.0) * std::pow(x, a - 1.0) / std::tgamma(a) +
                        std::pow(th, b) * std::pow(x, b - 1.0) / std::tgamma(b)) *
                       std::exp(-th * x) / (1.0 + th);
    // 1 - [th P(a, th x) + P(b, th x)] / (1 + th) written with upper tails.
    const double den = (th * bm::gamma_q(a, th * x) + bm::gamma_q(b, th * x)) / (1.0 + th);
    return num / den;
}

double rate_beta_gl(P p, double x, std::string_view)
{
    const double a = p[0], b = p[1], al = p[2], l = p[3];
    const double lv = lindley_log_cdf(l, x);
    const double one_minus_g = one_minus_pow(lv, al);
    const double num = al * l * l / (bm::beta(a, b) * (1.0 + l)) * (1.0 + x) * std::exp(-l * x) *
                       std::exp((a * al - 1.0) * lv) * std::pow(one_minus_g, b - 1.0);
    // 1 - I_G(a, b) = I_{1-G}(b, a)
    return num / bm::ibeta(b, a, one_minus_g);
}

// Default Theta = theta in the second numerator term; "no-Theta" drops it.
double rate_five_parameter_lindley(P p, double x, std::string_view variant)
{
    const double th = p[0], a = p[1], b = p[2], k = p[3], eta = p[4];
    const double big_theta = variant == "no-Theta" ? 1.0 : th;
    const double z = th * x;
    const double num =
        th * th * (k * std::pow(z, a - 1.0) / std::tgamma(a) + eta * std::pow(z, b - 1.0) / (big_theta * std::tgamma(b))) *
        std::exp(-z);
    // eta + th k - [th k P(a, z) + eta P(b, z)]
    const double den = th * k * bm::gamma_q(a, z) + eta * bm::gamma_q(b, z);
    return num / den;
}

// u = theta (x / gamma)^c. The published denominator carries Gamma(alpha) where
// the cdf needs Gamma(alpha + 1); "corrected" uses the latter.
double rate_log_gl_weibull(P p, double x, std::string_view variant)
{
    const double th = p[0], a = p[1], c = p[2], g = p[3], b = p[4];
    const double r = x / g;
    const double u = th * std::pow(r, c);
    const double num = c * std::pow(th, a + 1.0) / (g * (b + th) * std::tgamma(a + 1.0)) * std::pow(r, c * a - 1.0) *
                       (a + b * std::pow(r, c)) * std::exp(-u);
    double den;
    if (variant == "corrected") {
        den = (th * bm::gamma_q(a, u) + b * bm::gamma_q(a + 1.0, u)) / (b + th);
    } else {
        const double ga = std::tgamma(a);
        const double lower_a = ga * bm::gamma_p(a, u);
        const double diff = ga - bm::tgamma(a + 1.0, u);
        den = 1.0 - (th * lower_a + b / a * diff) / ((b + th) * ga);
    }
    return num / den;
}

double rate_bhati(P p, double x, std::string_view)
{
    const double a = p[0], th = p[1], l = p[2];
    const double y = 1.0 + x * l;
    return a * th * th * l * std::pow(y, 2.0 * a - 1.0) / (1.0 + th * std::pow(y, a));
}

double rate_elgarhy(P p, double x, std::string_view)
{
    const double a = p[0], th = p[1], l = p[2];
    const double lw = lindley_log_cdf(th, x);
    const double wa = std::exp(a * lw);
    const double num = a * th * th / (th + 1.0) * (1.0 + x) * std::exp(-th * x) * std::exp((a - 1.0) * lw) *
                       ((1.0 + l) - 2.0 * l * wa);
    // 1 - W^a (1 + l - l W^a) = (1 - W^a)(1 - l W^a)
    return num / (one_minus_pow(lw, a) * (1.0 - l * wa));
}

double rate_ramos_louzada(P p, double x, std::string_view)
{
    const double a = p[0], l = p[1], phi = p[2];
    const double z = std::pow(l * x, a);
    const double num = a * std::pow(l, a * phi) * std::pow(x, a * phi - 1.0) * (l + z) * std::exp(-z);
    const double den = bm::tgamma(phi, z) * (l + phi) + std::pow(z, phi) * std::exp(-z);
    return num / den;
}

double rate_sharma(P p, double x, std::string_view)
{
    const double a = p[0], th = p[1];
    const double xa = std::pow(x, a);
    return a * th * th * (1.0 + xa) / (std::pow(x, a + 1.0) * ((1.0 + th) * xa * std::expm1(th / xa) - th));
}

double rate_benkhelifa(P p, double x, std::string_view)
{
    const double a = p[0], b = p[1], th = p[2];
    const double lw = lindley_log_cdf(th, x);
    const double wa = std::exp(a * lw);
    const double num = a * th * th * std::exp(-th * x) * (1.0 + x) * std::exp((a - 1.0) * lw);
    return num / ((1.0 + th) * (b + (1.0 - b) * wa) * one_minus_pow(lw, a));
}

double rate_ekhosuehi(P p, double x, std::string_view)
{
    const double a = p[0], l = p[1], b = p[2];
    const double xa = std::pow(x, a);
    return a * l * l * (b + xa) * std::pow(x, a - 1.0) / (1.0 + l * b + l * xa);
}

double rate_lindley_order_m(P p, double x, std::string_view)
{
    const int m = static_cast<int>(p[0]);
    const double th = p[1];
    double num = 0.0;
    for (int i = 1; i <= m; ++i) num += std::pow(x, m - i) / std::tgamma(m - i + 1.0);
    double den = 0.0;
    for (int j = 0; j <= m - 1; ++j)
        for (int i = 1; i <= m - j; ++i) den += std::pow(th, m - i) * std::pow(x, j) / std::tgamma(j + 1.0);
    return std::pow(th, m) * num / den;
}

double rate_algarni(P p, double x, std::string_view)
{
    const double l = p[0], g = p[1], d = p[2];
    const double lk = lindley_log_cdf(l, x);
    const double kg_m1 = std::expm1(g * lk); // K^gamma - 1
    const double kg = std::exp(g * lk);
    return l * l * g / (l + 1.0) * (x + 1.0) * std::exp((g - 1.0) * lk) * std::exp(-l * x) /
           (kg_m1 * (d * kg_m1 - kg));
}

double rate_dus_exponential(P p, double x, std::string_view)
{
    const double th = p[0];
    const double s = std::exp(-th * x);
    return th * s / std::expm1(s);
}

// The published form has e^{theta x} in the exponent; "corrected" uses e^{-theta x}.
double rate_dus_lindley(P p, double x, std::string_view variant)
{
    const double th = p[0];
    const double num = th * th * (1.0 + x) * std::exp(-th * x);
    const double sign = variant == "corrected" ? -1.0 : 1.0;
    const double inner = std::exp(sign * th * x) * (1.0 + th + th * x) / (1.0 + th);
    return num / ((th + 1.0) * std::expm1(inner));
}

double rate_dus_lomax(P p, double x, std::string_view)
{
    const double a = p[0], b = p[1];
    const double y = 1.0 + b * x;
    return a * b * std::pow(y, -(a + 1.0)) / std::expm1(std::pow(y, -a));
}

double rate_gdus_weibull(P p, double x, std::string_view)
{
    const double a = p[0], l = p[1], k = p[2];
    const double z = std::pow(x / l, k);
    const double s = std::exp(-z);
    const double log_w = std::log1p(-s);   // log(1 - e^{-z})
    const double wa = std::exp(a * log_w); // (1 - e^{-z})^alpha
    // e - e^{W^a} = -e expm1(W^a - 1)
    const double den = -kE * std::expm1(std::expm1(a * log_w));
    return a * k * std::pow(x, k - 1.0) * s * std::exp((a - 1.0) * log_w) * std::exp(wa) * std::pow(l, -k) / den;
}

double rate_dus_kumaraswamy(P p, double x, std::string_view)
{
    const double a = p[0], b = p[1];
    const double xa = std::pow(x, a);
    const double s = std::exp(b * std::log1p(-xa)); // (1 - x^a)^b
    return a * b * std::pow(x, a - 1.0) * std::pow(1.0 - xa, b - 1.0) * std::exp(1.0 - s) / (-kE * std::expm1(-s));
}

// The published form writes e^{-(x/beta)^alpha} twice where the baseline cdf is
// e^{-(x/beta)^{-alpha}}; "corrected" restores the negative exponent.
double rate_dus_inverse_weibull(P p, double x, std::string_view variant)
{
    const double a = p[0], b = p[1];
    const double r = x / b;
    const double y = std::pow(r, -a);
    const double inner = variant == "corrected" ? std::exp(-y) : std::exp(-std::pow(r, a));
    return (a / b) * std::pow(r, -(a + 1.0)) * std::exp(-y + inner) / (-kE * std::expm1(inner - 1.0));
}

double rate_dus_ew(P p, double x, std::string_view)
{
    const double a = p[0], l = p[1];
    const double n = l * l * std::exp(-l * x) + a * std::pow(l, a) * std::pow(x, a - 1.0) * std::exp(-std::pow(l * x, a));
    const double v = (l * std::exp(-l * x) + std::exp(-std::pow(l * x, a))) / (1.0 + l);
    return n * std::exp(1.0 - v) / (-kE * std::expm1(-v) * (1.0 + l));
}

CatalogEntry formula_entry(std::string name, std::string title, std::vector<CatalogParam> params,
                           std::function<double(P, double, std::string_view)> rate, std::string formula,
                           std::vector<std::string> shapes, std::string source)
{
    CatalogEntry e;
    e.name = std::move(name);
    e.title = std::move(title);
    e.params = std::move(params);
    e.variants = {"published"};
    e.rate = std::move(rate);
    e.formula = std::move(formula);
    e.expected_shapes = std::move(shapes);
    e.source = std::move(source);
    e.has_formula = true;
    return e;
}

CatalogEntry claim_entry(std::string name, std::string title, std::vector<std::string> shapes, std::string source)
{
    CatalogEntry e;
    e.name = std::move(name);
    e.title = std::move(title);
    e.expected_shapes = std::move(shapes);
    e.source = std::move(source);
    e.has_formula = false;
    e.note = "Shape claim only; no hazard formula is carried for this entry.";
    return e;
}

std::vector<CatalogEntry> build_catalog()
{
    std::vector<CatalogEntry> c;

    c.push_back(formula_entry("exponential-geometric", "Exponential-geometric",
                              {positive("beta"), unit_open("p")}, rate_exponential_geometric,
                              "h(x) = beta / (1 - p exp(-beta x))", {"DFR"},
                              "Statistics & Probability Letters 39(1), 1998"));

    c.push_back(formula_entry("binomial-exponential-2", "Binomial-exponential 2",
                              {positive("lambda"), {"theta", 0.0, 1.0, false, false, false, 0.05, 0.95}},
                              rate_binomial_exponential2, "h(x) = lambda (1 - theta / (2 - theta + lambda theta x))",
                              {"IFR"}, "Binomial-exponential 2 model, 2014"));

    {
        auto e = formula_entry("rayleigh-logarithmic", "Rayleigh-logarithmic", {positive("sigma"), unit_open("p")},
                               rate_rayleigh_logarithmic,
                               "h(x) = -x e^{-x^2/(2 sigma^2)} p (1 - p e^{-x^2/(2 sigma^2)})^{-1} / "
                               "(sigma^2 ln(1 - p e^{-x^2/(2 sigma^2)}))",
                               {"IFR"}, "Rayleigh-logarithmic mixed model, 2017");
        e.note = "The leading minus sign is kept; ln(1 - p e^{...}) < 0 so the rate is positive.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("x-exponential", "x-Exponential", {positive("alpha"), positive("lambda")},
                               rate_x_exponential,
                               "h(x) = alpha (1 - (1 + lambda x^2) e^{-lambda x})^{alpha-1} [lambda x^2 - 2x + 1] "
                               "lambda e^{-lambda x} / (1 - (1 - (1 + lambda x^2) e^{-lambda x})^alpha)",
                               {"BFR"}, "x-Exponential model, 2016");
        e.note = "The bracket lambda x^2 - 2x + 1 is negative for some (lambda, x) and the base "
                 "1 - (1 + lambda x^2) e^{-lambda x} can leave [0, 1]; the audit reports those points.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("arshad", "Bathtub model on (0, g]",
                               {positive("alpha", 0.1, 3.0), positive("beta", 0.5, 3.0), positive("g", 0.5, 5.0)},
                               rate_arshad, "h(x) = beta (alpha + 1) / (alpha g (1 - x/g) (1 + x/(alpha g))), 0 < x <= g",
                               {"BFR"}, "Pakistan Journal of Statistics 37(1), 2021");
        e.upper = [](P p) { return p[2]; };
        c.push_back(std::move(e));
    }
    c.push_back(formula_entry("nadarajah-gl", "Generalized Lindley (two-parameter)",
                              {positive("alpha", 0.2, 5.0), positive("lambda")}, rate_nadarajah,
                              "h(x) = alpha lambda^2 / (1 + lambda) (1 + x) V(x)^{alpha-1} e^{-lambda x} / (1 - V(x)^alpha), "
                              "V(x) = 1 - (1 + lambda + lambda x)/(1 + lambda) e^{-lambda x}",
                              {"IFR", "DFR", "BFR"}, "Sankhya B 73(2), 2011"));
    {
        auto e = formula_entry("extended-lindley", "Extended Lindley",
                               {positive("alpha"), positive("beta"), positive("lambda")}, rate_extended_lindley,
                               "h(x) = (beta (1 + lambda + lambda x) lambda^beta x^{beta-1} - lambda alpha) / "
                               "(1 + lambda + lambda x)",
                               {"IFR", "DFR", "BFR", "UBFR"}, "Journal of the Korean Statistical Society 41(1), 2012");
        e.variants = {"published", "alpha-only"};
        e.note = "Default grouping divides the whole numerator by (1 + lambda + lambda x). Variant "
                 "'alpha-only' divides only lambda alpha. Either reading can go negative.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("ibrahim-gl", "Generalized Lindley (gamma mixture)",
                               {positive("alpha"), positive("beta"), positive("theta")}, rate_ibrahim,
                               "h(x) = (1/(1+theta)) [theta^{alpha+1} x^{alpha-1}/Gamma(alpha) + theta^beta x^{beta-1}/Gamma(beta)] "
                               "e^{-theta x} / (1 - (1/(1+theta)) [theta gamma(alpha, theta x)/Gamma(alpha) + "
                               "gamma(beta, theta x)/Gamma(beta)])",
                               {"IFR", "DFR", "BFR", "UBFR", "MBFR"}, "Mathematical Theory and Modeling 3(13), 2013");
        e.note = "Mixture of Gamma(alpha, theta) and Gamma(beta, theta) with weight theta/(1+theta) on the first.";
        c.push_back(std::move(e));
    }
    c.push_back(formula_entry("beta-gl", "Beta-generalized Lindley",
                              {positive("a"), positive("b"), positive("alpha"), positive("lambda")}, rate_beta_gl,
                              "h(x) = alpha lambda^2 / (B(a,b)(1+lambda)) (1+x) e^{-lambda x} V^{a alpha - 1} "
                              "(1 - V^alpha)^{b-1} / (1 - I_{V^alpha}(a, b)), V as in nadarajah-gl",
                              {"IFR", "DFR", "BFR"}, "Journal of Statistical Computation and Simulation 85(10), 2015"));
    {
        auto e = formula_entry("five-parameter-lindley", "Five-parameter Lindley",
                               {positive("theta"), positive("alpha"), positive("beta"),
                                {"k", 0.0, kInf, false, true, false, 0.0, 3.0},
                                {"eta", 0.0, kInf, false, true, false, 0.0, 3.0}},
                               rate_five_parameter_lindley,
                               "h(x) = theta^2 [k (theta x)^{alpha-1}/Gamma(alpha) + eta (theta x)^{beta-1}/(Theta Gamma(beta))] "
                               "e^{-theta x} / (eta + theta k - [theta k P(alpha, theta x) + eta P(beta, theta x)])",
                               {"Constant", "IFR", "DFR", "BFR"}, "Pakistan Journal of Statistics 31(4), 2015");
        e.variants = {"published", "no-Theta"};
        e.note = "Theta is read as theta, which makes the rate the derivative of the log survival. Variant "
                 "'no-Theta' sets Theta = 1.";
        e.constraint = [](P p) { return p[3] + p[4] > 0.0 ? std::string() : std::string("k + eta must be positive"); };
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("log-gl-weibull", "Log generalized Lindley-Weibull",
                               {positive("theta"), positive("alpha"), positive("c"), positive("gamma"), positive("beta")},
                               rate_log_gl_weibull,
                               "h(x) = c theta^{alpha+1} / (gamma (beta+theta) Gamma(alpha+1)) (x/gamma)^{c alpha - 1} "
                               "(alpha + beta (x/gamma)^c) e^{-u} / (1 - [theta (Gamma(alpha) - Gamma(alpha, u)) + "
                               "(beta/alpha)(Gamma(alpha) - Gamma(alpha+1, u))] / ((beta+theta) Gamma(alpha))), "
                               "u = theta (x/gamma)^c",
                               {"IFR", "DFR", "BFR"}, "Journal of Data Science 13(2), 2015");
        e.variants = {"published", "corrected"};
        e.note = "The published denominator has Gamma(alpha) - Gamma(alpha+1, u); the survival function of the "
                 "law needs Gamma(alpha+1) - Gamma(alpha+1, u), which is variant 'corrected'.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("bhati", "Three-parameter generalized Lindley extension",
                               {positive("alpha", 0.1, 3.0), positive("theta"), positive("lambda")}, rate_bhati,
                               "h(x) = alpha theta^2 lambda (1 + lambda x)^{2 alpha - 1} / (1 + theta (1 + lambda x)^alpha)",
                               {"DFR", "UBFR", "IFR"}, "arXiv:1601.01045, 2016");
        e.note = "The published regime list repeats one condition for two shapes; the regime map is measured "
                 "with the classifier instead.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("elgarhy-transmuted-gl", "Transmuted generalized Lindley",
                               {positive("a"), positive("theta"), {"lambda", -1.0, 1.0, false, false, false, -1.0, 1.0}},
                               rate_elgarhy,
                               "h(x) = a theta^2/(theta+1) (1+x) e^{-theta x} W^{a-1} ((1+lambda) - 2 lambda W^a) / "
                               "(1 - W^a (1 + lambda - lambda W^a)), W = 1 - e^{-theta x}(1 + theta x/(theta+1))",
                               {"IFR"}, "International Journal of Mathematics Trends and Technology 29(2), 2016");
        e.note = "The transmutation parameter lambda ranges over [-1, 1].";
        c.push_back(std::move(e));
    }
    c.push_back(formula_entry("ramos-louzada-gwl", "Generalized weighted Lindley",
                              {positive("alpha"), positive("lambda"), positive("phi")}, rate_ramos_louzada,
                              "h(x) = alpha lambda^{alpha phi} x^{alpha phi - 1} (lambda + (lambda x)^alpha) e^{-(lambda x)^alpha} "
                              "/ (Gamma(phi, (lambda x)^alpha)(lambda + phi) + (lambda x)^{alpha phi} e^{-(lambda x)^alpha})",
                              {"IFR", "DFR", "BFR", "UBFR", "RollerCoaster(2)"}, "Cogent Mathematics 3(1), 2016"));
    c.push_back(formula_entry("sharma-gil", "Generalized inverse Lindley", {positive("alpha"), positive("theta")},
                              rate_sharma,
                              "h(x) = alpha theta^2 (1 + x^alpha) / (x^{alpha+1} [(1+theta) x^alpha (e^{theta/x^alpha} - 1) - theta])",
                              {"UBFR"}, "Communications in Statistics - Theory and Methods 45(19), 2016"));
    {
        auto e = formula_entry("benkhelifa-moegl", "Marshall-Olkin extended generalized Lindley",
                               {positive("alpha"), positive("beta"), positive("theta")}, rate_benkhelifa,
                               "h(x) = alpha theta^2 e^{-theta x}(1+x) W^{alpha-1} / ((1+theta)[beta + (1-beta) W^alpha]"
                               "[1 - W^alpha]), W = 1 - (1+theta+theta x)/(1+theta) e^{-theta x}",
                               {"IFR", "DFR", "UBFR", "BFR", "MBFR"},
                               "Communications in Statistics - Simulation and Computation 46(10), 2017");
        e.note = "beta-bar is 1 - beta.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("ekhosuehi-opone", "Three-parameter generalized Lindley",
                               {positive("alpha", 0.2, 4.0), positive("lambda"), positive("beta")}, rate_ekhosuehi,
                               "h(x) = alpha lambda^2 (beta + x^alpha) x^{alpha-1} / (1 + lambda beta + lambda x^alpha)",
                               {"DFR", "IFR"}, "Statistica 78(3), 2018");
        e.note = "The published parameter list names theta where the formula uses alpha; alpha is used.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("generalized-lindley-order-m", "Generalized Lindley of order m",
                               {{"m", 1.0, 12.0, false, false, true, 1.0, 6.0}, positive("theta")}, rate_lindley_order_m,
                               "h(x) = theta^m sum_{i=1}^m x^{m-i}/Gamma(m-i+1) / "
                               "sum_{j=0}^{m-1} sum_{i=1}^{m-j} theta^{m-i} x^j / j!",
                               {"IFR"}, "Symmetry 12(10), 2020");
        e.note = "m = 1 is the exponential law (constant rate); m = 2 is the Lindley rate.";
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("algarni-moegl", "Marshall-Olkin extended generalized Lindley (2021)",
                               {positive("lambda"), positive("gamma"), positive("delta")}, rate_algarni,
                               "h(x) = lambda^2 gamma/(lambda+1) (x+1) K^{gamma-1} e^{-lambda x} / "
                               "((K^gamma - 1)(delta (K^gamma - 1) - K^gamma)), K = 1 - (lambda + lambda x + 1) e^{-lambda x}/(lambda+1)",
                               {"IFR", "DFR", "BFR"}, "PLoS ONE 16(2), 2021");
        e.note = "The published form mixes x and t for the same variable; both are read as x.";
        c.push_back(std::move(e));
    }
    c.push_back(formula_entry("dus-exponential", "DUS-exponential", {positive("theta")}, rate_dus_exponential,
                              "h(x) = theta e^{-theta x} / (e^{e^{-theta x}} - 1)", {"IFR"},
                              "J. Stat. Appl. Pro. Lett. 2(3), 2015"));
    {
        auto e = formula_entry("dus-lindley-maurya", "Exponential transformed Lindley", {positive("theta")},
                               rate_dus_lindley,
                               "h(x) = theta^2 (1+x) e^{-theta x} / ((theta+1)(exp[e^{theta x} (1+theta+theta x)/(1+theta)] - 1))",
                               {}, "International Journal of Statistics and Economics 18(2), 2017");
        e.variants = {"published", "corrected"};
        e.note = "The published exponent e^{theta x} should be e^{-theta x} for the DUS transform of the "
                 "Lindley law; variant 'corrected' matches dus(lindley). No shape claim is recorded.";
        c.push_back(std::move(e));
    }
    c.push_back(formula_entry("dus-lomax", "DUS-Lomax", {positive("alpha"), positive("beta")}, rate_dus_lomax,
                              "h(x) = alpha beta (1 + beta x)^{-(alpha+1)} / (e^{(1+beta x)^{-alpha}} - 1)",
                              {"DFR", "UBFR"}, "Stochastic Models in Reliability Engineering, CRC Press, 2020"));
    c.push_back(formula_entry("gdus-weibull", "GDUS-Weibull", {positive("alpha"), positive("lambda"), positive("k")},
                              rate_gdus_weibull,
                              "h(x) = alpha k x^{k-1} e^{-z} (1 - e^{-z})^{alpha-1} e^{(1-e^{-z})^alpha} lambda^{-k} / "
                              "(e - e^{(1-e^{-z})^alpha}), z = (x/lambda)^k",
                              {"IFR", "DFR", "UBFR"}, "Applied Probability and Stochastic Processes, Springer, 2020"));
    {
        auto e = formula_entry("dus-kumaraswamy", "DUS-Kumaraswamy", {positive("alpha"), positive("beta")},
                               rate_dus_kumaraswamy,
                               "h(x) = alpha beta x^{alpha-1} (1-x^alpha)^{beta-1} e^{1-(1-x^alpha)^beta} / "
                               "(e - e^{1-(1-x^alpha)^beta}), 0 < x < 1",
                               {"IFR", "BFR"}, "Istatistik 13(1), 2021");
        e.upper = [](P) { return 1.0; };
        c.push_back(std::move(e));
    }
    {
        auto e = formula_entry("dus-inverse-weibull", "DUS-inverse Weibull", {positive("alpha"), positive("beta")},
                               rate_dus_inverse_weibull,
                               "h(x) = (alpha/beta)(x/beta)^{-(alpha+1)} e^{-(x/beta)^{-alpha} + e^{-(x/beta)^alpha}} / "
                               "(e - e^{e^{-(x/beta)^alpha}})",
                               {"DFR", "UBFR"}, "Reliability: Theory & Applications 16(2), 2021");
        e.variants = {"published", "corrected"};
        e.note = "The published form has e^{-(x/beta)^alpha} in two places where the inverse Weibull cdf is "
                 "e^{-(x/beta)^{-alpha}}; variant 'corrected' fixes the sign and equals dus(inverse-weibull).";
        c.push_back(std::move(e));
    }
    c.push_back(formula_entry("dus-ew", "DUS exponential-Weibull", {positive("alpha"), positive("lambda")}, rate_dus_ew,
                              "h(x) = N(x) e^{1-V(x)} / ((e - e^{1-V(x)})(1 + lambda)), "
                              "N = lambda^2 e^{-lambda x} + alpha lambda^alpha x^{alpha-1} e^{-(lambda x)^alpha}, "
                              "V = (lambda e^{-lambda x} + e^{-(lambda x)^alpha})/(1 + lambda)",
                              {"IFR", "DFR", "UBFR"}, "Closed form of dus(exp-weibull-mixture)"));

    c.push_back(claim_entry("generalized-exponential-geometric", "Generalized exponential-geometric",
                            {"IFR", "DFR", "UBFR"}, "Computational Statistics & Data Analysis 54(4), 2010"));
    c.push_back(claim_entry("exponential-geometric-range", "Exponential-geometric range", {"IFR"},
                            "Economic Quality Control 27(1), 2012"));
    c.push_back(claim_entry("exponential-poisson-lindley", "Exponential Poisson-Lindley", {"DFR"}, "Statistics 47(2), 2013"));
    c.push_back(claim_entry("nadarajah-haghighi", "Nadarajah-Haghighi", {"Constant", "IFR", "DFR", "BFR", "UBFR"},
                            "Computational Statistics & Data Analysis 62, 2013"));
    c.push_back(claim_entry("kumaraswamy-generalized-rayleigh", "Kumaraswamy generalized Rayleigh", {"IFR", "DFR", "BFR"},
                            "Journal of Statistical Computation and Simulation 84(2), 2014"));
    c.push_back(claim_entry("exponentiated-exponential-geometric", "Exponentiated exponential-geometric",
                            {"IFR", "DFR", "UBFR"}, "Statistics 48(1), 2014"));
    c.push_back(claim_entry("marshall-olkin-generalized-exponential", "Marshall-Olkin generalized exponential",
                            {"IFR", "DFR", "BFR", "UBFR"}, "Metron 73(3), 2015"));
    c.push_back(claim_entry("extended-inverse-lindley", "Extended inverse Lindley", {"UBFR"}, "SpringerPlus 4(1), 2015"));
    c.push_back(claim_entry("modified-weibull-geometric", "Modified Weibull geometric", {"IFR", "DFR", "BFR", "UBFR"},
                            "Metron 73(3), 2015"));
    c.push_back(claim_entry("generalized-bilal", "Generalized Bilal", {"IFR", "DFR", "UBFR"},
                            "Communications in Statistics - Theory and Methods 46(18), 2017"));
    c.push_back(claim_entry("alpha-power-transformed-weibull", "Alpha power-transformed Weibull",
                            {"Constant", "IFR", "DFR", "BFR", "UBFR", "MBFR"}, "Annals of Data Science 4(1), 2017"));
    c.push_back(claim_entry("generalized-inverse-xgamma", "Generalized inverse xgamma", {"IFR", "DFR", "UBFR"},
                            "arXiv:1812.04933, 2018"));
    c.push_back(claim_entry("generalized-weibull-uniform", "Generalized Weibull uniform", {"IFR", "DFR", "BFR"},
                            "Mathematical Sciences 13, 2019"));
    c.push_back(claim_entry("generalized-x-exponential", "Generalized x-exponential", {"IFR", "DFR", "BFR"},
                            "J. Indian Soc. Probab. Stat. 20, 2019"));
    c.push_back(claim_entry("marshall-olkin-logistic-exponential", "Marshall-Olkin logistic-exponential",
                            {"IFR", "DFR", "BFR", "UBFR"}, "Communications in Statistics - Theory and Methods 48(2), 2019"));
    c.push_back(claim_entry("burr-hatke-exponential", "Burr-Hatke exponential", {"DFR"}, "2019"));
    c.push_back(claim_entry("odd-lindley-inverse-exponential", "Odd Lindley-inverse exponential", {"DFR"},
                            "Pakistan Journal of Statistics 36(3), 2020"));
    c.push_back(claim_entry("lindley-extension-2020", "Generalized Lindley extension", {"IFR", "DFR", "BFR"},
                            "Journal of Scientific Research 64(2), 2020"));
    c.push_back(claim_entry("inverted-power-rama", "Inverted power Rama", {"DFR", "UBFR"},
                            "Asian Journal of Probability and Statistics, 2020"));
    c.push_back(claim_entry("generalized-log-weibull", "Generalized log-Weibull", {"IFR", "DFR", "BFR", "UBFR", "S-shape"},
                            "International Journal of Statistics in Medical Research 10, 2021"));

    // "UFR" and "MFR" in claim tables are stored as UBFR and MBFR.
    return c;
}

} // namespace

const std::vector<CatalogEntry>& catalog()
{
    static const std::vector<CatalogEntry> table = build_catalog();
    return table;
}

const CatalogEntry& catalog_entry(std::string_view name)
{
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw DomainError("unknown catalog entry '" + std::string(name) + "'");
}

std::string validate_catalog_params(const CatalogEntry& e, std::span<const double> params, std::string_view variant)
{
    if (!e.has_formula) throw DomainError(e.name + ": entry has no hazard formula (shape claim only)");
    if (params.size() != e.params.size()) {
        std::ostringstream os;
        os << e.name << ": expected " << e.params.size() << " parameters (";
        for (std::size_t i = 0; i < e.params.size(); ++i) os << (i ? ", " : "") << e.params[i].name;
        os << "), got " << params.size();
        throw DomainError(os.str());
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!e.params[i].admits(params[i])) {
            std::ostringstream os;
            os << e.name << ": parameter '" << e.params[i].name << "' = " << params[i] << " outside "
               << e.params[i].range_text();
            throw DomainError(os.str());
        }
    }
    if (e.constraint) {
        const std::string msg = e.constraint(params);
        if (!msg.empty()) throw DomainError(e.name + ": " + msg);
    }
    if (variant.empty()) return e.variants.front();
    if (std::find(e.variants.begin(), e.variants.end(), variant) == e.variants.end())
        throw DomainError(e.name + ": unknown variant '" + std::string(variant) + "'");
    return std::string(variant);
}

HazardDomain catalog_domain(std::string_view name, std::span<const double> params)
{
    const auto& e = catalog_entry(name);
    validate_catalog_params(e, params);
    return {0.0, e.upper ? e.upper(params) : kInf};
}

double catalog_hazard(std::string_view name, std::span<const double> params, double t, std::string_view variant)
{
    const auto& e = catalog_entry(name);
    const std::string v = validate_catalog_params(e, params, variant);
    const double hi = e.upper ? e.upper(params) : kInf;
    if (!(t >= 0.0 && t <= hi)) {
        std::ostringstream os;
        os << e.name << ": t = " << t << " outside the domain [0, " << (std::isinf(hi) ? "inf" : format_number(hi))
           << "]";
        throw DomainError(os.str());
    }
    return e.rate(params, t, v);
}

ShapeClaim expected_shapes(std::string_view name)
{
    const auto& e = catalog_entry(name);
    return {e.expected_shapes, !e.has_formula};
}

Model catalog_model(std::string_view name, std::span<const double> params, std::string_view variant)
{
    const auto& e = catalog_entry(name);
    const std::string v = validate_catalog_params(e, params, variant);
    std::vector<double> p(params.begin(), params.end());
    const HazardDomain d{0.0, e.upper ? e.upper(params) : kInf};
    const auto* entry = &e;
    auto h = [entry, p, v](double t) { return entry->rate(p, t, v); };
    return hazard_to_distribution(h, d, {}, e.name);
}

std::vector<double> audit_grid(const HazardDomain& d)
{
    std::vector<double> g;
    if (std::isfinite(d.hi)) {
        const double w = d.hi - d.lo;
        for (double u : numeric::linear_grid(1e-6, 1.0 - 1e-6, 400)) g.push_back(d.lo + w * u);
    } else {
        g = numeric::geometric_grid(1e-4, 100.0, 400);
    }
    return g;
}

std::vector<AuditFinding> audit_nonnegativity(std::size_t draws, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const auto unif = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<AuditFinding> out;
    for (const auto& e : catalog()) {
        if (!e.has_formula) continue;
        for (std::size_t k = 0; k < draws; ++k) {
            std::vector<double> p;
            for (const auto& cp : e.params) {
                double v;
                if (cp.integer) {
                    v = std::floor(cp.draw_lo + (cp.draw_hi - cp.draw_lo + 1.0) * unif());
                } else if (cp.draw_lo > 0.0) {
                    v = cp.draw_lo * std::pow(cp.draw_hi / cp.draw_lo, unif());
                } else {
                    v = cp.draw_lo + (cp.draw_hi - cp.draw_lo) * unif();
                }
                p.push_back(v);
            }
            if (e.constraint && !e.constraint(p).empty()) p.back() += 1.0;
            const HazardDomain d{0.0, e.upper ? e.upper(p) : kInf};
            for (const auto& variant : e.variants) {
                AuditFinding f{e.name, variant, p, kInf, 0.0, false, false};
                // Past H(t) = 300 the survival is below 1e-130 and printed forms
                // degrade to 0/0 by underflow, which says nothing about the formula.
                double H = 0.0, prev_t = 0.0, prev_r = 0.0;
                for (double t : audit_grid(d)) {
                    if (H > 300.0) break;
                    const double r = e.rate(p, t, variant);
                    if (std::isnan(r)) {
                        f.non_finite = true;
                        continue;
                    }
                    if (std::isfinite(r)) {
                        H += 0.5 * (std::max(r, 0.0) + std::max(prev_r, 0.0)) * (t - prev_t);
                        prev_t = t;
                        prev_r = r;
                    }
                    if (r < f.min_rate) {
                        f.min_rate = r;
                        f.at_t = t;
                    }
                }
                f.negative = f.min_rate < -1e-12;
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

std::string catalog_page(const CatalogEntry& e)
{
    std::ostringstream os;
    os << "# " << e.name << "\n\n" << e.title << "\n\n";
    if (e.has_formula) {
        os << "## Hazard\n\n```\n" << e.formula << "\n```\n\n";
        os << "Domain: " << (e.upper ? "bounded above (see formula)" : "x > 0") << "\n\n";
        os << "## Parameters\n\n| name | range |\n|---|---|\n";
        for (const auto& p : e.params) os << "| " << p.name << " | " << p.range_text() << " |\n";
        os << "\nVariants: ";
        for (std::size_t i = 0; i < e.variants.size(); ++i)
            os << (i ? ", " : "") << e.variants[i] << (i == 0 ? " (default)" : "");
        os << "\n\n";
    } else {
        os << "No hazard formula is carried (no-formula).\n\n";
    }
    os << "## Claimed shapes\n\n";
    if (e.expected_shapes.empty()) os << "none recorded\n";
    for (const auto& s : e.expected_shapes) os << "- " << s << "\n";
    if (!e.note.empty()) os << "\n## Notes\n\n" << e.note << "\n";
    os << "\n## Source\n\n" << e.source << "\n";
    return os.str();
}

std::vector<std::filesystem::path> write_catalog_docs(const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    std::ostringstream index;
    index << "# Hazard catalog\n\n| entry | claimed shapes | formula |\n|---|---|---|\n";
    for (const auto& e : catalog()) {
        const auto path = dir / (e.name + ".md");
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DomainError("cannot write " + path.string());
        f << catalog_page(e);
        written.push_back(path);
        index << "| [" << e.name << "](" << e.name << ".md) | ";
        for (std::size_t i = 0; i < e.expected_shapes.size(); ++i) index << (i ? ", " : "") << e.expected_shapes[i];
        index << " | " << (e.has_formula ? "yes" : "no-formula") << " |\n";
    }
    const auto idx = dir / "index.md";
    std::ofstream f(idx, std::ios::binary);
    if (!f) throw DomainError("cannot write " + idx.string());
    f << index.str();
    written.push_back(idx);
    return written;
}

} // namespace agewise
