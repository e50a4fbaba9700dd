#include "agewise/inference.hpp"

#include "agewise/error.hpp"
#include "agewise/model_spec.hpp"
#include "agewise/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace agewise {

std::vector<double> sample(const Model& model, std::size_t n, std::uint64_t seed)
{
    if (n < 1) throw DomainError("sample: n must be at least 1");
    Rng rng(seed);
    return draw(model, n, rng);
}

std::uint64_t replication_seed(std::uint64_t base, std::uint64_t index)
{
    std::uint64_t state = base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(state);
}

double loglik(const Model& model, std::span<const double> data)
{
    const Support s = model.support();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double x = data[i];
        if (!std::isfinite(x) || x <= 0.0 || x <= s.lo || x > s.hi) {
            std::ostringstream os;
            os << "datum " << i << " (" << format_number(x) << ") is outside the support of " << model.family();
            throw DomainError(os.str());
        }
    }
    double sum = 0.0;
    for (double x : data) {
        const double f = model.pdf(x);
        if (!(f > 0.0)) return -std::numeric_limits<double>::infinity();
        sum += std::log(f);
    }
    return sum;
}

double loglik(std::string_view family, std::span<const double> params, std::span<const double> data)
{
    return loglik(make_model(family, params), data);
}

std::vector<double> default_init(std::string_view family, std::span<const double> data)
{
    const std::size_t k = model_parameter_names(family).size();
    if (data.empty()) return std::vector<double>(k, 1.0);
    // DUS laws stay close to their baseline, so baseline moments are a usable start.
    const std::string_view base = family.substr(0, 4) == "dus-" && family != "dus-ew" ? family.substr(4) : family;
    const double n = static_cast<double>(data.size());
    const double m = std::accumulate(data.begin(), data.end(), 0.0) / n;
    double v = 0.0;
    for (double x : data) v += (x - m) * (x - m);
    v /= n;
    if (base == "exponential") return {1.0 / m};
    if (base == "gamma" && v > 0.0) return {m * m / v, m / v};
    if (base == "lindley") return {(-(m - 1.0) + std::sqrt((m - 1.0) * (m - 1.0) + 8.0 * m)) / (2.0 * m)};
    if (base == "weibull") {
        double lm = 0.0;
        for (double x : data) lm += std::log(x);
        lm /= n;
        double lv = 0.0;
        for (double x : data) lv += (std::log(x) - lm) * (std::log(x) - lm);
        lv /= n;
        if (lv > 0.0) {
            // log X has standard deviation pi / (k sqrt 6) and mean log(lambda) - gamma_E / k.
            const double shape = M_PI / std::sqrt(6.0 * lv);
            return {std::exp(lm + 0.5772156649015329 / shape), shape};
        }
    }
    return std::vector<double>(k, 1.0);
}

namespace {

using Point = std::vector<double>;

struct Objective
{
    std::string family;
    std::span<const double> data;
    std::size_t evaluations = 0;

    /// Negative loglik at exp(u); +inf where the model cannot be built.
    double operator()(const Point& u)
    {
        ++evaluations;
        Point p(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            p[i] = std::exp(u[i]);
            if (!std::isfinite(p[i]) || p[i] <= 0.0) return std::numeric_limits<double>::infinity();
        }
        try {
            const double ll = loglik(make_model(family, p), data);
            return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
        } catch (const DomainError&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

struct SimplexRun
{
    Point best;
    double value;
    std::size_t iterations;
    bool converged;
};

SimplexRun nelder_mead(Objective& f, std::vector<Point> simplex, double tol, std::size_t max_iter)
{
    const std::size_t d = simplex.front().size();
    std::vector<double> fv(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = f(simplex[i]);
    std::vector<std::size_t> order(simplex.size());

    const auto diameter = [&](std::size_t best) {
        double r = 0.0;
        for (const auto& v : simplex)
            for (std::size_t j = 0; j < d; ++j) r = std::max(r, std::fabs(v[j] - simplex[best][j]));
        return r;
    };

    std::size_t it = 0;
    for (;; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t lo = order.front();
        const std::size_t hi = order.back();
        const std::size_t second = order[order.size() - 2];
        if (diameter(lo) < tol) return {simplex[lo], fv[lo], it, true};
        if (it >= max_iter) return {simplex[lo], fv[lo], it, false};

        Point centroid(d, 0.0);
        for (std::size_t i = 0; i < simplex.size(); ++i)
            if (i != hi)
                for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j] / static_cast<double>(d);
        const auto along = [&](double t) {
            Point p(d);
            for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (simplex[hi][j] - centroid[j]);
            return p;
        };

        const Point xr = along(-1.0);
        const double fr = f(xr);
        if (fr < fv[lo]) {
            const Point xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[hi] = xe;
                fv[hi] = fe;
            } else {
                simplex[hi] = xr;
                fv[hi] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[hi] = xr;
            fv[hi] = fr;
            continue;
        }
        const bool outside = fr < fv[hi];
        const Point xc = along(outside ? -0.5 : 0.5);
        const double fc = f(xc);
        if (fc < (outside ? fr : fv[hi])) {
            simplex[hi] = xc;
            fv[hi] = fc;
            continue;
        }
        // Shrink towards the best vertex; the best value is kept, so ascent holds.
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == lo) continue;
            for (std::size_t j = 0; j < d; ++j) simplex[i][j] = simplex[lo][j] + 0.5 * (simplex[i][j] - simplex[lo][j]);
            fv[i] = f(simplex[i]);
        }
    }
}

std::vector<Point> simplex_around(const Point& u, const std::vector<double>& steps)
{
    std::vector<Point> s{u};
    for (std::size_t j = 0; j < u.size(); ++j) {
        Point v = u;
        v[j] += steps[j];
        s.push_back(std::move(v));
    }
    return s;
}

/// Central-difference gradient in log space, scaled per observation.
bool stationary(Objective& f, const Point& u, std::size_t n)
{
    const double h = 1e-5;
    for (std::size_t j = 0; j < u.size(); ++j) {
        Point a = u, b = u;
        a[j] += h;
        b[j] -= h;
        const double g = (f(a) - f(b)) / (2.0 * h);
        if (!std::isfinite(g) || std::fabs(g) > 1e-7 * static_cast<double>(n)) return false;
    }
    return true;
}

std::optional<std::vector<double>> curvature_stderr(const std::string& family, const Point& theta,
                                                    std::span<const double> data)
{
    std::vector<double> se;
    const auto ll = [&](const Point& p) {
        try {
            return loglik(make_model(family, p), data);
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const double l0 = ll(theta);
    for (std::size_t j = 0; j < theta.size(); ++j) {
        const double h = 1e-4 * theta[j];
        Point a = theta, b = theta;
        a[j] += h;
        b[j] -= h;
        const double d2 = (ll(a) - 2.0 * l0 + ll(b)) / (h * h);
        if (!std::isfinite(d2) || d2 >= 0.0) return std::nullopt;
        se.push_back(1.0 / std::sqrt(-d2));
    }
    return se;
}

} // namespace

FitResult fit_mle(std::string_view family, std::span<const double> data, std::optional<std::vector<double>> init,
                  const FitOptions& opts)
{
    if (!is_full_api_family(family))
        throw DomainError("fit: family '" + std::string(family) + "' has no full likelihood API");
    FitResult r;
    r.family = std::string(family);
    r.names = model_parameter_names(family);
    const std::size_t k = r.names.size();
    if (data.size() < 5 * k) {
        std::ostringstream os;
        os << "fit: need at least " << 5 * k << " observations for " << k << " parameters, got " << data.size();
        throw DomainError(os.str());
    }
    const bool given = init.has_value();
    r.init = given ? *init : default_init(family, data);
    if (r.init.size() != k) {
        std::ostringstream os;
        os << "fit: init has " << r.init.size() << " values, family '" << family << "' expects " << k;
        throw DomainError(os.str());
    }
    for (std::size_t j = 0; j < k; ++j)
        if (!(r.init[j] > 0.0) || !std::isfinite(r.init[j]))
            throw DomainError("fit: init value for '" + r.names[j] + "' must be positive");
    r.init_loglik = loglik(make_model(family, r.init), data);

    Objective f{r.family, data};
    Point best(k);
    std::transform(r.init.begin(), r.init.end(), best.begin(), [](double v) { return std::log(v); });
    double best_value = -r.init_loglik;

    if (given && std::isfinite(best_value) && stationary(f, best, data.size())) {
        r.params = r.init;
        r.loglik = r.init_loglik;
        r.converged = true;
        r.stderr_proxy = curvature_stderr(r.family, r.params, data);
        return r;
    }

    Rng rng(opts.seed);
    bool converged = false;
    for (int run = 0; run <= opts.restarts; ++run) {
        std::vector<double> steps(k, 0.25);
        Point start = best;
        if (run > 0)
            for (std::size_t j = 0; j < k; ++j) {
                start[j] += 0.5 * (rng.uniform() - 0.5);
                steps[j] = 0.05 + 0.45 * rng.uniform();
            }
        const SimplexRun s = nelder_mead(f, simplex_around(start, steps), opts.simplex_tolerance, opts.max_iterations);
        r.iterations += s.iterations;
        if (s.value <= best_value) {
            best = s.best;
            best_value = s.value;
            converged = s.converged;
        } else if (run == opts.restarts) {
            converged = converged || s.converged;
        }
    }
    r.params.resize(k);
    std::transform(best.begin(), best.end(), r.params.begin(), [](double u) { return std::exp(u); });
    r.loglik = -best_value;
    r.converged = converged;
    r.stderr_proxy = curvature_stderr(r.family, r.params, data);
    return r;
}

} // namespace agewise
