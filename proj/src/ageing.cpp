#include "agewise/ageing.hpp"

#include "agewise/error.hpp"
#include "agewise/numeric.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace agewise {

std::string ShapeLabel::name() const
{
    switch (kind) {
    case Kind::Constant: return "Constant";
    case Kind::IFR: return "IFR";
    case Kind::DFR: return "DFR";
    case Kind::BFR: return "BFR";
    case Kind::UBFR: return "UBFR";
    case Kind::MBFR: return "MBFR";
    case Kind::RollerCoaster: return "RollerCoaster(" + std::to_string(turns) + ")";
    }
    return "?";
}

ShapeReport ShapeReport::mitra_basu() const
{
    ShapeReport r = *this;
    if (!flat_band) return r;
    for (double& c : r.change_points)
        if (c >= flat_band->begin && c <= flat_band->end) c = flat_band->begin;
    r.flat_band.reset();
    return r;
}

namespace {

struct Run
{
    int sign;
    std::size_t begin; // inclusive
    std::size_t end;   // exclusive
    std::size_t length() const { return end - begin; }
};

std::vector<Run> make_runs(const std::vector<int>& signs)
{
    std::vector<Run> runs;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (!runs.empty() && runs.back().sign == signs[i])
            runs.back().end = i + 1;
        else
            runs.push_back({signs[i], i, i + 1});
    }
    return runs;
}

} // namespace

ChangePoints change_points(const Curve& curve, const ShapeTolerances& tol)
{
    curve.validate();
    const std::size_t n = curve.size();
    if (n < 16) throw DomainError("change_points: grid too coarse (need at least 16 points)");

    const std::vector<double> d =
        curve.derivative.size() == n ? curve.derivative : finite_derivative(curve.t, curve.value);

    std::vector<double> mags;
    mags.reserve(n);
    for (double v : curve.value)
        if (std::isfinite(v)) mags.push_back(std::fabs(v));
    double scale = mags.empty() ? 0.0 : numeric::median(mags);
    if (scale == 0.0 && !mags.empty()) scale = *std::max_element(mags.begin(), mags.end());
    const double span = curve.t.back() - curve.t.front();

    std::vector<int> signs(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(d[i])) continue;
        if (std::fabs(d[i]) * span < tol.flat_relative * scale) continue;
        signs[i] = d[i] > 0 ? 1 : -1;
    }

    // Absorb short runs into a neighbour until every run is long enough.
    std::vector<Run> runs = make_runs(signs);
    while (runs.size() > 1) {
        auto it = std::find_if(runs.begin(), runs.end(), [&](const Run& r) { return r.length() < tol.min_run; });
        if (it == runs.end()) break;
        const std::size_t i = static_cast<std::size_t>(it - runs.begin());
        const int s = i == 0 ? runs[1].sign : runs[i - 1].sign;
        std::fill(signs.begin() + static_cast<std::ptrdiff_t>(it->begin),
                  signs.begin() + static_cast<std::ptrdiff_t>(it->end), s);
        runs = make_runs(signs);
    }

    ChangePoints out;
    const Run* prev = nullptr;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& r = runs[i];
        if (r.sign == 0) continue;
        if (prev && prev->sign != r.sign) {
            if (prev->end < r.begin) {
                // A flat stretch separates the two phases.
                const double a = curve.t[prev->end];
                const double b = curve.t[r.begin - 1];
                if (!out.flat_band) out.flat_band = FlatBand{a, b};
                out.points.push_back(0.5 * (a + b));
            } else {
                const std::size_t a = prev->end - 1;
                const std::size_t b = r.begin;
                double w = d[a] / (d[a] - d[b]);
                if (!std::isfinite(w)) w = 0.5;
                w = std::clamp(w, 0.0, 1.0);
                out.points.push_back(curve.t[a] + w * (curve.t[b] - curve.t[a]));
            }
        }
        if (!prev || prev->sign != r.sign) out.segments.push_back(r.sign);
        prev = &r;
    }
    return out;
}

ShapeLabel label_from_segments(const std::vector<int>& s)
{
    switch (s.size()) {
    case 0: return ShapeLabel::constant();
    case 1: return s[0] > 0 ? ShapeLabel::ifr() : ShapeLabel::dfr();
    case 2: return s[0] < 0 ? ShapeLabel::bfr() : ShapeLabel::ubfr();
    case 3:
        if (s[0] > 0) return ShapeLabel::mbfr();
        return ShapeLabel::roller_coaster(2);
    default: return ShapeLabel::roller_coaster(static_cast<int>(s.size()) - 1);
    }
}

ShapeReport classify_shape(const Curve& curve, const ShapeTolerances& tol)
{
    ChangePoints cp = change_points(curve, tol);
    ShapeReport r;
    r.label = label_from_segments(cp.segments);
    r.change_points = std::move(cp.points);
    r.flat_band = cp.flat_band;
    r.tolerances = tol;
    r.grid = curve;
    return r;
}

ShapeReport classify_shape(const Model& model, std::size_t grid_points, const ShapeTolerances& tol)
{
    return classify_shape(hazard_curve(model, grid_points), tol);
}

double glaser_eta(const Model& model, double t) { return model.eta(t); }

Curve eta_curve(const Model& model, const std::vector<double>& grid)
{
    return make_curve(grid, [&](double x) { return model.eta(x); }, "explicit");
}

IgfrResult is_igfr(const Model& model, std::size_t grid_points)
{
    if (model.support().lo < 0.0) throw DomainError("is_igfr: support must lie in [0, inf)");
    const std::string policy = default_grid_policy(model, grid_points);
    Curve g = make_curve(default_grid(model, grid_points), [&](double x) { return x * model.hazard(x); }, policy);
    double gmax = 0.0;
    for (double v : g.value)
        if (std::isfinite(v)) gmax = std::max(gmax, std::fabs(v));
    bool ok = true;
    for (std::size_t i = 1; i < g.size() && ok; ++i) ok = g.value[i] - g.value[i - 1] >= -1e-9 * gmax;
    return {ok, std::move(g)};
}

namespace {

numeric::QuadratureOptions mrl_quadrature(const Model& model)
{
    numeric::QuadratureOptions o;
    o.abs_tol = 1e-15;
    o.rel_tol = 1e-11;
    o.max_intervals = 4000;
    o.tail_scale = std::max(model.impl().scale_hint(), 1e-300);
    return o;
}

void require_finite_mean(const Model& model)
{
    if (!model.moment_exists(1.0)) throw InfiniteMomentError("mrl: " + model.family() + " has an infinite mean");
}

} // namespace

double mrl(const Model& model, double t)
{
    require_finite_mean(model);
    const double st = model.survival(t);
    if (!(st > 1e-300)) throw DomainError("mrl: survival vanishes at t");
    const auto S = [&](double u) { return model.impl().survival(u); };
    return numeric::quad(S, t, model.support().hi, mrl_quadrature(model)) / st;
}

MrlCurve mrl_curve(const Model& model, std::size_t grid_points)
{
    require_finite_mean(model);
    const auto S = [&](double u) { return model.impl().survival(u); };
    const auto opts = mrl_quadrature(model);
    const Support sup = model.support();
    std::vector<double> t = default_grid(model, grid_points);

    // Tail integrals accumulated backwards, one quadrature per grid cell.
    std::vector<double> tail(t.size());
    tail.back() = numeric::quad(S, t.back(), sup.hi, opts);
    for (std::size_t i = t.size() - 1; i-- > 0;) tail[i] = tail[i + 1] + numeric::quad(S, t[i], t[i + 1], opts);

    MrlCurve out;
    out.mean = sup.lo + tail.front() + numeric::quad(S, sup.lo, t.front(), opts);
    std::vector<double> m(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) m[i] = tail[i] / S(t[i]);
    out.curve.t = std::move(t);
    out.curve.value = std::move(m);
    out.curve.derivative = finite_derivative(out.curve.t, out.curve.value);
    out.curve.grid_policy = default_grid_policy(model, grid_points);
    return out;
}

std::string mrl_trend(const ShapeLabel& label)
{
    switch (label.kind) {
    case ShapeLabel::Kind::Constant: return "constant";
    case ShapeLabel::Kind::IFR: return "increasing";
    case ShapeLabel::Kind::DFR: return "decreasing";
    case ShapeLabel::Kind::BFR: return "down-up";
    case ShapeLabel::Kind::UBFR: return "up-down";
    default: return label.name();
    }
}

OlcayReport olcay_crosscheck(const Model& model, std::size_t grid_points)
{
    OlcayReport r;
    r.hazard_label = classify_shape(model, grid_points).label;
    using K = ShapeLabel::Kind;
    const K kind = r.hazard_label.kind;
    if (kind != K::BFR && kind != K::UBFR && kind != K::Constant)
        throw DomainError("olcay_crosscheck: hazard is " + r.hazard_label.name() + ", expected BFR or UBFR");

    const MrlCurve mc = mrl_curve(model, grid_points);
    r.mean = mc.mean;
    r.mrl_label = classify_shape(mc.curve).label;
    r.h0 = model.hazard(model.support().lo);
    const double inv = 1.0 / r.mean;
    r.boundary = std::fabs(r.h0 - inv) <= 1e-6 * inv;
    const std::string observed = mrl_trend(r.mrl_label);

    auto clause = [&](std::string cond, std::string expected, bool applies) {
        const bool passed = !applies || observed == expected;
        r.clauses.push_back({std::move(cond), std::move(expected), observed, applies, passed});
    };
    if (kind == K::Constant) {
        // Both theorems degenerate at h(0) = 1/mu with a flat MRL.
        clause("constant hazard, h(0) = 1/mu", "constant", true);
    } else if (kind == K::BFR) {
        clause("BFR hazard, h(0) <= 1/mu", "decreasing", r.h0 <= inv);
        clause("BFR hazard, h(0) > 1/mu", "up-down", r.h0 > inv);
    } else {
        clause("UBFR hazard, h(0) >= 1/mu", "increasing", r.h0 >= inv);
        clause("UBFR hazard, h(0) < 1/mu", "down-up", r.h0 < inv);
    }
    r.passed = std::all_of(r.clauses.begin(), r.clauses.end(), [](const OlcayClause& c) { return c.passed; });
    return r;
}

namespace {

class HazardLaw final : public ModelImpl
{
  public:
    HazardLaw(std::function<double(double)> h, std::function<double(double)> H, HazardDomain dom, std::string name)
        : h_(std::move(h)), H_(std::move(H)), dom_(dom), name_(std::move(name))
    {
    }

    std::string family() const override { return name_; }
    std::vector<Param> params() const override { return {}; }
    Support support() const override { return {dom_.lo, dom_.hi}; }

    double pdf(double x) const override { return h_(x) * std::exp(-cumulative(x)); }
    double cdf(double x) const override { return -std::expm1(-cumulative(x)); }
    double survival(double x) const override { return std::exp(-cumulative(x)); }
    double hazard(double x) const override { return h_(x); }
    double scale_hint() const override { return scale_; }

    double cumulative(double x) const
    {
        if (H_) return H_(x);
        if (x <= dom_.lo) return 0.0;
        numeric::QuadratureOptions o;
        o.abs_tol = 1e-14;
        o.rel_tol = 1e-12;
        return numeric::quad(h_, dom_.lo, x, o);
    }

    void set_scale(double s) { scale_ = s; }

  private:
    std::function<double(double)> h_;
    std::function<double(double)> H_;
    HazardDomain dom_;
    std::string name_;
    double scale_ = 1.0;
};

void check_samples(const std::function<double(double)>& h, const std::vector<double>& xs)
{
    for (double x : xs) {
        const double v = h(x);
        if (std::isnan(v)) {
            std::ostringstream os;
            os << "hazard_to_distribution: hazard is NaN at t=" << x;
            throw DomainError(os.str());
        }
        if (v < 0.0) {
            std::ostringstream os;
            os << "hazard_to_distribution: negative hazard sample " << v << " at t=" << x;
            throw DomainError(os.str());
        }
    }
}

} // namespace

Model hazard_to_distribution(std::function<double(double)> h, HazardDomain domain,
                             std::function<double(double)> cumulative, std::string name)
{
    if (!h) throw DomainError("hazard_to_distribution: empty hazard");
    if (!(domain.hi > domain.lo) || !std::isfinite(domain.lo))
        throw DomainError("hazard_to_distribution: empty domain");
    auto law = std::make_shared<HazardLaw>(h, std::move(cumulative), domain, std::move(name));

    double cutoff;
    if (std::isfinite(domain.hi)) {
        cutoff = domain.hi - (domain.hi - domain.lo) * 1e-12;
        const double H = law->cumulative(cutoff);
        if (!(H >= 20.0)) {
            std::ostringstream os;
            os << "hazard_to_distribution: cumulative hazard does not diverge at the domain end (H=" << H << ")";
            throw DomainError(os.str());
        }
    } else {
        cutoff = domain.lo + 1.0;
        while (!(law->cumulative(cutoff) >= 40.0)) {
            if (cutoff - domain.lo > 1e12) {
                throw DomainError("hazard_to_distribution: cumulative hazard does not diverge (H < 40 up to t=1e12)");
            }
            cutoff = domain.lo + 2.0 * (cutoff - domain.lo);
        }
    }

    const double width = cutoff - domain.lo;
    // Interior samples only: many closed forms are 0/0 at the origin.
    std::vector<double> xs = numeric::linear_grid(domain.lo, cutoff, 257);
    xs.erase(xs.begin());
    if (std::isfinite(domain.hi)) xs.back() = cutoff;
    for (double u : numeric::geometric_grid(width * 1e-8, width, 257)) xs.push_back(domain.lo + u);
    check_samples(h, xs);

    // The median seeds quantile bracketing and tail quadrature.
    const auto g = [&](double x) { return law->cumulative(x) - std::log(2.0); };
    law->set_scale(numeric::solve_bracketed(g, domain.lo, cutoff, g(domain.lo), g(cutoff)) - domain.lo);
    return Model(law);
}

Pf2Report pf2_check(const Model& model, std::size_t trials, std::uint64_t seed)
{
    if (trials < 1) throw DomainError("pf2_check: trials must be at least 1");
    const Support s = model.support();
    const double lo = std::isfinite(s.lo) ? s.lo : model.quantile(1e-3);
    const double range = s.bounded() ? s.hi - lo : model.quantile(0.999) - lo;
    const auto g = [&](double z) { return s.contains(z) ? model.impl().pdf(z) : 0.0; };

    std::mt19937_64 rng(seed);
    const auto unif = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };

    Pf2Report r{trials, 0, 0.0, {0, 0, 0, 0}};
    for (std::size_t i = 0; i < trials; ++i) {
        double x1 = lo + range * unif();
        double x2 = lo + range * unif();
        double y1 = range * (0.4 * unif() - 0.2);
        double y2 = range * (0.4 * unif() - 0.2);
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        const double det = g(x1 - y1) * g(x2 - y2) - g(x1 - y2) * g(x2 - y1);
        if (std::isnan(det)) continue;
        if (det < -1e-12) ++r.violations;
        if (det < r.worst_determinant) {
            r.worst_determinant = det;
            r.worst_quadruple = {x1, x2, y1, y2};
        }
    }
    return r;
}

MomentBoundReport bfr_moment_bound(const Model& model, double k, std::size_t grid_points)
{
    if (!(k > 0.0)) throw DomainError("bfr_moment_bound: k must be positive");
    const ShapeReport shape = classify_shape(model, grid_points);
    using K = ShapeLabel::Kind;
    MomentBoundReport r{};
    r.k = k;
    r.label = shape.label;
    const double lo = model.support().lo;
    switch (shape.label.kind) {
    case K::IFR:
    case K::Constant:
        r.t0 = lo;
        r.rate_at_t0 = model.hazard(lo);
        break;
    case K::BFR: {
        if (shape.flat_band) {
            r.t0 = shape.flat_band->begin;
            r.rate_at_t0 = model.hazard(r.t0);
            break;
        }
        // Refine the grid minimum of h around the located change point.
        const auto& t = shape.grid.t;
        const auto& v = shape.grid.value;
        const std::size_t i = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
        const double a = t[i > 0 ? i - 1 : 0];
        const double b = t[std::min(i + 1, t.size() - 1)];
        const auto hf = [&](double x) { return model.hazard(x); };
        const auto best = boost::math::tools::brent_find_minima(hf, a, b, 50);
        r.t0 = best.first;
        r.rate_at_t0 = best.second;
        break;
    }
    default:
        throw DomainError("bfr_moment_bound: hazard is " + shape.label.name() + ", expected BFR, IFR or Constant");
    }
    r.moment = model.raw_moment(k);
    r.vacuous = !(r.rate_at_t0 > 0.0);
    r.bound = r.vacuous ? numeric::kInf : std::tgamma(k + 1.0) / std::pow(r.rate_at_t0, k);
    r.holds = r.vacuous || r.moment <= r.bound * (1.0 + 1e-9);
    r.equality = !r.vacuous && std::fabs(r.moment - r.bound) <= 1e-6 * r.bound;
    return r;
}

} // namespace agewise
