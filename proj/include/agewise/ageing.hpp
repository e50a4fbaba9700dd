#pragma once

#include "agewise/curve.hpp"
#include "agewise/distribution.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace agewise {

/// Failure-rate shape taxonomy. RollerCoaster carries its number of change
/// points.
struct ShapeLabel
{
    enum class Kind { Constant, IFR, DFR, BFR, UBFR, MBFR, RollerCoaster };

    Kind kind = Kind::Constant;
    int turns = 0;

    std::string name() const;
    bool operator==(const ShapeLabel&) const = default;

    static ShapeLabel constant() { return {Kind::Constant, 0}; }
    static ShapeLabel ifr() { return {Kind::IFR, 0}; }
    static ShapeLabel dfr() { return {Kind::DFR, 0}; }
    static ShapeLabel bfr() { return {Kind::BFR, 1}; }
    static ShapeLabel ubfr() { return {Kind::UBFR, 1}; }
    static ShapeLabel mbfr() { return {Kind::MBFR, 2}; }
    static ShapeLabel roller_coaster(int n) { return {Kind::RollerCoaster, n}; }
};

struct ShapeTolerances
{
    /// A derivative sample is zero when |d| * span < flat_relative * median(|value|).
    double flat_relative = 1e-6;
    /// Monotone runs shorter than this many grid points are absorbed by neighbours.
    std::size_t min_run = 3;
};

struct FlatBand
{
    double begin;
    double end;
};

struct ChangePoints
{
    std::vector<double> points;
    std::optional<FlatBand> flat_band;
    /// Signs (+1 / -1) of the monotone segments after smoothing; empty for a
    /// flat curve.
    std::vector<int> segments;
};

struct ShapeReport
{
    ShapeLabel label;
    std::vector<double> change_points;
    std::optional<FlatBand> flat_band;
    ShapeTolerances tolerances;
    Curve grid;

    /// Mitra-Basu reading: the flat band is absorbed into the monotone phases
    /// and the change point moves to the band's left end.
    ShapeReport mitra_basu() const;
};

/// Interior times where the smoothed derivative changes sign.
ChangePoints change_points(const Curve& curve, const ShapeTolerances& tol = {});

ShapeLabel label_from_segments(const std::vector<int>& segments);

ShapeReport classify_shape(const Curve& curve, const ShapeTolerances& tol = {});
ShapeReport classify_shape(const Model& model, std::size_t grid_points = kDefaultGridPoints,
                           const ShapeTolerances& tol = {});

/// Glaser's eta -f'(t)/f(t).
double glaser_eta(const Model& model, double t);
Curve eta_curve(const Model& model, const std::vector<double>& grid);

struct IgfrResult
{
    bool igfr;
    Curve generalized_rate; ///< g(x) = x h(x)
};

IgfrResult is_igfr(const Model& model, std::size_t grid_points = kDefaultGridPoints);

/// Mean residual life E(T - t | T > t).
double mrl(const Model& model, double t);

struct MrlCurve
{
    Curve curve;
    double mean;
};

MrlCurve mrl_curve(const Model& model, std::size_t grid_points = kDefaultGridPoints);

struct OlcayClause
{
    std::string condition;    ///< e.g. "BFR hazard, h(0) > 1/mu"
    std::string expected_mrl; ///< decreasing | increasing | up-down | down-up | constant
    std::string observed_mrl;
    bool applies;
    bool passed;
};

struct OlcayReport
{
    ShapeLabel hazard_label;
    ShapeLabel mrl_label;
    double h0;
    double mean;
    bool boundary; ///< h(0) == 1/mu within 1e-6 relative
    std::vector<OlcayClause> clauses;
    bool passed;
};

/// Trend word for an MRL shape label: "decreasing", "up-down", ...
std::string mrl_trend(const ShapeLabel& label);

OlcayReport olcay_crosscheck(const Model& model, std::size_t grid_points = kDefaultGridPoints);

struct HazardDomain
{
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

/// Builds the law with survival exp(-H(t)), H(t) = integral of h from lo to t.
/// An optional closed-form cumulative hazard skips the quadrature.
Model hazard_to_distribution(std::function<double(double)> h, HazardDomain domain = {},
                             std::function<double(double)> cumulative = {}, std::string name = "custom-hazard");

struct Pf2Report
{
    std::size_t trials;
    std::size_t violations;
    double worst_determinant;
    std::array<double, 4> worst_quadruple; ///< x1, x2, y1, y2
};

/// Monte Carlo search for negative 2x2 determinants
/// g(x1-y1) g(x2-y2) - g(x1-y2) g(x2-y1) with x1 < x2, y1 < y2.
Pf2Report pf2_check(const Model& model, std::size_t trials, std::uint64_t seed);

struct MomentBoundReport
{
    double k;
    double t0;
    double rate_at_t0;
    double moment;
    double bound;
    bool vacuous;  ///< r(t0) = 0, bound is +inf
    bool holds;
    bool equality; ///< within 1e-6 relative: the law is necessarily exponential
    ShapeLabel label;
};

/// E(X^k) <= Gamma(k + 1) / r(t0)^k with t0 the hazard-minimum change point.
MomentBoundReport bfr_moment_bound(const Model& model, double k, std::size_t grid_points = kDefaultGridPoints);

} // namespace agewise
