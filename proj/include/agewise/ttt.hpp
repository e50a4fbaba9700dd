#pragma once

#include "agewise/distribution.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace agewise {

inline constexpr std::size_t kTttGridPoints = 257;

/// Scaled total-time-on-test curve phi(p) on a grid of p in [0, 1].
struct TttCurve
{
    enum class Kind { Theoretical, Empirical };

    Kind kind = Kind::Theoretical;
    std::vector<double> p;
    std::vector<double> phi;
    /// 1 - phi, accumulated from the upper tail so it keeps full precision near p = 1.
    std::vector<double> upper;
    /// F^{-1}(p) at each grid point (order statistics for empirical curves);
    /// may be empty for curves loaded from files.
    std::vector<double> x;
    double mu = 0.0;
    std::string source;
    std::size_t n = 0; ///< sample size, 0 for theoretical curves

    /// Piecewise-linear interpolation between grid points.
    double operator()(double q) const;
    /// Throws DomainError when an invariant of the curve fails.
    void validate() const;
    std::string kind_name() const { return kind == Kind::Theoretical ? "theoretical" : "empirical"; }
};

/// integral of the survival function from 0 to F^{-1}(p); p = 1 gives the mean.
double ttt_unscaled(const Model& model, double p);

TttCurve scaled_ttt(const Model& model, std::size_t points = kTttGridPoints);

/// phi_n(i/n) = (sum_{j<=i} x_(j) + (n - i) x_(i)) / sum_j x_(j).
TttCurve empirical_ttt(std::span<const double> sample);

enum class Verdict { Holds, Fails, Boundary };
std::string verdict_name(Verdict v);

struct ClassVerdict
{
    std::string name; ///< IFR, DFR, IFRA, ..., BFR, UFR
    Verdict verdict;
    std::optional<double> witness_p;
    double violation_fraction; ///< theoretical curves; 0 for empirical
    double statistic;          ///< worst violation (theoretical) or sup statistic (empirical)
};

enum class HnbueConvention {
    Standard,    ///< HNBUE iff phi(p) >= 1 - exp(-F^{-1}(p)/mu)
    AsPublished, ///< the reversed inequality
};

struct TttTestOptions
{
    double tolerance = 1e-7;        ///< pointwise slack on theoretical curves
    double boundary_fraction = 0.005;
    /// Empirical curves use tau = empirical_scale / sqrt(n) on sup statistics.
    double empirical_scale = 3.26;
    HnbueConvention hnbue = HnbueConvention::Standard;
};

struct TttClassReport
{
    std::vector<ClassVerdict> verdicts;
    /// Inflection of phi for the single-inflection test, when one is found.
    std::optional<double> inflection;
    /// Sign pattern of phi'' after smoothing, e.g. "+-" or "" for linear.
    std::string curvature_pattern;
    double tau = 0.0; ///< empirical tolerance actually used

    const ClassVerdict& get(const std::string& name) const;
};

/// The six scaled-TTT ageing tests: concavity, phi/p monotone, phi vs p,
/// (1-phi)/(1-p) monotone, phi vs 1 - exp(-F^{-1}/mu), single inflection.
TttClassReport ttt_class_tests(const TttCurve& curve, const TttTestOptions& opts = {});

} // namespace agewise
