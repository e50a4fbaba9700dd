#include "agewise/ageing.hpp"
#include "agewise/dus.hpp"
#include "agewise/error.hpp"
#include "agewise/preservation.hpp"
#include "agewise/ttt.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace agewise;

namespace {

Curve synthetic(const std::function<double(double)>& f, double lo = 0.0, double hi = 10.0, int n = 400)
{
    return make_curve(oracle::linspace(lo, hi, n), f, "test-linear");
}

Model exp_mixture(double a, double b)
{
    return mixture({make_baseline("exponential", {a}), make_baseline("exponential", {b})}, {0.5, 0.5}).realized;
}

/// Models the shape-analysis properties run over.
std::vector<Model> fixture_suite()
{
    return {make_baseline("exponential", {1.0}),
            make_baseline("weibull", {1.0, 0.5}),
            make_baseline("weibull", {1.0, 3.0}),
            make_baseline("gamma", {2.0, 1.0}),
            make_baseline("lindley", {1.0}),
            make_baseline("lomax", {3.0, 1.0}),
            dus(make_baseline("exponential", {1.0})),
            dus(make_baseline("lomax", {2.0, 1.0})),
            dus_ew(2.0, 1.0),
            dus_ew(0.5, 1.0),
            exp_mixture(1.0, 5.0),
            convex_bathtub_fixture()};
}

} // namespace

TEST(Eta, ClosedFormOracles)
{
    for (double t : {0.0, 0.5, 3.0}) EXPECT_NEAR(glaser_eta(make_baseline("exponential", {2.5}), t), 2.5, 1e-12);
    EXPECT_NEAR(glaser_eta(make_baseline("weibull", {1.0, 2.0}), 1.0), 1.0, 1e-10);
    EXPECT_NEAR(glaser_eta(make_baseline("lindley", {1.0}), 0.0), 0.0, 1e-12);
}

TEST(Eta, FiniteDifferenceFallbackAgreesWithSymbolicDerivative)
{
    // dus(exponential(1)): f = e^{-x} e^{1 - e^{-x}}/(e-1), so eta = 1 - e^{-x}.
    const Model m = dus(make_baseline("exponential", {1.0}));
    for (double t : {0.1, 1.0, 4.0}) EXPECT_NEAR(glaser_eta(m, t), 1.0 - std::exp(-t), 1e-6);
}

TEST(ChangePoints, ConstantCurveHasNone)
{
    const auto cp = change_points(synthetic([](double) { return 2.0; }));
    EXPECT_TRUE(cp.points.empty());
    EXPECT_TRUE(cp.segments.empty());
}

TEST(ChangePoints, DusExponentialIncreasing)
{
    const auto rep = classify_shape(dus(make_baseline("exponential", {1.0})));
    EXPECT_TRUE(rep.change_points.empty());
    EXPECT_EQ(rep.label, ShapeLabel::ifr());
}

TEST(ChangePoints, ExponentialMixtureDecreasing)
{
    const auto rep = classify_shape(exp_mixture(1.0, 5.0));
    EXPECT_TRUE(rep.change_points.empty());
    EXPECT_EQ(rep.label, ShapeLabel::dfr());
}

TEST(ChangePoints, TooFewPoints)
{
    EXPECT_THROW(change_points(synthetic([](double t) { return t; }, 0.0, 1.0, 10)), DomainError);
}

TEST(ChangePoints, FlatBandIsReported)
{
    // Down to 1 on [3, 6], flat, then up.
    const auto f = [](double t) { return t < 3 ? 1 + (3 - t) * (3 - t) : (t > 6 ? 1 + (t - 6) * (t - 6) : 1.0); };
    const auto rep = classify_shape(synthetic(f));
    EXPECT_EQ(rep.label, ShapeLabel::bfr());
    ASSERT_TRUE(rep.flat_band.has_value());
    EXPECT_NEAR(rep.flat_band->begin, 3.0, 0.1);
    EXPECT_NEAR(rep.flat_band->end, 6.0, 0.1);
    ASSERT_EQ(rep.change_points.size(), 1u);
    EXPECT_NEAR(rep.change_points[0], 4.5, 0.1);
    const auto mb = rep.mitra_basu();
    EXPECT_NEAR(mb.change_points.at(0), rep.flat_band->begin, 1e-12);
}

TEST(Classify, LabelsFromSyntheticCurves)
{
    EXPECT_EQ(classify_shape(synthetic([](double t) { return std::sin(t * 0.3) + 2; }, 0.1, 9.0)).label,
              ShapeLabel::ubfr());
    EXPECT_EQ(classify_shape(synthetic([](double t) { return std::cos(t * 0.3) + 2; }, 0.1, 15.0)).label,
              ShapeLabel::bfr());
    // Up, down, up.
    EXPECT_EQ(classify_shape(synthetic([](double t) { return std::sin(t) + 0.1 * t + 2; }, 0.0, 7.0)).label,
              ShapeLabel::mbfr());
    // Down, up, down.
    EXPECT_EQ(classify_shape(synthetic([](double t) { return std::cos(t) + 2; }, 0.5, 9.0)).label,
              ShapeLabel::roller_coaster(2));
    EXPECT_EQ(classify_shape(synthetic([](double t) { return std::sin(t) + 2; }, 0.0, 14.0)).label.name(),
              "RollerCoaster(4)");
}

TEST(Classify, LabelFromSegments)
{
    EXPECT_EQ(label_from_segments({}).name(), "Constant");
    EXPECT_EQ(label_from_segments({1}).name(), "IFR");
    EXPECT_EQ(label_from_segments({-1}).name(), "DFR");
    EXPECT_EQ(label_from_segments({-1, 1}).name(), "BFR");
    EXPECT_EQ(label_from_segments({1, -1}).name(), "UBFR");
    EXPECT_EQ(label_from_segments({1, -1, 1}).name(), "MBFR");
    EXPECT_EQ(label_from_segments({-1, 1, -1}).name(), "RollerCoaster(2)");
    EXPECT_EQ(label_from_segments({1, -1, 1, -1, 1}).name(), "RollerCoaster(4)");
}

TEST(Classify, WeibullMonotoneShapes)
{
    EXPECT_EQ(classify_shape(make_baseline("weibull", {1.0, 0.5})).label, ShapeLabel::dfr());
    EXPECT_EQ(classify_shape(make_baseline("weibull", {1.0, 3.0})).label, ShapeLabel::ifr());
    EXPECT_EQ(classify_shape(make_baseline("exponential", {4.0})).label, ShapeLabel::constant());
}

TEST(Classify, DusInverseWeibull)
{
    const auto l = classify_shape(dus(make_baseline("inverse-weibull", {2.0, 1.0}))).label;
    EXPECT_TRUE(l == ShapeLabel::dfr() || l == ShapeLabel::ubfr()) << l.name();
}

TEST(Classify, DeterministicReports)
{
    const Model m = dus_ew(2.0, 1.0);
    const auto a = classify_shape(m), b = classify_shape(m);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.change_points, b.change_points);
    EXPECT_EQ(a.grid.value, b.grid.value);
}

TEST(Classify, ScaleEquivariance)
{
    for (const Model& m : fixture_suite()) {
        const auto base = classify_shape(m);
        for (double c : {0.5, 2.0}) {
            const auto s = classify_shape(scaled(m, c));
            EXPECT_EQ(s.label, base.label) << m.spec() << " c=" << c;
            ASSERT_EQ(s.change_points.size(), base.change_points.size()) << m.spec();
            for (std::size_t i = 0; i < s.change_points.size(); ++i)
                EXPECT_NEAR(s.change_points[i], c * base.change_points[i], 0.03 * c * base.change_points[i]);
        }
    }
}

TEST(Classify, TurningPointDominance)
{
    for (const Model& m : fixture_suite()) {
        const auto rep = classify_shape(m);
        const auto eta_cp = change_points(eta_curve(m, rep.grid.t));
        EXPECT_LE(rep.change_points.size(), eta_cp.points.size()) << m.spec();
    }
}

TEST(Igfr, ExponentialAndLomax)
{
    EXPECT_TRUE(is_igfr(make_baseline("exponential", {2.0})).igfr);
    const auto r = is_igfr(make_baseline("lomax", {1.0, 1.0}));
    EXPECT_TRUE(r.igfr);
    for (std::size_t i = 0; i < r.generalized_rate.size(); ++i) {
        const double x = r.generalized_rate.t[i];
        EXPECT_NEAR(r.generalized_rate.value[i], x / (1.0 + x), 1e-12);
    }
}

TEST(Igfr, AgreesWithLogTransformedHazard)
{
    // Y = log X has hazard e^y f(e^y) / S(e^y); X is IGFR iff Y is IFR.
    const std::vector<Model> models = {make_baseline("weibull", {1.0, 0.5}), make_baseline("lomax", {2.0, 1.0}),
                                       make_baseline("inverse-weibull", {2.0, 1.0}), exp_mixture(1.0, 20.0),
                                       dus(make_baseline("lomax", {0.5, 1.0}))};
    for (const Model& m : models) {
        std::vector<double> y;
        for (double p : oracle::linspace(1e-4, 1 - 1e-4, 512)) y.push_back(std::log(m.quantile(p)));
        const Curve c = make_curve(y, [&](double v) { const double x = std::exp(v); return x * m.pdf(x) / m.survival(x); },
                                   "log-time");
        const auto l = classify_shape(c).label;
        const bool log_ifr = l == ShapeLabel::ifr() || l == ShapeLabel::constant();
        EXPECT_EQ(is_igfr(m).igfr, log_ifr) << m.spec() << " " << l.name();
    }
}

TEST(Mrl, ClosedFormsAndMean)
{
    const Model e = make_baseline("exponential", {2.0});
    for (double t : {0.0, 1.0, 5.0}) EXPECT_NEAR(mrl(e, t), 0.5, 1e-9);
    EXPECT_NEAR(mrl(make_baseline("lindley", {1.0}), 0.0), 1.5, 1e-7);
    for (const Model& m : fixture_suite()) EXPECT_NEAR(mrl(m, m.support().lo), m.mean(), 1e-6 * m.mean()) << m.spec();
    EXPECT_THROW(mrl(make_baseline("lomax", {0.9, 1.0}), 1.0), InfiniteMomentError);
}

TEST(Mrl, CurveInvariants)
{
    for (const Model& m : fixture_suite()) {
        const auto c = mrl_curve(m);
        EXPECT_NEAR(c.mean, m.mean(), 1e-6 * m.mean()) << m.spec();
        for (double v : c.curve.value) EXPECT_GE(v, 0.0);
    }
}

TEST(Mrl, ConstantHazardGivesConstantMrl)
{
    const auto c = mrl_curve(make_baseline("exponential", {0.7}));
    for (double v : c.curve.value) EXPECT_NEAR(v, 1.0 / 0.7, 1e-6 / 0.7);
}

TEST(Olcay, ExponentialIsBoundary)
{
    const auto r = olcay_crosscheck(make_baseline("exponential", {1.0}));
    EXPECT_TRUE(r.boundary);
    EXPECT_TRUE(r.passed);
}

TEST(Olcay, ConvexBathtubGivesUpDownMrl)
{
    const auto r = olcay_crosscheck(convex_bathtub_fixture());
    EXPECT_EQ(r.hazard_label, ShapeLabel::bfr());
    EXPECT_NEAR(r.h0, 1.2, 1e-12);
    EXPECT_GT(r.h0, 1.0 / r.mean);
    EXPECT_EQ(r.mrl_label, ShapeLabel::ubfr());
    EXPECT_TRUE(r.passed);
}

TEST(Olcay, DusLomaxClauseChecked)
{
    const auto r = olcay_crosscheck(dus(make_baseline("lomax", {2.0, 1.0})));
    EXPECT_EQ(r.hazard_label, ShapeLabel::ubfr());
    int applied = 0;
    for (const auto& c : r.clauses) applied += c.applies;
    EXPECT_EQ(applied, 1);
    EXPECT_TRUE(r.passed);
}

TEST(Olcay, PreconditionEnforced)
{
    EXPECT_THROW(olcay_crosscheck(make_baseline("weibull", {1.0, 2.0})), DomainError);
}

TEST(HazardToDistribution, ConstantRateIsExponential)
{
    const Model m = hazard_to_distribution([](double) { return 1.5; });
    const Model e = make_baseline("exponential", {1.5});
    for (double x : oracle::linspace(0.0, 6.0, 100)) EXPECT_NEAR(m.pdf(x), e.pdf(x), 1e-8);
}

TEST(HazardToDistribution, LindleyRoundTrip)
{
    const Model l = make_baseline("lindley", {1.0});
    const Model m = hazard_to_distribution([&](double t) { return l.hazard(t); });
    for (double x : oracle::linspace(0.0, 10.0, 60)) EXPECT_NEAR(m.cdf(x), l.cdf(x), 1e-6);
}

TEST(HazardToDistribution, ConvexHazardIsBathtubNearOne)
{
    const auto rep = classify_shape(convex_bathtub_fixture());
    EXPECT_EQ(rep.label, ShapeLabel::bfr());
    ASSERT_EQ(rep.change_points.size(), 1u);
    EXPECT_NEAR(rep.change_points[0], 1.0, 0.02);
}

TEST(HazardToDistribution, Errors)
{
    EXPECT_THROW(hazard_to_distribution([](double t) { return 1.0 - t; }), DomainError);
    EXPECT_THROW(hazard_to_distribution([](double t) { return std::exp(-t); }), DomainError);
}

TEST(Pf2, ExponentialAndWeibullHaveNoViolations)
{
    EXPECT_EQ(pf2_check(make_baseline("exponential", {1.0}), 10000, 1).violations, 0u);
    EXPECT_EQ(pf2_check(make_baseline("weibull", {1.0, 3.0}), 10000, 2).violations, 0u);
}

TEST(Pf2, WeibullDeterminantAtFixedQuadruples)
{
    const Model w = make_baseline("weibull", {1.0, 3.0});
    const auto g = [&](double x) { return x < 0 ? 0.0 : w.pdf(x); };
    for (auto [x1, x2, y1, y2] : {std::tuple{0.5, 1.5, 0.1, 0.4}, std::tuple{1.0, 2.0, 0.2, 0.9}}) {
        const double det = g(x1 - y1) * g(x2 - y2) - g(x1 - y2) * g(x2 - y1);
        EXPECT_GE(det, -1e-12);
    }
}

TEST(Pf2, ExponentialMixtureViolates)
{
    EXPECT_GT(pf2_check(exp_mixture(1.0, 10.0), 10000, 3).violations, 0u);
}

TEST(MomentBound, ExponentialAttainsEquality)
{
    const auto r = bfr_moment_bound(make_baseline("exponential", {1.7}), 2.0);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.equality);
    EXPECT_NEAR(r.moment, 2.0 / (1.7 * 1.7), 1e-8);
}

TEST(MomentBound, ConvexBathtubStrict)
{
    const auto r = bfr_moment_bound(convex_bathtub_fixture(), 1.0);
    EXPECT_NEAR(r.bound, 5.0, 1e-6);
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.equality);
    EXPECT_LT(r.moment, r.bound);
}

TEST(MomentBound, WeibullIsVacuous)
{
    const auto r = bfr_moment_bound(make_baseline("weibull", {1.0, 2.0}), 1.0);
    EXPECT_TRUE(r.vacuous);
    EXPECT_TRUE(std::isinf(r.bound));
}

TEST(MomentBound, PreconditionEnforced)
{
    EXPECT_THROW(bfr_moment_bound(make_baseline("weibull", {1.0, 0.5}), 1.0), DomainError);
}

TEST(ClassChain, TttIfrImpliesIfraAndNbue)
{
    for (const Model& m : fixture_suite()) {
        const auto r = ttt_class_tests(scaled_ttt(m));
        if (r.get("IFR").verdict != Verdict::Holds) continue;
        EXPECT_NE(r.get("IFRA").verdict, Verdict::Fails) << m.spec();
        EXPECT_NE(r.get("NBUE").verdict, Verdict::Fails) << m.spec();
        EXPECT_NE(r.get("HNBUE").verdict, Verdict::Fails) << m.spec();
    }
}

TEST(TurningPoints, BoundedSupportEscapesDominance)
{
    // U-shaped density: eta falls monotonically, yet the hazard must turn up
    // before the right end of [0, 1].
    const Model m = make_baseline("kumaraswamy", {0.5, 0.5});
    const ShapeReport h = classify_shape(m);
    EXPECT_EQ(h.label, ShapeLabel::bfr());
    EXPECT_EQ(classify_shape(eta_curve(m, h.grid.t)).label.turns, 0);
}
