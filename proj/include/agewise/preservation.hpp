#pragma once

#include "agewise/distribution.hpp"
#include "agewise/ttt.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace agewise {

enum class Operation { Convolution, Mixture, OrderStatistic, Series, Parallel };
std::string operation_name(Operation op);

/// A reliability operation applied to component laws, with its numeric result.
struct CompositeModel
{
    Operation operation;
    std::vector<Model> components;
    std::vector<double> weights; ///< mixture only
    int n = 0;                   ///< order statistic sample size
    int k = 0;                   ///< order statistic rank
    Model realized;

    std::string describe() const;
};

struct ConvolutionOptions
{
    std::size_t knots = 1024;
    /// Grid end is mean1 + mean2 + spread * (sd1 + sd2).
    double spread = 8.0;
};

/// Law of X1 + X2 for independent X1, X2 on [0, inf). Survival and cdf are
/// computed by quadrature at the knots and joined by monotone cubic Hermite
/// pieces whose slopes are the knot densities; the tail past the last knot is
/// exponential with the hazard there.
CompositeModel convolve(const Model& a, const Model& b, const ConvolutionOptions& opts = {});

CompositeModel mixture(std::vector<Model> models, std::vector<double> weights);

/// k-th smallest of n independent copies.
CompositeModel order_statistic(const Model& model, int n, int k);

enum class SystemKind { Series, Parallel };
CompositeModel coherent_min_max(std::vector<Model> models, SystemKind kind);

struct SpacingVerdict
{
    int index;           ///< 1-based spacing index
    Verdict dfr;         ///< empirical TTT convexity test
    Verdict ifr;         ///< empirical TTT concavity test
    double diagonal_gap; ///< sup |phi_n(p) - p|
};

struct SpacingsReport
{
    int n;
    std::size_t trials;
    std::vector<SpacingVerdict> indices;
};

/// Normalized spacings D_i = (n - i + 1)(X_(i) - X_(i-1)), pooled per index
/// over `trials` simulated samples, each pool judged by the empirical TTT tests.
SpacingsReport spacings_check(const Model& model, int n, std::size_t trials, std::uint64_t seed);

/// Ageing classes of the preservation table, in table order.
const std::vector<std::string>& preservation_classes();
/// Table columns: Coherent Systems, Convolution, Mixture.
const std::vector<Operation>& preservation_operations();

enum class PreservationVerdict { ConfirmedPreserve, WitnessFoundNotPreserve, Inconclusive };
std::string preservation_verdict_name(PreservationVerdict v);

struct Membership
{
    bool member;
    bool boundary;
};

/// Class membership: TTT tests for the TTT-characterized classes, a survival
/// grid check for NBU / NWU, the hazard classifier for BFR.
Membership class_membership(const std::string& cls, const Model& model);

struct FixtureOutcome
{
    std::string description;
    bool components_in_class;
    bool result_in_class;
};

struct PreservationCell
{
    std::string cls;
    Operation operation;
    bool published_preserve;
    PreservationVerdict verdict;
    std::vector<FixtureOutcome> fixtures;
    std::string note;
};

/// One cell of the table, evaluated on the built-in fixture suite.
PreservationCell preservation_report(const std::string& cls, Operation op);

/// All 15 x 3 cells, rows in table order.
std::vector<PreservationCell> preservation_table();

/// Published verdict of a cell; throws for unknown class or operation.
bool published_preserve(const std::string& cls, Operation op);

/// Convex bathtub hazard 0.2 + (t - 1)^2 with its closed cumulative hazard.
Model convex_bathtub_fixture();

} // namespace agewise
