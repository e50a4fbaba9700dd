#pragma once

#include "agewise/ageing.hpp"
#include "agewise/distribution.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agewise {

/// Admissible range of one catalog parameter plus the box used for random
/// in-range draws.
struct CatalogParam
{
    std::string name;
    double lo;
    double hi;
    bool lo_open = true;
    bool hi_open = true;
    bool integer = false;
    double draw_lo;
    double draw_hi;

    bool admits(double v) const;
    std::string range_text() const;
};

/// Hazard-only entry of the catalog. Parameters are positional, in the order
/// of `params`. The first variant is the default.
struct CatalogEntry
{
    std::string name;
    std::string title;
    std::vector<CatalogParam> params;
    std::vector<std::string> variants;
    std::string formula;
    std::string note;
    std::string source;
    /// Claimed shapes, canonical label names ("IFR", "RollerCoaster(2)", "S-shape").
    std::vector<std::string> expected_shapes;
    bool has_formula = true;

    std::function<double(std::span<const double>, double, std::string_view)> rate;
    /// Upper end of the support; +inf unless the entry says otherwise.
    std::function<double(std::span<const double>)> upper;
    /// Cross-parameter constraint, empty message when satisfied.
    std::function<std::string(std::span<const double>)> constraint;

    std::vector<std::string> parameter_names() const;
};

const std::vector<CatalogEntry>& catalog();
/// Throws DomainError for unknown names.
const CatalogEntry& catalog_entry(std::string_view name);

/// Checks arity, ranges and the variant name; returns the resolved variant.
std::string validate_catalog_params(const CatalogEntry& e, std::span<const double> params,
                                    std::string_view variant = {});

HazardDomain catalog_domain(std::string_view name, std::span<const double> params);

double catalog_hazard(std::string_view name, std::span<const double> params, double t, std::string_view variant = {});

struct ShapeClaim
{
    std::vector<std::string> labels;
    bool no_formula;
};

ShapeClaim expected_shapes(std::string_view name);

/// Law with the catalog hazard, for classification and sampling.
Model catalog_model(std::string_view name, std::span<const double> params, std::string_view variant = {});

struct AuditFinding
{
    std::string entry;
    std::string variant;
    std::vector<double> params;
    double min_rate;
    double at_t;
    bool negative;      ///< some sample below -1e-12
    bool non_finite;    ///< NaN inside the domain
};

/// Evaluates every formula entry on a grid for `draws` random in-range
/// parameter vectors and reports the smallest rate seen per draw.
std::vector<AuditFinding> audit_nonnegativity(std::size_t draws, std::uint64_t seed);

/// Grid used by the audit: dense near 0, out to 100 on unbounded supports.
std::vector<double> audit_grid(const HazardDomain& d);

/// One markdown page per entry plus an index; returns the files written.
std::vector<std::filesystem::path> write_catalog_docs(const std::filesystem::path& dir);
std::string catalog_page(const CatalogEntry& e);

} // namespace agewise
