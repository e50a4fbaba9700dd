#pragma once

#include "agewise/model_spec.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace agewise::cli {

struct CommandRequest
{
    std::string verb; ///< classify | fit | sample | ttt | hazard | catalog | preserve
    std::optional<ModelSpec> model;
    std::string family;     ///< fit
    std::string data;       ///< input CSV
    std::string out;        ///< CSV output; empty means stdout where the verb has no JSON
    std::string json;       ///< JSON output; empty means stdout
    std::string svg;        ///< optional SVG of the emitted curve
    std::string name;       ///< catalog entry
    std::string docs;       ///< catalog: directory for generated pages
    std::string hnbue = "standard";
    std::vector<double> init;
    std::size_t n = 0;
    std::size_t grid = 0; ///< 0 selects AGEWISE_GRID_POINTS or the default
    std::uint64_t seed = 1;
};

const std::vector<std::string>& verbs();

/// Throws UsageError naming the bad verb, flag or model-spec token.
CommandRequest parse_args(const std::vector<std::string>& args);

/// Grid size: explicit value, else AGEWISE_GRID_POINTS, else the default.
std::size_t grid_points(std::size_t requested);

/// Executes a validated request; library errors propagate.
void run(const CommandRequest& request, std::ostream& out);

/// argv front end: errors become one JSON line on `err`; returns 0, 1 or 2.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace agewise::cli
