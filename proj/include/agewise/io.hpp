#pragma once

#include "agewise/ageing.hpp"
#include "agewise/catalog.hpp"
#include "agewise/curve.hpp"
#include "agewise/inference.hpp"
#include "agewise/preservation.hpp"
#include "agewise/ttt.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace agewise::io {

using nlohmann::json;

/// CSV dialect: comma separated, '.' decimal, header row, LF endings, numbers
/// in shortest round-trip form. Output is a pure function of the input.
void write_curve_csv(std::ostream& os, const Curve& c, const std::string& value_name);
void write_sample_csv(std::ostream& os, std::span<const double> xs);
/// A leading "# kind=...,source=...,mu=..." line, then "p,phi".
void write_ttt_csv(std::ostream& os, const TttCurve& c);
void write_preservation_csv(std::ostream& os, const std::vector<PreservationCell>& cells);

/// Single-column numeric CSV; an optional non-numeric header line is skipped,
/// as are blank lines and '#' comments. Errors name the line number.
std::vector<double> read_column_csv(std::istream& is, const std::string& name = "input");
std::vector<double> read_column_csv(const std::filesystem::path& path);

json to_json(const ShapeReport& r);
json to_json(const TttClassReport& r);
json to_json(const FitResult& r);
json to_json(const CatalogEntry& e);
json to_json(const OlcayReport& r);
json to_json(const MomentBoundReport& r);

/// Minimal standalone SVG polyline of a curve.
std::string curve_svg(const Curve& c, const std::string& title);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace agewise::io
