#include "agewise/io.hpp"

#include "agewise/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace agewise::io {

namespace {

json number(double v)
{
    // JSON has no inf or nan; they are written as strings.
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json numbers(std::span<const double> v)
{
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

void write_curve_csv(std::ostream& os, const Curve& c, const std::string& value_name)
{
    os << "t," << value_name << "\n";
    for (std::size_t i = 0; i < c.size(); ++i) os << format_number(c.t[i]) << "," << format_number(c.value[i]) << "\n";
}

void write_sample_csv(std::ostream& os, std::span<const double> xs)
{
    os << "x\n";
    for (double x : xs) os << format_number(x) << "\n";
}

void write_ttt_csv(std::ostream& os, const TttCurve& c)
{
    os << "# kind=" << c.kind_name() << ",source=" << c.source << ",mu=" << format_number(c.mu) << "\n";
    os << "p,phi\n";
    for (std::size_t i = 0; i < c.p.size(); ++i) os << format_number(c.p[i]) << "," << format_number(c.phi[i]) << "\n";
}

void write_preservation_csv(std::ostream& os, const std::vector<PreservationCell>& cells)
{
    os << "class,operation,published,verdict,applicable_fixtures,witnesses\n";
    for (const auto& c : cells) {
        std::size_t applicable = 0;
        std::size_t witnesses = 0;
        for (const auto& f : c.fixtures) {
            applicable += f.components_in_class;
            witnesses += f.components_in_class && !f.result_in_class;
        }
        const std::string op = c.operation == Operation::Series ? "coherent" : operation_name(c.operation);
        os << c.cls << "," << op << "," << (c.published_preserve ? "preserve" : "not-preserve") << ","
           << preservation_verdict_name(c.verdict) << "," << applicable << "," << witnesses << "\n";
    }
}

std::vector<double> read_column_csv(std::istream& is, const std::string& name)
{
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    bool header_allowed = true;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        if (s.find(',') != std::string_view::npos) {
            std::ostringstream os;
            os << name << ":" << lineno << ": expected a single column";
            throw DomainError(os.str());
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            std::ostringstream os;
            os << name << ":" << lineno << ": malformed number '" << s << "'";
            throw DomainError(os.str());
        }
        header_allowed = false;
        out.push_back(v);
    }
    return out;
}

std::vector<double> read_column_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open '" + path.string() + "'");
    return read_column_csv(in, path.string());
}

json to_json(const ShapeReport& r)
{
    json j;
    j["label"] = r.label.name();
    j["change_points"] = numbers(r.change_points);
    j["flat_band"] = r.flat_band ? json{{"begin", number(r.flat_band->begin)}, {"end", number(r.flat_band->end)}}
                                 : json(nullptr);
    j["tolerances"] = {{"flat_relative", r.tolerances.flat_relative}, {"min_run", r.tolerances.min_run}};
    j["grid"] = {{"policy", r.grid.grid_policy}, {"points", r.grid.size()}};
    return j;
}

json to_json(const TttClassReport& r)
{
    json tests = json::array();
    for (const auto& v : r.verdicts) {
        json t{{"class", v.name},
               {"verdict", verdict_name(v.verdict)},
               {"violation_fraction", number(v.violation_fraction)},
               {"statistic", number(v.statistic)}};
        t["witness_p"] = v.witness_p ? number(*v.witness_p) : json(nullptr);
        tests.push_back(std::move(t));
    }
    json j{{"tests", tests}, {"curvature_pattern", r.curvature_pattern}, {"tau", number(r.tau)}};
    j["inflection"] = r.inflection ? number(*r.inflection) : json(nullptr);
    return j;
}

json to_json(const FitResult& r)
{
    json params = json::object();
    json init = json::object();
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        params[r.names[i]] = number(r.params[i]);
        init[r.names[i]] = number(r.init[i]);
    }
    json j{{"family", r.family},        {"params", params},
           {"init", init},              {"loglik", number(r.loglik)},
           {"init_loglik", number(r.init_loglik)}, {"iterations", r.iterations},
           {"converged", r.converged}};
    if (r.stderr_proxy) {
        json se = json::object();
        for (std::size_t i = 0; i < r.names.size(); ++i) se[r.names[i]] = number((*r.stderr_proxy)[i]);
        j["stderr_proxy"] = se;
    } else {
        j["stderr_proxy"] = nullptr;
    }
    return j;
}

json to_json(const CatalogEntry& e)
{
    json params = json::array();
    for (const auto& p : e.params) params.push_back({{"name", p.name}, {"range", p.range_text()}, {"integer", p.integer}});
    return {{"name", e.name},
            {"title", e.title},
            {"parameters", params},
            {"variants", e.variants},
            {"formula", e.has_formula ? json(e.formula) : json(nullptr)},
            {"expected_shapes", e.expected_shapes},
            {"note", e.note},
            {"source", e.source}};
}

json to_json(const OlcayReport& r)
{
    json clauses = json::array();
    for (const auto& c : r.clauses)
        clauses.push_back({{"condition", c.condition},
                           {"expected_mrl", c.expected_mrl},
                           {"observed_mrl", c.observed_mrl},
                           {"applies", c.applies},
                           {"passed", c.passed}});
    return {{"hazard_label", r.hazard_label.name()},
            {"mrl_label", r.mrl_label.name()},
            {"h0", number(r.h0)},
            {"mean", number(r.mean)},
            {"boundary", r.boundary},
            {"clauses", clauses},
            {"passed", r.passed}};
}

json to_json(const MomentBoundReport& r)
{
    return {{"k", r.k},
            {"t0", number(r.t0)},
            {"rate_at_t0", number(r.rate_at_t0)},
            {"moment", number(r.moment)},
            {"bound", number(r.bound)},
            {"vacuous", r.vacuous},
            {"holds", r.holds},
            {"equality", r.equality},
            {"label", r.label.name()}};
}

std::string curve_svg(const Curve& c, const std::string& title)
{
    constexpr double W = 640, H = 400, M = 40;
    double xmin = c.t.front(), xmax = c.t.back();
    double ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (double v : c.value) {
        if (!std::isfinite(v)) continue;
        ymin = first ? v : std::min(ymin, v);
        ymax = first ? v : std::max(ymax, v);
        first = false;
    }
    if (ymax <= ymin) ymax = ymin + 1.0;
    if (xmax <= xmin) xmax = xmin + 1.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<title>" << title << "</title>\n";
    os << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << W - 2 * M << "\" height=\"" << H - 2 * M
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    bool sep = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c.value[i])) continue;
        const double px = M + (c.t[i] - xmin) / (xmax - xmin) * (W - 2 * M);
        const double py = H - M - (c.value[i] - ymin) / (ymax - ymin) * (H - 2 * M);
        os << (sep ? " " : "") << format_number(std::round(px * 100) / 100) << ","
           << format_number(std::round(py * 100) / 100);
        sep = true;
    }
    os << "\"/>\n";
    os << "<text x=\"" << M << "\" y=\"" << M - 10 << "\" font-size=\"14\">" << title << "</text>\n";
    os << "<text x=\"" << M << "\" y=\"" << H - 10 << "\" font-size=\"11\">t in [" << format_number(xmin) << ", "
       << format_number(xmax) << "], value in [" << format_number(ymin) << ", " << format_number(ymax) << "]</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DomainError("write failed for '" + path.string() + "'");
}

} // namespace agewise::io
