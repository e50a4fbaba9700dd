#include "agewise/cli.hpp"

#include "agewise/ageing.hpp"
#include "agewise/catalog.hpp"
#include "agewise/error.hpp"
#include "agewise/inference.hpp"
#include "agewise/io.hpp"
#include "agewise/preservation.hpp"
#include "agewise/ttt.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace agewise::cli {

const std::vector<std::string>& verbs()
{
    static const std::vector<std::string> v = {"classify", "fit", "sample", "ttt", "hazard", "catalog", "preserve"};
    return v;
}

namespace {

std::string verb_list()
{
    std::string s;
    for (const auto& v : verbs()) s += (s.empty() ? "" : ", ") + v;
    return s;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<double> out;
    std::string_view s = text;
    while (!s.empty()) {
        const auto comma = s.find(',');
        const std::string_view item = s.substr(0, comma);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size())
            throw UsageError("malformed number '" + std::string(item) + "' in " + flag);
        out.push_back(v);
        s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
    }
    return out;
}

struct HelpRequested
{
    std::string text;
};

struct Raw
{
    std::string model;
    std::vector<std::string> transforms;
    std::string variant;
    std::string init;
};

void model_flags(CLI::App* c, CommandRequest& r, Raw& raw, bool required)
{
    auto* m = c->add_option("--model", raw.model, "model spec family:name=value,...");
    if (required) m->required();
    c->add_option("--transform", raw.transforms, "dus | gdus:alpha=v, repeatable, applied left to right");
    c->add_option("--variant", raw.variant, "catalog formula variant");
    c->add_option("--grid", r.grid, "grid points (overrides AGEWISE_GRID_POINTS)")->check(CLI::Range(16, 1 << 20));
}

} // namespace

std::size_t grid_points(std::size_t requested)
{
    if (requested) return requested;
    if (const char* env = std::getenv("AGEWISE_GRID_POINTS"); env && *env) {
        std::size_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || v < 16)
            throw UsageError("AGEWISE_GRID_POINTS must be an integer >= 16, got '" + std::string(s) + "'");
        return v;
    }
    return kDefaultGridPoints;
}

CommandRequest parse_args(const std::vector<std::string>& args)
{
    CommandRequest r;
    Raw raw;
    CLI::App app{"Lifetime-distribution ageing toolkit", "agewise"};
    app.require_subcommand(1, 1);

    auto* classify = app.add_subcommand("classify", "hazard shape label as JSON, hazard curve as CSV");
    model_flags(classify, r, raw, true);
    classify->add_option("--out", r.out, "hazard CSV path");
    classify->add_option("--json", r.json, "report path (default stdout)");
    classify->add_option("--svg", r.svg, "SVG of the hazard curve");

    auto* fit = app.add_subcommand("fit", "maximum likelihood fit as JSON");
    fit->add_option("--family", r.family, "family to fit")->required();
    fit->add_option("--data", r.data, "single-column CSV")->required();
    fit->add_option("--init", raw.init, "comma-separated starting values");
    fit->add_option("--seed", r.seed, "restart seed");
    fit->add_option("--json", r.json, "report path (default stdout)");

    auto* smp = app.add_subcommand("sample", "inverse-transform draws as CSV");
    model_flags(smp, r, raw, true);
    smp->add_option("-n", r.n, "sample size")->required()->check(CLI::PositiveNumber);
    smp->add_option("--seed", r.seed, "generator seed");
    smp->add_option("--out", r.out, "CSV path (default stdout)");

    auto* ttt = app.add_subcommand("ttt", "scaled TTT curve as CSV, class tests as JSON");
    model_flags(ttt, r, raw, false);
    ttt->add_option("--data", r.data, "single-column CSV for the empirical curve");
    ttt->add_option("--out", r.out, "curve CSV path");
    ttt->add_option("--json", r.json, "report path (default stdout)");
    ttt->add_option("--svg", r.svg, "SVG of the curve");
    ttt->add_option("--hnbue", r.hnbue, "standard | published")->check(CLI::IsMember({"standard", "published"}));

    auto* haz = app.add_subcommand("hazard", "hazard curve as CSV");
    model_flags(haz, r, raw, true);
    haz->add_option("--out", r.out, "CSV path (default stdout)");
    haz->add_option("--svg", r.svg, "SVG of the curve");

    auto* cat = app.add_subcommand("catalog", "catalog reference as JSON");
    cat->add_option("--name", r.name, "entry name (default: list all)");
    cat->add_option("--docs", r.docs, "write one markdown page per entry into this directory");
    cat->add_option("--json", r.json, "output path (default stdout)");

    auto* pres = app.add_subcommand("preserve", "preservation verdict table as CSV");
    pres->add_option("--out", r.out, "CSV path (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto& v = verbs();
        const bool sub = !args.empty() && std::find(v.begin(), v.end(), args.front()) != v.end();
        throw HelpRequested{sub ? app.get_subcommand(args.front())->help() : app.help()};
    } catch (const CLI::ParseError& e) {
        if (args.empty()) throw UsageError("missing verb; expected one of " + verb_list());
        const auto& v = verbs();
        if (std::find(v.begin(), v.end(), args.front()) == v.end())
            throw UsageError("unknown verb '" + args.front() + "'; expected one of " + verb_list());
        throw UsageError(std::string(e.what()) + "; see 'agewise " + args.front() + " --help'");
    }

    for (auto* sub : app.get_subcommands()) r.verb = sub->get_name();

    if (!raw.model.empty()) {
        try {
            ModelSpec spec = parse_model_spec(raw.model);
            for (const auto& t : raw.transforms) spec.transforms.push_back(parse_transform(t));
            spec.variant = raw.variant;
            // Arity and names are checked here so bad specs are usage errors.
            build_model(spec);
            r.model = std::move(spec);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    } else if (!raw.transforms.empty()) {
        throw UsageError("--transform needs --model");
    }
    if (!raw.init.empty()) r.init = parse_list(raw.init, "--init");
    if (r.verb == "ttt" && r.model.has_value() == !r.data.empty())
        throw UsageError("ttt needs exactly one of --model or --data");
    return r;
}

namespace {

void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty())
        out << text;
    else
        io::write_text(path, text);
}

std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

} // namespace

void run(const CommandRequest& r, std::ostream& out)
{
    const auto model = [&] { return build_model(*r.model); };

    if (r.verb == "classify") {
        const Model m = model();
        const ShapeReport rep = classify_shape(m, grid_points(r.grid));
        io::json j = io::to_json(rep);
        j["model"] = m.spec();
        emit(r.json, dump(j), out);
        if (!r.out.empty()) {
            std::ostringstream csv;
            io::write_curve_csv(csv, rep.grid, "hazard");
            io::write_text(r.out, csv.str());
        }
        if (!r.svg.empty()) io::write_text(r.svg, io::curve_svg(rep.grid, "hazard " + m.spec()));
    } else if (r.verb == "fit") {
        const auto data = io::read_column_csv(r.data);
        FitOptions opts;
        opts.seed = r.seed;
        const auto init = r.init.empty() ? std::nullopt : std::optional(r.init);
        emit(r.json, dump(io::to_json(fit_mle(r.family, data, init, opts))), out);
    } else if (r.verb == "sample") {
        std::ostringstream csv;
        io::write_sample_csv(csv, sample(model(), r.n, r.seed));
        emit(r.out, csv.str(), out);
    } else if (r.verb == "ttt") {
        const TttCurve c = r.model ? scaled_ttt(model()) : empirical_ttt(io::read_column_csv(r.data));
        TttTestOptions opts;
        opts.hnbue = r.hnbue == "published" ? HnbueConvention::AsPublished : HnbueConvention::Standard;
        io::json j = io::to_json(ttt_class_tests(c, opts));
        j["kind"] = c.kind_name();
        j["source"] = c.source;
        j["mu"] = c.mu;
        emit(r.json, dump(j), out);
        if (!r.out.empty()) {
            std::ostringstream csv;
            io::write_ttt_csv(csv, c);
            io::write_text(r.out, csv.str());
        }
        if (!r.svg.empty()) {
            Curve curve{c.p, c.phi, {}, "ttt"};
            io::write_text(r.svg, io::curve_svg(curve, "scaled TTT " + c.source));
        }
    } else if (r.verb == "hazard") {
        const Model m = model();
        const Curve c = hazard_curve(m, grid_points(r.grid));
        std::ostringstream csv;
        io::write_curve_csv(csv, c, "hazard");
        emit(r.out, csv.str(), out);
        if (!r.svg.empty()) io::write_text(r.svg, io::curve_svg(c, "hazard " + m.spec()));
    } else if (r.verb == "catalog") {
        if (!r.docs.empty()) write_catalog_docs(r.docs);
        io::json j;
        if (r.name.empty()) {
            j = io::json::array();
            for (const auto& e : catalog()) j.push_back(e.name);
        } else {
            j = io::to_json(catalog_entry(r.name));
        }
        emit(r.json, dump(j), out);
    } else if (r.verb == "preserve") {
        std::ostringstream csv;
        io::write_preservation_csv(csv, preservation_table());
        emit(r.out, csv.str(), out);
    } else {
        throw UsageError("unknown verb '" + r.verb + "'; expected one of " + verb_list());
    }
}

namespace {

void report(std::ostream& err, const char* kind, const std::string& message)
{
    err << io::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

} // namespace

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        run(parse_args(args), out);
        return 0;
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        report(err, "usage", e.what());
        return 2;
    } catch (const DomainError& e) {
        report(err, "domain", e.what());
        return 1;
    } catch (const std::exception& e) {
        report(err, "internal", e.what());
        return 1;
    }
}

} // namespace agewise::cli
