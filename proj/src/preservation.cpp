#include "agewise/preservation.hpp"

#include "agewise/ageing.hpp"
#include "agewise/error.hpp"
#include "agewise/numeric.hpp"
#include "agewise/random.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace agewise {

std::string operation_name(Operation op)
{
    switch (op) {
    case Operation::Convolution: return "convolution";
    case Operation::Mixture: return "mixture";
    case Operation::OrderStatistic: return "order-statistic";
    case Operation::Series: return "series";
    case Operation::Parallel: return "parallel";
    }
    return "?";
}

std::string CompositeModel::describe() const
{
    std::ostringstream os;
    switch (operation) {
    case Operation::Convolution: os << components[0].spec() << " (+) " << components[1].spec(); break;
    case Operation::Mixture:
        for (std::size_t i = 0; i < components.size(); ++i)
            os << (i ? " + " : "") << format_number(weights[i]) << "*" << components[i].spec();
        break;
    case Operation::OrderStatistic: os << "X(" << k << ":" << n << ") of " << components[0].spec(); break;
    case Operation::Series:
    case Operation::Parallel:
        os << operation_name(operation) << "(";
        for (std::size_t i = 0; i < components.size(); ++i) os << (i ? ", " : "") << components[i].spec();
        os << ")";
        break;
    }
    return os.str();
}

namespace {

class Convolution final : public ModelImpl
{
  public:
    Convolution(Model a, Model b, numeric::MonotoneCubic F, numeric::MonotoneCubic S, double mean)
        : a_(std::move(a)), b_(std::move(b)), F_(std::move(F)), S_(std::move(S)), mean_(mean)
    {
        const double t = F_.back();
        tail_s_ = S_(t);
        tail_rate_ = tail_s_ > 1e-300 ? -S_.derivative(t) / tail_s_ : 0.0;
    }

    std::string family() const override { return "convolution"; }
    std::vector<Param> params() const override { return {}; }

    double pdf(double x) const override
    {
        // Differentiate whichever of F, S is small at x; the other has lost its digits.
        if (x > F_.back()) return tail_rate_ * survival(x);
        return std::max(S_(x) < 0.5 ? -S_.derivative(x) : F_.derivative(x), 0.0);
    }
    double cdf(double x) const override
    {
        if (x <= F_.back()) return std::clamp(F_(x), 0.0, 1.0);
        return 1.0 - survival(x);
    }
    double survival(double x) const override
    {
        if (x <= F_.back()) return std::clamp(S_(x), 0.0, 1.0);
        return tail_s_ * std::exp(-tail_rate_ * (x - F_.back()));
    }
    std::optional<double> mean() const override { return mean_; }
    std::optional<bool> moment_exists(double k) const override
    {
        return a_.moment_exists(k) && b_.moment_exists(k);
    }
    double scale_hint() const override { return mean_; }

  private:
    Model a_;
    Model b_;
    numeric::MonotoneCubic F_;
    numeric::MonotoneCubic S_;
    double mean_;
    double tail_s_ = 0.0;
    double tail_rate_ = 0.0;
};

class Mixture final : public ModelImpl
{
  public:
    Mixture(std::vector<Model> ms, std::vector<double> w) : ms_(std::move(ms)), w_(std::move(w)) {}

    std::string family() const override { return "mixture"; }
    std::vector<Param> params() const override
    {
        std::vector<Param> p;
        for (std::size_t i = 0; i < w_.size(); ++i) p.push_back({"w" + std::to_string(i + 1), w_[i]});
        return p;
    }
    Support support() const override { return ms_.front().support(); }
    double pdf(double x) const override { return sum([&](const ModelImpl& m) { return m.pdf(x); }); }
    double cdf(double x) const override { return sum([&](const ModelImpl& m) { return m.cdf(x); }); }
    double survival(double x) const override { return sum([&](const ModelImpl& m) { return m.survival(x); }); }
    std::optional<double> mean() const override
    {
        double s = 0.0;
        for (std::size_t i = 0; i < ms_.size(); ++i) s += w_[i] * ms_[i].mean();
        return s;
    }
    std::optional<bool> moment_exists(double k) const override
    {
        return std::all_of(ms_.begin(), ms_.end(), [&](const Model& m) { return m.moment_exists(k); });
    }
    double scale_hint() const override { return sum([](const ModelImpl& m) { return m.scale_hint(); }); }

  private:
    template <class F>
    double sum(F f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < ms_.size(); ++i) s += w_[i] * f(ms_[i].impl());
        return s;
    }
    std::vector<Model> ms_;
    std::vector<double> w_;
};

/// F_(k:n) = I_F(k, n - k + 1), the binomial tail sum in closed form.
class OrderStat final : public ModelImpl
{
  public:
    OrderStat(Model m, int n, int k) : m_(std::move(m)), n_(n), k_(k) {}
    std::string family() const override { return "order-statistic"; }
    std::vector<Param> params() const override
    {
        return {{"n", static_cast<double>(n_)}, {"k", static_cast<double>(k_)}};
    }
    Support support() const override { return m_.support(); }
    double pdf(double x) const override
    {
        const double F = b().cdf(x);
        if (F <= 0.0 && k_ > 1) return 0.0;
        return b().pdf(x) * boost::math::ibeta_derivative(double(k_), double(n_ - k_ + 1), F);
    }
    double cdf(double x) const override
    {
        const double F = b().cdf(x);
        if (F <= 0.0) return 0.0;
        if (F >= 1.0) return 1.0;
        return boost::math::ibeta(double(k_), double(n_ - k_ + 1), F);
    }
    double survival(double x) const override
    {
        const double S = b().survival(x);
        if (S <= 0.0) return 0.0;
        if (S >= 1.0) return 1.0;
        return boost::math::ibeta(double(n_ - k_ + 1), double(k_), S);
    }
    std::optional<bool> moment_exists(double k) const override { return m_.moment_exists(k); }
    double scale_hint() const override { return b().scale_hint(); }

  private:
    const ModelImpl& b() const { return m_.impl(); }
    Model m_;
    int n_;
    int k_;
};

class System final : public ModelImpl
{
  public:
    System(std::vector<Model> ms, SystemKind kind) : ms_(std::move(ms)), kind_(kind) {}
    std::string family() const override { return kind_ == SystemKind::Series ? "series" : "parallel"; }
    std::vector<Param> params() const override { return {}; }
    Support support() const override { return ms_.front().support(); }

    double pdf(double x) const override
    {
        // sum_i f_i prod_{j != i} G_j with G the survival (series) or cdf (parallel)
        double s = 0.0;
        for (std::size_t i = 0; i < ms_.size(); ++i) {
            double term = ms_[i].impl().pdf(x);
            for (std::size_t j = 0; j < ms_.size(); ++j)
                if (j != i) term *= part(j, x);
            s += term;
        }
        return s;
    }
    double cdf(double x) const override
    {
        if (kind_ == SystemKind::Parallel) return product(x);
        return -std::expm1(log_product(x));
    }
    double survival(double x) const override
    {
        if (kind_ == SystemKind::Series) return product(x);
        return -std::expm1(log_product(x));
    }
    double hazard(double x) const override
    {
        if (kind_ == SystemKind::Series) {
            double h = 0.0;
            for (const auto& m : ms_) h += m.impl().hazard(x);
            return h;
        }
        return ModelImpl::hazard(x);
    }
    std::optional<bool> moment_exists(double k) const override
    {
        if (kind_ == SystemKind::Series)
            return std::any_of(ms_.begin(), ms_.end(), [&](const Model& m) { return m.moment_exists(k); });
        return std::all_of(ms_.begin(), ms_.end(), [&](const Model& m) { return m.moment_exists(k); });
    }
    double scale_hint() const override { return ms_.front().impl().scale_hint(); }

  private:
    double part(std::size_t j, double x) const
    {
        return kind_ == SystemKind::Series ? ms_[j].impl().survival(x) : ms_[j].impl().cdf(x);
    }
    double product(double x) const
    {
        double p = 1.0;
        for (std::size_t j = 0; j < ms_.size(); ++j) p *= part(j, x);
        return p;
    }
    double log_product(double x) const
    {
        double s = 0.0;
        for (std::size_t j = 0; j < ms_.size(); ++j) s += std::log(part(j, x));
        return s;
    }

    std::vector<Model> ms_;
    SystemKind kind_;
};

double spread_of(const Model& m)
{
    if (!m.moment_exists(2.0)) return numeric::kInf;
    const double mu = m.mean();
    return std::sqrt(std::max(m.raw_moment(2.0) - mu * mu, 0.0));
}

} // namespace

CompositeModel convolve(const Model& a, const Model& b, const ConvolutionOptions& opts)
{
    const Support sa = a.support();
    const Support sb = b.support();
    if (sa.lo < 0.0 || sb.lo < 0.0) throw DomainError("convolve: supports must lie in [0, inf)");
    if (!a.moment_exists(1.0) || !b.moment_exists(1.0)) throw InfiniteMomentError("convolve: components need finite means");
    if (opts.knots < 16) throw DomainError("convolve: too few knots");

    const double mean = a.mean() + b.mean();
    double end;
    if (sa.bounded() && sb.bounded()) {
        end = sa.hi + sb.hi;
    } else {
        const double sd = spread_of(a) + spread_of(b);
        end = std::isfinite(sd) ? mean + opts.spread * sd : a.quantile(1.0 - 1e-9) + b.quantile(1.0 - 1e-9);
    }

    const ModelImpl& A = a.impl();
    const ModelImpl& B = b.impl();
    numeric::QuadratureOptions q;
    // Relative accuracy only: far-tail survival values must stay meaningful.
    q.abs_tol = 1e-300;
    q.rel_tol = 1e-11;
    q.max_intervals = 4000;

    const auto sa_at = [&](double x) { return x < sa.lo ? 1.0 : (x > sa.hi ? 0.0 : A.survival(x)); };
    const auto fa_at = [&](double x) { return x < sa.lo ? 0.0 : (x > sa.hi ? 1.0 : A.cdf(x)); };
    const auto da_at = [&](double x) { return sa.contains(x) ? A.pdf(x) : 0.0; };
    const auto db_at = [&](double x) { return sb.contains(x) ? B.pdf(x) : 0.0; };
    const auto sb_at = [&](double x) { return x > sb.hi ? 0.0 : B.survival(x); };

    std::vector<double> t = numeric::linear_grid(0.0, end, opts.knots);
    std::vector<double> F(t.size()), S(t.size()), f(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = t[i];
        if (x == 0.0) {
            F[i] = 0.0;
            S[i] = 1.0;
        } else {
            F[i] = numeric::quad([&](double u) { return fa_at(x - u) * db_at(u); }, 0.0, x, q);
            S[i] = sb_at(x) + numeric::quad([&](double u) { return sa_at(x - u) * db_at(u); }, 0.0, x, q);
        }
        f[i] = x == 0.0 ? 0.0 : numeric::quad([&](double u) { return da_at(x - u) * db_at(u); }, 0.0, x, q);
        if (std::fabs(F[i] + S[i] - 1.0) > 1e-6) {
            std::ostringstream os;
            os << "convolve: quadrature failure at t=" << x << " (F + S - 1 = " << F[i] + S[i] - 1.0 << ")";
            throw ConvergenceError(os.str());
        }
    }
    // The density at 0 is the limit from the right of the knot values.
    f[0] = std::max(0.0, 2.0 * f[1] - f[2]);
    if (f[1] == 0.0) f[0] = 0.0;

    for (std::size_t i = 1; i < t.size(); ++i) {
        F[i] = std::max(F[i], F[i - 1]);
        S[i] = std::min(S[i], S[i - 1]);
    }
    std::vector<double> neg_f(f.size());
    std::transform(f.begin(), f.end(), neg_f.begin(), [](double v) { return -v; });
    numeric::MonotoneCubic Fi(t, F, f);
    numeric::MonotoneCubic Si(t, S, neg_f);

    auto impl = std::make_shared<Convolution>(a, b, std::move(Fi), std::move(Si), mean);
    return CompositeModel{Operation::Convolution, {a, b}, {}, 0, 0, Model(impl)};
}

CompositeModel mixture(std::vector<Model> models, std::vector<double> weights)
{
    if (models.empty()) throw DomainError("mixture: no components");
    if (models.size() != weights.size()) throw DomainError("mixture: one weight per component required");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("mixture: weights must be positive");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw DomainError("mixture: weights must sum to 1");
    const Support s0 = models.front().support();
    for (const auto& m : models) {
        const Support s = m.support();
        if (s.lo != s0.lo || s.hi != s0.hi) throw DomainError("mixture: components need equal supports");
    }
    auto impl = std::make_shared<Mixture>(models, weights);
    return CompositeModel{Operation::Mixture, std::move(models), std::move(weights), 0, 0, Model(impl)};
}

CompositeModel order_statistic(const Model& model, int n, int k)
{
    if (n < 1 || k < 1 || k > n) {
        std::ostringstream os;
        os << "order_statistic: rank k=" << k << " outside 1.." << n;
        throw DomainError(os.str());
    }
    auto impl = std::make_shared<OrderStat>(model, n, k);
    return CompositeModel{Operation::OrderStatistic, {model}, {}, n, k, Model(impl)};
}

CompositeModel coherent_min_max(std::vector<Model> models, SystemKind kind)
{
    if (models.empty()) throw DomainError("coherent_min_max: no components");
    const Support s0 = models.front().support();
    for (const auto& m : models) {
        const Support s = m.support();
        if (s.lo != s0.lo || s.hi != s0.hi) throw DomainError("coherent_min_max: components need equal supports");
    }
    auto impl = std::make_shared<System>(models, kind);
    const Operation op = kind == SystemKind::Series ? Operation::Series : Operation::Parallel;
    return CompositeModel{op, std::move(models), {}, 0, 0, Model(impl)};
}

SpacingsReport spacings_check(const Model& model, int n, std::size_t trials, std::uint64_t seed)
{
    if (n < 2) throw DomainError("spacings_check: n must be at least 2");
    if (trials < 1000) throw DomainError("spacings_check: at least 1000 trials required");
    Rng rng(seed);
    std::vector<std::vector<double>> pools(static_cast<std::size_t>(n));
    for (auto& p : pools) p.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        auto xs = draw(model, static_cast<std::size_t>(n), rng);
        std::sort(xs.begin(), xs.end());
        double prev = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double d = static_cast<double>(n - i + 1) * (xs[static_cast<std::size_t>(i - 1)] - prev);
            prev = xs[static_cast<std::size_t>(i - 1)];
            // Ties from a coarse quantile inverse would give a zero spacing.
            pools[static_cast<std::size_t>(i - 1)].push_back(std::max(d, 1e-300));
        }
    }
    SpacingsReport rep{n, trials, {}};
    for (int i = 1; i <= n; ++i) {
        const TttCurve c = empirical_ttt(pools[static_cast<std::size_t>(i - 1)]);
        const TttClassReport r = ttt_class_tests(c);
        double gap = 0.0;
        for (std::size_t j = 0; j < c.p.size(); ++j) gap = std::max(gap, std::fabs(c.phi[j] - c.p[j]));
        rep.indices.push_back({i, r.get("DFR").verdict, r.get("IFR").verdict, gap});
    }
    return rep;
}

const std::vector<std::string>& preservation_classes()
{
    static const std::vector<std::string> rows = {"IFR",  "IFRA", "NBU", "NBUE", "DMRL",  "HNBUE",  "NBU-t0", "DFR",
                                                  "DFRA", "NWU",  "NWUE", "IMRL", "HNWUE", "NWU-t0", "BFR"};
    return rows;
}

const std::vector<Operation>& preservation_operations()
{
    static const std::vector<Operation> cols = {Operation::Series, Operation::Convolution, Operation::Mixture};
    return cols;
}

std::string preservation_verdict_name(PreservationVerdict v)
{
    switch (v) {
    case PreservationVerdict::ConfirmedPreserve: return "confirmed-preserve";
    case PreservationVerdict::WitnessFoundNotPreserve: return "witness-found-not-preserve";
    case PreservationVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

bool published_preserve(const std::string& cls, Operation op)
{
    // Columns: coherent systems, convolution, mixture.
    static const std::map<std::string, std::array<bool, 3>> table = {
        {"IFR", {false, true, false}},    {"IFRA", {true, true, false}},    {"NBU", {true, true, false}},
        {"NBUE", {false, true, false}},   {"DMRL", {false, false, false}},  {"HNBUE", {false, true, false}},
        {"NBU-t0", {true, false, false}}, {"DFR", {false, false, true}},    {"DFRA", {false, false, true}},
        {"NWU", {false, false, false}},   {"NWUE", {false, false, false}},  {"IMRL", {false, false, true}},
        {"HNWUE", {false, false, true}},  {"NWU-t0", {false, false, false}}, {"BFR", {false, false, false}},
    };
    const auto it = table.find(cls);
    if (it == table.end()) throw DomainError("unknown ageing class '" + cls + "'");
    switch (op) {
    case Operation::Series:
    case Operation::Parallel: return it->second[0];
    case Operation::Convolution: return it->second[1];
    case Operation::Mixture: return it->second[2];
    default: throw DomainError("operation '" + operation_name(op) + "' is not a table column");
    }
}

Model convex_bathtub_fixture()
{
    return hazard_to_distribution([](double t) { return 0.2 + (t - 1.0) * (t - 1.0); }, {},
                                  [](double t) { return 0.2 * t + ((t - 1.0) * (t - 1.0) * (t - 1.0) + 1.0) / 3.0; },
                                  "convex-bathtub");
}

namespace {

struct Profile
{
    TttClassReport ttt;
    Membership nbu;
    Membership nwu;
    bool bfr;
};

Membership nbu_check(const Model& m, bool better)
{
    std::vector<double> xs;
    for (double p : numeric::linear_grid(0.01, 0.99, 40)) xs.push_back(m.quantile(p));
    bool member = true;
    bool boundary = true;
    for (double x : xs) {
        for (double y : xs) {
            const double lhs = m.survival(x) * m.survival(y);
            const double rhs = m.survival(x + y);
            const double tol = 1e-10 + 1e-8 * lhs;
            const double margin = better ? lhs - rhs : rhs - lhs;
            if (margin < -tol) member = false;
            if (std::fabs(margin) > tol) boundary = false;
        }
    }
    return {member || boundary, boundary};
}

const Profile& profile(const Model& m)
{
    static std::map<const ModelImpl*, std::pair<std::shared_ptr<const ModelImpl>, Profile>> cache;
    const auto it = cache.find(&m.impl());
    if (it != cache.end()) return it->second.second;
    Profile p{ttt_class_tests(scaled_ttt(m)), nbu_check(m, true), nbu_check(m, false),
              classify_shape(m).label == ShapeLabel::bfr()};
    return cache.emplace(&m.impl(), std::make_pair(m.share(), std::move(p))).first->second.second;
}

bool out_of_scope(const std::string& cls) { return cls == "NBU-t0" || cls == "NWU-t0"; }

const std::vector<CompositeModel>& fixture_pool(Operation op)
{
    static const std::map<Operation, std::vector<CompositeModel>> pools = [] {
        const auto ex = [](double t) { return make_baseline("exponential", {t}); };
        const auto wb = [](double l, double k) { return make_baseline("weibull", {l, k}); };
        const auto ga = [](double s, double r) { return make_baseline("gamma", {s, r}); };
        const Model tub = convex_bathtub_fixture();
        const Model tub3 = scaled(tub, 3.0);
        std::map<Operation, std::vector<CompositeModel>> p;
        p[Operation::Convolution] = {
            convolve(ga(2, 1), ga(3, 1)),
            convolve(ex(1), ex(1)),
            convolve(wb(1, 2), wb(1, 3)),
            convolve(ga(2, 1), wb(2, 2)),
            convolve(tub, tub),
        };
        p[Operation::Mixture] = {
            mixture({ex(1), ex(5)}, {0.5, 0.5}),
            mixture({wb(1, 0.6), wb(2, 0.8)}, {0.3, 0.7}),
            mixture({ga(0.5, 1), ex(2)}, {0.5, 0.5}),
            mixture({ex(0.5), make_baseline("lomax", {4, 1})}, {0.4, 0.6}),
            mixture({wb(1, 3), wb(3, 3)}, {0.5, 0.5}),
            mixture({tub, tub3}, {0.5, 0.5}),
        };
        p[Operation::Series] = {
            coherent_min_max({wb(1, 2), wb(1, 3)}, SystemKind::Series),
            coherent_min_max({wb(1, 2), ga(2, 1)}, SystemKind::Parallel),
            coherent_min_max({ex(1), ex(5)}, SystemKind::Parallel),
            coherent_min_max({ex(1), ga(3, 2)}, SystemKind::Series),
            coherent_min_max({tub, tub3}, SystemKind::Parallel),
        };
        return p;
    }();
    const Operation key = op == Operation::Parallel ? Operation::Series : op;
    const auto it = pools.find(key);
    if (it == pools.end()) throw DomainError("no fixtures for operation '" + operation_name(op) + "'");
    return it->second;
}

} // namespace

Membership class_membership(const std::string& cls, const Model& model)
{
    const Profile& p = profile(model);
    if (cls == "NBU") return p.nbu;
    if (cls == "NWU") return p.nwu;
    if (cls == "BFR") return {p.bfr, false};
    if (out_of_scope(cls)) throw DomainError("class '" + cls + "' is outside the numeric scope");
    const auto& v = p.ttt.get(cls);
    return {v.verdict != Verdict::Fails, v.verdict == Verdict::Boundary};
}

PreservationCell preservation_report(const std::string& cls, Operation op)
{
    PreservationCell cell{cls, op, published_preserve(cls, op), PreservationVerdict::Inconclusive, {}, {}};
    if (out_of_scope(cls)) {
        cell.note = "t0-indexed class; needs a chosen t0, not evaluated";
        return cell;
    }
    bool any_applicable = false;
    bool all_confirm = true;
    bool witness = false;
    for (const auto& c : fixture_pool(op)) {
        FixtureOutcome o{c.describe(), true, false};
        for (const auto& m : c.components) o.components_in_class = o.components_in_class && class_membership(cls, m).member;
        if (o.components_in_class) {
            o.result_in_class = class_membership(cls, c.realized).member;
            any_applicable = true;
            if (!o.result_in_class) {
                witness = true;
                all_confirm = false;
            }
        }
        cell.fixtures.push_back(std::move(o));
    }
    if (witness)
        cell.verdict = PreservationVerdict::WitnessFoundNotPreserve;
    else if (cell.published_preserve && any_applicable && all_confirm)
        cell.verdict = PreservationVerdict::ConfirmedPreserve;
    if (!any_applicable) cell.note = "no fixture has all components in the class";
    if (witness && cell.published_preserve) cell.note = "fixture contradicts the published preserve verdict";
    return cell;
}

std::vector<PreservationCell> preservation_table()
{
    std::vector<PreservationCell> out;
    for (const auto& cls : preservation_classes())
        for (Operation op : preservation_operations()) out.push_back(preservation_report(cls, op));
    return out;
}

} // namespace agewise
