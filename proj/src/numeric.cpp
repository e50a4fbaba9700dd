#include "agewise/numeric.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <stdexcept>

namespace agewise::numeric {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment
{
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

Segment gauss_kronrod(const Fn& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = finite_or_zero(f(c));
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = finite_or_zero(f(c - dx));
        const double f2 = finite_or_zero(f(c + dx));
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

QuadratureResult integrate_finite(const Fn& f, double a, double b, const QuadratureOptions& opts)
{
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod(f, a, b);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int intervals = 1;
    while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (intervals >= opts.max_intervals) return {total, err, false};
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) return {total, err, false};
        heap.pop();
        Segment left = gauss_kronrod(f, worst.a, mid);
        Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
        // Running sums drift; refresh them once the heap is large.
        if (intervals % 256 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, err, true};
}

} // namespace

QuadratureResult integrate(const Fn& f, double a, double b, const QuadratureOptions& opts)
{
    if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("integrate: NaN limit");
    if (a == b) return {0.0, 0.0, true};
    if (a > b) {
        auto r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    if (std::isinf(a)) throw std::invalid_argument("integrate: infinite lower limit");
    if (std::isinf(b)) {
        const double s = opts.tail_scale;
        Fn g = [&](double u) {
            const double one_minus = 1.0 - u;
            const double t = a + s * u / one_minus;
            return f(t) * s / (one_minus * one_minus);
        };
        return integrate_finite(g, 0.0, 1.0, opts);
    }
    return integrate_finite(f, a, b, opts);
}

double quad(const Fn& f, double a, double b, const QuadratureOptions& opts)
{
    return integrate(f, a, b, opts).value;
}

double solve_bracketed(const Fn& f, double lo, double hi, double flo, double fhi,
                       const RootOptions& opts)
{
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("solve_bracketed: root not bracketed");
    int side = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        const double width = hi - lo;
        if (width <= std::max(opts.x_abs_tol, opts.x_rel_tol * std::max(std::abs(lo), std::abs(hi))))
            break;
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        // Bisect when the secant point is poorly placed or stalls at an end.
        if (!(x > lo + 0.01 * width && x < hi - 0.01 * width) || it % 8 == 7) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
            if (side == -1) flo *= 0.5;
            side = -1;
        } else {
            lo = x;
            flo = fx;
            if (side == 1) fhi *= 0.5;
            side = 1;
        }
    }
    return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < n; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n)
{
    if (!(lo > 0.0)) throw std::invalid_argument("geometric_grid: lower end must be positive");
    std::vector<double> g(n);
    if (n == 1) {
        g[0] = lo;
        return g;
    }
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y))
{
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 matching knots");
    m_.assign(n, 0.0);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    if (n == 2) {
        m_[0] = m_[1] = delta[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) continue;
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double w1 = 2.0 * h1 + h0;
        const double w2 = h1 + 2.0 * h0;
        m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 <= 0.0 && std::abs(m) > std::abs(3.0 * d0)) return 3.0 * d0;
        return m;
    };
    m_[0] = end_slope(x_[1] - x_[0], x_[2] - x_[1], delta[0], delta[1]);
    m_[n - 1] = end_slope(x_[n - 1] - x_[n - 2], x_[n - 2] - x_[n - 3], delta[n - 2], delta[n - 3]);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(slopes))
{
    if (x_.size() < 2 || y_.size() != x_.size() || m_.size() != x_.size())
        throw std::invalid_argument("MonotoneCubic: need >= 2 matching knots");
    limit_slopes();
}

void MonotoneCubic::limit_slopes()
{
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
        const double d = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
        if (d == 0.0) {
            m_[i] = 0.0;
            m_[i + 1] = 0.0;
            continue;
        }
        if (m_[i] * d < 0.0) m_[i] = 0.0;
        if (m_[i + 1] * d < 0.0) m_[i + 1] = 0.0;
        const double a = m_[i] / d;
        const double b = m_[i + 1] / d;
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            m_[i] = tau * a * d;
            m_[i + 1] = tau * b * d;
        }
    }
}

std::size_t MonotoneCubic::segment(double t) const
{
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double MonotoneCubic::operator()(double t) const
{
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * m_[i] + (-2 * s3 + 3 * s2) * y_[i + 1] +
           (s3 - s2) * h * m_[i + 1];
}

double MonotoneCubic::derivative(double t) const
{
    const std::size_t i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * y_[i] + (6 * s - 6 * s2) * y_[i + 1]) / h + (3 * s2 - 4 * s + 1) * m_[i] +
           (3 * s2 - 2 * s) * m_[i + 1];
}

double median(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lower);
    }
    return m;
}

} // namespace agewise::numeric
