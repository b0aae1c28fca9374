#pragma once

#include "rpme/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace rpme::numerics {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] half of [-1,1] (symmetric), with the embedded
// 7-point Gauss weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b].
/// Converged when the summed error estimate is below max(abs_tol, rel_tol*|I|).
template <class F>
    requires std::invocable<F&, double>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (a == b) return {};
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int evals = 15;
    int iter = 0;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals) {
            throw NumericError("quadrature did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]: achieved error " + std::to_string(err) +
                               " for value " + std::to_string(total));
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Resum occasionally so that cancellation in the running sums does not drift.
        if (++iter % 100 == 0) {
            auto copy = heap;
            total = err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {sign * total, err, evals};
}

/// Integral of f over [a, b] when f has an integrable power singularity at a.
/// Substitutes x = a + (b - a) s^k, which flattens singularities of order
/// up to 1 - 1/k.
template <class F>
QuadResult integrate_left_singular(F&& f, double a, double b, double k,
                                   const QuadOptions& opt = {}) {
    const double w = b - a;
    auto g = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double x = a + w * std::pow(s, k);
        return f(x) * w * k * std::pow(s, k - 1.0);
    };
    return integrate(g, 0.0, 1.0, opt);
}

/// Bisection for a sign change of f on [lo, hi]; returns the midpoint of the
/// final bracket of width <= xtol.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 400) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) {
        throw NumericError("root not bracketed in [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    std::uintmax_t iters = std::uintmax_t(max_iter);
    const auto [a, b] = boost::math::tools::bisect(
        [&f](double x) { return f(x); }, lo, hi, [xtol](double p, double q) { return std::abs(q - p) <= xtol; },
        iters);
    return 0.5 * (a + b);
}

/// Least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) throw NumericError("line fit needs at least two points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw NumericError("line fit with degenerate abscissae");
    LineFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return out;
}

}  // namespace rpme::numerics
