#include "rpme/solver.hpp"

#include <algorithm>
#include <cmath>

namespace rpme::kernels {

namespace {

// Values this small only arise in the super-exponentially decaying cells
// ahead of a front; flushing them keeps the loop out of subnormal arithmetic.
constexpr double kFlush = 1e-300;

inline double power(double u, double m) noexcept {
    if (m == 2.0) return u * u;
    if (m == 3.0) return u * u * u;
    if (m == 1.5) return u * std::sqrt(u);
    return u > 0.0 ? std::pow(u, m) : 0.0;
}

struct Buffers {
    std::vector<double> phi;  // phi[k] holds node k - 1; phi[0] = phi[n + 1] = 0
    std::vector<double> fu;
};

/// Fills phi on nodes [lo - 1, hi] and f(u) on [lo, hi).
void prepare(Buffers& b, std::span<const double> u, std::size_t lo, std::size_t hi, double m, const Reaction& f,
             bool parallel) {
    const std::size_t n = u.size();
    b.phi.resize(n + 2);
    b.fu.resize(n);
    b.phi[0] = 0.0;
    b.phi[n + 1] = 0.0;
    const std::ptrdiff_t a = std::ptrdiff_t(lo > 0 ? lo - 1 : 0);
    const std::ptrdiff_t e = std::ptrdiff_t(std::min(hi + 1, n));
    double* ph = b.phi.data();
    double* fu = b.fu.data();
    const double* up = u.data();
    const bool react = f.kind() != ReactionKind::PureDiffusion;
    // Separate loops per exponent keep the power branch out of the inner loop.
    if (m == 2.0) {
#pragma omp parallel for simd schedule(static) if (parallel)
        for (std::ptrdiff_t i = a; i < e; ++i) ph[i + 1] = up[i] * up[i];
    } else if (m == 3.0) {
#pragma omp parallel for simd schedule(static) if (parallel)
        for (std::ptrdiff_t i = a; i < e; ++i) ph[i + 1] = up[i] * up[i] * up[i];
    } else {
#pragma omp parallel for schedule(static) if (parallel)
        for (std::ptrdiff_t i = a; i < e; ++i) ph[i + 1] = power(up[i], m);
    }
    if (react) {
#pragma omp parallel for schedule(static) if (parallel)
        for (std::ptrdiff_t i = a; i < e; ++i) fu[i] = f.eval(up[i]);
    } else {
        std::fill(fu + a, fu + e, 0.0);
    }
}

}  // namespace

StepStats explicit_step_serial(std::span<const double> u, std::span<double> out, std::size_t lo, std::size_t hi,
                               double r, double dt, double m, const Reaction& f) {
    thread_local Buffers b;
    const std::size_t n = u.size();
    prepare(b, u, lo, hi, m, f, false);
    std::fill(out.begin(), out.begin() + std::ptrdiff_t(lo), 0.0);
    std::fill(out.begin() + std::ptrdiff_t(hi), out.begin() + std::ptrdiff_t(n), 0.0);
    const double* ph = b.phi.data();
    const double* fu = b.fu.data();
    double clamp = 0.0, mx = 0.0;
#pragma omp simd reduction(+ : clamp) reduction(max : mx)
    for (std::size_t i = lo; i < hi; ++i) {
        double w = u[i] + r * (ph[i + 2] - 2.0 * ph[i + 1] + ph[i]) + dt * fu[i];
        clamp += w < 0.0 ? -w : 0.0;
        w = w < kFlush ? 0.0 : w;
        out[i] = w;
        mx = std::max(mx, w);
    }
    return {clamp, mx};
}

StepStats explicit_step_omp(std::span<const double> u, std::span<double> out, std::size_t lo, std::size_t hi,
                            double r, double dt, double m, const Reaction& f) {
    thread_local Buffers b;
    const std::size_t n = u.size();
    prepare(b, u, lo, hi, m, f, true);
    std::fill(out.begin(), out.begin() + std::ptrdiff_t(lo), 0.0);
    std::fill(out.begin() + std::ptrdiff_t(hi), out.begin() + std::ptrdiff_t(n), 0.0);
    const double* ph = b.phi.data();
    const double* fu = b.fu.data();
    const double* up = u.data();
    double* op = out.data();
    double clamp = 0.0, mx = 0.0;
#pragma omp parallel for simd schedule(static) reduction(+ : clamp) reduction(max : mx)
    for (std::ptrdiff_t i = std::ptrdiff_t(lo); i < std::ptrdiff_t(hi); ++i) {
        double w = up[i] + r * (ph[i + 2] - 2.0 * ph[i + 1] + ph[i]) + dt * fu[i];
        clamp += w < 0.0 ? -w : 0.0;
        w = w < kFlush ? 0.0 : w;
        op[i] = w;
        mx = std::max(mx, w);
    }
    return {clamp, mx};
}

double max_abs_serial(std::span<const double> u) {
    double mx = 0.0;
    for (double x : u) mx = std::max(mx, std::abs(x));
    return mx;
}

double max_abs_omp(std::span<const double> u) {
    double mx = 0.0;
    const double* p = u.data();
    const std::ptrdiff_t n = std::ptrdiff_t(u.size());
#pragma omp parallel for reduction(max : mx)
    for (std::ptrdiff_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(p[i]));
    return mx;
}

}  // namespace rpme::kernels
