// quadrature.hpp — adaptive panel quadrature for the smooth-with-Gaussian-tail
// frequency integrals (Franck-Condon factor, polaron shift, phonon correlator).
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <type_traits>
#include <vector>

#include "qdpl/errors.hpp"

namespace qdpl {

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1], computed once by Newton iteration on
// the Legendre recurrence (exact to machine precision, no transcribed tables).
template <int N>
struct GaussLegendre {
    std::array<double, N> node{};
    std::array<double, N> weight{};

    GaussLegendre() {
        for (int i = 0; i < (N + 1) / 2; ++i) {
            // Chebyshev-based initial guess
            double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= N; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = -x;
            node[N - 1 - i] = x;
            weight[i] = weight[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre<15>& gl15() {
    static const GaussLegendre<15> rule;
    return rule;
}

template <class T>
double quad_abs(const T& v) {
    if constexpr (std::is_same_v<T, std::complex<double>>)
        return std::abs(v);
    else
        return std::abs(static_cast<double>(v));
}

} // namespace detail

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;
    long evals = 0;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    int max_depth = 48;
};

// Integrate f over a fixed panel with the 15-point Gauss-Legendre rule.
template <class F>
auto gl15_panel(F&& f, double a, double b) {
    using T = std::invoke_result_t<F, double>;
    const auto& rule = detail::gl15();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    T sum{};
    for (int i = 0; i < 15; ++i) sum += T(rule.weight[i] * half) * f(mid + half * rule.node[i]);
    return sum;
}

// Adaptive bisection: a panel is accepted when its whole-vs-halves discrepancy is
// below its share of the tolerance budget.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadOptions& opts = {}) {
    using T = std::invoke_result_t<F, double>;
    QuadResult<T> out;
    struct Frame {
        double a, b, tol;
        int depth;
        T whole;
    };
    std::vector<Frame> stack;
    stack.push_back({a, b, opts.abs_tol, 0, gl15_panel(f, a, b)});
    out.evals += 15;
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const double m = 0.5 * (fr.a + fr.b);
        const T left = gl15_panel(f, fr.a, m);
        const T right = gl15_panel(f, m, fr.b);
        out.evals += 30;
        const T sum = left + right;
        const double disc = detail::quad_abs<T>(sum - fr.whole);
        if (disc <= fr.tol || fr.depth >= opts.max_depth) {
            if (disc > fr.tol)
                throw QuadratureError("integrate_adaptive: panel refinement limit reached", disc);
            out.value += sum;
            out.error += disc / 15.0; // next refinement would shrink it by ~2^(2p)
        } else {
            stack.push_back({fr.a, m, 0.5 * fr.tol, fr.depth + 1, left});
            stack.push_back({m, fr.b, 0.5 * fr.tol, fr.depth + 1, right});
        }
    }
    return out;
}

// Adaptive integration over pre-split panels; used for oscillatory integrands where the
// caller bounds the phase advance per panel.
template <class F>
auto integrate_panels(F&& f, const std::vector<double>& breakpoints, const QuadOptions& opts = {}) {
    using T = std::invoke_result_t<F, double>;
    QuadResult<T> out;
    const int n = static_cast<int>(breakpoints.size()) - 1;
    QuadOptions per = opts;
    per.abs_tol = opts.abs_tol / std::max(1, n);
    for (int i = 0; i < n; ++i) {
        auto r = integrate_adaptive(f, breakpoints[i], breakpoints[i + 1], per);
        out.value += r.value;
        out.error += r.error;
        out.evals += r.evals;
    }
    return out;
}

// Uniform panel split of [a,b] such that a phase factor exp(i*omega*t) advances at most
// ~pi per panel, with a floor of min_panels.
inline std::vector<double> phase_aware_breakpoints(double a, double b, double phase_rate,
                                                   int min_panels = 8) {
    const double span = b - a;
    int n = min_panels;
    if (phase_rate > 0.0) {
        const double per_panel = M_PI;
        n = std::max<int>(min_panels, static_cast<int>(std::ceil(span * phase_rate / per_panel)));
    }
    std::vector<double> bp(n + 1);
    for (int i = 0; i <= n; ++i) bp[i] = a + span * i / n;
    return bp;
}

} // namespace qdpl
