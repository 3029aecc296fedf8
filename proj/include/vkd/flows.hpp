#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "vkd/energy.hpp"
#include "vkd/grid.hpp"
#include "vkd/operators.hpp"

namespace vkd {
namespace flows {

using energy::GradientMetric;

enum class SeedShape { one_peak, two_peaks_y, two_peaks_x };

struct FlowParams {
    double h0 = 1e-2;
    double grow = 1.2;
    double step_floor = 1e-14;
    long max_steps = 100000;
    double tol = 1e-6;
    GradientMetric metric = GradientMetric::x_preconditioned;
    bool symmetrize = true;
    std::ostream* log = nullptr; // per-iterate CSV: iter,F,grad_norm,S
};

// Default starting hump for the w_2 search: amplitude 5, width 5 in the
// dimensionless units of the domain, independent of the grid.
inline ScalarField seed_field(const DomainSpec& spec, SeedShape shape,
                              double amplitude = 5.0, double width = 5.0,
                              double separation = 10.0) {
    ScalarField w(spec);
    auto bump = [&](double cx, double cy) {
        for (int i = 0; i <= spec.nx; ++i)
            for (int j = 0; j < spec.ny; ++j) {
                const double dx0 = spec.x(i) - cx;
                const double dy0 = spec.y(j) - cy;
                w(i, j) += amplitude * std::exp(-(dx0 * dx0 + dy0 * dy0) / (width * width));
            }
    };
    switch (shape) {
        case SeedShape::one_peak: bump(0.0, 0.0); break;
        case SeedShape::two_peaks_y: bump(0.0, -separation); bump(0.0, separation); break;
        case SeedShape::two_peaks_x: bump(-separation, 0.0); bump(separation, 0.0); break;
    }
    return symmetrize(project_zero_mean(w), SymmetryClass::even_xy);
}

namespace detail {
inline void log_line(std::ostream* os, long it, double f, double gn, double s) {
    if (os) *os << it << "," << f << "," << gn << "," << s << "\n";
}
} // namespace detail

// Integrate dw/dt = -grad F_lambda from w0 by explicit steps with
// backtracking until F_lambda < 0; returns the first such iterate.
inline ScalarField find_w2(double lambda, const ScalarField& w0, const FlowParams& params = {}) {
    if (!(lambda > 0.0)) throw SpecMismatch("find_w2 requires lambda > 0");
    require_finite(w0, "find_w2: w0");
    ScalarField w = params.symmetrize ? symmetrize(w0, SymmetryClass::even_xy) : w0;
    w = project_zero_mean(w);
    double h = params.h0;
    double f = energy::f_lambda(w, lambda);
    for (long it = 0; it < params.max_steps; ++it) {
        if (f < 0.0) return w;
        const auto ge = energy::gradient_eval(w, lambda, params.metric);
        detail::log_line(params.log, it, f, ge.norm, energy::shortening(w));
        bool accepted = false;
        while (h > params.step_floor) {
            ScalarField trial = w;
            trial.axpy(-h, ge.g);
            if (params.symmetrize) trial = symmetrize(trial, SymmetryClass::even_xy);
            const double ft = energy::f_lambda(trial, lambda);
            if (ft < f) {
                w = std::move(trial);
                f = ft;
                h *= params.grow;
                accepted = true;
                break;
            }
            h *= 0.5;
        }
        if (!accepted)
            throw NotReached("descent stagnated at F=" + std::to_string(f) +
                             "; lambda or domain too small for negative-energy states");
    }
    throw NotReached("F_lambda stayed nonnegative after max_steps; lambda or domain "
                     "too small for negative-energy states");
}

struct ConstrainedParams : FlowParams {
    ConstrainedParams() { max_steps = 200000; }
};

namespace detail {

// Metric representation of the shortening differential dS(w) v = int w_x v_x.
inline ScalarField shortening_gradient(const ScalarField& w, GradientMetric metric) {
    ScalarField g = dxx(w);
    g *= -1.0;
    g = project_zero_mean(g);
    if (metric == GradientMetric::x_preconditioned) g = spectral::gram_solve(g);
    return g;
}

inline double metric_inner(const ScalarField& u, const ScalarField& v, GradientMetric metric) {
    if (metric == GradientMetric::l2) return inner_l2(u, v);
    return inner_l2(spectral::gram_apply(u), v);
}

} // namespace detail

// Steepest descent for E restricted to the manifold {S = s_target}. Steps
// use the metric-orthogonal projection of the gradient; the constraint is
// restored after every step by scalar rescaling (S is 2-homogeneous, so one
// multiplication is exact).
inline ScalarField constrained_descent(const ScalarField& w0, double s_target,
                                       const ConstrainedParams& params = {}) {
    require_finite(w0, "constrained_descent: w0");
    if (!(s_target > 0.0)) throw SpecMismatch("constrained_descent requires s_target > 0");
    const double s0 = energy::shortening(w0);
    if (!(s0 > 0.0)) throw SpecMismatch("constrained_descent requires S(w0) > 0");
    ScalarField w = w0;
    if (params.symmetrize) w = symmetrize(w, SymmetryClass::even_xy);
    w = project_zero_mean(w);
    w *= std::sqrt(s_target / energy::shortening(w));

    double h = params.h0;
    double e = energy::f_lambda(w, 0.0); // E alone
    for (long it = 0; it < params.max_steps; ++it) {
        const auto ge = energy::gradient_eval(w, 0.0, params.metric);
        const ScalarField gs = detail::shortening_gradient(w, params.metric);
        const double gg = detail::metric_inner(ge.g, gs, params.metric);
        const double ss = detail::metric_inner(gs, gs, params.metric);
        ScalarField proj = ge.g;
        proj.axpy(-gg / ss, gs);
        const double pn = std::sqrt(std::max(0.0, detail::metric_inner(proj, proj, params.metric)));
        detail::log_line(params.log, it, e, pn, energy::shortening(w));
        if (pn <= params.tol) return w;
        bool accepted = false;
        while (h > params.step_floor) {
            ScalarField trial = w;
            trial.axpy(-h, proj);
            if (params.symmetrize) trial = symmetrize(trial, SymmetryClass::even_xy);
            trial *= std::sqrt(s_target / energy::shortening(trial));
            const double et = energy::f_lambda(trial, 0.0);
            if (et < e) {
                w = std::move(trial);
                e = et;
                h *= params.grow;
                accepted = true;
                break;
            }
            h *= 0.5;
        }
        if (!accepted) throw Stagnation("constrained descent step underflow at E=" +
                                        std::to_string(e));
        require_finite(w, "constrained_descent iterate");
    }
    throw MaxIterations("constrained descent did not reach tolerance");
}

} // namespace flows
} // namespace vkd
