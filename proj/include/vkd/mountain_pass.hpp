#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "vkd/energy.hpp"
#include "vkd/flows.hpp"
#include "vkd/grid.hpp"
#include "vkd/operators.hpp"

namespace vkd {
namespace mp {

using energy::GradientMetric;

struct MpParams {
    int n_path = 41;
    double h0 = 1e-2;
    double grow = 1.2;
    int grow_after = 5;       // consecutive accepts before the step grows
    double accept_drop = 1e-14;
    double step_floor = 1e-15;
    double tol = 1e-6;
    int k_repar = 10;         // reparametrize every k accepted steps
    long max_iters = 200000;
    GradientMetric metric = GradientMetric::x_preconditioned;
    bool symmetrize = true;
    std::ostream* log = nullptr; // iter,m,F_max,grad_norm,h
};

enum class MpStop { gradient_tol, step_underflow };

struct MpResult {
    ScalarField w_mp;
    double level_c = 0.0;
    double grad_norm = 0.0;
    long iterations = 0;
    GradientMetric metric = GradientMetric::x_preconditioned;
    MpStop stop = MpStop::gradient_tol;
};

// Discretized path from w_1 = 0 to w_2 with its F_lambda profile.
struct MpPath {
    std::vector<ScalarField> points;
    std::vector<double> f_values;
    double lambda = 0.0;
};

inline double x_distance(const ScalarField& u, const ScalarField& v) {
    ScalarField d = u;
    d -= v;
    return std::sqrt(std::max(0.0, inner_l2(d, spectral::gram_apply(d))));
}

// Initial path: the line segment t*w2, t in [0,1].
inline MpPath make_initial_path(double lambda, const ScalarField& w2, int n_path) {
    MpPath path;
    path.lambda = lambda;
    path.points.reserve(n_path);
    for (int k = 0; k < n_path; ++k) {
        const double t = double(k) / (n_path - 1);
        path.points.push_back(t * w2);
        path.f_values.push_back(k == 0 ? 0.0 : energy::f_lambda(path.points.back(), lambda));
    }
    return path;
}

// Resample the polyline to equal X-arclength; endpoints stay fixed.
inline void reparametrize(MpPath& path) {
    const int n = int(path.points.size());
    std::vector<double> cum(n, 0.0);
    for (int i = 0; i + 1 < n; ++i)
        cum[i + 1] = cum[i] + x_distance(path.points[i + 1], path.points[i]);
    if (!(cum[n - 1] > 0.0)) return;
    std::vector<ScalarField> fresh;
    fresh.reserve(n);
    fresh.push_back(path.points.front());
    int seg = 0;
    for (int k = 1; k < n - 1; ++k) {
        const double target = cum[n - 1] * k / (n - 1);
        while (seg + 2 < n && cum[seg + 1] < target) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0.0 ? (target - cum[seg]) / len : 0.0;
        ScalarField p = (1.0 - t) * path.points[seg];
        p.axpy(t, path.points[seg + 1]);
        fresh.push_back(std::move(p));
    }
    fresh.push_back(path.points.back());
    path.points = std::move(fresh);
    for (int k = 1; k < n - 1; ++k)
        path.f_values[k] = energy::f_lambda(path.points[k], path.lambda);
}

namespace detail {

// One deformation loop shared by the free and the S-constrained variant.
// step(point, scale) produces the trial point; gradient(point) evaluates the
// descent direction and its norm in the chosen metric.
template <class GradientFn, class StepFn, class ValueFn>
MpResult deform_path(MpPath& path, const MpParams& params, GradientFn&& gradient,
                     StepFn&& step, ValueFn&& value) {
    double h = params.h0;
    long accepted = 0;
    int streak = 0;
    MpResult result;
    result.metric = params.metric;
    for (long it = 0; it < params.max_iters; ++it) {
        const int m = int(std::max_element(path.f_values.begin(), path.f_values.end()) -
                          path.f_values.begin());
        if (m == 0 || m == int(path.points.size()) - 1)
            throw StepUnderflow("path maximum slid to an endpoint (index " +
                                std::to_string(m) + "); increase n_path or revisit w2");
        auto [dir, gnorm] = gradient(path.points[m]);
        if (params.log)
            *params.log << it << "," << m << "," << path.f_values[m] << "," << gnorm
                        << "," << h << "\n";
        result.w_mp = path.points[m];
        result.level_c = path.f_values[m];
        result.grad_norm = gnorm;
        result.iterations = it;
        if (gnorm <= params.tol) {
            result.stop = MpStop::gradient_tol;
            return result;
        }
        bool moved = false;
        while (h > params.step_floor) {
            ScalarField trial = step(path.points[m], dir, h);
            const double ft = value(trial);
            if (ft < path.f_values[m] - params.accept_drop) {
                path.points[m] = std::move(trial);
                path.f_values[m] = ft;
                ++accepted;
                if (++streak >= params.grow_after) {
                    h *= params.grow;
                    streak = 0;
                }
                moved = true;
                break;
            }
            h *= 0.5;
            streak = 0;
        }
        if (!moved) {
            result.stop = MpStop::step_underflow;
            return result;
        }
        if (accepted % params.k_repar == 0) reparametrize(path);
    }
    throw MaxIterations("mountain pass did not converge in " +
                        std::to_string(params.max_iters) + " iterations");
}

} // namespace detail

// Deform a path from 0 to w2 until its highest point is a critical point of
// F_lambda: the max point is moved a small distance along -grad F_lambda,
// the path is reparametrized periodically, and the loop stops when the
// gradient at the max point drops below tol (or the step underflows near
// the flat top).
inline MpResult run_mountain_pass(double lambda, const ScalarField& w2,
                                  const MpParams& params = {}) {
    require_finite(w2, "run_mountain_pass: w2");
    if (!(lambda > 0.0 && lambda < 2.0))
        throw SpecMismatch("mountain pass requires lambda in (0,2)");
    const double f2 = energy::f_lambda(w2, lambda);
    if (!(f2 < 0.0))
        throw EndpointNotNegative("F_lambda(w2) = " + std::to_string(f2) +
                                  " must be negative");
    ScalarField end = params.symmetrize ? symmetrize(w2, SymmetryClass::even_xy) : w2;
    MpPath path = make_initial_path(lambda, end, params.n_path);
    auto gradient = [&](const ScalarField& p) {
        const auto ge = energy::gradient_eval(p, lambda, params.metric);
        return std::make_pair(ge.g, ge.norm);
    };
    auto step = [&](const ScalarField& p, const ScalarField& dir, double h) {
        ScalarField z = p;
        z.axpy(-h, dir);
        // keep iterates in the symmetry subspace; roundoff drift along the
        // translation zero-modes otherwise accumulates over long runs
        if (params.symmetrize) z = symmetrize(z, SymmetryClass::even_xy);
        return z;
    };
    auto value = [&](const ScalarField& p) { return energy::f_lambda(p, lambda); };
    return detail::deform_path(path, params, gradient, step, value);
}

// Constrained variant on the manifold {S = s_target}: projected gradient of
// E plus multiplicative S-restoration, between two constrained minimizers.
inline MpResult run_constrained_mountain_pass(double s_target, const ScalarField& w_a,
                                              const ScalarField& w_b,
                                              const MpParams& params = {}) {
    w_a.check_same_spec(w_b);
    require_finite(w_a, "run_constrained_mountain_pass: w_a");
    require_finite(w_b, "run_constrained_mountain_pass: w_b");
    const double sa = energy::shortening(w_a), sb = energy::shortening(w_b);
    if (std::abs(sa - s_target) > 1e-8 * s_target || std::abs(sb - s_target) > 1e-8 * s_target)
        throw ConstraintDrift("endpoints do not sit on the S = s_target manifold");

    MpPath path;
    path.lambda = 0.0;
    for (int k = 0; k < params.n_path; ++k) {
        const double t = double(k) / (params.n_path - 1);
        ScalarField p = (1.0 - t) * w_a;
        p.axpy(t, w_b);
        const double sp = energy::shortening(p);
        if (!(sp > 0.0)) throw ConstraintDrift("interpolated path point has S <= 0");
        p *= std::sqrt(s_target / sp);
        path.points.push_back(std::move(p));
        path.f_values.push_back(energy::f_lambda(path.points.back(), 0.0));
    }
    auto gradient = [&](const ScalarField& p) {
        const auto ge = energy::gradient_eval(p, 0.0, params.metric);
        const ScalarField gs = flows::detail::shortening_gradient(p, params.metric);
        const double gg = flows::detail::metric_inner(ge.g, gs, params.metric);
        const double ss = flows::detail::metric_inner(gs, gs, params.metric);
        ScalarField proj = ge.g;
        proj.axpy(-gg / ss, gs);
        const double pn =
            std::sqrt(std::max(0.0, flows::detail::metric_inner(proj, proj, params.metric)));
        return std::make_pair(std::move(proj), pn);
    };
    auto step = [&](const ScalarField& p, const ScalarField& dir, double h) {
        ScalarField z = p;
        z.axpy(-h, dir);
        if (params.symmetrize) z = symmetrize(z, SymmetryClass::even_xy);
        z *= std::sqrt(s_target / energy::shortening(z));
        return z;
    };
    auto value = [&](const ScalarField& p) { return energy::f_lambda(p, 0.0); };
    MpResult res = detail::deform_path(path, params, gradient, step, value);
    const double sm = energy::shortening(res.w_mp);
    if (std::abs(sm - s_target) > 1e-10 * s_target)
        throw ConstraintDrift("constraint drifted to S = " + std::to_string(sm));
    return res;
}

// Bottom eigenpair of the X-preconditioned Hessian at w by Lanczos in the
// X inner product; the returned direction is X-normalized and oriented so
// that <d, w>_X >= 0.
struct HessianDirection {
    ScalarField direction;
    double eigenvalue = 0.0;
};

inline HessianDirection lowest_hessian_direction(const ScalarField& w, double lambda,
                                                 int iterations = 40) {
    const energy::Linearization lin(w, lambda);
    auto x_ip = [](const ScalarField& u, const ScalarField& v) {
        return inner_l2(spectral::gram_apply(u), v);
    };
    // A = G^{-1} H restricted to the symmetry subspace, self-adjoint under
    // <.,.>_X; the translation zero-modes live outside and are excluded
    auto apply = [&](const ScalarField& v) {
        return symmetrize(spectral::gram_solve(lin.apply(v)), SymmetryClass::even_xy);
    };

    std::vector<ScalarField> basis;
    std::vector<double> alpha, beta;
    // deterministic start: the state itself plus a long-wave ripple
    ScalarField q = project_zero_mean(symmetrize(w, SymmetryClass::even_xy));
    ScalarField ripple = sample(w.spec(), [&](double x, double y) {
        return std::cos(M_PI * x / w.spec().a) * std::cos(2.0 * M_PI * y / w.spec().b);
    });
    q.axpy(0.1 * std::sqrt(std::max(x_ip(q, q), 1e-30)), ripple);
    q = project_zero_mean(q);
    double qn = std::sqrt(x_ip(q, q));
    if (!(qn > 0.0)) throw NotConverged("degenerate Lanczos start vector");
    q *= 1.0 / qn;
    basis.push_back(q);
    for (int k = 0; k < iterations; ++k) {
        ScalarField r = apply(basis[k]);
        const double a = x_ip(r, basis[k]);
        alpha.push_back(a);
        r.axpy(-a, basis[k]);
        if (k > 0) r.axpy(-beta[k - 1], basis[k - 1]);
        for (const auto& b : basis) r.axpy(-x_ip(r, b), b); // full reorthogonalization
        const double bn = std::sqrt(std::max(0.0, x_ip(r, r)));
        if (bn < 1e-12) break;
        beta.push_back(bn);
        r *= 1.0 / bn;
        basis.push_back(std::move(r));
    }
    // smallest eigenpair of the tridiagonal (alpha, beta) by bisection-free
    // dense iteration: the matrix is tiny, use Jacobi-style QL via Eigen-free
    // symmetric tridiagonal eigensolver (inverse iteration on shifted matrix).
    const int n = int(alpha.size());
    auto mat_apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (int i = 0; i < n; ++i) {
            double s = alpha[i] * x[i];
            if (i > 0) s += beta[i - 1] * x[i - 1];
            if (i + 1 < n && i < int(beta.size())) s += beta[i] * x[i + 1];
            y[i] = s;
        }
    };
    // crude but robust for n <= 64: power iteration on (cI - T)
    double upper = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = std::abs(alpha[i]);
        if (i > 0) row += std::abs(beta[i - 1]);
        if (i < int(beta.size())) row += std::abs(beta[i]);
        upper = std::max(upper, row);
    }
    std::vector<double> x(n, 1.0 / std::sqrt(double(n))), y(n);
    double theta = 0.0;
    for (int sweep = 0; sweep < 2000; ++sweep) {
        mat_apply(x, y);
        for (int i = 0; i < n; ++i) y[i] = (upper + 1.0) * x[i] - y[i];
        double nrm = 0.0;
        for (double v : y) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) x[i] = y[i] / nrm;
    }
    mat_apply(x, y);
    theta = 0.0;
    for (int i = 0; i < n; ++i) theta += x[i] * y[i];

    ScalarField dir(w.spec());
    for (int i = 0; i < n; ++i) dir.axpy(x[i], basis[i]);
    const double dn = std::sqrt(std::max(x_ip(dir, dir), 1e-300));
    dir *= 1.0 / dn;
    if (x_ip(dir, w) < 0.0) dir *= -1.0;
    return {std::move(dir), theta};
}

struct VerifyParams {
    double delta_scale = 1e-2;  // perturbation size relative to ||w_mp||_X
    int power_iterations = 40;
    long max_steps = 50000;
    double h0 = 1e-2;
    GradientMetric metric = GradientMetric::x_preconditioned;
};

struct VerifyReport {
    bool shrank_to_zero = false;
    bool grew_negative = false;
    double minus_final_xnorm = 0.0;
    double plus_final_f = 0.0;
    long minus_steps = 0;
    long plus_steps = 0;
    double eigenvalue = 0.0;
};

namespace detail {

enum class EscapeOutcome { shrank, grew, stuck };

inline EscapeOutcome descend_until_escape(ScalarField w, double lambda, double half_norm,
                                          const VerifyParams& params, double* final_xnorm,
                                          double* final_f, long* steps) {
    double h = params.h0;
    double f = energy::f_lambda(w, lambda);
    for (long it = 0; it < params.max_steps; ++it) {
        const double xn = energy::x_norm(w);
        *final_xnorm = xn;
        *final_f = f;
        *steps = it;
        if (xn < half_norm) return EscapeOutcome::shrank;
        if (f < 0.0) return EscapeOutcome::grew;
        const auto ge = energy::gradient_eval(w, lambda, params.metric);
        bool moved = false;
        while (h > 1e-15) {
            ScalarField trial = w;
            trial.axpy(-h, ge.g);
            const double ft = energy::f_lambda(trial, lambda);
            if (ft < f) {
                w = std::move(trial);
                f = ft;
                h *= 1.2;
                moved = true;
                break;
            }
            h *= 0.5;
        }
        if (!moved) return EscapeOutcome::stuck;
    }
    return EscapeOutcome::stuck;
}

} // namespace detail

// Saddle check from Fig-style perturbation: find the downhill direction d,
// then follow the free gradient flow from w_mp -+ delta*d. One side must
// shrink toward the origin, the other must reach F_lambda < 0.
inline VerifyReport verify_mountain_pass(const MpResult& result, double lambda,
                                         const VerifyParams& params = {}) {
    const auto dir = lowest_hessian_direction(result.w_mp, lambda, params.power_iterations);
    VerifyReport report;
    report.eigenvalue = dir.eigenvalue;
    const double wn = energy::x_norm(result.w_mp);
    const double delta = params.delta_scale * wn;

    ScalarField minus = result.w_mp;
    minus.axpy(-delta, dir.direction);
    ScalarField plus = result.w_mp;
    plus.axpy(delta, dir.direction);

    double xn_minus = 0.0, f_minus = 0.0, xn_plus = 0.0, f_plus = 0.0;
    const auto minus_out = detail::descend_until_escape(
        std::move(minus), lambda, 0.5 * wn, params, &xn_minus, &f_minus, &report.minus_steps);
    const auto plus_out = detail::descend_until_escape(
        std::move(plus), lambda, 0.5 * wn, params, &xn_plus, &f_plus, &report.plus_steps);
    report.minus_final_xnorm = xn_minus;
    report.plus_final_f = f_plus;

    // the eigen-direction sign is arbitrary; the two escapes may come in
    // either order
    using detail::EscapeOutcome;
    report.shrank_to_zero =
        minus_out == EscapeOutcome::shrank || plus_out == EscapeOutcome::shrank;
    report.grew_negative =
        minus_out == EscapeOutcome::grew || plus_out == EscapeOutcome::grew;
    if (minus_out == EscapeOutcome::grew && plus_out == EscapeOutcome::shrank) {
        report.minus_final_xnorm = xn_plus;
        report.plus_final_f = f_minus;
    }
    if (!(report.shrank_to_zero && report.grew_negative))
        throw NotConverged("perturbed flows did not exhibit both escape behaviours");
    return report;
}

} // namespace mp
} // namespace vkd
