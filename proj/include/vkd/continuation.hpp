#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "vkd/energy.hpp"
#include "vkd/flows.hpp"
#include "vkd/grid.hpp"
#include "vkd/mountain_pass.hpp"
#include "vkd/operators.hpp"

namespace vkd {
namespace continuation {

using energy::GradientMetric;

// ---------------------------------------------------------------------------
// Preconditioned GMRES on (field, scalar) pairs. The scalar slot carries the
// arclength unknown; plain Newton systems put a trivial identity there.
// ---------------------------------------------------------------------------

struct AugVec {
    ScalarField v;
    double mu = 0.0;
};

namespace detail {

inline double aug_dot(const AugVec& a, const AugVec& b) {
    return inner_l2(a.v, b.v) + a.mu * b.mu;
}

inline void aug_axpy(AugVec& y, double c, const AugVec& x) {
    y.v.axpy(c, x.v);
    y.mu += c * x.mu;
}

struct GmresStats {
    int iterations = 0;
    double rel_residual = 1.0;
};

// Right-preconditioned Arnoldi/MGS GMRES without restarts: solves
// A M^{-1} y = b, x = M^{-1} y, so the tracked residual is the true one
// (a left-preconditioned residual would hide the stiff high-mode components
// that M suppresses).
template <class Op, class Prec>
std::optional<AugVec> gmres(const Op& op, const Prec& prec, const AugVec& rhs,
                            double rel_tol, int max_iters, GmresStats* stats = nullptr) {
    const double beta = std::sqrt(aug_dot(rhs, rhs));
    if (stats) stats->rel_residual = 1.0;
    if (!(beta > 0.0)) return AugVec{ScalarField(rhs.v.spec()), 0.0};

    std::vector<AugVec> basis;
    basis.push_back(rhs);
    basis.back().v *= 1.0 / beta;
    basis.back().mu /= beta;

    std::vector<std::vector<double>> h; // h[j][i], column j
    std::vector<double> cs, sn, g;
    g.push_back(beta);

    int j = 0;
    for (; j < max_iters; ++j) {
        AugVec wv = op(prec(basis[j]));
        h.emplace_back(j + 2, 0.0);
        for (int i = 0; i <= j; ++i) {
            h[j][i] = aug_dot(wv, basis[i]);
            aug_axpy(wv, -h[j][i], basis[i]);
        }
        const double hn = std::sqrt(aug_dot(wv, wv));
        h[j][j + 1] = hn;
        // Givens update
        for (int i = 0; i < j; ++i) {
            const double t = cs[i] * h[j][i] + sn[i] * h[j][i + 1];
            h[j][i + 1] = -sn[i] * h[j][i] + cs[i] * h[j][i + 1];
            h[j][i] = t;
        }
        const double denom = std::hypot(h[j][j], h[j][j + 1]);
        if (!(denom > 0.0)) break;
        cs.push_back(h[j][j] / denom);
        sn.push_back(h[j][j + 1] / denom);
        h[j][j] = denom;
        h[j][j + 1] = 0.0;
        g.push_back(-sn[j] * g[j]);
        g[j] = cs[j] * g[j];
        const double rel = std::abs(g[j + 1]) / beta;
        if (stats) {
            stats->iterations = j + 1;
            stats->rel_residual = rel;
        }
        if (rel <= rel_tol) {
            ++j;
            break;
        }
        if (hn < 1e-300) break;
        wv.v *= 1.0 / hn;
        wv.mu /= hn;
        basis.push_back(std::move(wv));
    }
    if (j == 0) return std::nullopt;
    // back substitution
    std::vector<double> ycoef(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
        double s = g[i];
        for (int k = i + 1; k < j; ++k) s -= h[k][i] * ycoef[k];
        ycoef[i] = s / h[i][i];
    }
    AugVec y{ScalarField(rhs.v.spec()), 0.0};
    for (int i = 0; i < j; ++i) aug_axpy(y, ycoef[i], basis[i]);
    return prec(y);
}

// Spectral inverse of the lambda-shifted linear symbol; SPD for lambda < 2
// and clipped away from zero near the critical circle.
inline ScalarField linear_shift_preconditioner(const ScalarField& r, double lambda) {
    return spectral::apply_symbol(r, [lambda](double kx, double ky) {
        const double l2 = (kx + ky) * (kx + ky);
        const double gram = l2 + kx * kx / l2;
        const double shifted = gram - lambda * kx;
        return 1.0 / std::max(shifted, 1e-6 * gram);
    });
}

} // namespace detail

struct NewtonParams {
    double tol = 1e-10;
    int max_newton = 30;
    int max_krylov = 300;
    double krylov_rel_tol_cap = 1e-3;
    // restrict to the even-even subspace; on large domains the translation
    // modes of localized states make the unrestricted Hessian near-singular
    bool symmetrize = true;
    std::ostream* log = nullptr;
};

struct NewtonInfo {
    int iterations = 0;
    double residual = 0.0;
};

namespace detail {

struct ShorteningRefineResult {
    ScalarField w;
    double mu = 0.0; // Lagrange multiplier: the load at which w is critical
};

// Newton on the bordered system g(w, mu) = 0, S(w) = s with the load as the
// unknown multiplier. Nonsingular where the fixed-load Hessian degenerates
// along the branch (flat-barrier direction), which is exactly where the
// plain iteration stalls.
inline ShorteningRefineResult refine_fixed_shortening(const ScalarField& w0, double s_target,
                                                      double mu0, const NewtonParams& params) {
    auto project = [&](ScalarField f) {
        if (params.symmetrize) f = symmetrize(f, SymmetryClass::even_xy);
        return project_zero_mean(f);
    };
    ScalarField w = project(w0);
    double mu = mu0;
    auto combined_residual = [&](const ScalarField& wc, double muc) {
        const ScalarField g = project(energy::gradient_l2(wc, muc, airy::phi_of(wc)));
        const double con = energy::shortening(wc) - s_target;
        return std::sqrt(inner_l2(g, g) + con * con);
    };
    for (int it = 0; it <= params.max_newton; ++it) {
        const ScalarField phi = airy::phi_of(w);
        ScalarField g = project(energy::gradient_l2(w, mu, phi));
        const double con = energy::shortening(w) - s_target;
        const double gn = std::sqrt(inner_l2(g, g) + con * con);
        if (params.log) *params.log << "refineS," << it << "," << gn << "," << mu << "\n";
        if (gn <= params.tol) return {std::move(w), mu};
        if (it == params.max_newton) break;

        const energy::Linearization lin(w, mu, phi);
        ScalarField g_mu = project(dxx(w));          // d g / d mu
        ScalarField ds = project(dxx(w));            // dS = <-dxx w, v>
        ds *= -1.0;
        auto op = [&](const AugVec& x) {
            ScalarField top = project(lin.apply(x.v));
            top.axpy(x.mu, g_mu);
            const double bottom = inner_l2(ds, x.v);
            return AugVec{std::move(top), bottom};
        };
        auto prec = [&](const AugVec& x) {
            return AugVec{linear_shift_preconditioner(x.v, mu), x.mu};
        };
        AugVec rhs{g, con};
        rhs.v *= -1.0;
        rhs.mu = -con;
        const double eta = std::min(params.krylov_rel_tol_cap,
                                    std::max(1e-13, 0.01 * gn / (1.0 + gn)));
        GmresStats stats;
        auto delta = gmres(op, prec, rhs, eta, params.max_krylov, &stats);
        if (!delta || stats.rel_residual > 10.0 * eta)
            throw LinearSolveStalled("bordered gmres stalled at relative residual " +
                                     std::to_string(stats.rel_residual));
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 10; ++ls) {
            ScalarField trial = w;
            trial.axpy(step, delta->v);
            trial = project(trial);
            const double mu_trial = mu + step * delta->mu;
            if (combined_residual(trial, mu_trial) < gn) {
                w = std::move(trial);
                mu = mu_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) throw Stagnation("bordered newton line search failed");
    }
    throw Diverged("bordered refine did not reach tolerance");
}

} // namespace detail

namespace detail {

// Plain (optionally Levenberg-shifted) Newton at fixed load; fast when the
// Hessian is well conditioned, bails out early when it creeps.
inline ScalarField refine_fixed_load(const ScalarField& w0, double lambda,
                                     const NewtonParams& params, NewtonInfo* info) {
    auto project = [&](ScalarField f) {
        if (params.symmetrize) f = symmetrize(f, SymmetryClass::even_xy);
        return project_zero_mean(f);
    };
    ScalarField w = project(w0);
    double rn_prev = std::numeric_limits<double>::infinity();
    int creep = 0;
    double sigma = 0.0; // Levenberg shift against the X-Gram metric
    for (int it = 0; it <= params.max_newton; ++it) {
        const ScalarField phi = airy::phi_of(w);
        ScalarField r = project(energy::gradient_l2(w, lambda, phi));
        const double rn = norm_l2(r);
        if (info) {
            info->iterations = it;
            info->residual = rn;
        }
        if (params.log) *params.log << "newton," << it << "," << rn << "," << sigma << "\n";
        if (rn <= params.tol) return w;
        if (it == params.max_newton) break;
        if (rn > 1e3 * rn_prev) throw Diverged("newton residual grew to " + std::to_string(rn));
        creep = (rn > 0.9 * rn_prev) ? creep + 1 : 0;
        if (creep >= 4)
            throw Stagnation("fixed-load newton creeping at residual " + std::to_string(rn));
        rn_prev = std::min(rn_prev, rn);

        const energy::Linearization lin(w, lambda, phi);
        bool stepped = false;
        for (int attempt = 0; attempt < 8 && !stepped; ++attempt) {
            auto op = [&](const AugVec& x) {
                ScalarField hx = project(lin.apply(x.v));
                if (sigma > 0.0) hx.axpy(sigma, spectral::gram_apply(x.v));
                return AugVec{std::move(hx), x.mu};
            };
            auto prec = [&](const AugVec& x) {
                return AugVec{detail::linear_shift_preconditioner(x.v, lambda), x.mu};
            };
            AugVec rhs{r, 0.0};
            rhs.v *= -1.0;
            const double eta = std::min(params.krylov_rel_tol_cap,
                                        std::max(1e-12, 0.1 * rn / (1.0 + rn)));
            detail::GmresStats stats;
            auto delta = detail::gmres(op, prec, rhs, eta, params.max_krylov, &stats);
            if (!delta || stats.rel_residual > 0.5) {
                if (sigma == 0.0) {
                    sigma = 1e-3;
                    continue;
                }
                throw LinearSolveStalled("gmres stalled at relative residual " +
                                         std::to_string(stats.rel_residual));
            }
            // backtracking on the residual norm; an ill-conditioned Hessian
            // (flat barrier direction) falls back to the shifted solve
            double step = 1.0;
            for (int ls = 0; ls < 6; ++ls) {
                ScalarField trial = w;
                trial.axpy(step, delta->v);
                trial = project(trial);
                const double tn =
                    norm_l2(project(energy::gradient_l2(trial, lambda, airy::phi_of(trial))));
                if (tn < rn || tn <= params.tol) {
                    w = std::move(trial);
                    sigma = (step == 1.0) ? sigma / 3.0 : sigma;
                    if (sigma < 1e-8) sigma = 0.0;
                    stepped = true;
                    break;
                }
                step *= 0.5;
            }
            if (!stepped) sigma = std::max(10.0 * sigma, 1e-3);
            if (sigma > 1e4)
                throw Diverged("regularized newton stalled at residual " + std::to_string(rn));
        }
        if (!stepped)
            throw Diverged("newton made no progress at residual " + std::to_string(rn));
    }
    throw Diverged("newton did not reach tolerance " + std::to_string(params.tol));
}

} // namespace detail

// Newton refinement of a near-critical point at fixed lambda. The Jacobian
// action is the exact second variation (matrix-free); linear solves use
// GMRES with the spectrally inverted lambda-shifted symbol. When the
// fixed-load iteration degenerates (flat barrier direction near the saddle),
// the refinement switches to the bordered fixed-shortening system and a
// secant in S that drives the multiplier to the requested load.
inline ScalarField newton_refine(const ScalarField& w0, double lambda,
                                 const NewtonParams& params = {},
                                 NewtonInfo* info = nullptr) {
    require_finite(w0, "newton_refine: w0");
    try {
        return detail::refine_fixed_load(w0, lambda, params, info);
    } catch (const NumericalError&) {
        // Near the saddle the Hessian carries a cluster of soft tail-
        // rearrangement modes, so the fixed-load basin is tiny. Polish on
        // the S-manifold first (the soft modes are convex there), then run
        // the bordered solve and steer the multiplier to lambda by secant.
    }
    auto polish = [&](const ScalarField& w, double s) {
        flows::ConstrainedParams cp;
        cp.tol = 1e-5;
        cp.max_steps = 50000;
        cp.symmetrize = params.symmetrize;
        return flows::constrained_descent(w, s, cp);
    };
    ScalarField dxw = project_zero_mean(dxx(w0));
    const double mu_tol = 0.5 * params.tol / std::max(norm_l2(dxw), 1.0);
    double s1 = energy::shortening(w0);
    auto r1 = detail::refine_fixed_shortening(polish(w0, s1), s1, lambda, params);
    if (std::abs(r1.mu - lambda) <= mu_tol) return std::move(r1.w);
    double s2 = s1 * (1.0 + 0.03 * (r1.mu > lambda ? 1.0 : -1.0));
    auto r2 = detail::refine_fixed_shortening(r1.w, s2, r1.mu, params);
    for (int it = 0; it < 40; ++it) {
        if (std::abs(r2.mu - lambda) <= mu_tol) {
            if (info)
                info->residual =
                    norm_l2(energy::gradient_l2(r2.w, lambda, airy::phi_of(r2.w)));
            return std::move(r2.w);
        }
        if (r2.mu == r1.mu) break;
        double s3 = s2 + (lambda - r2.mu) * (s2 - s1) / (r2.mu - r1.mu);
        if (!(s3 > 0.0)) s3 = 0.5 * s2;
        s1 = s2;
        r1 = r2;
        s2 = s3;
        r2 = detail::refine_fixed_shortening(r1.w, s2, r1.mu, params);
    }
    throw Diverged("secant on the multiplier failed to reach lambda = " +
                   std::to_string(lambda));
}

// ---------------------------------------------------------------------------
// Pseudo-arclength continuation of the critical-point branch in lambda.
// ---------------------------------------------------------------------------

struct BranchRecord {
    double lambda = 0.0;
    ScalarField w;
    double level = 0.0;
    double x_norm_sq = 0.0;
    bool fold_passed = false;
};

struct Branch {
    std::vector<BranchRecord> records;
    DomainSpec domain;
};

struct ContinuationParams {
    double ds0 = 0.4;
    double ds_min = 1e-4;
    double ds_max = 1.5;
    int max_records = 200;
    int post_fold_records = 8;
    int max_corrector = 10;
    NewtonParams newton{};
    std::ostream* log = nullptr;
};

namespace detail {

struct Tangent {
    ScalarField dw;
    double dlambda = 0.0;
};

inline double tangent_norm(const Tangent& t) {
    return std::sqrt(inner_l2(spectral::gram_apply(t.dw), t.dw) + t.dlambda * t.dlambda);
}

inline BranchRecord make_record(ScalarField w, double lambda, bool fold) {
    BranchRecord rec;
    rec.lambda = lambda;
    rec.level = energy::f_lambda(w, lambda);
    rec.x_norm_sq = energy::x_norm_sq(w);
    rec.fold_passed = fold;
    rec.w = std::move(w);
    return rec;
}

// One corrector solve of the bordered system
//   g(w, lambda) = 0,
//   <t_w, w - w_pred>_X + t_l (lambda - lambda_pred) = 0
// for the Newton update (dw, dlambda).
inline bool arclength_corrector(ScalarField& w, double& lambda, const Tangent& tangent,
                                const ScalarField& w_pred, double lambda_pred,
                                const ContinuationParams& params) {
    auto project = [&](ScalarField f) {
        if (params.newton.symmetrize) f = symmetrize(f, SymmetryClass::even_xy);
        return project_zero_mean(f);
    };
    const ScalarField gram_tw = spectral::gram_apply(tangent.dw);
    for (int it = 0; it < params.max_corrector; ++it) {
        const ScalarField phi = airy::phi_of(w);
        ScalarField g = project(energy::gradient_l2(w, lambda, phi));
        const double gn = norm_l2(g);
        ScalarField diff = w;
        diff -= w_pred;
        const double ncon = inner_l2(gram_tw, diff) + tangent.dlambda * (lambda - lambda_pred);
        if (params.log)
            *params.log << "corrector," << it << "," << gn << "," << ncon << "\n";
        if (gn <= params.newton.tol && std::abs(ncon) <= 1e-10 * (1.0 + std::abs(lambda)))
            return true;
        if (it == params.max_corrector - 1) break;

        const energy::Linearization lin(w, lambda, phi);
        ScalarField g_lambda = project(dxx(w));
        auto op = [&](const AugVec& x) {
            ScalarField top = project(lin.apply(x.v));
            top.axpy(x.mu, g_lambda);
            const double bottom = inner_l2(gram_tw, x.v) + tangent.dlambda * x.mu;
            return AugVec{std::move(top), bottom};
        };
        auto prec = [&](const AugVec& x) {
            return AugVec{detail::linear_shift_preconditioner(x.v, lambda), x.mu};
        };
        AugVec rhs{g, ncon};
        rhs.v *= -1.0;
        rhs.mu = -ncon;
        const double eta = std::min(1e-3, std::max(1e-12, 0.1 * gn / (1.0 + gn)));
        GmresStats stats;
        auto delta = gmres(op, prec, rhs, eta, params.newton.max_krylov, &stats);
        if (!delta || stats.rel_residual > 0.5) return false;
        w.axpy(1.0, delta->v);
        w = project(w);
        lambda += delta->mu;
    }
    return false;
}

} // namespace detail

// Continue the refined seed toward lambda_to. Fold passage flips the
// recorded tangent sign; a few post-fold records capture the dashed-branch
// behaviour (lambda reverses while ||w||^2 keeps growing).
inline Branch continue_branch(const ScalarField& seed, double seed_lambda, double lambda_to,
                              const ContinuationParams& params = {}) {
    Branch branch;
    branch.domain = seed.spec();
    ScalarField w = newton_refine(seed, seed_lambda, params.newton);
    double lambda = seed_lambda;
    branch.records.push_back(detail::make_record(w, lambda, false));

    const double direction = lambda_to >= seed_lambda ? 1.0 : -1.0;

    // first tangent from a short parametric refine
    const double dl0 = 0.02 * direction;
    ScalarField w1 = newton_refine(w, lambda + dl0, params.newton);
    detail::Tangent tangent{w1, dl0};
    tangent.dw -= w;
    {
        const double tn = detail::tangent_norm(tangent);
        tangent.dw *= 1.0 / tn;
        tangent.dlambda /= tn;
    }
    w = std::move(w1);
    lambda += dl0;
    branch.records.push_back(detail::make_record(w, lambda, false));

    double ds = params.ds0;
    bool fold_passed = false;
    int post_fold = 0;
    while (int(branch.records.size()) < params.max_records) {
        ScalarField w_pred = w;
        w_pred.axpy(ds, tangent.dw);
        double lambda_pred = lambda + ds * tangent.dlambda;
        ScalarField w_new = w_pred;
        double lambda_new = lambda_pred;
        if (!detail::arclength_corrector(w_new, lambda_new, tangent, w_pred, lambda_pred,
                                         params)) {
            ds *= 0.5;
            if (ds < params.ds_min)
                throw StepFailure("arclength step fell below the floor at lambda = " +
                                  std::to_string(lambda));
            continue;
        }
        detail::Tangent fresh{w_new, lambda_new - lambda};
        fresh.dw -= w;
        const double tn = detail::tangent_norm(fresh);
        fresh.dw *= 1.0 / tn;
        fresh.dlambda /= tn;
        if (!fold_passed && fresh.dlambda * tangent.dlambda < 0.0) fold_passed = true;
        tangent = std::move(fresh);
        w = std::move(w_new);
        lambda = lambda_new;
        branch.records.push_back(detail::make_record(w, lambda, fold_passed));
        if (params.log)
            *params.log << "record," << lambda << "," << branch.records.back().level << ","
                        << branch.records.back().x_norm_sq << "," << fold_passed << "\n";
        ds = std::min(ds * 1.4, params.ds_max);
        if (fold_passed && ++post_fold >= params.post_fold_records) break;
        if (!fold_passed && direction > 0 && lambda >= lambda_to) break;
        if (!fold_passed && direction < 0 && lambda <= lambda_to) break;
    }
    return branch;
}

// ---------------------------------------------------------------------------
// Domain-influence study (Fig. Vlambda-style table).
// ---------------------------------------------------------------------------

struct DomainStudyRow {
    double lambda = 0.0;
    DomainSpec spec;
    double level = 0.0;
    double x_norm_sq = 0.0;
    ScalarField w;
};

struct DerivativeComparison {
    double lambda = 0.0;
    DomainSpec spec_a, spec_b;
    double max_diff = 0.0; // over the centered window
    double sup_norm = 0.0; // of w_xx on the window
};

namespace detail {

inline double bilinear_at(const ScalarField& f, double x, double y) {
    const auto& s = f.spec();
    const double fx = (x + s.a) / s.hx();
    const double fy = (y + s.b) / s.hy();
    int i = int(std::floor(fx)), j = int(std::floor(fy));
    i = std::max(0, std::min(i, s.nx - 1));
    const double tx = fx - i, ty = fy - j;
    const int j0 = ((j % s.ny) + s.ny) % s.ny;
    const int j1 = (j0 + 1) % s.ny;
    return (1 - tx) * (1 - ty) * f(i, j0) + tx * (1 - ty) * f(i + 1, j0) +
           (1 - tx) * ty * f(i, j1) + tx * ty * f(i + 1, j1);
}

} // namespace detail

inline DerivativeComparison compare_second_derivatives(const DomainStudyRow& a,
                                                       const DomainStudyRow& b) {
    DerivativeComparison cmp;
    cmp.lambda = a.lambda;
    cmp.spec_a = a.spec;
    cmp.spec_b = b.spec;
    const ScalarField wxx_a = dxx(a.w);
    const ScalarField wxx_b = dxx(b.w);
    const double wa = 0.5 * std::min(a.spec.a, b.spec.a);
    const double wb = 0.5 * std::min(a.spec.b, b.spec.b);
    const auto& sa = a.spec;
    for (int i = 0; i <= sa.nx; ++i) {
        const double x = sa.x(i);
        if (std::abs(x) > wa) continue;
        for (int j = 0; j < sa.ny; ++j) {
            const double y = sa.y(j);
            if (std::abs(y) > wb) continue;
            const double va = wxx_a(i, j);
            const double vb = detail::bilinear_at(wxx_b, x, y);
            cmp.max_diff = std::max(cmp.max_diff, std::abs(va - vb));
            cmp.sup_norm = std::max(cmp.sup_norm, std::abs(va));
        }
    }
    return cmp;
}

struct DomainStudyParams {
    mp::MpParams mp{};
    flows::FlowParams flow{};
    NewtonParams newton{};
    double refine_tol = 1e-8;
};

// Full pipeline (seed -> find_w2 -> mountain pass -> Newton) per (lambda,
// domain).
inline DomainStudyRow run_domain_case(double lambda, const DomainSpec& spec,
                                      DomainStudyParams params = {}) {
    const ScalarField w0 = flows::seed_field(spec, flows::SeedShape::one_peak);
    const ScalarField w2 = flows::find_w2(lambda, w0, params.flow);
    mp::MpParams mpp = params.mp;
    auto result = mp::run_mountain_pass(lambda, w2, mpp);
    NewtonParams np = params.newton;
    np.tol = params.refine_tol;
    DomainStudyRow row;
    row.lambda = lambda;
    row.spec = spec;
    row.w = newton_refine(result.w_mp, lambda, np);
    row.level = energy::f_lambda(row.w, lambda);
    row.x_norm_sq = energy::x_norm_sq(row.w);
    return row;
}

inline std::vector<DomainStudyRow> domain_study(const std::vector<double>& lambdas,
                                                const std::vector<DomainSpec>& domains,
                                                const DomainStudyParams& params = {}) {
    std::vector<DomainStudyRow> rows;
    for (const auto& spec : domains)
        for (double lam : lambdas) rows.push_back(run_domain_case(lam, spec, params));
    return rows;
}

} // namespace continuation
} // namespace vkd
