#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "vkd/airy.hpp"
#include "vkd/grid.hpp"
#include "vkd/operators.hpp"
#include "vkd/spectral.hpp"

namespace vkd {
namespace energy {

// The paper leaves the flow metric open; both are provided. The zero sets
// coincide: g_X = G^{-1} g_L2 with G symmetric positive definite on the
// zero-mean subspace.
enum class GradientMetric { l2, x_preconditioned };

struct EnergyBreakdown {
    double e2 = 0.0;
    double e3 = 0.0;
    double e4 = 0.0;
    double e_total = 0.0;
    double shortening_s = 0.0;
    double f_lambda = 0.0;
    double x_norm_sq = 0.0;
    double lambda = 0.0;
};

// S(w) = 1/2 int w_x^2, evaluated as -1/2 <w, dxx w> so that the chain
// 2S = <Delta w, Delta phi_1> holds to roundoff under the discrete adjoints.
inline double shortening(const ScalarField& w) {
    return -0.5 * inner_l2(w, dxx(w));
}

inline double x_norm_sq(const ScalarField& w) {
    const ScalarField lw = laplacian(w);
    const ScalarField lp1 = laplacian(airy::phi1_of(w));
    return inner_l2(lw, lw) + inner_l2(lp1, lp1);
}

inline double x_norm(const ScalarField& w) { return std::sqrt(x_norm_sq(w)); }

// Gap in the sharp estimate 2S(w) <= 1/2 ||w||_X^2.
inline double sharp_inequality_gap(const ScalarField& w) {
    return 0.5 * x_norm_sq(w) - 2.0 * shortening(w);
}

inline EnergyBreakdown breakdown(const ScalarField& w, double lambda) {
    require_finite(w, "breakdown: w");
    EnergyBreakdown out;
    out.lambda = lambda;
    const ScalarField lw = laplacian(w);
    const ScalarField lp1 = laplacian(airy::phi1_of(w));
    const ScalarField lp2 = laplacian(airy::phi2_of(w));
    out.e2 = 0.5 * (inner_l2(lw, lw) + inner_l2(lp1, lp1));
    out.e3 = inner_l2(lp1, lp2);
    out.e4 = 0.5 * inner_l2(lp2, lp2);
    out.e_total = out.e2 + out.e3 + out.e4;
    out.shortening_s = shortening(w);
    out.f_lambda = out.e_total - lambda * out.shortening_s;
    out.x_norm_sq = 2.0 * out.e2;
    return out;
}

// E(w) = 1/2 int (Delta w^2 + Delta phi^2) with the full Airy phi.
inline double total_energy(const ScalarField& w, const ScalarField& phi) {
    const ScalarField lw = laplacian(w);
    const ScalarField lp = laplacian(phi);
    return 0.5 * (inner_l2(lw, lw) + inner_l2(lp, lp));
}

inline double f_lambda(const ScalarField& w, double lambda, const ScalarField& phi) {
    return total_energy(w, phi) - lambda * shortening(w);
}

inline double f_lambda(const ScalarField& w, double lambda) {
    return f_lambda(w, lambda, airy::phi_of(w));
}

// First variation of F_lambda against the L2 pairing. The cubic/quartic
// coupling enters through the exact adjoint of v -> [w, v], so central
// differences of F reproduce <g, v> to roundoff-limited accuracy.
inline ScalarField gradient_l2(const ScalarField& w, double lambda,
                               const ScalarField& phi) {
    ScalarField r = bilaplacian(w);
    r.axpy(lambda, dxx(w));
    r -= dxx(phi);
    r.axpy(-2.0, bracket_adjoint(w, phi));
    return project_zero_mean(r);
}

struct GradientEval {
    ScalarField r;   // L2 representation
    ScalarField g;   // representation in the requested metric
    double norm = 0.0;
};

inline GradientEval gradient_eval(const ScalarField& w, double lambda,
                                  GradientMetric metric, const ScalarField& phi) {
    GradientEval out;
    out.r = gradient_l2(w, lambda, phi);
    if (metric == GradientMetric::l2) {
        out.g = out.r;
        out.norm = norm_l2(out.r);
    } else {
        out.g = spectral::gram_solve(out.r);
        out.norm = std::sqrt(std::max(0.0, inner_l2(out.r, out.g)));
    }
    return out;
}

inline GradientEval gradient_eval(const ScalarField& w, double lambda,
                                  GradientMetric metric) {
    return gradient_eval(w, lambda, metric, airy::phi_of(w));
}

inline ScalarField gradient(const ScalarField& w, double lambda, GradientMetric metric) {
    return gradient_eval(w, lambda, metric).g;
}

// Second variation of F_lambda at w, applied matrix-free. The Airy coupling
// makes the assembled operator dense, so it is never formed.
class Linearization {
  public:
    Linearization(const ScalarField& w, double lambda)
        : lambda_(lambda), w_derivs_(second_derivs(w)), phi_(airy::phi_of(w)) {}

    Linearization(const ScalarField& w, double lambda, ScalarField phi)
        : lambda_(lambda), w_derivs_(second_derivs(w)), phi_(std::move(phi)) {}

    const ScalarField& phi() const { return phi_; }
    double lambda() const { return lambda_; }

    ScalarField apply(const ScalarField& v) const {
        const SecondDerivs v_derivs = second_derivs(v);
        ScalarField rhs = bracket(w_derivs_, v_derivs);
        rhs *= -2.0;
        rhs -= v_derivs.xx;
        const ScalarField psi = airy::solve_biharmonic(project_zero_mean(rhs));
        ScalarField out = bilaplacian(v);
        out.axpy(lambda_, v_derivs.xx);
        out -= dxx(psi);
        out.axpy(-2.0, bracket_adjoint(v_derivs, phi_));
        out.axpy(-2.0, bracket_adjoint(w_derivs_, psi));
        return project_zero_mean(out);
    }

  private:
    double lambda_;
    SecondDerivs w_derivs_;
    ScalarField phi_;
};

struct CriticalMode {
    double lambda_cr = 0.0;
    int k = 0; // x half-waves: cos(k pi x / a)
    int l = 0; // y full waves: cos(2 l pi y / b)
};

// Smallest lambda at which some single Fourier mode has non-positive
// quadratic energy E2 - lambda S; each mode is evaluated through the full
// discrete pipeline (field, phi_1 solve, quadrature).
inline CriticalMode critical_load_scan(const DomainSpec& spec) {
    CriticalMode best;
    best.lambda_cr = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= spec.nx / 2; ++k) {
        for (int l = 0; l <= spec.ny / 4; ++l) {
            const double kk = k * M_PI / spec.a;
            const double ll = 2.0 * l * M_PI / spec.b;
            ScalarField mode = sample(spec, [&](double x, double y) {
                return std::cos(kk * x) * std::cos(ll * y);
            });
            const double e2 = 0.5 * x_norm_sq(mode);
            const double s = shortening(mode);
            if (s <= 0.0) continue;
            const double lam = e2 / s;
            if (lam < best.lambda_cr) best = {lam, k, l};
        }
    }
    return best;
}

} // namespace energy
} // namespace vkd
