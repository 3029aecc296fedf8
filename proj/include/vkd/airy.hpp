#pragma once

#include <cmath>

#include "vkd/grid.hpp"
#include "vkd/operators.hpp"
#include "vkd/spectral.hpp"

namespace vkd {
namespace airy {

struct SolveInfo {
    double rhs_mean_pre = 0.0; // pre-projection mean, diagnostic
    double rhs_norm = 0.0;
};

constexpr double kMeanTolerance = 1e-6;

// Solve Delta^2 phi = rhs with periodic y, Neumann-pair x (or fully periodic
// on unit-cell grids) and zero mean. The operator is diagonal in the
// cosine x Fourier basis, so the residual is roundoff-level.
inline ScalarField solve_biharmonic(const ScalarField& rhs, SolveInfo* info = nullptr) {
    require_finite(rhs, "solve_biharmonic: rhs");
    const double m = mean(rhs);
    const double nrm = norm_l2(rhs);
    if (info) {
        info->rhs_mean_pre = m;
        info->rhs_norm = nrm;
    }
    if (std::abs(m) * std::sqrt(rhs.spec().area()) > kMeanTolerance * nrm && nrm > 0.0)
        throw NonZeroMeanRhs("rhs mean " + std::to_string(m) +
                             " exceeds tolerance; upstream operator inconsistency");
    ScalarField phi = spectral::bilaplacian_inverse(rhs);
    return project_zero_mean(phi);
}

// phi_1: the linear part, Delta^2 phi_1 = -w_xx.
inline ScalarField phi1_of(const ScalarField& w) {
    ScalarField rhs = dxx(w);
    rhs *= -1.0;
    return solve_biharmonic(rhs);
}

// phi_2: the quadratic part, Delta^2 phi_2 = -[w,w].
inline ScalarField phi2_of(const ScalarField& w) {
    ScalarField rhs = bracket(w, w);
    rhs *= -1.0;
    return solve_biharmonic(project_zero_mean(rhs));
}

// Full Airy stress function, Delta^2 phi + [w,w] + w_xx = 0.
inline ScalarField phi_of(const ScalarField& w) {
    ScalarField rhs = bracket(w, w);
    rhs += dxx(w);
    rhs *= -1.0;
    return solve_biharmonic(project_zero_mean(rhs));
}

} // namespace airy
} // namespace vkd
