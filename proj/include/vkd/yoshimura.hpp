#pragma once

#include <cmath>
#include <vector>

#include "vkd/airy.hpp"
#include "vkd/grid.hpp"
#include "vkd/operators.hpp"

namespace vkd {
namespace yoshimura {

struct YoshimuraParams {
    double delta = 0.125;
    int periods_x = 1;
    int periods_y = 1;
};

struct FProfile {
    double f = 0.0;
    double fp = 0.0;
    double fpp = 0.0;
};

// Piecewise-quadratic fold profile: f'' = 1/(4 delta) within distance delta
// of the integers, else 0, with f(0) = f'(0) = 0. Closed form via the
// per-period decomposition f(n + r) = g(|r|) + n^2/4 + n r / 2.
inline FProfile f_profile(double delta, double s) {
    if (!(delta > 0.0 && delta < 0.25))
        throw SpecMismatch("f_profile requires delta in (0, 1/4)");
    const double n = std::nearbyint(s);
    const double r = s - n;
    const double ar = std::abs(r);
    FProfile out;
    if (ar <= delta) {
        out.f = ar * ar / (8.0 * delta);
        out.fp = ar / (4.0 * delta);
    } else {
        out.f = delta / 8.0 + (ar - delta) / 4.0;
        out.fp = 0.25;
    }
    if (r < 0.0) out.fp = -out.fp;
    out.f += 0.25 * n * n + 0.5 * n * r;
    out.fp += 0.5 * n;
    out.fpp = (ar < delta) ? 1.0 / (4.0 * delta) : 0.0;
    return out;
}

// Average of f'' over [s - eta/2, s + eta/2]; exact via f' differences.
// Pointwise sampling of the bands would bias the support products by O(h),
// which buries the delta^2 decay of the Airy term.
inline double f_second_avg(double delta, double s, double eta) {
    return (f_profile(delta, s + 0.5 * eta).fp - f_profile(delta, s - 0.5 * eta).fp) / eta;
}

// w_delta(x,y) = f(y+x) + f(y-x) - f(2x)/2 - y^2/2, sampled on the grid and
// zero-mean projected. 1-periodic in both directions; the grid must tile an
// integer number of unit cells.
inline ScalarField build_w_delta(const YoshimuraParams& params, const DomainSpec& spec) {
    if (spec.closure != XClosure::periodic)
        throw IncompatibleTiling("w_delta lives on fully periodic grids");
    if (std::abs(2.0 * spec.a - params.periods_x) > 1e-12 ||
        std::abs(2.0 * spec.b - params.periods_y) > 1e-12)
        throw IncompatibleTiling("domain must span an integer number of unit cells");
    ScalarField w = sample(spec, [&](double x, double y) {
        return f_profile(params.delta, y + x).f + f_profile(params.delta, y - x).f -
               0.5 * f_profile(params.delta, 2.0 * x).f - 0.5 * y * y;
    });
    return project_zero_mean(w);
}

// -([w,w] + w_xx) for w = w_delta reduces to products of the band profile:
// -(4 f''(y+x) f''(y-x) - 2 f''(2x) (f''(y+x) + f''(y-x))). Each factor is
// evaluated as a cell average along its own argument.
inline ScalarField airy_rhs_closed_form(const YoshimuraParams& params, const DomainSpec& spec) {
    const double hx = spec.hx();
    return sample(spec, [&](double x, double y) {
        const double fp1 = f_second_avg(params.delta, y + x, hx);
        const double fp2 = f_second_avg(params.delta, y - x, hx);
        const double fp3 = f_second_avg(params.delta, 2.0 * x, 2.0 * hx);
        return -(4.0 * fp1 * fp2 - 2.0 * fp3 * (fp1 + fp2));
    });
}

inline int required_nodes(double delta, int periods, int nodes_per_delta = 16) {
    // bands of width 2 delta need >= nodes_per_delta nodes across delta
    const double per_cell = nodes_per_delta / delta;
    int n = int(std::ceil(per_cell)) * periods;
    if (n % 2 != 0) ++n;
    return n;
}

struct ScalingRow {
    double delta = 0.0;
    int n = 0;
    double int_wx2 = 0.0;
    double int_dw2 = 0.0;
    double int_dphi2 = 0.0;
    double stencil_rhs_mean = 0.0; // diagnostic: mean of -[w,w]-w_xx by stencils
    double slope_dw2 = 0.0;        // log2 slope vs previous row
    double slope_dphi2 = 0.0;
};

// Unit-cell integrals for a list of decreasing deltas, with empirical
// log-slopes between consecutive rows.
inline std::vector<ScalingRow> scaling_report(const std::vector<double>& deltas,
                                              int min_nodes_per_delta = 16) {
    std::vector<ScalingRow> rows;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw SpecMismatch("deltas must be strictly decreasing");
        const double delta = deltas[i];
        YoshimuraParams params{delta, 1, 1};
        const int n = required_nodes(delta, 1, min_nodes_per_delta);
        const DomainSpec spec(0.5, 0.5, n, n, XClosure::periodic);
        if (delta * n < 16.0 * (1.0 - 1e-12))
            throw UnderResolved("delta band resolved by fewer than 16 nodes");

        const ScalarField w = build_w_delta(params, spec);
        const ScalarField wx = dx(w);
        const ScalarField lw = laplacian(w);
        ScalarField rhs_stencil = bracket(w, w);
        rhs_stencil += dxx(w);
        rhs_stencil *= -1.0;

        const ScalarField rhs = airy_rhs_closed_form(params, spec);
        const ScalarField phi = airy::solve_biharmonic(project_zero_mean(rhs));
        const ScalarField lphi = laplacian(phi);

        ScalingRow row;
        row.delta = delta;
        row.n = n;
        row.int_wx2 = inner_l2(wx, wx);
        row.int_dw2 = inner_l2(lw, lw);
        row.int_dphi2 = inner_l2(lphi, lphi);
        row.stencil_rhs_mean = mean(rhs_stencil);
        if (!rows.empty()) {
            const auto& prev = rows.back();
            const double lr = std::log(prev.delta / delta);
            row.slope_dw2 = std::log(row.int_dw2 / prev.int_dw2) / lr;
            row.slope_dphi2 = std::log(prev.int_dphi2 / row.int_dphi2) / lr;
        }
        rows.push_back(row);
    }
    return rows;
}

struct QRow {
    double eps = 0.0;
    double delta = 0.0;
    int n = 0;
    double q = 0.0;
};

// Q_eps = int[Delta w~^2 + Delta phi~^2] / int w~_x^2 for the rescaled
// fields w~(x,y) = eps^{-1} w_delta(x eps^{1/2}, y eps^{1/2}), delta =
// eps^{2/3}. The substitution maps the quotient onto the unit-cell
// integrals: Q = (eps I_dw + I_dphi / eps) / I_wx.
inline std::vector<QRow> q_epsilon(const std::vector<double>& eps_list,
                                   int min_nodes_per_delta = 16) {
    std::vector<QRow> rows;
    for (double eps : eps_list) {
        if (!(eps > 0.0 && eps < 1.0)) throw SpecMismatch("eps must lie in (0,1)");
        const double delta = std::pow(eps, 2.0 / 3.0);
        if (!(delta < 0.25))
            throw UnderResolved("eps too large: delta = eps^(2/3) must stay below 1/4");
        const auto cell = scaling_report({delta}, min_nodes_per_delta).front();
        QRow row;
        row.eps = eps;
        row.delta = delta;
        row.n = cell.n;
        row.q = (eps * cell.int_dw2 + cell.int_dphi2 / eps) / cell.int_wx2;
        rows.push_back(row);
    }
    return rows;
}

} // namespace yoshimura
} // namespace vkd
