#pragma once

#include <cmath>

#include "vkd/grid.hpp"

namespace vkd {

// Second-order centered stencils. y wraps periodically; x uses either the
// even ghost reflection f(-1) = f(1), f(nx+1) = f(nx-1) (which enforces
// f_x = 0 at x = +-a and makes dxx exactly self-adjoint under the trapezoid
// weights) or the periodic wrap for unit-cell work.

inline ScalarField dxx(const ScalarField& f) {
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    const double ih2 = 1.0 / (s.hx() * s.hx());
    ScalarField out(s);
    for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out(i, j) = (f(i + 1, j) + f(i - 1, j) - 2.0 * f(i, j)) * ih2;
    if (s.closure == XClosure::reflect) {
        for (int j = 0; j < ny; ++j) {
            out(0, j) = 2.0 * (f(1, j) - f(0, j)) * ih2;
            out(nx, j) = 2.0 * (f(nx - 1, j) - f(nx, j)) * ih2;
        }
    } else {
        for (int j = 0; j < ny; ++j) {
            out(0, j) = (f(1, j) + f(nx - 1, j) - 2.0 * f(0, j)) * ih2;
            out(nx, j) = out(0, j);
        }
    }
    return out;
}

inline ScalarField dyy(const ScalarField& f) {
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    const double ih2 = 1.0 / (s.hy() * s.hy());
    ScalarField out(s);
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const int jm = (j == 0) ? ny - 1 : j - 1;
            const int jp = (j == ny - 1) ? 0 : j + 1;
            out(i, j) = (f(i, jp) + f(i, jm) - 2.0 * f(i, j)) * ih2;
        }
    return out;
}

inline ScalarField dx(const ScalarField& f) {
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    const double i2h = 1.0 / (2.0 * s.hx());
    ScalarField out(s);
    for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            out(i, j) = (f(i + 1, j) - f(i - 1, j)) * i2h;
    if (s.closure == XClosure::reflect) {
        // ghost reflection makes the centered difference vanish at the walls
        for (int j = 0; j < ny; ++j) {
            out(0, j) = 0.0;
            out(nx, j) = 0.0;
        }
    } else {
        for (int j = 0; j < ny; ++j) {
            out(0, j) = (f(1, j) - f(nx - 1, j)) * i2h;
            out(nx, j) = out(0, j);
        }
    }
    return out;
}

// Adjoint of dx under the trapezoid-weighted inner product. Equals -dx in
// the interior; the four rows nearest the walls pick up weight corrections.
inline ScalarField dx_adjoint(const ScalarField& f) {
    const auto& s = f.spec();
    if (s.closure == XClosure::periodic) {
        ScalarField out = dx(f);
        out *= -1.0;
        return out;
    }
    const int nx = s.nx, ny = s.ny;
    const double h = s.hx();
    ScalarField out(s);
    for (int i = 2; i <= nx - 2; ++i)
        for (int j = 0; j < ny; ++j)
            out(i, j) = (f(i - 1, j) - f(i + 1, j)) / (2.0 * h);
    for (int j = 0; j < ny; ++j) {
        out(0, j) = -f(1, j) / h;
        out(1, j) = -f(2, j) / (2.0 * h);
        out(nx - 1, j) = f(nx - 2, j) / (2.0 * h);
        out(nx, j) = f(nx - 1, j) / h;
    }
    return out;
}

inline ScalarField dy(const ScalarField& f) {
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    const double i2h = 1.0 / (2.0 * s.hy());
    ScalarField out(s);
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const int jm = (j == 0) ? ny - 1 : j - 1;
            const int jp = (j == ny - 1) ? 0 : j + 1;
            out(i, j) = (f(i, jp) - f(i, jm)) * i2h;
        }
    return out;
}

inline ScalarField dxy(const ScalarField& f) { return dx(dy(f)); }

inline ScalarField laplacian(const ScalarField& f) {
    ScalarField out = dxx(f);
    out += dyy(f);
    return out;
}

inline ScalarField bilaplacian(const ScalarField& f) { return laplacian(laplacian(f)); }

struct SecondDerivs {
    ScalarField xx, yy, xy;
};

inline SecondDerivs second_derivs(const ScalarField& f) {
    return {dxx(f), dyy(f), dxy(f)};
}

inline ScalarField bracket(const SecondDerivs& F, const SecondDerivs& G) {
    ScalarField out(F.xx.spec());
    for (std::size_t k = 0; k < out.size(); ++k)
        out.data()[k] = 0.5 * F.xx.data()[k] * G.yy.data()[k] +
                        0.5 * F.yy.data()[k] * G.xx.data()[k] -
                        F.xy.data()[k] * G.xy.data()[k];
    return out;
}

// [a,b] = 1/2 a_xx b_yy + 1/2 a_yy b_xx - a_xy b_xy, composed pointwise
// from the stencil derivatives. Symmetric in its arguments by construction.
inline ScalarField bracket(const ScalarField& f, const ScalarField& g) {
    f.check_same_spec(g);
    return bracket(second_derivs(f), second_derivs(g));
}

// Adjoint of v -> [w, v] against a multiplier field: <phi, [w,v]> =
// <bracket_adjoint(w, phi), v> exactly. This is what makes the discrete
// gradient of the quartic energy term consistent with the discrete energy
// to roundoff rather than to O(h^2).
inline ScalarField bracket_adjoint(const SecondDerivs& W, const ScalarField& phi) {
    ScalarField pxx(phi.spec()), pyy(phi.spec()), pxy(phi.spec());
    for (std::size_t k = 0; k < phi.size(); ++k) {
        pxx.data()[k] = phi.data()[k] * W.xx.data()[k];
        pyy.data()[k] = phi.data()[k] * W.yy.data()[k];
        pxy.data()[k] = phi.data()[k] * W.xy.data()[k];
    }
    ScalarField out = dyy(pxx);
    out *= 0.5;
    ScalarField t = dxx(pyy);
    out.axpy(0.5, t);
    out += dy(dx_adjoint(pxy));
    return out;
}

inline ScalarField bracket_adjoint(const ScalarField& w, const ScalarField& phi) {
    w.check_same_spec(phi);
    return bracket_adjoint(second_derivs(w), phi);
}

// Trapezoid in x (half weights at i = 0 and i = nx) times the periodic
// rectangle rule in y.
inline double integrate(const ScalarField& f) {
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    double total = 0.0;
    for (int j = 0; j < ny; ++j) total += 0.5 * (f(0, j) + f(nx, j));
    for (int i = 1; i < nx; ++i) {
        double row = 0.0;
        for (int j = 0; j < ny; ++j) row += f(i, j);
        total += row;
    }
    return total * s.hx() * s.hy();
}

inline double inner_l2(const ScalarField& f, const ScalarField& g) {
    f.check_same_spec(g);
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    double total = 0.0;
    for (int j = 0; j < ny; ++j)
        total += 0.5 * (f(0, j) * g(0, j) + f(nx, j) * g(nx, j));
    for (int i = 1; i < nx; ++i) {
        double row = 0.0;
        for (int j = 0; j < ny; ++j) row += f(i, j) * g(i, j);
        total += row;
    }
    return total * s.hx() * s.hy();
}

inline double norm_l2(const ScalarField& f) { return std::sqrt(inner_l2(f, f)); }

inline double mean(const ScalarField& f) { return integrate(f) / f.spec().area(); }

inline ScalarField project_zero_mean(const ScalarField& f) {
    const double m = mean(f);
    ScalarField out = f;
    for (double& x : out.values()) x -= m;
    return out;
}

// Average over the reflection group of the class; idempotent and
// integral-preserving.
inline ScalarField symmetrize(const ScalarField& f, SymmetryClass cls) {
    if (cls == SymmetryClass::none) return f;
    const auto& s = f.spec();
    const int nx = s.nx, ny = s.ny;
    ScalarField g(s);
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j < ny; ++j)
            g(i, j) = 0.5 * (f(i, j) + f(nx - i, j));
    ScalarField out(s);
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const int jr = (ny - j) % ny;
            out(i, j) = 0.5 * (g(i, j) + g(i, jr));
        }
    return out;
}

inline void require_finite(const ScalarField& f, const char* what) {
    if (!f.all_finite()) throw NotFinite(what);
}

} // namespace vkd
