#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "vkd/grid.hpp"
#include "vkd/operators.hpp"

namespace vkd {
namespace spectral {

// Real 2D transform that diagonalizes the stencil Laplacian under the grid
// closure: DCT-I along x for the reflect closure (cosine modes are exact
// eigenvectors of the ghost-reflected dxx), DFT (halfcomplex) along x for
// the periodic closure, halfcomplex DFT along y always.
//
// Plans are cached per (nx, ny, closure) and executed through the new-array
// interface, so one cached plan serves concurrent callers.
class Plan {
  public:
    Plan(const DomainSpec& spec) {
        periodic_x_ = spec.closure == XClosure::periodic;
        n0_ = periodic_x_ ? spec.nx : spec.nx + 1;
        ny_ = spec.ny;
        scale_ = periodic_x_ ? double(spec.nx) * ny_ : 2.0 * double(spec.nx) * ny_;

        kx_.resize(n0_);
        const double cx = 2.0 / (spec.hx() * spec.hx());
        for (int i = 0; i < n0_; ++i) {
            const double phase = periodic_x_ ? 2.0 * M_PI * hc_mode(i, spec.nx) / spec.nx
                                             : M_PI * double(i) / spec.nx;
            kx_[i] = cx * (1.0 - std::cos(phase));
        }
        ky_.resize(ny_);
        const double cy = 2.0 / (spec.hy() * spec.hy());
        for (int j = 0; j < ny_; ++j)
            ky_[j] = cy * (1.0 - std::cos(2.0 * M_PI * hc_mode(j, ny_) / ny_));

        std::vector<double> scratch_in(std::size_t(n0_) * ny_);
        std::vector<double> scratch_out(std::size_t(n0_) * ny_);
        const fftw_r2r_kind kx_fwd = periodic_x_ ? FFTW_R2HC : FFTW_REDFT00;
        const fftw_r2r_kind kx_bwd = periodic_x_ ? FFTW_HC2R : FFTW_REDFT00;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_r2r_2d(n0_, ny_, scratch_in.data(), scratch_out.data(),
                                kx_fwd, FFTW_R2HC, flags);
        bwd_ = fftw_plan_r2r_2d(n0_, ny_, scratch_in.data(), scratch_out.data(),
                                kx_bwd, FFTW_HC2R, flags);
    }

    ~Plan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    // -dxx and -dyy eigenvalues (>= 0) for r2r index (i, j).
    double kx(int i) const { return kx_[i]; }
    double ky(int j) const { return ky_[j]; }
    int n0() const { return n0_; }
    int ny() const { return ny_; }

    std::vector<double> forward(const ScalarField& f) const {
        std::vector<double> in(std::size_t(n0_) * ny_);
        if (periodic_x_) {
            // drop the duplicated i = nx column
            for (int i = 0; i < n0_; ++i)
                for (int j = 0; j < ny_; ++j)
                    in[std::size_t(i) * ny_ + j] = f(i, j);
        } else {
            in.assign(f.data(), f.data() + in.size());
        }
        std::vector<double> out(in.size());
        fftw_execute_r2r(fwd_, in.data(), out.data());
        return out;
    }

    ScalarField backward(std::vector<double> coeffs, const DomainSpec& spec) const {
        std::vector<double> out(coeffs.size());
        fftw_execute_r2r(bwd_, coeffs.data(), out.data());
        ScalarField f(spec);
        const double inv = 1.0 / scale_;
        if (periodic_x_) {
            for (int i = 0; i < n0_; ++i)
                for (int j = 0; j < ny_; ++j)
                    f(i, j) = out[std::size_t(i) * ny_ + j] * inv;
            for (int j = 0; j < ny_; ++j) f(spec.nx, j) = f(0, j);
        } else {
            for (std::size_t k = 0; k < out.size(); ++k) f.data()[k] = out[k] * inv;
        }
        return f;
    }

    static const Plan& get(const DomainSpec& spec) {
        static std::mutex cache_mutex;
        static std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> cache;
        const auto key = std::make_tuple(spec.nx, spec.ny, int(spec.closure));
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, std::make_unique<Plan>(spec)).first;
        return *it->second;
    }

  private:
    static int hc_mode(int idx, int n) { return idx <= n / 2 ? idx : n - idx; }
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    bool periodic_x_ = false;
    int n0_ = 0, ny_ = 0;
    double scale_ = 1.0;
    std::vector<double> kx_, ky_;
    fftw_plan fwd_{}, bwd_{};
};

// Multiply in transform space by sym(Kx, Ky) where Kx, Ky are the -dxx/-dyy
// symbols; the (0,0) mode is always zeroed.
template <class Sym>
ScalarField apply_symbol(const ScalarField& f, Sym&& sym) {
    const Plan& p = Plan::get(f.spec());
    std::vector<double> c = p.forward(f);
    for (int i = 0; i < p.n0(); ++i)
        for (int j = 0; j < p.ny(); ++j) {
            auto& v = c[std::size_t(i) * p.ny() + j];
            v = (i == 0 && j == 0) ? 0.0 : v * sym(p.kx(i), p.ky(j));
        }
    return p.backward(std::move(c), f.spec());
}

// (Delta^2)^{-1} on the zero-mean subspace.
inline ScalarField bilaplacian_inverse(const ScalarField& rhs) {
    return apply_symbol(rhs, [](double kx, double ky) {
        const double l = kx + ky;
        return 1.0 / (l * l);
    });
}

// X-metric Gram operator G = Delta^2 + dxx Delta^{-2} dxx, diagonal with
// symbol L^2 + Kx^2 / L^2 (L = -(Kx+Ky)).
inline ScalarField gram_apply(const ScalarField& f) {
    return apply_symbol(f, [](double kx, double ky) {
        const double l2 = (kx + ky) * (kx + ky);
        return l2 + kx * kx / l2;
    });
}

inline ScalarField gram_solve(const ScalarField& rhs) {
    return apply_symbol(rhs, [](double kx, double ky) {
        const double l2 = (kx + ky) * (kx + ky);
        return 1.0 / (l2 + kx * kx / l2);
    });
}

} // namespace spectral
} // namespace vkd
