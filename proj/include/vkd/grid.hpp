#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "vkd/errors.hpp"

namespace vkd {

// Closure of the x-direction stencils. `reflect` is the Neumann pair
// (f_x = 0 at x = +-a, via even ghost reflection); `periodic` identifies
// x = -a with x = +a and is used for unit-cell computations only.
enum class XClosure { reflect, periodic };

enum class SymmetryClass { none, even_xy };

// Rectangle Omega = (-a,a) x (-b,b). Nodes sit at x_i = -a + i*hx
// (i = 0..nx, both end columns stored) and y_j = -b + j*hy (j = 0..ny-1,
// the row j = ny is identified with j = 0).
struct DomainSpec {
    double a = 0.0;
    double b = 0.0;
    int nx = 0;
    int ny = 0;
    XClosure closure = XClosure::reflect;

    DomainSpec() = default;
    DomainSpec(double a_, double b_, int nx_, int ny_, XClosure c = XClosure::reflect)
        : a(a_), b(b_), nx(nx_), ny(ny_), closure(c) {
        if (!(a > 0.0) || !(b > 0.0))
            throw SpecMismatch("domain half-widths must be positive");
        if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
            throw SpecMismatch("node counts must be even and >= 8");
    }

    double hx() const { return 2.0 * a / nx; }
    double hy() const { return 2.0 * b / ny; }
    double area() const { return 4.0 * a * b; }
    double x(int i) const { return -a + i * hx(); }
    double y(int j) const { return -b + j * hy(); }
    std::size_t num_nodes() const { return std::size_t(nx + 1) * std::size_t(ny); }

    bool operator==(const DomainSpec& o) const {
        return a == o.a && b == o.b && nx == o.nx && ny == o.ny && closure == o.closure;
    }
    bool operator!=(const DomainSpec& o) const { return !(*this == o); }
};

// One real value per node, stored x-major: value(i,j) = data[i*ny + j].
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const DomainSpec& spec)
        : spec_(spec), v_(spec.num_nodes(), 0.0) {}
    ScalarField(const DomainSpec& spec, std::vector<double> values)
        : spec_(spec), v_(std::move(values)) {
        if (v_.size() != spec.num_nodes())
            throw SpecMismatch("value array does not match grid size");
    }

    const DomainSpec& spec() const { return spec_; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double& operator()(int i, int j) { return v_[std::size_t(i) * spec_.ny + j]; }
    double operator()(int i, int j) const { return v_[std::size_t(i) * spec_.ny + j]; }

    ScalarField& operator+=(const ScalarField& o) {
        check_same_spec(o);
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
        return *this;
    }
    ScalarField& operator-=(const ScalarField& o) {
        check_same_spec(o);
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
        return *this;
    }
    ScalarField& operator*=(double c) {
        for (double& x : v_) x *= c;
        return *this;
    }
    // this += c * o
    ScalarField& axpy(double c, const ScalarField& o) {
        check_same_spec(o);
        for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += c * o.v_[k];
        return *this;
    }

    friend ScalarField operator+(ScalarField f, const ScalarField& g) { return f += g; }
    friend ScalarField operator-(ScalarField f, const ScalarField& g) { return f -= g; }
    friend ScalarField operator*(double c, ScalarField f) { return f *= c; }
    friend ScalarField operator*(ScalarField f, double c) { return f *= c; }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void check_same_spec(const ScalarField& o) const {
        if (spec_ != o.spec_) throw SpecMismatch("fields live on different grids");
    }

  private:
    DomainSpec spec_;
    std::vector<double> v_;
};

// Fill from a callable f(x, y).
template <class F>
ScalarField sample(const DomainSpec& spec, F&& f) {
    ScalarField out(spec);
    for (int i = 0; i <= spec.nx; ++i)
        for (int j = 0; j < spec.ny; ++j)
            out(i, j) = f(spec.x(i), spec.y(j));
    return out;
}

} // namespace vkd
