#pragma once

#include <cmath>
#include <random>

#include "vkd/spectral.hpp"
#include "vkd/vkd.hpp"

namespace vkd::test {

inline ScalarField random_field(const DomainSpec& spec, unsigned seed, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, amplitude);
    ScalarField f(spec);
    for (double& v : f.values()) v = dist(rng);
    return f;
}

// Band-limited random field: white noise pushed through a spectral low-pass,
// normalized to the requested X-norm.
inline ScalarField smooth_field(const DomainSpec& spec, unsigned seed, double x_norm = 1.0) {
    ScalarField f = random_field(spec, seed);
    f = spectral::apply_symbol(f, [](double kx, double ky) {
        return std::exp(-2.0 * (kx + ky));
    });
    f = project_zero_mean(f);
    const double n = energy::x_norm(f);
    f *= x_norm / n;
    return f;
}

// Discrete symbols of -dxx and Delta^2 for the mode cos(k pi x / a) cos(2 l
// pi y / b); the independent oracle used against the solver and energy paths.
inline double kd2(const DomainSpec& spec, int k) {
    const double hx = spec.hx();
    return 2.0 / (hx * hx) * (1.0 - std::cos(k * M_PI * hx / spec.a));
}

inline double ld2(const DomainSpec& spec, int l) {
    const double hy = spec.hy();
    return 2.0 / (hy * hy) * (1.0 - std::cos(2.0 * l * M_PI * hy / spec.b));
}

inline double mud4(const DomainSpec& spec, int k, int l) {
    const double s = kd2(spec, k) + ld2(spec, l);
    return s * s;
}

inline ScalarField mode_field(const DomainSpec& spec, int k, int l, double amplitude = 1.0) {
    return sample(spec, [&](double x, double y) {
        return amplitude * std::cos(k * M_PI * x / spec.a) * std::cos(2.0 * l * M_PI * y / spec.b);
    });
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

inline double max_abs(const ScalarField& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

} // namespace vkd::test
