#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace vkd;
using namespace vkd::test;
using energy::GradientMetric;

TEST_CASE("zero field has zero breakdown") {
    DomainSpec spec(50, 50, 32, 32);
    const auto bd = energy::breakdown(ScalarField(spec), 1.5);
    CHECK(bd.e2 == 0.0);
    CHECK(bd.e3 == 0.0);
    CHECK(bd.e4 == 0.0);
    CHECK(bd.shortening_s == 0.0);
    CHECK(bd.f_lambda == 0.0);
}

TEST_CASE("single-mode closed forms from the stencil symbols") {
    DomainSpec spec(50, 50, 64, 64);
    const int k = 3, l = 2;
    const double A = 0.8;
    ScalarField w = mode_field(spec, k, l, A);
    const auto bd = energy::breakdown(w, 1.5);
    const double quarter = A * A * spec.area() / 4.0;
    const double k2 = kd2(spec, k);
    const double mu4 = mud4(spec, k, l);
    const double e2_expected = 0.5 * (mu4 + k2 * k2 / mu4) * quarter;
    const double s_expected = 0.5 * k2 * quarter;
    CHECK(rel_diff(bd.e2, e2_expected) < 1e-10);
    CHECK(rel_diff(bd.shortening_s, s_expected) < 1e-10);
    CHECK(bd.x_norm_sq == Catch::Approx(2.0 * bd.e2).epsilon(1e-12));
}

TEST_CASE("E_n homogeneity over the required scale factors") {
    DomainSpec spec(50, 50, 48, 48);
    ScalarField w = smooth_field(spec, 71, 2.0);
    const auto base = energy::breakdown(w, 1.0);
    for (double mu : {-1.0, 0.5, 2.0, 10.0}) {
        const auto scaled = energy::breakdown(mu * w, 1.0);
        CHECK(rel_diff(scaled.e2, mu * mu * base.e2) < 1e-10);
        CHECK(rel_diff(scaled.e3, mu * mu * mu * base.e3) < 1e-10);
        CHECK(rel_diff(scaled.e4, mu * mu * mu * mu * base.e4) < 1e-10);
    }
}

TEST_CASE("breakdown sum equals the full-phi energy") {
    DomainSpec spec(50, 50, 48, 48);
    ScalarField w = smooth_field(spec, 72, 3.0);
    const auto bd = energy::breakdown(w, 1.5);
    CHECK(rel_diff(bd.e_total, bd.e2 + bd.e3 + bd.e4) < 1e-14);
    const double direct = energy::total_energy(w, airy::phi_of(w));
    CHECK(rel_diff(bd.e_total, direct) < 1e-12);
    CHECK(bd.e4 >= 0.0);
    CHECK(bd.f_lambda == Catch::Approx(bd.e_total - 1.5 * bd.shortening_s).epsilon(1e-12));
}

TEST_CASE("gradient matches central differences of F_lambda") {
    DomainSpec spec(50, 50, 48, 48);
    const double lambda = 1.5;
    ScalarField w = smooth_field(spec, 81, 3.0);
    ScalarField v = smooth_field(spec, 82, 1.0);
    const ScalarField g = energy::gradient_l2(w, lambda, airy::phi_of(w));
    const double directional = inner_l2(g, v);
    for (double h : {1e-3, 1e-4}) {
        ScalarField wp = w;
        wp.axpy(h, v);
        ScalarField wm = w;
        wm.axpy(-h, v);
        const double fd = (energy::f_lambda(wp, lambda) - energy::f_lambda(wm, lambda)) / (2 * h);
        CHECK(rel_diff(fd, directional) < 1e-5);
    }
}

TEST_CASE("tiny-amplitude gradient is dominated by the linear symbol") {
    DomainSpec spec(50, 50, 64, 64);
    const int k = 3, l = 2;
    const double lambda = 1.2, A = 1e-6;
    ScalarField w = mode_field(spec, k, l, A);
    const ScalarField g = energy::gradient_l2(w, lambda, airy::phi_of(w));
    const double k2 = kd2(spec, k);
    const double mu4 = mud4(spec, k, l);
    ScalarField linear = w;
    linear *= mu4 + k2 * k2 / mu4 - lambda * k2;
    ScalarField diff = g - linear;
    CHECK(norm_l2(diff) <= 1e-4 * norm_l2(linear));
}

TEST_CASE("chain identity 2S = <Delta w, Delta phi1>") {
    DomainSpec spec(50, 50, 48, 48);
    for (unsigned seed = 0; seed < 20; ++seed) {
        ScalarField w = random_field(spec, 900 + seed);
        const double lhs = 2.0 * energy::shortening(w);
        const double rhs = inner_l2(laplacian(w), laplacian(airy::phi1_of(w)));
        CHECK(rel_diff(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("sharp inequality gap is nonnegative at tolerance") {
    DomainSpec spec(50, 50, 48, 48);
    CHECK(energy::sharp_inequality_gap(ScalarField(spec)) == 0.0);
    for (unsigned seed = 0; seed < 100; ++seed) {
        ScalarField w = random_field(spec, 1500 + seed);
        CHECK(energy::sharp_inequality_gap(w) >= -1e-10 * energy::x_norm_sq(w));
    }
}

TEST_CASE("near-equality at a discrete Koiter-circle mode") {
    // a = 2 pi puts the k = 2, l = 0 mode on mu_d^4 = k_d^2 up to the
    // O(h^2) symbol correction; the gap closes quadratically in that
    const DomainSpec spec(2 * M_PI, 2 * M_PI, 128, 128);
    ScalarField w = mode_field(spec, 2, 0);
    CHECK(energy::sharp_inequality_gap(w) <= 1e-6 * energy::x_norm_sq(w));
}

TEST_CASE("cubic term scales like the homogeneity bound") {
    DomainSpec spec(50, 50, 48, 48);
    ScalarField w = smooth_field(spec, 91, 1.0);
    const double xn = energy::x_norm(w);
    const auto bd1 = energy::breakdown(w, 0.0);
    const double c1 = std::abs(bd1.e3) / (xn * xn * xn);
    for (double mu : {0.5, 2.0, 10.0}) {
        const auto bd = energy::breakdown(mu * w, 0.0);
        const double c = std::abs(bd.e3) / std::pow(mu * xn, 3);
        CHECK(rel_diff(c, c1) < 1e-10);
    }
    CHECK(std::isfinite(c1));
}

TEST_CASE("origin is a local minimum at lambda = 1.5 on the rho-sphere") {
    DomainSpec spec(50, 50, 48, 48);
    const double rho = 1e-2;
    for (unsigned seed = 0; seed < 100; ++seed) {
        ScalarField w = random_field(spec, 3000 + seed);
        w = project_zero_mean(w);
        w *= rho / energy::x_norm(w);
        CHECK(energy::f_lambda(w, 1.5) > 0.0);
    }
}

TEST_CASE("both metrics vanish together") {
    DomainSpec spec(50, 50, 48, 48);
    // Gram symbol range over nonzero modes bounds the condition factor
    // between the two gradient norms
    double gmin = 1e300, gmax = 0.0;
    for (int m = 0; m <= spec.nx; ++m)
        for (int l = 0; l <= spec.ny / 2; ++l) {
            if (m == 0 && l == 0) continue;
            const double kx = 2.0 / (spec.hx() * spec.hx()) *
                              (1.0 - std::cos(M_PI * m / spec.nx));
            const double ky = ld2(spec, l);
            const double l2sym = (kx + ky) * (kx + ky);
            const double g = l2sym + kx * kx / l2sym;
            gmin = std::min(gmin, g);
            gmax = std::max(gmax, g);
        }
    ScalarField w = smooth_field(spec, 101, 2.0);
    const auto l2 = energy::gradient_eval(w, 1.5, GradientMetric::l2);
    const auto xp = energy::gradient_eval(w, 1.5, GradientMetric::x_preconditioned);
    CHECK(l2.norm > 0.0);
    CHECK(xp.norm > 0.0);
    CHECK(xp.norm <= l2.norm / std::sqrt(gmin) * (1 + 1e-12));
    CHECK(xp.norm >= l2.norm / std::sqrt(gmax) * (1 - 1e-12));
    CHECK(max_abs_diff(l2.r, xp.r) == 0.0);
}

TEST_CASE("hessian action matches finite differences of the gradient") {
    DomainSpec spec(50, 50, 48, 48);
    const double lambda = 1.4;
    ScalarField w = smooth_field(spec, 111, 2.5);
    ScalarField v = smooth_field(spec, 112, 1.0);
    const energy::Linearization lin(w, lambda);
    const ScalarField hv = lin.apply(v);
    const double h = 1e-4;
    ScalarField wp = w;
    wp.axpy(h, v);
    ScalarField wm = w;
    wm.axpy(-h, v);
    ScalarField fd = energy::gradient_l2(wp, lambda, airy::phi_of(wp)) -
                     energy::gradient_l2(wm, lambda, airy::phi_of(wm));
    fd *= 1.0 / (2 * h);
    fd -= hv;
    CHECK(norm_l2(fd) <= 1e-5 * norm_l2(hv));
}

TEST_CASE("hessian is symmetric in the L2 pairing") {
    DomainSpec spec(50, 50, 48, 48);
    const energy::Linearization lin(smooth_field(spec, 121, 2.0), 1.5);
    ScalarField u = smooth_field(spec, 122, 1.0);
    ScalarField v = smooth_field(spec, 123, 1.0);
    const double a = inner_l2(lin.apply(u), v);
    const double b = inner_l2(u, lin.apply(v));
    CHECK(rel_diff(a, b) < 1e-11);
}

TEST_CASE("critical load scan agrees with the symbol oracle") {
    DomainSpec spec(50, 50, 64, 64);
    const auto scan = energy::critical_load_scan(spec);
    double oracle = 1e300;
    int ok = 0, ol = 0;
    for (int k = 1; k <= spec.nx / 2; ++k)
        for (int l = 0; l <= spec.ny / 4; ++l) {
            const double k2 = kd2(spec, k);
            const double mu4 = mud4(spec, k, l);
            const double lam = (mu4 + k2 * k2 / mu4) / k2;
            if (lam < oracle) {
                oracle = lam;
                ok = k;
                ol = l;
            }
        }
    CHECK(scan.k == ok);
    CHECK(scan.l == ol);
    CHECK(rel_diff(scan.lambda_cr, oracle) < 1e-9);
}
