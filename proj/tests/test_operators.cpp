#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace vkd;
using namespace vkd::test;

TEST_CASE("constants are annihilated") {
    DomainSpec spec(50, 50, 32, 32);
    ScalarField c = sample(spec, [](double, double) { return 3.7; });
    CHECK(max_abs(dx(c)) == 0.0);
    CHECK(max_abs(laplacian(c)) == 0.0);
    CHECK(max_abs(bracket(c, c)) == 0.0);
}

TEST_CASE("laplacian of a product mode matches the symbolic derivative") {
    const double a = 50, b = 50;
    auto error_for = [&](int n) {
        DomainSpec spec(a, b, n, n);
        const int k = 2, l = 1;
        ScalarField f = mode_field(spec, k, l);
        ScalarField lf = laplacian(f);
        const double coeff = -(k * k * M_PI * M_PI / (a * a) + 4.0 * l * l * M_PI * M_PI / (b * b));
        ScalarField exact = f;
        exact *= coeff;
        return max_abs_diff(lf, exact);
    };
    const double e64 = error_for(64);
    const double e128 = error_for(128);
    CHECK(e64 < 1e-3);
    // second-order stencils: error drops by 4 +- 10% under refinement
    CHECK(e64 / e128 == Catch::Approx(4.0).epsilon(0.10));
}

TEST_CASE("reflection closure forces dx to vanish on the walls") {
    DomainSpec spec(50, 50, 64, 64);
    ScalarField f = mode_field(spec, 1, 0);
    ScalarField fx = dx(f);
    for (int j = 0; j < spec.ny; ++j) {
        CHECK(fx(0, j) == 0.0);
        CHECK(fx(spec.nx, j) == 0.0);
    }
}

TEST_CASE("bracket is symmetric to roundoff") {
    DomainSpec spec(40, 60, 48, 32);
    ScalarField f = random_field(spec, 11);
    ScalarField g = random_field(spec, 12);
    CHECK(max_abs_diff(bracket(f, g), bracket(g, f)) == 0.0);
}

TEST_CASE("bracket of a product mode matches the symbolic oracle") {
    const double a = 50, b = 50;
    auto error_for = [&](int n) {
        DomainSpec spec(a, b, n, n);
        const double kk = 2 * M_PI / a, ll = 4 * M_PI / b;
        ScalarField f = mode_field(spec, 2, 2);
        ScalarField bf = bracket(f, f);
        ScalarField exact = sample(spec, [&](double x, double y) {
            const double cx = std::cos(kk * x), sx = std::sin(kk * x);
            const double cy = std::cos(ll * y), sy = std::sin(ll * y);
            return kk * kk * ll * ll * (cx * cx * cy * cy - sx * sx * sy * sy);
        });
        return max_abs_diff(bf, exact);
    };
    const double e64 = error_for(64);
    const double e128 = error_for(128);
    CHECK(e64 / e128 > 3.5);
    CHECK(e64 / e128 < 4.5);
}

TEST_CASE("quadrature is exact for constants and kills full periods") {
    DomainSpec spec(30, 70, 32, 64);
    ScalarField c = sample(spec, [](double, double) { return 2.5; });
    CHECK(integrate(c) == Catch::Approx(2.5 * spec.area()).epsilon(1e-14));
    ScalarField osc = sample(spec, [&](double, double y) { return std::cos(2 * M_PI * y / spec.b); });
    CHECK(std::abs(integrate(osc)) < 1e-10 * spec.area());
}

TEST_CASE("summation by parts holds to relative 1e-12") {
    DomainSpec spec(50, 50, 48, 48);
    for (unsigned seed = 0; seed < 100; ++seed) {
        ScalarField f = random_field(spec, 1000 + seed);
        ScalarField g = random_field(spec, 2000 + seed);
        const double lhs_xx = inner_l2(dxx(f), g);
        const double rhs_xx = inner_l2(f, dxx(g));
        CHECK(std::abs(lhs_xx - rhs_xx) <= 1e-12 * std::max(std::abs(lhs_xx), 1.0));
        const double lhs_yy = inner_l2(dyy(f), g);
        const double rhs_yy = inner_l2(f, dyy(g));
        CHECK(std::abs(lhs_yy - rhs_yy) <= 1e-12 * std::max(std::abs(lhs_yy), 1.0));
    }
}

TEST_CASE("dx_adjoint is the exact adjoint of dx") {
    DomainSpec spec(50, 50, 48, 48);
    for (unsigned seed = 0; seed < 20; ++seed) {
        ScalarField f = random_field(spec, 100 + seed);
        ScalarField g = random_field(spec, 200 + seed);
        const double lhs = inner_l2(dx(f), g);
        const double rhs = inner_l2(f, dx_adjoint(g));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
    }
}

TEST_CASE("bracket_adjoint is the exact adjoint of v -> [w,v]") {
    DomainSpec spec(50, 50, 48, 48);
    for (unsigned seed = 0; seed < 20; ++seed) {
        ScalarField w = random_field(spec, 300 + seed);
        ScalarField phi = random_field(spec, 400 + seed);
        ScalarField v = random_field(spec, 500 + seed);
        const double lhs = inner_l2(phi, bracket(w, v));
        const double rhs = inner_l2(bracket_adjoint(w, phi), v);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
    }
}

TEST_CASE("periodic closure: SBP and adjoint also hold on unit cells") {
    DomainSpec spec(0.5, 0.5, 64, 64, XClosure::periodic);
    ScalarField f = random_field(spec, 31);
    // make the duplicated column consistent
    for (int j = 0; j < spec.ny; ++j) f(spec.nx, j) = f(0, j);
    ScalarField g = random_field(spec, 32);
    for (int j = 0; j < spec.ny; ++j) g(spec.nx, j) = g(0, j);
    const double lhs = inner_l2(dxx(f), g);
    const double rhs = inner_l2(f, dxx(g));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
    const double lhs2 = inner_l2(dx(f), g);
    const double rhs2 = inner_l2(f, dx_adjoint(g));
    CHECK(std::abs(lhs2 - rhs2) <= 1e-12 * std::max(std::abs(lhs2), 1.0));
}

TEST_CASE("symmetrize: fixed point, exact evenness, idempotence, integral") {
    DomainSpec spec(50, 50, 32, 32);
    ScalarField f = random_field(spec, 77);
    ScalarField s1 = symmetrize(f, SymmetryClass::even_xy);
    for (int i = 0; i <= spec.nx; ++i)
        for (int j = 0; j < spec.ny; ++j) {
            CHECK(s1(i, j) == s1(spec.nx - i, j));
            CHECK(s1(i, j) == s1(i, (spec.ny - j) % spec.ny));
        }
    ScalarField s2 = symmetrize(s1, SymmetryClass::even_xy);
    CHECK(max_abs_diff(s1, s2) == 0.0);
    CHECK(integrate(f) == Catch::Approx(integrate(s1)).margin(1e-10 * spec.area()));
    ScalarField even = mode_field(spec, 2, 1);
    CHECK(max_abs_diff(even, symmetrize(even, SymmetryClass::even_xy)) < 1e-14);
}

TEST_CASE("spec mismatch is rejected") {
    DomainSpec s1(50, 50, 32, 32);
    DomainSpec s2(50, 50, 64, 64);
    ScalarField f(s1), g(s2);
    CHECK_THROWS_AS(inner_l2(f, g), SpecMismatch);
    CHECK_THROWS_AS(DomainSpec(50, 50, 6, 32), SpecMismatch);
    CHECK_THROWS_AS(DomainSpec(-1, 50, 32, 32), SpecMismatch);
    CHECK_THROWS_AS(DomainSpec(50, 50, 33, 32), SpecMismatch);
}
