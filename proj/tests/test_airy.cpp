#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace vkd;
using namespace vkd::test;

TEST_CASE("zero rhs gives zero phi") {
    DomainSpec spec(50, 50, 32, 32);
    ScalarField zero(spec);
    CHECK(max_abs(airy::solve_biharmonic(zero)) == 0.0);
    CHECK(max_abs(airy::phi1_of(zero)) == 0.0);
    CHECK(max_abs(airy::phi2_of(zero)) == 0.0);
}

TEST_CASE("manufactured single mode inverts the discrete symbol") {
    DomainSpec spec(50, 50, 64, 64);
    const int k = 3, l = 2;
    const double mu4 = mud4(spec, k, l);
    ScalarField rhs = mode_field(spec, k, l, mu4);
    ScalarField phi = airy::solve_biharmonic(rhs);
    ScalarField expected = mode_field(spec, k, l);
    CHECK(max_abs_diff(phi, expected) < 1e-10 * max_abs(expected));
}

TEST_CASE("random zero-mean rhs satisfies the residual contract") {
    DomainSpec spec(50, 50, 64, 64);
    for (unsigned seed = 0; seed < 10; ++seed) {
        ScalarField rhs = project_zero_mean(random_field(spec, 600 + seed));
        ScalarField phi = airy::solve_biharmonic(rhs);
        ScalarField res = bilaplacian(phi);
        res -= rhs;
        CHECK(norm_l2(res) <= 1e-10 * norm_l2(rhs));
        CHECK(std::abs(mean(phi)) < 1e-14 * norm_l2(phi));
    }
}

TEST_CASE("biased rhs is rejected as an upstream inconsistency") {
    DomainSpec spec(50, 50, 32, 32);
    ScalarField rhs = project_zero_mean(random_field(spec, 9));
    for (double& v : rhs.values()) v += 1.0;
    CHECK_THROWS_AS(airy::solve_biharmonic(rhs), NonZeroMeanRhs);
}

TEST_CASE("non-finite input is rejected") {
    DomainSpec spec(50, 50, 32, 32);
    ScalarField rhs(spec);
    rhs(3, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(airy::solve_biharmonic(rhs), NotFinite);
}

TEST_CASE("phi1 of a single mode is the symbol quotient") {
    DomainSpec spec(50, 50, 64, 64);
    const int k = 2, l = 3;
    ScalarField w = mode_field(spec, k, l, 0.7);
    ScalarField phi1 = airy::phi1_of(w);
    const double factor = kd2(spec, k) / mud4(spec, k, l);
    ScalarField expected = w;
    expected *= factor;
    CHECK(max_abs_diff(phi1, expected) < 1e-10 * max_abs(expected));
}

TEST_CASE("phi splits linearly into phi1 + phi2") {
    DomainSpec spec(50, 50, 48, 48);
    ScalarField w = smooth_field(spec, 21, 2.0);
    ScalarField split = airy::phi1_of(w) + airy::phi2_of(w);
    ScalarField full = airy::phi_of(w);
    split -= full;
    CHECK(norm_l2(split) <= 1e-10 * std::max(norm_l2(full), 1.0));
}

TEST_CASE("phi parts inherit the homogeneity of their right-hand sides") {
    DomainSpec spec(50, 50, 48, 48);
    ScalarField w = smooth_field(spec, 33, 1.5);
    ScalarField w2 = 2.0 * w;
    ScalarField p1a = airy::phi1_of(w2);
    ScalarField p1b = 2.0 * airy::phi1_of(w);
    CHECK(max_abs_diff(p1a, p1b) < 1e-12 * std::max(max_abs(p1b), 1e-12));
    ScalarField p2a = airy::phi2_of(w2);
    ScalarField p2b = 4.0 * airy::phi2_of(w);
    CHECK(max_abs_diff(p2a, p2b) < 1e-11 * std::max(max_abs(p2b), 1e-12));
}

TEST_CASE("even symmetry propagates through the solves") {
    DomainSpec spec(50, 50, 48, 48);
    ScalarField w = symmetrize(smooth_field(spec, 44, 2.0), SymmetryClass::even_xy);
    for (const ScalarField& phi : {airy::phi1_of(w), airy::phi2_of(w)}) {
        ScalarField sym = symmetrize(phi, SymmetryClass::even_xy);
        CHECK(max_abs_diff(phi, sym) < 1e-12 * std::max(max_abs(phi), 1e-12));
    }
}

TEST_CASE("discrete mean of bracket(w,w) + w_xx stays small for smooth w") {
    DomainSpec spec(50, 50, 64, 64);
    ScalarField w = smooth_field(spec, 55, 3.0);
    ScalarField rhs = bracket(w, w);
    rhs += dxx(w);
    const double scale = norm_l2(rhs);
    CHECK(std::abs(mean(rhs)) * std::sqrt(spec.area()) <= 1e-8 * std::max(scale, 1e-12));
}
