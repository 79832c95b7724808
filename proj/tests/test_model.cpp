#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bsf/grid.hpp"
#include "bsf/model.hpp"
#include "test_support.hpp"

using namespace bsf;
using namespace bsf::test;

TEST_CASE("density interpolates and clamps") {
    PhysParams p = default_params();  // rho1 = 1, rho2 = 3
    CHECK(density_scalar(p, 1.0) == doctest::Approx(3.0));
    CHECK(density_scalar(p, -1.0) == doctest::Approx(1.0));
    CHECK(density_scalar(p, 0.0) == doctest::Approx(2.0));
    CHECK(density_scalar(p, 2.0) == doctest::Approx(3.0));   // clamp
    CHECK(density_scalar(p, -5.0) == doctest::Approx(1.0));  // clamp
}

TEST_CASE("viscosity interpolates and clamps") {
    PhysParams p = default_params();  // nu1 = 1, nu2 = 2
    CHECK(viscosity_scalar(p, 0.0) == doctest::Approx(1.5));
    CHECK(viscosity_scalar(p, 1.5) == doctest::Approx(2.0));
    p.nu1 = p.nu2 = 0.7;
    CHECK(viscosity_scalar(p, 0.3) == doctest::Approx(0.7));
}

TEST_CASE("relative flux: Model H limit, arithmetic, linearity, antisymmetry") {
    const Grid g = build_grid(8, 8, 1.0, 1.0);
    PhysParams p = default_params();
    p.mob_bulk = 1.0;

    FaceField gm(g);
    for (double& v : gm.u) v = 1.0;  // grad mu = (1, 0)

    PhysParams matched = p;
    matched.rho1 = matched.rho2 = 2.0;
    const FaceField j0 = relative_flux(matched, gm);
    CHECK(max_abs(j0.u) == 0.0);

    const FaceField j1 = relative_flux(p, gm);  // -(3-1)/2 * 1 * 1 = -1
    CHECK(j1.ux(3, 3) == doctest::Approx(-1.0));

    // Antisymmetric under swapping the densities.
    PhysParams swapped = p;
    std::swap(swapped.rho1, swapped.rho2);
    const FaceField j2 = relative_flux(swapped, gm);
    for (std::size_t k = 0; k < j1.u.size(); ++k)
        CHECK(j2.u[k] == doctest::Approx(-j1.u[k]).epsilon(1e-14));

    // mu constant -> zero flux.
    const CellField mu(g, 5.0);
    const FaceField jz = relative_flux(p, grad(g, mu));
    CHECK(max_abs(jz.u) == 0.0);
    CHECK(max_abs(jz.v) == 0.0);
}

TEST_CASE("h(K) follows the piecewise definition") {
    CHECK(h_of_K(0.0) == 0.0);
    CHECK(h_of_K(kInf) == 0.0);
    CHECK(h_of_K(2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(h_of_K(-1.0), std::invalid_argument);
}

TEST_CASE("coupling case ledger") {
    PhysParams p = default_params();
    p.K = 0.0;
    p.L = kInf;
    const CouplingCase c = coupling_case(p);
    CHECK(c.K_case == CouplingKind::Dirichlet);
    CHECK(c.L_case == CouplingKind::Neumann);
    p.K = 0.5;
    p.L = 2.0;
    const CouplingCase c2 = coupling_case(p);
    CHECK(c2.K_case == CouplingKind::Robin);
    CHECK(c2.L_case == CouplingKind::Robin);
}

TEST_CASE("parameter validation") {
    PhysParams p = default_params();
    p.K = 0.0;
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = default_params();
    p.rho1 = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = default_params();
    p.gamma_tau = -0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("ghost Robin coefficients: limits and monotonicity") {
    PhysParams p = default_params();
    const double hy = 0.05;
    p.K = kInf;
    CHECK(robin_coeff_phi(p, hy) == 0.0);
    p.K = 0.0;
    CHECK(robin_coeff_phi(p, hy) == doctest::Approx(2.0 * p.eps / hy));
    p.K = 1.0;
    CHECK(robin_coeff_phi(p, hy) == doctest::Approx(1.0 / (1.0 + 0.5 * hy / p.eps)));
    // Approaches h(K) = 1/K under refinement.
    CHECK(robin_coeff_phi(p, 1e-8) == doctest::Approx(1.0).epsilon(1e-6));

    p.L = kInf;
    CHECK(robin_coeff_mu(p, hy) == 0.0);
    p.L = 2.0;
    p.mob_bulk = 0.0;
    CHECK(robin_coeff_mu(p, hy) == 0.0);
}
