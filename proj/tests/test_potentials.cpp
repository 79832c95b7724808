#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bsf/potentials.hpp"

using namespace bsf;

namespace {

PotentialSpec poly() { return PotentialSpec{}; }

PotentialSpec fh(double theta = 1.0, double theta_c = 2.0, double sigma = 1e-2) {
    PotentialSpec s;
    s.kind = PotentialKind::FloryHuggins;
    s.theta = theta;
    s.theta_c = theta_c;
    s.sigma_reg = sigma;
    return s;
}

}  // namespace

TEST_CASE("polynomial well values and derivatives") {
    CHECK(potential_value(poly(), 1.0) == doctest::Approx(0.0));
    CHECK(potential_value(poly(), -1.0) == doctest::Approx(0.0));
    CHECK(potential_value(poly(), 0.0) == doctest::Approx(0.25));
    CHECK(potential_derivative(poly(), 0.0) == doctest::Approx(0.0));
    CHECK(potential_derivative(poly(), 0.5) == doctest::Approx(-0.375));
    CHECK_THROWS_AS(potential_value(poly(), std::nan("")), std::invalid_argument);
}

TEST_CASE("Flory-Huggins values vanish at the origin and reject bad specs") {
    CHECK(potential_value(fh(), 0.0) == doctest::Approx(0.0));
    CHECK(potential_derivative(fh(), 0.0) == doctest::Approx(0.0));
    PotentialSpec bad = fh(2.0, 1.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("derivatives match a central finite difference") {
    for (const PotentialSpec& spec : {poly(), fh()}) {
        const double h = 1e-5;
        for (double s = -1.3; s <= 1.3; s += 0.07) {
            const double fd =
                (potential_value(spec, s + h) - potential_value(spec, s - h)) / (2.0 * h);
            CHECK(potential_derivative(spec, s) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("evenness of both kinds (untilted)") {
    for (const PotentialSpec& spec : {poly(), fh()}) {
        for (double s = 0.0; s <= 1.4; s += 0.11) {
            CHECK(potential_value(spec, s) ==
                  doctest::Approx(potential_value(spec, -s)).epsilon(1e-14));
            CHECK(potential_derivative(spec, s) ==
                  doctest::Approx(-potential_derivative(spec, -s)).epsilon(1e-14));
        }
    }
}

TEST_CASE("regularized Flory-Huggins is C2 at the band edges") {
    const PotentialSpec spec = fh();
    const double se = 1.0 - spec.sigma_reg;
    const double d = 1e-7;
    for (double edge : {se, -se}) {
        CHECK(potential_value(spec, edge - d) ==
              doctest::Approx(potential_value(spec, edge + d)).epsilon(1e-10));
        CHECK(potential_derivative(spec, edge - d) ==
              doctest::Approx(potential_derivative(spec, edge + d)).epsilon(1e-8));
        CHECK(potential_second_derivative(spec, edge - d) ==
              doctest::Approx(potential_second_derivative(spec, edge + d)).epsilon(1e-6));
    }
}

TEST_CASE("regularized Flory-Huggins is coercive (positive quadratic growth)") {
    const PotentialSpec spec = fh();
    const double se = 1.0 - spec.sigma_reg;
    const double growth = potential_second_derivative(spec, se);
    CHECK(growth > 0.0);
    // Value grows at large |s|.
    CHECK(potential_value(spec, 10.0) > potential_value(spec, 2.0));
    CHECK(potential_value(spec, -10.0) > potential_value(spec, -2.0));
}

TEST_CASE("stabilization constants") {
    CHECK(stabilization_constant(poly()) == doctest::Approx(1.0));

    // Dense-sampling oracle for the Flory-Huggins constant.
    const PotentialSpec spec = fh(1.0, 2.0, 1e-2);
    double sup = 0.0;
    for (double s = -2.0; s <= 2.0; s += 1e-4)
        sup = std::max(sup, std::abs(potential_second_derivative(spec, s)));
    const double S = stabilization_constant(spec);
    CHECK(S >= 0.5 * sup - 1e-9);
    CHECK(S == doctest::Approx(0.5 * sup).epsilon(1e-3));

    // Doubling sigma_reg never increases S.
    double prev = stabilization_constant(fh(1.0, 2.0, 1e-3));
    for (double sigma : {2e-3, 4e-3, 8e-3, 1.6e-2, 3.2e-2, 6.4e-2}) {
        const double cur = stabilization_constant(fh(1.0, 2.0, sigma));
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("tilt shifts the derivative but not the curvature") {
    PotentialSpec t = poly();
    t.tilt = 0.3;
    CHECK(potential_derivative(t, 0.0) == doctest::Approx(0.3));
    CHECK(potential_second_derivative(t, 0.7) ==
          doctest::Approx(potential_second_derivative(poly(), 0.7)));
    CHECK(stabilization_constant(t) == doctest::Approx(1.0));
}
