#include "bsf/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsf {

namespace {

void check_finite(double s) {
    if (!std::isfinite(s))
        throw std::invalid_argument("potential: non-finite argument");
}

// Flory-Huggins value/derivatives inside the open interval (-1, 1).
double fh_value(const PotentialSpec& p, double s) {
    return 0.5 * p.theta * ((1.0 + s) * std::log(1.0 + s) + (1.0 - s) * std::log(1.0 - s)) -
           0.5 * p.theta_c * s * s;
}
double fh_deriv(const PotentialSpec& p, double s) {
    return 0.5 * p.theta * std::log((1.0 + s) / (1.0 - s)) - p.theta_c * s;
}
double fh_second(const PotentialSpec& p, double s) {
    return p.theta / (1.0 - s * s) - p.theta_c;
}

}  // namespace

void PotentialSpec::validate() const {
    if (kind == PotentialKind::FloryHuggins) {
        if (!(theta > 0.0) || !(theta < theta_c))
            throw std::invalid_argument("PotentialSpec: Flory-Huggins requires 0 < theta < theta_c");
        if (!(sigma_reg > 0.0) || !(sigma_reg < 0.1))
            throw std::invalid_argument("PotentialSpec: sigma_reg must lie in (0, 0.1)");
    }
    if (!std::isfinite(tilt))
        throw std::invalid_argument("PotentialSpec: non-finite tilt");
}

double potential_value(const PotentialSpec& spec, double s) {
    check_finite(s);
    if (spec.kind == PotentialKind::PolynomialDoubleWell) {
        const double w = 1.0 - s * s;
        return 0.25 * w * w + spec.tilt * s + spec.offset;
    }
    const double se = 1.0 - spec.sigma_reg;
    if (s > se || s < -se) {
        // C^2 quadratic extension about the nearer band edge.
        const double e = (s > 0.0) ? se : -se;
        const double d = s - e;
        return fh_value(spec, e) + fh_deriv(spec, e) * d + 0.5 * fh_second(spec, e) * d * d +
               spec.tilt * s + spec.offset;
    }
    return fh_value(spec, s) + spec.tilt * s + spec.offset;
}

double potential_derivative(const PotentialSpec& spec, double s) {
    check_finite(s);
    if (spec.kind == PotentialKind::PolynomialDoubleWell)
        return s * s * s - s + spec.tilt;
    const double se = 1.0 - spec.sigma_reg;
    if (s > se || s < -se) {
        const double e = (s > 0.0) ? se : -se;
        return fh_deriv(spec, e) + fh_second(spec, e) * (s - e) + spec.tilt;
    }
    return fh_deriv(spec, s) + spec.tilt;
}

double potential_second_derivative(const PotentialSpec& spec, double s) {
    check_finite(s);
    if (spec.kind == PotentialKind::PolynomialDoubleWell)
        return 3.0 * s * s - 1.0;
    const double se = 1.0 - spec.sigma_reg;
    const double sc = std::clamp(s, -se, se);
    return fh_second(spec, sc);
}

double stabilization_constant(const PotentialSpec& spec) {
    if (spec.kind == PotentialKind::PolynomialDoubleWell) {
        // sup |3 s^2 - 1| on [-1, 1] is 2.
        return 1.0;
    }
    // W'' = theta/(1-s^2) - theta_c is monotone in |s|: the extremes sit at
    // s = 0 and at the band edges (the quadratic extension keeps the edge value).
    const double se = 1.0 - spec.sigma_reg;
    const double at_zero = std::abs(spec.theta - spec.theta_c);
    const double at_edge = std::abs(spec.theta / (1.0 - se * se) - spec.theta_c);
    return 0.5 * std::max(at_zero, at_edge);
}

}  // namespace bsf
