/// @file potentials.hpp
/// @brief Double-well potentials for the bulk and surface free energies:
///        the quartic polynomial well and the regularized Flory-Huggins
///        (logarithmic) potential, plus the stabilization constants used by
///        the linearly stabilized time stepper.

#pragma once

namespace bsf {

enum class PotentialKind {
    PolynomialDoubleWell,  // W(s) = 1/4 (1 - s^2)^2 + tilt * s
    FloryHuggins,          // W(s) = Theta/2 [(1+s)ln(1+s) + (1-s)ln(1-s)] - Theta_c/2 s^2
};

/// Parameters of one double-well potential.
///
/// The Flory-Huggins potential is singular at s = +-1; outside the band
/// [-1+sigma_reg, 1-sigma_reg] it is replaced by its C^2 quadratic extension
/// so all linear solves stay well posed. Band violations are reported by the
/// diagnostics module, never clipped.
///
/// `tilt` adds a linear term tilt*s to either kind (default 0). A nonzero
/// tilt shifts the minima and makes the well asymmetric, which on the surface
/// potential selects a preferred wall phase. `offset` adds a constant to the
/// value only; energies and residuals built from W' and differences of W are
/// invariant under it.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::PolynomialDoubleWell;
    double theta = 1.0;       // Flory-Huggins only, 0 < theta < theta_c
    double theta_c = 2.0;     // Flory-Huggins only
    double sigma_reg = 1e-2;  // regularization width, in (0, 0.1)
    double tilt = 0.0;
    double offset = 0.0;

    void validate() const;  // throws std::invalid_argument
};

double potential_value(const PotentialSpec& spec, double s);
double potential_derivative(const PotentialSpec& spec, double s);
double potential_second_derivative(const PotentialSpec& spec, double s);

/// Stabilization constant S >= 1/2 sup|W''| over the (regularized)
/// admissible band, in closed form. PolynomialDoubleWell: 1.
double stabilization_constant(const PotentialSpec& spec);

}  // namespace bsf
