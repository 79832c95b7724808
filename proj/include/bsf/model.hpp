/// @file model.hpp
/// @brief Physical parameters of the two-phase bulk-surface system and the
///        constitutive closures: phase-dependent density and viscosity, the
///        relative mass flux, and the coupling coefficient function h.

#pragma once

#include <limits>

#include "bsf/grid.hpp"

namespace bsf {

/// Every physical constant of the model.
///
/// K controls the phi-psi trace coupling and L the mu-theta flux coupling on
/// the walls; both live in [0, inf] and select Dirichlet / Robin / Neumann
/// conditions. If K = 0 the trace relation phi = alpha psi requires alpha != 0.
struct PhysParams {
    double rho1 = 1.0;      // individual density of fluid 1
    double rho2 = 1.0;      // individual density of fluid 2
    double nu1 = 1.0;       // viscosity of fluid 1
    double nu2 = 1.0;       // viscosity of fluid 2
    double mob_bulk = 1.0;  // constant bulk mobility m_Omega
    double mob_surf = 1.0;  // constant surface mobility m_Gamma
    double eps = 0.05;      // bulk interface thickness
    double delta = 0.05;    // surface interface thickness
    double alpha = 1.0;     // trace-coupling coefficient
    double beta = 1.0;      // flux-proportionality coefficient
    double K = 1.0;         // trace coupling parameter, may be infinity
    double L = 1.0;         // flux coupling parameter, may be infinity
    double gamma_tau = 1.0; // wall slip friction coefficient

    void validate() const;  // throws std::invalid_argument
};

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class CouplingKind { Dirichlet, Robin, Neumann };

/// The K,L case ledger, derived deterministically from PhysParams.
struct CouplingCase {
    CouplingKind K_case = CouplingKind::Robin;
    CouplingKind L_case = CouplingKind::Robin;
};

CouplingCase coupling_case(const PhysParams& p);

/// h(r) = 1/r on (0, inf), 0 at r in {0, inf}. Rejects negative r.
double h_of_K(double r);

/// rho(phi) = 1/2 rho2 (1+phi) + 1/2 rho1 (1-phi), clamped to the endpoint
/// values so the density stays uniformly positive for out-of-band phi.
CellField density(const PhysParams& p, const CellField& phi);
double density_scalar(const PhysParams& p, double phi);

/// Arithmetic viscosity interpolation with the same endpoint clamp.
CellField viscosity(const PhysParams& p, const CellField& phi);
double viscosity_scalar(const PhysParams& p, double phi);

/// Relative flux J = -1/2 (rho2 - rho1) m_Omega grad(mu), evaluated on faces.
FaceField relative_flux(const PhysParams& p, const FaceField& grad_mu);

/// Midpoint coefficients of the ghost-cell realization of the wall coupling
/// conditions. The flux relations become
///   eps d_n phi       = ck(p, hy) (alpha psi - phi_adj)
///   m_Omega d_n mu    = cl(p, hy) (beta theta - mu_adj)
/// with phi_adj, mu_adj the wall-adjacent cell values. ck = 1/(K + hy/(2 eps)),
/// cl = 1/(L + hy/(2 m_Omega)); both vanish in the Neumann limit and enforce
/// the trace constraints exactly (in the wall-midpoint sense) at K = 0, L = 0.
double robin_coeff_phi(const PhysParams& p, double hy);
double robin_coeff_mu(const PhysParams& p, double hy);

}  // namespace bsf
