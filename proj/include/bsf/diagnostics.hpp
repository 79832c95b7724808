/// @file diagnostics.hpp
/// @brief Quantitative audits of the model: energy decomposition, the
///        dissipation rates, mass invariants, incompressibility residuals,
///        the pressure-reformulation identity residual, and the contact
///        angle. All quadratures are midpoint and face/cell consistent so
///        the energy audit matches the scheme's own discrete energy.

#pragma once

#include <array>
#include <optional>

#include "bsf/ch_solver.hpp"
#include "bsf/grid.hpp"
#include "bsf/model.hpp"
#include "bsf/ns_solver.hpp"
#include "bsf/potentials.hpp"

namespace bsf {

struct DiagnosticsRecord {
    double time = 0.0;
    double E_total = 0.0;
    double E_kinetic = 0.0;
    double E_bulk_GL = 0.0;
    double E_surf_GL = 0.0;
    double E_penalty = 0.0;
    double D_visc = 0.0;
    double D_slip = 0.0;
    double D_bulk_mob = 0.0;
    double D_surf_mob = 0.0;
    double D_robin = 0.0;
    double M_bulk = 0.0;
    double M_surf = 0.0;
    double M_combined = 0.0;
    double R_div = 0.0;
    double R_sdiv = 0.0;
    double R_form = 0.0;
    double contact_angle_deg = -1.0;  // -1 encodes "no wall crossing"
    double band_violation = 0.0;
};

/// Field names excluding time, in declaration order (CSV schema).
inline constexpr int kDiagnosticsFieldCount = 18;
extern const std::array<const char*, kDiagnosticsFieldCount> kDiagnosticsFieldNames;

struct EnergyBreakdown {
    double kinetic = 0.0;
    double bulk_gl = 0.0;
    double surf_gl = 0.0;
    double penalty = 0.0;
    double total() const { return kinetic + bulk_gl + surf_gl + penalty; }
};

/// Energy functional: kinetic + bulk Ginzburg-Landau + surface
/// Ginzburg-Landau + 1/2 h(K) |alpha psi - phi|_Gamma^2 penalty, where the
/// wall trace of phi is the one-sided quadratic extrapolation.
EnergyBreakdown total_energy(const Grid& g, const FlowState& flow, const ChState& ch,
                             const PhysParams& p, const PotentialSpec& pot_f,
                             const PotentialSpec& pot_g);

struct DissipationRates {
    double visc = 0.0;      // int 2 nu |Du|^2
    double slip = 0.0;      // int_G gamma_tau |u_tau|^2
    double bulk_mob = 0.0;  // int m_O |grad mu|^2
    double surf_mob = 0.0;  // int_G m_G |gradG theta|^2
    double robin = 0.0;     // int_G h(L) |beta theta - mu|^2
};

DissipationRates dissipation_terms(const Grid& g, const FlowState& flow, const ChState& ch,
                                   const PhysParams& p);

struct MassTotals {
    double bulk = 0.0;
    std::array<double, 2> surf{0.0, 0.0};
    double surf_total = 0.0;
    double combined = 0.0;  // beta * bulk + surf_total
};

MassTotals masses(const Grid& g, const ChState& ch, const PhysParams& p);

struct FormulationResidual {
    double bulk = 0.0;
    double wall = 0.0;
    double total() const { return bulk + wall; }
};

/// Residual of the pressure-reformulation identities: in the bulk,
/// [mu grad phi - grad f] + eps div(grad phi x grad phi) with
/// f = eps/2 |grad phi|^2 + F(phi)/eps and mu recomputed from phi; on the
/// walls the analogous tangential identity for g. Discrete L2 norms over the
/// region where full interior stencils exist; self-converges under refinement.
FormulationResidual formulation_residual(const Grid& g, const CellField& phi,
                                         const std::array<WallField, 2>& psi,
                                         const PhysParams& p, const PotentialSpec& pot_f,
                                         const PotentialSpec& pot_g);

/// Contact angle of the phi = 0 level set against a wall, in degrees in
/// (0, 180), measured through the phi > 0 phase; averaged over all wall
/// crossings. Empty when the level set does not meet the wall.
std::optional<double> contact_angle(const Grid& g, const CellField& phi, Wall wall);

struct IncompressibilityResiduals {
    double r_div = 0.0;   // max |div u|
    double r_sdiv = 0.0;  // max |divG u_tau| over both walls
};

IncompressibilityResiduals incompressibility_residuals(const Grid& g, const FlowState& flow);

/// (max(|phi|inf, |psi|inf) - 1)+
double band_violation(const ChState& ch);

DiagnosticsRecord compute_diagnostics(const Grid& g, double time, const FlowState& flow,
                                      const ChState& ch, const PhysParams& p,
                                      const PotentialSpec& pot_f, const PotentialSpec& pot_g);

}  // namespace bsf
