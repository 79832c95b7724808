/// @file ns_solver.hpp
/// @brief One step of the variable-density incompressible Navier-Stokes
///        subsystem with relative flux, Korteweg force and generalized
///        Navier slip on the walls, via incremental pressure projection.
///
/// Predictor (semi-implicit): implicit viscous term div(2 nu(phi) Du),
/// explicit conservative convection div(u x (rho u + J)), explicit Korteweg
/// force mu grad(phi), old pressure gradient. The slip condition
///   [2 nu (Du) n + gamma_tau u]_tau = [theta gradG(psi) + 1/2 (J.n) u]_tau
/// enters the implicit viscous rows as a Robin-type wall relation through a
/// ghost-cell elimination; the predictor matrix stays symmetric positive
/// definite. Projection: variable-coefficient Poisson solve for the pressure
/// increment, periodic in x, homogeneous Neumann at the walls.

#pragma once

#include "bsf/ch_solver.hpp"
#include "bsf/grid.hpp"
#include "bsf/model.hpp"
#include "bsf/sparse.hpp"

namespace bsf {

/// Flow unknowns: face velocity (u.n = 0 on walls) and mean-zero pressure.
struct FlowState {
    FaceField u;
    CellField p;

    FlowState() = default;
    explicit FlowState(const Grid& g) : u(g), p(g) {}
};

struct NsOptions {
    double visc_tol = 1e-11;
    int visc_max_iter = 20000;
    double proj_tol = 1e-9;
    int proj_max_iter = 20000;
};

class NsStepper {
public:
    NsStepper(const Grid& grid, const PhysParams& params, const NsOptions& opts = {});

    /// Advances the flow by one step using the CH fields of the same time
    /// level (operator splitting). Throws SolverError on solver failure;
    /// CFL violations only increment cfl_warnings().
    void step(FlowState& flow, const ChState& ch, double dt);

    long cfl_warnings() const { return cfl_warnings_; }
    double projection_tol() const { return opts_.proj_tol; }

private:
    Grid grid_;
    PhysParams params_;
    NsOptions opts_;
    long cfl_warnings_ = 0;
};

/// Midpoint quadrature of rho(phi)/2 |u|^2 with face-to-center averaging.
double kinetic_energy(const Grid& g, const FlowState& flow, const ChState& ch,
                      const PhysParams& params);

/// Single-shot convenience wrapper.
FlowState ns_step(const FlowState& flow, const ChState& ch, const Grid& grid,
                  const PhysParams& params, double dt);

}  // namespace bsf
