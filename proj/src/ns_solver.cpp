#include "bsf/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bsf/errors.hpp"

namespace bsf {

namespace {

void t_add(std::vector<Triplet>& t, int row, int col, double value) {
    t.push_back({row, col, value});
}

// Corner (vertex) viscosity: average of the adjacent cells. Interior corners
// touch four cells, wall corners two.
double corner_viscosity(const Grid& g, const CellField& nu, int i, int jc) {
    const int im = g.wrap_x(i - 1);
    if (jc == 0) return 0.5 * (nu(im, 0) + nu(i, 0));
    if (jc == g.ny) return 0.5 * (nu(im, g.ny - 1) + nu(i, g.ny - 1));
    return 0.25 * (nu(im, jc - 1) + nu(i, jc - 1) + nu(im, jc) + nu(i, jc));
}

struct WallSlip {
    // Robin data per wall edge (x = i hx): effective friction gamma_eff =
    // gamma_tau - 1/2 J.n and the tangential forcing [theta gradG psi]_x.
    std::vector<double> gamma_eff;
    std::vector<double> forcing;
};

WallSlip wall_slip_data(const Grid& g, const PhysParams& p, const ChState& ch, Wall wall) {
    const int w = wall_index(wall);
    WallSlip out;
    out.gamma_eff.resize(g.nx);
    out.forcing.resize(g.nx);
    const WallField gmass = wall_mass_flux(g, p, ch, wall);
    for (int i = 0; i < g.nx; ++i) {
        const int im = g.wrap_x(i - 1);
        const double theta_e = 0.5 * (ch.theta[w][im] + ch.theta[w][i]);
        const double dpsi = (ch.psi[w][i] - ch.psi[w][im]) / g.hx;
        out.forcing[i] = theta_e * dpsi;
        const double g_e = 0.5 * (gmass[im] + gmass[i]);
        const double J_dot_n = -0.5 * (p.rho2 - p.rho1) * g_e;
        out.gamma_eff[i] = p.gamma_tau - 0.5 * J_dot_n;
    }
    return out;
}

// Unknown layout of the predictor system: ux faces first, then interior uy.
struct VelMap {
    int nx, ny;
    int iux(int i, int j) const { return j * nx + i; }
    int iuy(int i, int j) const { return nx * ny + (j - 1) * nx + i; }  // j in [1, ny-1]
    int size() const { return nx * ny + nx * (ny - 1); }
};

}  // namespace

NsStepper::NsStepper(const Grid& grid, const PhysParams& params, const NsOptions& opts)
    : grid_(grid), params_(params), opts_(opts) {
    params_.validate();
}

void NsStepper::step(FlowState& flow, const ChState& ch, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("ns_step: dt must be positive");
    const Grid& g = grid_;
    const PhysParams& p = params_;
    if (flow.u.nx != g.nx || flow.u.ny != g.ny)
        throw std::invalid_argument("ns_step: flow shape mismatch");

    const CellField rho = density(p, ch.phi);
    const CellField nu = viscosity(p, ch.phi);

    // CFL check (warning only).
    double umax = 0.0;
    for (double v : flow.u.u) umax = std::max(umax, std::abs(v));
    for (double v : flow.u.v) umax = std::max(umax, std::abs(v));
    if (umax * dt / std::min(g.hx, g.hy) > 1.0) ++cfl_warnings_;

    // Face densities and mass flux rho u + J (J = -1/2 (rho2-rho1) m grad mu,
    // continued onto the wall faces by the Robin flux of the CH step).
    const FaceField gmu = grad(g, ch.mu);
    const FaceField J = relative_flux(p, gmu);
    FaceField Jfull = J;
    {
        const WallField gb = wall_mass_flux(g, p, ch, Wall::Bottom);
        const WallField gt = wall_mass_flux(g, p, ch, Wall::Top);
        for (int i = 0; i < g.nx; ++i) {
            // J.n = -1/2 (rho2-rho1) g with n = (0,-1) bottom / (0,+1) top.
            Jfull.vy(i, 0) = 0.5 * (p.rho2 - p.rho1) * gb[i];
            Jfull.vy(i, g.ny) = -0.5 * (p.rho2 - p.rho1) * gt[i];
        }
    }

    std::vector<double> rho_fx(static_cast<std::size_t>(g.nx) * g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            rho_fx[g.cell(i, j)] = 0.5 * (rho(g.wrap_x(i - 1), j) + rho(i, j));
    std::vector<double> rho_fy(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            rho_fy[j * g.nx + i] = 0.5 * (rho(i, j - 1) + rho(i, j));

    // Mass flux at faces.
    FaceField M(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            M.ux(i, j) = rho_fx[g.cell(i, j)] * flow.u.ux(i, j) + Jfull.ux(i, j);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            M.vy(i, j) = rho_fy[j * g.nx + i] * flow.u.vy(i, j) + Jfull.vy(i, j);

    const WallSlip slip_b = wall_slip_data(g, p, ch, Wall::Bottom);
    const WallSlip slip_t = wall_slip_data(g, p, ch, Wall::Top);

    const VelMap vm{g.nx, g.ny};
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(9) * vm.size());
    std::vector<double> rhs(static_cast<std::size_t>(vm.size()), 0.0);

    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;
    const double ihx2 = ihx * ihx, ihy2 = ihy * ihy;

    // ---- ux momentum rows -------------------------------------------------
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = vm.iux(i, j);
            const int ip = g.wrap_x(i + 1);
            const int im = g.wrap_x(i - 1);
            const double rhof = rho_fx[g.cell(i, j)];
            double diag = rhof / dt;

            // sigma_xx fluxes: 2 nu dux/dx at the flanking cells.
            const double nuR = nu(i, j), nuL = nu(im, j);
            t_add(trips, row, vm.iux(ip, j), -2.0 * nuR * ihx2);
            t_add(trips, row, vm.iux(im, j), -2.0 * nuL * ihx2);
            diag += 2.0 * (nuR + nuL) * ihx2;

            // shear flux at the upper corner (i, j+1).
            if (j < g.ny - 1) {
                const double nc = corner_viscosity(g, nu, i, j + 1);
                t_add(trips, row, vm.iux(i, j + 1), -nc * ihy2);
                diag += nc * ihy2;
                t_add(trips, row, vm.iuy(i, j + 1), -nc * ihx * ihy);
                t_add(trips, row, vm.iuy(im, j + 1), nc * ihx * ihy);
            } else {
                const double nc = corner_viscosity(g, nu, i, g.ny);
                const double a = nc * ihy;
                const double bb = 0.5 * slip_t.gamma_eff[i];
                diag += a * slip_t.gamma_eff[i] / (a + bb) * ihy;
                rhs[row] += a * slip_t.forcing[i] / (a + bb) * ihy;
            }
            // shear flux at the lower corner (i, j).
            if (j > 0) {
                const double nc = corner_viscosity(g, nu, i, j);
                t_add(trips, row, vm.iux(i, j - 1), -nc * ihy2);
                diag += nc * ihy2;
                t_add(trips, row, vm.iuy(i, j), nc * ihx * ihy);
                t_add(trips, row, vm.iuy(im, j), -nc * ihx * ihy);
            } else {
                const double nc = corner_viscosity(g, nu, i, 0);
                const double a = nc * ihy;
                const double bb = 0.5 * slip_b.gamma_eff[i];
                diag += a * slip_b.gamma_eff[i] / (a + bb) * ihy;
                rhs[row] += a * slip_b.forcing[i] / (a + bb) * ihy;
            }
            t_add(trips, row, row, diag);

            // Explicit pieces.
            // Convection d/dx [ux Mx] + d/dy [ux My], conservative.
            auto cell_flux = [&](int a) {
                const int an = g.wrap_x(a + 1);
                const double uxc = 0.5 * (flow.u.ux(a, j) + flow.u.ux(an, j));
                const double mxc = 0.5 * (M.ux(a, j) + M.ux(an, j));
                return uxc * mxc;
            };
            auto corner_flux = [&](int jc) {
                double uxc, myc;
                if (jc == 0) {
                    uxc = flow.u.ux(i, 0);
                    myc = 0.5 * (M.vy(im, 0) + M.vy(i, 0));
                } else if (jc == g.ny) {
                    uxc = flow.u.ux(i, g.ny - 1);
                    myc = 0.5 * (M.vy(im, g.ny) + M.vy(i, g.ny));
                } else {
                    uxc = 0.5 * (flow.u.ux(i, jc - 1) + flow.u.ux(i, jc));
                    myc = 0.5 * (M.vy(im, jc) + M.vy(i, jc));
                }
                return uxc * myc;
            };
            const double conv = (cell_flux(i) - cell_flux(im)) * ihx +
                                (corner_flux(j + 1) - corner_flux(j)) * ihy;
            const double kort = 0.5 * (ch.mu(im, j) + ch.mu(i, j)) * (ch.phi(i, j) - ch.phi(im, j)) * ihx;
            const double dpx = (flow.p(i, j) - flow.p(im, j)) * ihx;
            rhs[row] += rhof / dt * flow.u.ux(i, j) - conv + kort - dpx;
        }
    }

    // ---- uy momentum rows (interior horizontal faces) ---------------------
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = vm.iuy(i, j);
            const int ip = g.wrap_x(i + 1);
            const int im = g.wrap_x(i - 1);
            const double rhof = rho_fy[j * g.nx + i];
            double diag = rhof / dt;

            // sigma_yy fluxes at the flanking cells.
            const double nuN = nu(i, j), nuS = nu(i, j - 1);
            if (j + 1 < g.ny) t_add(trips, row, vm.iuy(i, j + 1), -2.0 * nuN * ihy2);
            if (j - 1 > 0) t_add(trips, row, vm.iuy(i, j - 1), -2.0 * nuS * ihy2);
            diag += 2.0 * (nuN + nuS) * ihy2;

            // shear fluxes at corners (i, j) and (i+1, j); both interior in y.
            const double ncL = corner_viscosity(g, nu, i, j);
            const double ncR = corner_viscosity(g, nu, ip, j);
            t_add(trips, row, vm.iuy(ip, j), -ncR * ihx2);
            t_add(trips, row, vm.iuy(im, j), -ncL * ihx2);
            diag += (ncR + ncL) * ihx2;
            t_add(trips, row, vm.iux(ip, j), -ncR * ihx * ihy);
            t_add(trips, row, vm.iux(ip, j - 1), ncR * ihx * ihy);
            t_add(trips, row, vm.iux(i, j), ncL * ihx * ihy);
            t_add(trips, row, vm.iux(i, j - 1), -ncL * ihx * ihy);
            t_add(trips, row, row, diag);

            // Convection d/dx [uy Mx] + d/dy [uy My].
            auto corner_flux = [&](int a) {
                const int am = g.wrap_x(a - 1);
                const double uyc = 0.5 * (flow.u.vy(am, j) + flow.u.vy(a, j));
                const double mxc = 0.5 * (M.ux(a, j - 1) + M.ux(a, j));
                return uyc * mxc;
            };
            auto cell_flux = [&](int jc) {
                const double uyc = 0.5 * (flow.u.vy(i, jc) + flow.u.vy(i, jc + 1));
                const double myc = 0.5 * (M.vy(i, jc) + M.vy(i, jc + 1));
                return uyc * myc;
            };
            const double conv = (corner_flux(ip) - corner_flux(i)) * ihx +
                                (cell_flux(j) - cell_flux(j - 1)) * ihy;
            const double kort = 0.5 * (ch.mu(i, j - 1) + ch.mu(i, j)) * (ch.phi(i, j) - ch.phi(i, j - 1)) * ihy;
            const double dpy = (flow.p(i, j) - flow.p(i, j - 1)) * ihy;
            rhs[row] += rhof / dt * flow.u.vy(i, j) - conv + kort - dpy;
        }
    }

    SparseMatrix A(vm.size(), std::move(trips));
    SolveOptions vopts;
    vopts.method = SolveMethod::CG;
    vopts.tol = opts_.visc_tol;
    vopts.max_iter = opts_.visc_max_iter;
    const SolveResult vres = solve(A, rhs, vopts);
    if (!vres.converged()) {
        std::ostringstream msg;
        msg << "ns_step: momentum predictor failed (" << to_string(vres.status) << ", residual "
            << vres.residual << ")";
        throw SolverError(msg.str());
    }

    FaceField ustar(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) ustar.ux(i, j) = vres.x[vm.iux(i, j)];
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) ustar.vy(i, j) = vres.x[vm.iuy(i, j)];

    // ---- Projection: -div((1/rho) grad dp) = -div(u*)/dt -------------------
    std::vector<Triplet> pt;
    pt.reserve(static_cast<std::size_t>(5) * g.cell_count());
    std::vector<double> pb(static_cast<std::size_t>(g.cell_count()), 0.0);
    const CellField divu = divergence(g, ustar);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = g.cell(i, j);
            const int ip = g.wrap_x(i + 1);
            const int im = g.wrap_x(i - 1);
            double diag = 0.0;
            const double kE = 1.0 / rho_fx[g.cell(ip, j)];
            const double kW = 1.0 / rho_fx[g.cell(i, j)];
            pt.push_back({row, g.cell(ip, j), -kE * ihx2});
            pt.push_back({row, g.cell(im, j), -kW * ihx2});
            diag += (kE + kW) * ihx2;
            if (j < g.ny - 1) {
                const double kN = 1.0 / rho_fy[(j + 1) * g.nx + i];
                pt.push_back({row, g.cell(i, j + 1), -kN * ihy2});
                diag += kN * ihy2;
            }
            if (j > 0) {
                const double kS = 1.0 / rho_fy[j * g.nx + i];
                pt.push_back({row, g.cell(i, j - 1), -kS * ihy2});
                diag += kS * ihy2;
            }
            pt.push_back({row, row, diag});
            pb[row] = -divu(i, j) / dt;
        }
    }
    SparseMatrix P(g.cell_count(), std::move(pt));
    SolveOptions popts;
    popts.method = SolveMethod::CG;
    popts.tol = opts_.proj_tol;
    popts.max_iter = opts_.proj_max_iter;
    popts.remove_constant_nullspace = true;
    const SolveResult pres = solve(P, pb, popts);
    if (!pres.converged()) {
        std::ostringstream msg;
        msg << "ns_step: pressure projection failed (" << to_string(pres.status) << ", residual "
            << pres.residual << ")";
        throw SolverError(msg.str());
    }

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int im = g.wrap_x(i - 1);
            flow.u.ux(i, j) = ustar.ux(i, j) -
                              dt / rho_fx[g.cell(i, j)] * (pres.x[g.cell(i, j)] - pres.x[g.cell(im, j)]) * ihx;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            flow.u.vy(i, j) = ustar.vy(i, j) -
                              dt / rho_fy[j * g.nx + i] * (pres.x[g.cell(i, j)] - pres.x[g.cell(i, j - 1)]) * ihy;
        }
    }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) flow.p(i, j) += pres.x[g.cell(i, j)];
    // Keep the pressure mean-zero.
    double pmean = 0.0;
    for (double v : flow.p.data) pmean += v;
    pmean /= static_cast<double>(flow.p.data.size());
    for (double& v : flow.p.data) v -= pmean;
}

double kinetic_energy(const Grid& g, const FlowState& flow, const ChState& ch,
                      const PhysParams& params) {
    const CellField rho = density(params, ch.phi);
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const double uc = 0.5 * (flow.u.ux(i, j) + flow.u.ux(ip, j));
            const double vc = 0.5 * (flow.u.vy(i, j) + flow.u.vy(i, j + 1));
            e += 0.5 * rho(i, j) * (uc * uc + vc * vc);
        }
    }
    return e * g.hx * g.hy;
}

FlowState ns_step(const FlowState& flow, const ChState& ch, const Grid& grid,
                  const PhysParams& params, double dt) {
    NsStepper stepper(grid, params);
    FlowState out = flow;
    stepper.step(out, ch, dt);
    return out;
}

}  // namespace bsf
