#include "bsf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace bsf {

const std::array<const char*, kDiagnosticsFieldCount> kDiagnosticsFieldNames = {
    "E_total",   "E_kinetic", "E_bulk_GL", "E_surf_GL", "E_penalty", "D_visc",
    "D_slip",    "D_bulk_mob", "D_surf_mob", "D_robin",  "M_bulk",    "M_surf",
    "M_combined", "R_div",    "R_sdiv",    "R_form",    "contact_angle_deg",
    "band_violation"};

namespace {

// Compensated accumulator; the mass invariants are checked to 1e-11.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

double wall_tangential_velocity(const Grid& g, const FlowState& flow, Wall w, int i) {
    return flow.u.ux(i, g.wall_row(w));
}

}  // namespace

EnergyBreakdown total_energy(const Grid& g, const FlowState& flow, const ChState& ch,
                             const PhysParams& p, const PotentialSpec& pot_f,
                             const PotentialSpec& pot_g) {
    EnergyBreakdown e;
    e.kinetic = kinetic_energy(g, flow, ch, p);

    Kahan bulk;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            bulk.add(potential_value(pot_f, ch.phi(i, j)) / p.eps);
    const FaceField gphi = grad(g, ch.phi);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            bulk.add(0.5 * p.eps * gphi.ux(i, j) * gphi.ux(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            bulk.add(0.5 * p.eps * gphi.vy(i, j) * gphi.vy(i, j));
    e.bulk_gl = bulk.sum * g.hx * g.hy;

    Kahan surf, pen;
    const double hk = h_of_K(p.K);
    for (Wall wall : kWalls) {
        const int w = wall_index(wall);
        const WallField dpsi = surface_grad(g, ch.psi[w]);
        const WallField tr = wall_trace(g, ch.phi, wall);
        for (int i = 0; i < g.nx; ++i) {
            surf.add(potential_value(pot_g, ch.psi[w][i]) / p.delta +
                     0.5 * p.delta * dpsi[i] * dpsi[i]);
            const double gap = p.alpha * ch.psi[w][i] - tr[i];
            pen.add(0.5 * hk * gap * gap);
        }
    }
    e.surf_gl = surf.sum * g.hx;
    e.penalty = pen.sum * g.hx;
    return e;
}

DissipationRates dissipation_terms(const Grid& g, const FlowState& flow, const ChState& ch,
                                   const PhysParams& p) {
    DissipationRates d;
    const CellField nu = viscosity(p, ch.phi);

    // 2 nu |Du|^2 = 2 nu [(dux/dx)^2 + (duy/dy)^2] + nu (dux/dy + duy/dx)^2;
    // diagonal parts at cells, shear part at interior corners.
    Kahan visc;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const double dux = (flow.u.ux(ip, j) - flow.u.ux(i, j)) / g.hx;
            const double dvy = (flow.u.vy(i, j + 1) - flow.u.vy(i, j)) / g.hy;
            visc.add(2.0 * nu(i, j) * (dux * dux + dvy * dvy));
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int im = g.wrap_x(i - 1);
            const double nc = 0.25 * (nu(im, j - 1) + nu(i, j - 1) + nu(im, j) + nu(i, j));
            const double shear = (flow.u.ux(i, j) - flow.u.ux(i, j - 1)) / g.hy +
                                 (flow.u.vy(i, j) - flow.u.vy(im, j)) / g.hx;
            visc.add(nc * shear * shear);
        }
    }
    d.visc = visc.sum * g.hx * g.hy;

    Kahan slip, bulk_mob, surf_mob, robin;
    const FaceField gmu = grad(g, ch.mu);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            bulk_mob.add(p.mob_bulk * gmu.ux(i, j) * gmu.ux(i, j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            bulk_mob.add(p.mob_bulk * gmu.vy(i, j) * gmu.vy(i, j));
    d.bulk_mob = bulk_mob.sum * g.hx * g.hy;

    const double hl = h_of_K(p.L);
    for (Wall wall : kWalls) {
        const int w = wall_index(wall);
        for (int i = 0; i < g.nx; ++i) {
            const double ut = wall_tangential_velocity(g, flow, wall, i);
            slip.add(p.gamma_tau * ut * ut);
        }
        const WallField dth = surface_grad(g, ch.theta[w]);
        for (int i = 0; i < g.nx; ++i) surf_mob.add(p.mob_surf * dth[i] * dth[i]);
        const WallField trmu = wall_trace(g, ch.mu, wall);
        for (int i = 0; i < g.nx; ++i) {
            const double gap = p.beta * ch.theta[w][i] - trmu[i];
            robin.add(hl * gap * gap);
        }
    }
    d.slip = slip.sum * g.hx;
    d.surf_mob = surf_mob.sum * g.hx;
    d.robin = robin.sum * g.hx;
    return d;
}

MassTotals masses(const Grid& g, const ChState& ch, const PhysParams& p) {
    MassTotals m;
    Kahan bulk;
    for (double v : ch.phi.data) bulk.add(v);
    m.bulk = bulk.sum * g.hx * g.hy;
    for (Wall wall : kWalls) {
        const int w = wall_index(wall);
        Kahan s;
        for (int i = 0; i < g.nx; ++i) s.add(ch.psi[w][i]);
        m.surf[w] = s.sum * g.hx;
    }
    m.surf_total = m.surf[0] + m.surf[1];
    m.combined = p.beta * m.bulk + m.surf_total;
    return m;
}

FormulationResidual formulation_residual(const Grid& g, const CellField& phi,
                                         const std::array<WallField, 2>& psi,
                                         const PhysParams& p, const PotentialSpec& pot_f,
                                         const PotentialSpec& pot_g) {
    FormulationResidual out;
    const FaceField gphi = grad(g, phi);
    const double ihx = 1.0 / g.hx, ihy = 1.0 / g.hy;

    // mu and f = eps/2 |grad phi|^2 + F(phi)/eps recomputed at cells with
    // full interior stencils (rows 1 .. ny-2).
    CellField mu_hat(g), f_hat(g), phix2(g);
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const int im = g.wrap_x(i - 1);
            const double lap = (phi(ip, j) - 2.0 * phi(i, j) + phi(im, j)) * ihx * ihx +
                               (phi(i, j + 1) - 2.0 * phi(i, j) + phi(i, j - 1)) * ihy * ihy;
            mu_hat(i, j) = -p.eps * lap + potential_derivative(pot_f, phi(i, j)) / p.eps;
            const double gx2 = 0.5 * (gphi.ux(i, j) * gphi.ux(i, j) + gphi.ux(ip, j) * gphi.ux(ip, j));
            const double gy2 = 0.5 * (gphi.vy(i, j) * gphi.vy(i, j) +
                                      gphi.vy(i, j + 1) * gphi.vy(i, j + 1));
            f_hat(i, j) = 0.5 * p.eps * (gx2 + gy2) + potential_value(pot_f, phi(i, j)) / p.eps;
            const double gxc = 0.5 * (gphi.ux(i, j) + gphi.ux(ip, j));
            phix2(i, j) = gxc * gxc;
        }
    }

    // x-face residual on rows 2 .. ny-3 (needs two flanking interior cells).
    Kahan acc;
    auto corner_cross = [&](int i, int jc) {
        // phi_x phi_y at corner (i, jc), jc in [1, ny-1].
        const int im = g.wrap_x(i - 1);
        const double px = 0.5 * (gphi.ux(i, jc - 1) + gphi.ux(i, jc));
        const double py = 0.5 * (gphi.vy(im, jc) + gphi.vy(i, jc));
        return px * py;
    };
    for (int j = 2; j < g.ny - 2; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int im = g.wrap_x(i - 1);
            const double v1 = 0.5 * (mu_hat(im, j) + mu_hat(i, j)) * gphi.ux(i, j) -
                              (f_hat(i, j) - f_hat(im, j)) * ihx;
            const double v2 = -p.eps * ((phix2(i, j) - phix2(im, j)) * ihx +
                                        (corner_cross(i, j + 1) - corner_cross(i, j)) * ihy);
            const double r = v1 - v2;
            acc.add(r * r);
        }
    }
    // y-face residual on faces 2 .. ny-2.
    for (int j = 2; j < g.ny - 1; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const double v1 = 0.5 * (mu_hat(i, j - 1) + mu_hat(i, j)) * gphi.vy(i, j) -
                              (f_hat(i, j) - f_hat(i, j - 1)) * ihy;
            const double gyc_lo = 0.5 * (gphi.vy(i, j - 1) + gphi.vy(i, j));
            const double gyc_hi = 0.5 * (gphi.vy(i, j) + gphi.vy(i, j + 1));
            const double phiy2_lo = gyc_lo * gyc_lo;
            const double phiy2_hi = gyc_hi * gyc_hi;
            // corners flanking this y-face horizontally: (i, j) and (i+1, j)
            const double v2 = -p.eps * ((corner_cross(ip, j) - corner_cross(i, j)) * ihx +
                                        (phiy2_hi - phiy2_lo) * ihy);
            const double r = v1 - v2;
            acc.add(r * r);
        }
    }
    out.bulk = std::sqrt(acc.sum * g.hx * g.hy);

    // Wall identity: [theta Dpsi - Dg] = [eps dn(phi) D(tr phi) - delta D(|Dpsi|^2)
    //                 + (eps dn(phi) - h(K)(alpha psi - tr phi)) (alpha Dpsi - D tr phi)]
    const double hk = h_of_K(p.K);
    Kahan wacc;
    for (Wall wall : kWalls) {
        const int w = wall_index(wall);
        const WallField dn = normal_derivative(g, phi, wall);
        const WallField tr = wall_trace(g, phi, wall);
        const WallField lap = surface_laplacian(g, psi[w]);
        const WallField dpsi = surface_grad(g, psi[w]);
        const WallField dtr = surface_grad(g, tr);
        WallField theta_hat(g), g_hat(g), q_node(g);
        for (int i = 0; i < g.nx; ++i) {
            theta_hat[i] = -p.delta * lap[i] + potential_derivative(pot_g, psi[w][i]) / p.delta +
                           p.alpha * p.eps * dn[i];
            const int im = g.wrap_x(i - 1);
            q_node[i] = 0.5 * (dpsi[im] * dpsi[im] + dpsi[i] * dpsi[i]);
            const double gap = p.alpha * psi[w][i] - tr[i];
            g_hat[i] = 0.5 * p.delta * q_node[i] + potential_value(pot_g, psi[w][i]) / p.delta +
                       0.5 * hk * gap * gap;
        }
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const double lhs = 0.5 * (theta_hat[i] + theta_hat[ip]) * dpsi[i] -
                               (g_hat[ip] - g_hat[i]) * ihx;
            const double dn_e = 0.5 * p.eps * (dn[i] + dn[ip]);
            const double gap_e = 0.5 * ((p.alpha * psi[w][i] - tr[i]) +
                                        (p.alpha * psi[w][ip] - tr[ip]));
            const double W = dn_e - hk * gap_e;
            const double rhs = dn_e * dtr[i] - p.delta * (q_node[ip] - q_node[i]) * ihx +
                               W * (p.alpha * dpsi[i] - dtr[i]);
            const double r = lhs - rhs;
            wacc.add(r * r);
        }
    }
    out.wall = std::sqrt(wacc.sum * g.hx);
    return out;
}

std::optional<double> contact_angle(const Grid& g, const CellField& phi, Wall wall) {
    const int j0 = g.wall_row(wall);
    const int j1 = j0 + ((wall == Wall::Bottom) ? 1 : -1);

    auto crossings = [&](int j) {
        std::vector<std::pair<double, double>> out;  // (x position, sign of phi left of it)
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const double a = phi(i, j);
            const double b = phi(ip, j);
            if (a * b < 0.0) {
                const double x = g.x_center(i) + g.hx * a / (a - b);
                out.emplace_back(x, a);
            }
        }
        return out;
    };

    const auto c0 = crossings(j0);
    const auto c1 = crossings(j1);
    if (c0.empty() || c1.empty()) return std::nullopt;

    auto wrap = [&](double dx) {
        while (dx > 0.5 * g.Lx) dx -= g.Lx;
        while (dx < -0.5 * g.Lx) dx += g.Lx;
        return dx;
    };

    double sum = 0.0;
    int count = 0;
    for (const auto& [x0, left_phi] : c0) {
        double best_dx = 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [x1, s1] : c1) {
            const double dx = wrap(x1 - x0);
            if (std::abs(dx) < best) {
                best = std::abs(dx);
                best_dx = dx;
            }
        }
        const double A = std::atan2(g.hy, best_dx) * 180.0 / M_PI;
        // Angle measured through the phi > 0 side.
        sum += (left_phi > 0.0) ? (180.0 - A) : A;
        ++count;
    }
    return sum / count;
}

IncompressibilityResiduals incompressibility_residuals(const Grid& g, const FlowState& flow) {
    IncompressibilityResiduals r;
    const CellField d = divergence(g, flow.u);
    for (double v : d.data) r.r_div = std::max(r.r_div, std::abs(v));
    for (Wall wall : kWalls) {
        const int row = g.wall_row(wall);
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const double sdiv = (flow.u.ux(ip, row) - flow.u.ux(i, row)) / g.hx;
            r.r_sdiv = std::max(r.r_sdiv, std::abs(sdiv));
        }
    }
    return r;
}

double band_violation(const ChState& ch) {
    double m = 0.0;
    for (double v : ch.phi.data) m = std::max(m, std::abs(v));
    for (int w = 0; w < 2; ++w)
        for (double v : ch.psi[w].data) m = std::max(m, std::abs(v));
    return std::max(0.0, m - 1.0);
}

DiagnosticsRecord compute_diagnostics(const Grid& g, double time, const FlowState& flow,
                                      const ChState& ch, const PhysParams& p,
                                      const PotentialSpec& pot_f, const PotentialSpec& pot_g) {
    DiagnosticsRecord r;
    r.time = time;
    const EnergyBreakdown e = total_energy(g, flow, ch, p, pot_f, pot_g);
    r.E_kinetic = e.kinetic;
    r.E_bulk_GL = e.bulk_gl;
    r.E_surf_GL = e.surf_gl;
    r.E_penalty = e.penalty;
    r.E_total = e.total();
    const DissipationRates d = dissipation_terms(g, flow, ch, p);
    r.D_visc = d.visc;
    r.D_slip = d.slip;
    r.D_bulk_mob = d.bulk_mob;
    r.D_surf_mob = d.surf_mob;
    r.D_robin = d.robin;
    const MassTotals m = masses(g, ch, p);
    r.M_bulk = m.bulk;
    r.M_surf = m.surf_total;
    r.M_combined = m.combined;
    const IncompressibilityResiduals ir = incompressibility_residuals(g, flow);
    r.R_div = ir.r_div;
    r.R_sdiv = ir.r_sdiv;
    const FormulationResidual fr = formulation_residual(g, ch.phi, ch.psi, p, pot_f, pot_g);
    r.R_form = fr.total();
    const auto angle = contact_angle(g, ch.phi, Wall::Bottom);
    r.contact_angle_deg = angle.value_or(-1.0);
    r.band_violation = band_violation(ch);
    return r;
}

}  // namespace bsf
