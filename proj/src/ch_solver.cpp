#include "bsf/ch_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bsf/errors.hpp"

namespace bsf {

namespace {

// Unknown base offsets; cross-block entries are only emitted when the
// corresponding coupling coefficient is nonzero, so the surface offsets are
// never touched by a decoupled bulk assembly (and vice versa).
struct Offsets {
    int phi = 0;
    int mu = 0;
    std::array<int, 2> psi{0, 0};
    std::array<int, 2> theta{0, 0};
};

struct Coeffs {
    double m, mg, eps, delta, alpha, beta;
    double sf, sg;       // stabilization constants S_F, S_G
    double ck, cl;       // ghost Robin coefficients
    double dt;
    double imbalance;    // verification fixture, normally 0
};

void check_velocity(const Grid& g, const FaceField& u) {
    if (u.nx != g.nx || u.ny != g.ny)
        throw std::invalid_argument("ch_step: velocity shape mismatch");
    for (int i = 0; i < g.nx; ++i)
        if (u.vy(i, 0) != 0.0 || u.vy(i, g.ny) != 0.0)
            throw std::invalid_argument("ch_step: u.n must vanish on the walls");
}

// Conservative upwind divergence of phi u over the bulk.
CellField bulk_convection(const Grid& g, const CellField& phi, const FaceField& u) {
    CellField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const int im = g.wrap_x(i - 1);
            const double uw = u.ux(i, j);
            const double ue = u.ux(ip, j);
            const double fw = uw * (uw > 0.0 ? phi(im, j) : phi(i, j));
            const double fe = ue * (ue > 0.0 ? phi(i, j) : phi(ip, j));
            double fs = 0.0, fn = 0.0;
            if (j > 0) {
                const double us = u.vy(i, j);
                fs = us * (us > 0.0 ? phi(i, j - 1) : phi(i, j));
            }
            if (j < g.ny - 1) {
                const double un = u.vy(i, j + 1);
                fn = un * (un > 0.0 ? phi(i, j) : phi(i, j + 1));
            }
            out(i, j) = (fe - fw) / g.hx + (fn - fs) / g.hy;
        }
    }
    return out;
}

// Conservative upwind divergence of psi u_tau along a wall. The tangential
// edge velocity is the nearest u face value; edge i sits between nodes i-1, i.
WallField surface_convection(const Grid& g, const WallField& psi, const FaceField& u, Wall w) {
    WallField out(g);
    const int row = g.wall_row(w);
    auto edge_flux = [&](int e) {
        const double ue = u.ux(e, row);
        const int up = g.wrap_x(e - 1);
        return ue * (ue > 0.0 ? psi[up] : psi[g.wrap_x(e)]);
    };
    for (int i = 0; i < g.nx; ++i) {
        const int ip = g.wrap_x(i + 1);
        out[i] = (edge_flux(ip) - edge_flux(i)) / g.hx;
    }
    return out;
}

// Discrete Laplacian of phi including the ghost-coupling wall flux
// eps dn(phi) = ck (alpha psi - phi_adj).
CellField coupled_laplacian(const Grid& g, const CellField& phi,
                            const std::array<WallField, 2>& psi, double eps, double ck,
                            double alpha) {
    CellField out(g);
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            const int im = g.wrap_x(i - 1);
            double lap = (phi(ip, j) - 2.0 * phi(i, j) + phi(im, j)) * ihx2;
            if (j > 0) lap += (phi(i, j - 1) - phi(i, j)) * ihy2;
            if (j < g.ny - 1) lap += (phi(i, j + 1) - phi(i, j)) * ihy2;
            if (j == 0 && ck != 0.0)
                lap += ck * (alpha * psi[0][i] - phi(i, j)) / (eps * g.hy);
            if (j == g.ny - 1 && ck != 0.0)
                lap += ck * (alpha * psi[1][i] - phi(i, j)) / (eps * g.hy);
            out(i, j) = lap;
        }
    }
    return out;
}

void emit_bulk_rows(std::vector<Triplet>& t, const Grid& g, const Coeffs& c, const Offsets& o) {
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int cell = g.cell(i, j);
            const int ip = g.cell(g.wrap_x(i + 1), j);
            const int im = g.cell(g.wrap_x(i - 1), j);

            // phi evolution: dphi/dt - div(m grad mu) - wall flux = rhs
            const int r1 = o.phi + cell;
            t.push_back({r1, o.phi + cell, 1.0 / c.dt});
            double diag_mu = 2.0 * c.m * ihx2;
            t.push_back({r1, o.mu + ip, -c.m * ihx2});
            t.push_back({r1, o.mu + im, -c.m * ihx2});
            if (j > 0) {
                t.push_back({r1, o.mu + g.cell(i, j - 1), -c.m * ihy2});
                diag_mu += c.m * ihy2;
            }
            if (j < g.ny - 1) {
                t.push_back({r1, o.mu + g.cell(i, j + 1), -c.m * ihy2});
                diag_mu += c.m * ihy2;
            }
            if (c.cl != 0.0 && (j == 0 || j == g.ny - 1)) {
                const int w = (j == 0) ? 0 : 1;
                diag_mu += c.cl / g.hy;
                t.push_back({r1, o.theta[w] + i, -c.cl * c.beta / g.hy});
            }
            t.push_back({r1, o.mu + cell, diag_mu});

            // mu definition: mu + eps Lap(dphi) - (S_F/eps) dphi + coupling = rhs
            const int r2 = o.mu + cell;
            t.push_back({r2, o.mu + cell, 1.0});
            double diag_phi = -2.0 * c.eps * ihx2 - c.sf / c.eps;
            t.push_back({r2, o.phi + ip, c.eps * ihx2});
            t.push_back({r2, o.phi + im, c.eps * ihx2});
            if (j > 0) {
                t.push_back({r2, o.phi + g.cell(i, j - 1), c.eps * ihy2});
                diag_phi -= c.eps * ihy2;
            }
            if (j < g.ny - 1) {
                t.push_back({r2, o.phi + g.cell(i, j + 1), c.eps * ihy2});
                diag_phi -= c.eps * ihy2;
            }
            if (c.ck != 0.0 && (j == 0 || j == g.ny - 1)) {
                const int w = (j == 0) ? 0 : 1;
                diag_phi -= c.ck / g.hy;
                t.push_back({r2, o.psi[w] + i, c.ck * c.alpha / g.hy});
            }
            t.push_back({r2, o.phi + cell, diag_phi});
        }
    }
}

void emit_wall_rows(std::vector<Triplet>& t, const Grid& g, const Coeffs& c, const Offsets& o,
                    int w) {
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const int row = (w == 0) ? 0 : g.ny - 1;
    const double cl_eff = c.cl * (1.0 + c.imbalance);
    for (int i = 0; i < g.nx; ++i) {
        const int ip = g.wrap_x(i + 1);
        const int im = g.wrap_x(i - 1);

        // psi evolution: dpsi/dt - m_G LapG(theta) + beta g = rhs
        const int r3 = o.psi[w] + i;
        t.push_back({r3, o.psi[w] + i, 1.0 / c.dt});
        double diag_th = 2.0 * c.mg * ihx2;
        t.push_back({r3, o.theta[w] + ip, -c.mg * ihx2});
        t.push_back({r3, o.theta[w] + im, -c.mg * ihx2});
        if (c.cl != 0.0) {
            diag_th += cl_eff * c.beta * c.beta;
            t.push_back({r3, o.mu + g.cell(i, row), -cl_eff * c.beta});
        }
        t.push_back({r3, o.theta[w] + i, diag_th});

        // theta definition: theta + delta LapG(dpsi) - (S_G/delta) dpsi
        //                   - alpha ck (alpha dpsi - dphi_adj) = rhs
        const int r4 = o.theta[w] + i;
        t.push_back({r4, o.theta[w] + i, 1.0});
        double diag_psi = -2.0 * c.delta * ihx2 - c.sg / c.delta;
        t.push_back({r4, o.psi[w] + ip, c.delta * ihx2});
        t.push_back({r4, o.psi[w] + im, c.delta * ihx2});
        if (c.ck != 0.0) {
            diag_psi -= c.alpha * c.alpha * c.ck;
            t.push_back({r4, o.phi + g.cell(i, row), c.alpha * c.ck});
        }
        t.push_back({r4, o.psi[w] + i, diag_psi});
    }
}

void fill_bulk_rhs(std::vector<double>& b, const Grid& g, const Coeffs& c, const Offsets& o,
                   const ChState& s, const FaceField& u, const PotentialSpec& pot_f) {
    const CellField conv = bulk_convection(g, s.phi, u);
    const CellField lap = coupled_laplacian(g, s.phi, s.psi, c.eps, c.ck, c.alpha);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int cell = g.cell(i, j);
            b[o.phi + cell] = -conv(i, j);
            b[o.mu + cell] = potential_derivative(pot_f, s.phi(i, j)) / c.eps - c.eps * lap(i, j);
        }
    }
}

void fill_wall_rhs(std::vector<double>& b, const Grid& g, const Coeffs& c, const Offsets& o,
                   const ChState& s, const FaceField& u, const PotentialSpec& pot_g, int w) {
    const Wall wall = (w == 0) ? Wall::Bottom : Wall::Top;
    const int row = g.wall_row(wall);
    const WallField conv = surface_convection(g, s.psi[w], u, wall);
    const WallField lap = surface_laplacian(g, s.psi[w]);
    for (int i = 0; i < g.nx; ++i) {
        b[o.psi[w] + i] = -conv[i];
        b[o.theta[w] + i] = potential_derivative(pot_g, s.psi[w][i]) / c.delta -
                            c.delta * lap[i] +
                            c.alpha * c.ck * (c.alpha * s.psi[w][i] - s.phi(i, row));
    }
}

Coeffs make_coeffs(const Grid& g, const PhysParams& p, const PotentialSpec& pf,
                   const PotentialSpec& pg, double dt, double imbalance) {
    Coeffs c;
    c.m = p.mob_bulk;
    c.mg = p.mob_surf;
    c.eps = p.eps;
    c.delta = p.delta;
    c.alpha = p.alpha;
    c.beta = p.beta;
    c.sf = stabilization_constant(pf);
    c.sg = stabilization_constant(pg);
    c.ck = robin_coeff_phi(p, g.hy);
    c.cl = robin_coeff_mu(p, g.hy);
    c.dt = dt;
    c.imbalance = imbalance;
    return c;
}

Offsets full_offsets(const Grid& g) {
    const int N = g.cell_count();
    Offsets o;
    o.phi = 0;
    o.mu = N;
    o.psi = {2 * N, 2 * N + g.nx};
    o.theta = {2 * N + 2 * g.nx, 2 * N + 3 * g.nx};
    return o;
}

[[noreturn]] void solver_failed(const char* what, const SolveResult& r) {
    std::ostringstream msg;
    msg << "ch_step: " << what << " solve failed (" << to_string(r.status) << ", "
        << r.iterations << " iterations, residual " << r.residual << ")";
    throw SolverError(msg.str());
}

}  // namespace

WallField wall_mass_flux(const Grid& g, const PhysParams& p, const ChState& s, Wall wall) {
    const double cl = robin_coeff_mu(p, g.hy);
    const int w = wall_index(wall);
    const int row = g.wall_row(wall);
    WallField out(g);
    for (int i = 0; i < g.nx; ++i)
        out[i] = cl * (p.beta * s.theta[w][i] - s.mu(i, row));
    return out;
}

std::pair<SparseMatrix, std::vector<double>> assemble_ch_system(
    const ChState& state, const FaceField& u, const Grid& grid, const PhysParams& params,
    const PotentialSpec& pot_f, const PotentialSpec& pot_g, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("assemble_ch_system: dt must be positive");
    check_velocity(grid, u);
    const Coeffs c = make_coeffs(grid, params, pot_f, pot_g, dt, 0.0);
    const Offsets o = full_offsets(grid);
    const int n = 2 * grid.cell_count() + 4 * grid.nx;

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(12) * grid.cell_count());
    emit_bulk_rows(trips, grid, c, o);
    emit_wall_rows(trips, grid, c, o, 0);
    emit_wall_rows(trips, grid, c, o, 1);

    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    fill_bulk_rhs(b, grid, c, o, state, u, pot_f);
    fill_wall_rhs(b, grid, c, o, state, u, pot_g, 0);
    fill_wall_rhs(b, grid, c, o, state, u, pot_g, 1);

    return {SparseMatrix(n, std::move(trips)), std::move(b)};
}

ChStepper::ChStepper(const Grid& grid, const PhysParams& params, const PotentialSpec& pot_f,
                     const PotentialSpec& pot_g, double dt, const ChOptions& opts)
    : grid_(grid), params_(params), pot_f_(pot_f), pot_g_(pot_g), dt_(dt), opts_(opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("ChStepper: dt must be positive");
    params_.validate();
    pot_f_.validate();
    pot_g_.validate();
    stab_f_ = stabilization_constant(pot_f_);
    stab_g_ = stabilization_constant(pot_g_);
    ck_ = robin_coeff_phi(params_, grid_.hy);
    cl_ = robin_coeff_mu(params_, grid_.hy);
    decoupled_ = (ck_ == 0.0 && cl_ == 0.0);
    build_matrices();
}

void ChStepper::freeze_surface(bool frozen) {
    if (frozen && !decoupled_)
        throw std::invalid_argument("ChStepper: freezing the surface requires K = L = inf");
    surface_frozen_ = frozen;
}

void ChStepper::set_flux_imbalance(double imbalance) {
    flux_imbalance_ = imbalance;
    build_matrices();
}

void ChStepper::build_matrices() {
    const Coeffs c = make_coeffs(grid_, params_, pot_f_, pot_g_, dt_, flux_imbalance_);
    const int N = grid_.cell_count();
    if (decoupled_) {
        Offsets ob;
        ob.phi = 0;
        ob.mu = N;
        std::vector<Triplet> tb;
        emit_bulk_rows(tb, grid_, c, ob);
        bulk_ = SparseMatrix(2 * N, std::move(tb));
        for (int w = 0; w < 2; ++w) {
            Offsets ow;
            ow.psi[w] = 0;
            ow.theta[w] = grid_.nx;
            std::vector<Triplet> tw;
            emit_wall_rows(tw, grid_, c, ow, w);
            wall_[w] = SparseMatrix(2 * grid_.nx, std::move(tw));
        }
    } else {
        const Offsets o = full_offsets(grid_);
        std::vector<Triplet> t;
        t.reserve(static_cast<std::size_t>(12) * N);
        emit_bulk_rows(t, grid_, c, o);
        emit_wall_rows(t, grid_, c, o, 0);
        emit_wall_rows(t, grid_, c, o, 1);
        full_ = SparseMatrix(2 * N + 4 * grid_.nx, std::move(t));
    }
}

void ChStepper::step(ChState& state, const FaceField& u) const {
    if (state.phi.nx != grid_.nx || state.phi.ny != grid_.ny)
        throw std::invalid_argument("ch_step: state shape mismatch");
    check_velocity(grid_, u);
    if (decoupled_)
        step_decoupled(state, u);
    else
        step_coupled(state, u);
}

void ChStepper::step_coupled(ChState& state, const FaceField& u) const {
    const Coeffs c = make_coeffs(grid_, params_, pot_f_, pot_g_, dt_, flux_imbalance_);
    const Offsets o = full_offsets(grid_);
    const int N = grid_.cell_count();
    std::vector<double> b(static_cast<std::size_t>(2 * N + 4 * grid_.nx), 0.0);
    fill_bulk_rhs(b, grid_, c, o, state, u, pot_f_);
    fill_wall_rhs(b, grid_, c, o, state, u, pot_g_, 0);
    fill_wall_rhs(b, grid_, c, o, state, u, pot_g_, 1);

    SolveOptions sopts;
    sopts.method = SolveMethod::BiCGStab;
    sopts.tol = opts_.tol;
    sopts.max_iter = opts_.max_iter;
    const SolveResult r = solve(full_, b, sopts);
    if (!r.converged()) solver_failed("coupled bulk-surface", r);

    for (int k = 0; k < N; ++k) {
        state.phi.data[k] += r.x[o.phi + k];
        state.mu.data[k] = r.x[o.mu + k];
    }
    for (int w = 0; w < 2; ++w) {
        for (int i = 0; i < grid_.nx; ++i) {
            state.psi[w][i] += r.x[o.psi[w] + i];
            state.theta[w][i] = r.x[o.theta[w] + i];
        }
    }
}

void ChStepper::step_decoupled(ChState& state, const FaceField& u) const {
    const Coeffs c = make_coeffs(grid_, params_, pot_f_, pot_g_, dt_, flux_imbalance_);
    const int N = grid_.cell_count();

    Offsets ob;
    ob.phi = 0;
    ob.mu = N;
    std::vector<double> bb(static_cast<std::size_t>(2 * N), 0.0);
    fill_bulk_rhs(bb, grid_, c, ob, state, u, pot_f_);

    SolveOptions sopts;
    sopts.method = SolveMethod::BiCGStab;
    sopts.tol = opts_.tol;
    sopts.max_iter = opts_.max_iter;
    const SolveResult rb = solve(bulk_, bb, sopts);
    if (!rb.converged()) solver_failed("bulk Cahn-Hilliard", rb);
    for (int k = 0; k < N; ++k) {
        state.phi.data[k] += rb.x[k];
        state.mu.data[k] = rb.x[N + k];
    }

    if (surface_frozen_) return;

    for (int w = 0; w < 2; ++w) {
        Offsets ow;
        ow.psi[w] = 0;
        ow.theta[w] = grid_.nx;
        std::vector<double> bw(static_cast<std::size_t>(2 * grid_.nx), 0.0);
        fill_wall_rhs(bw, grid_, c, ow, state, u, pot_g_, w);
        const SolveResult rw = solve(wall_[w], bw, sopts);
        if (!rw.converged()) solver_failed(w == 0 ? "bottom-wall Cahn-Hilliard" : "top-wall Cahn-Hilliard", rw);
        for (int i = 0; i < grid_.nx; ++i) {
            state.psi[w][i] += rw.x[i];
            state.theta[w][i] = rw.x[grid_.nx + i];
        }
    }
}

ChState ch_step(const ChState& state, const FaceField& u, const Grid& grid,
                const PhysParams& params, const PotentialSpec& pot_f,
                const PotentialSpec& pot_g, double dt) {
    ChStepper stepper(grid, params, pot_f, pot_g, dt);
    ChState out = state;
    stepper.step(out, u);
    return out;
}

}  // namespace bsf
