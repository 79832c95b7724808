#include "bsf/coupled.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "bsf/errors.hpp"

namespace bsf {

namespace {

PhysParams effective_params(const VariantConfig& cfg) {
    PhysParams p = cfg.params;
    if (cfg.variant == Variant::NeumannAGG) {
        p.K = kInf;
        p.L = kInf;
    }
    return p;
}

bool all_finite(const State& s) {
    auto ok = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    return ok(s.ch.phi.data) && ok(s.ch.mu.data) && ok(s.flow.p.data) && ok(s.flow.u.u) &&
           ok(s.flow.u.v) && ok(s.ch.psi[0].data) && ok(s.ch.psi[1].data) &&
           ok(s.ch.theta[0].data) && ok(s.ch.theta[1].data);
}

}  // namespace

State initial_conditions(IcKind kind, const Grid& g, const PhysParams& params,
                         const IcParams& icp) {
    State s(g);
    const double w = std::sqrt(2.0) * params.eps;

    switch (kind) {
        case IcKind::DropletOnWall: {
            const double r0 = icp.radius;
            if (!(r0 > 0.0) || r0 >= g.Ly || 2.0 * r0 >= g.Lx)
                throw std::invalid_argument("initial_conditions: droplet radius exceeds the domain");
            const double xc = 0.5 * g.Lx;
            for (int j = 0; j < g.ny; ++j) {
                for (int i = 0; i < g.nx; ++i) {
                    double dx = std::abs(g.x_center(i) - xc);
                    dx = std::min(dx, g.Lx - dx);
                    const double r = std::hypot(dx, g.y_center(j));
                    s.ch.phi(i, j) = std::tanh((r0 - r) / w);
                }
            }
            break;
        }
        case IcKind::Stratified: {
            const double yif = icp.interface_y > 0.0 ? icp.interface_y : 0.5 * g.Ly;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    s.ch.phi(i, j) = std::tanh((g.y_center(j) - yif) / w);
            break;
        }
        case IcKind::RandomSmooth: {
            // Band-limited modes with grid-independent coefficients: the same
            // seed gives the same continuum field on every resolution, and
            // every mode has exactly zero discrete mean.
            std::mt19937_64 rng(icp.seed);
            std::uniform_real_distribution<double> amp(-1.0, 1.0);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
            struct Mode {
                int kx, ky;
                double a, px;
            };
            std::vector<Mode> modes;
            double weight = 0.0;
            for (int kx = 0; kx <= icp.modes; ++kx) {
                for (int ky = 0; ky <= icp.modes; ++ky) {
                    if (kx == 0 && ky == 0) continue;
                    Mode m{kx, ky, amp(rng), phase(rng)};
                    modes.push_back(m);
                    weight += std::abs(m.a);
                }
            }
            const double scale = icp.amplitude / weight;
            for (int j = 0; j < g.ny; ++j) {
                for (int i = 0; i < g.nx; ++i) {
                    double v = icp.mean;
                    for (const Mode& m : modes) {
                        v += scale * m.a *
                             std::cos(2.0 * M_PI * m.kx * g.x_center(i) / g.Lx + m.px) *
                             std::cos(M_PI * m.ky * g.y_center(j) / g.Ly);
                    }
                    s.ch.phi(i, j) = v;
                }
            }
            break;
        }
    }

    for (Wall wall : kWalls) {
        const int w_ix = wall_index(wall);
        if (params.alpha != 0.0) {
            const WallField tr = wall_trace(g, s.ch.phi, wall);
            for (int i = 0; i < g.nx; ++i) s.ch.psi[w_ix][i] = tr[i] / params.alpha;
        } else {
            for (int i = 0; i < g.nx; ++i) s.ch.psi[w_ix][i] = 0.0;
        }
    }
    return s;
}

Simulation::Simulation(const Grid& grid, const VariantConfig& cfg)
    : grid_(grid),
      cfg_(cfg),
      ch_(grid, effective_params(cfg), cfg.pot_f, cfg.pot_g, cfg.dt, cfg.ch_opts),
      ns_(grid, effective_params(cfg), cfg.ns_opts),
      zero_u_(grid) {
    if (cfg.variant == Variant::NeumannAGG) ch_.freeze_surface(true);
    if (cfg.flux_imbalance != 0.0) ch_.set_flux_imbalance(cfg.flux_imbalance);
}

void Simulation::step(State& s) {
    try {
        if (cfg_.variant == Variant::NonconvectiveCH)
            ch_.step(s.ch, zero_u_);
        else
            ch_.step(s.ch, s.flow.u);
    } catch (const SolverError& e) {
        throw SolverError(std::string("ch stage: ") + e.what());
    }
    if (cfg_.variant != Variant::NonconvectiveCH) {
        try {
            ns_.step(s.flow, s.ch, cfg_.dt);
        } catch (const SolverError& e) {
            throw SolverError(std::string("ns stage: ") + e.what());
        }
    }
    s.time += cfg_.dt;
}

RunSummary Simulation::run(State& s, double t_end, const Observer& observer) {
    if (t_end < 0.0) throw std::invalid_argument("run: t_end must be nonnegative");
    if (cfg_.variant == Variant::NeumannAGG) {
        // Freeze the surface at the pure phase nearest the initial data.
        for (int w = 0; w < 2; ++w) {
            double mean = 0.0;
            for (int i = 0; i < grid_.nx; ++i) mean += s.ch.psi[w][i];
            const double v = (mean >= 0.0) ? 1.0 : -1.0;
            for (int i = 0; i < grid_.nx; ++i) {
                s.ch.psi[w][i] = v;
                s.ch.theta[w][i] = 0.0;
            }
        }
    }

    const long n_steps = static_cast<long>(std::ceil(t_end / cfg_.dt - 1e-12));
    RunSummary summary;
    if (observer) {
        observer(0, s, diagnostics(s));
        ++summary.observer_calls;
    }
    for (long k = 1; k <= n_steps; ++k) {
        try {
            step(s);
        } catch (const SolverError& e) {
            std::ostringstream msg;
            msg << "step " << k << ": " << e.what();
            throw SolverError(msg.str());
        }
        if (!all_finite(s)) {
            std::ostringstream msg;
            msg << "run: non-finite field values at step " << k;
            throw std::runtime_error(msg.str());
        }
        ++summary.steps;
        if (observer && cfg_.diag_every > 0 && k % cfg_.diag_every == 0) {
            observer(k, s, diagnostics(s));
            ++summary.observer_calls;
        }
    }
    summary.cfl_warnings = ns_.cfl_warnings();
    summary.final_time = s.time;
    return summary;
}

DiagnosticsRecord Simulation::diagnostics(const State& s) const {
    return compute_diagnostics(grid_, s.time, s.flow, s.ch, effective_params(cfg_), cfg_.pot_f,
                               cfg_.pot_g);
}

}  // namespace bsf
