/// @file bsflow.cpp
/// @brief Command-line driver: run simulations, validate configs, run the
///        invariant suite, and run refinement studies.
///
/// Exit codes: 0 success, 1 invariant/convergence violation, 2 solver
/// failure, 3 configuration or I/O error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsf/config.hpp"
#include "bsf/coupled.hpp"
#include "bsf/diagnostics.hpp"
#include "bsf/errors.hpp"
#include "bsf/io.hpp"

using namespace bsf;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int load_config(const std::string& path, RunConfig& cfg) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::vector<ConfigError> errors;
    if (!parse_config(text, cfg, errors)) {
        for (const auto& e : errors) {
            std::cerr << "config error";
            if (e.line > 0) std::cerr << " (line " << e.line << ")";
            std::cerr << ": " << e.message << "\n";
        }
        return 3;
    }
    return 0;
}

int cmd_run(const std::string& path) {
    RunConfig cfg;
    if (int rc = load_config(path, cfg); rc != 0) return rc;
    try {
        const Grid g = cfg.make_grid();
        State s = cfg.make_initial_state(g);
        Simulation sim(g, cfg.variant);

        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream csv(cfg.output_dir + "/timeseries.csv");
        if (!csv) {
            std::cerr << "error: cannot write to output directory " << cfg.output_dir << "\n";
            return 3;
        }
        TimeseriesWriter writer(csv);
        SnapshotWriter snaps(cfg.output_dir, cfg.source_hash);

        const long n_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.variant.dt - 1e-12));
        long last_snap = -1;
        const Observer observer = [&](long step, const State& st, const DiagnosticsRecord& r) {
            writer.write_row(r);
            const bool cadence = cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0;
            if (step == 0 || step == n_steps || cadence) {
                snaps.write(g, step, st);
                last_snap = step;
            }
        };
        const RunSummary summary = sim.run(s, cfg.t_end, observer);
        if (last_snap != n_steps) snaps.write(g, n_steps, s);
        snaps.finalize();
        if (summary.cfl_warnings > 0)
            std::cerr << "warning: CFL bound max|u| dt / h > 1 violated on "
                      << summary.cfl_warnings << " step(s)\n";
        std::cout << "completed " << summary.steps << " steps to t = " << s.time << ", wrote "
                  << cfg.output_dir << "\n";
        return 0;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_check(const std::string& path) {
    RunConfig cfg;
    if (int rc = load_config(path, cfg); rc != 0) return rc;
    const CouplingCase cc = coupling_case(cfg.variant.params);
    auto kind_name = [](CouplingKind k) {
        switch (k) {
            case CouplingKind::Dirichlet: return "Dirichlet";
            case CouplingKind::Robin: return "Robin";
            case CouplingKind::Neumann: return "Neumann";
        }
        return "?";
    };
    std::cout << "ok: " << cfg.nx << "x" << cfg.ny << " grid, variant "
              << to_string(cfg.variant.variant) << ", K case " << kind_name(cc.K_case)
              << ", L case " << kind_name(cc.L_case) << ", "
              << static_cast<long>(std::ceil(cfg.t_end / cfg.variant.dt - 1e-12))
              << " steps\n";
    return 0;
}

// ---------------------------------------------------------------------------
// invariants: quantitative checks that must hold on any valid configuration.
// ---------------------------------------------------------------------------

struct InvariantCheck {
    std::string name;
    bool pass;
    double value;
    double bound;
};

void report(std::vector<InvariantCheck>& out, const std::string& name, double value,
            double bound) {
    out.push_back({name, value <= bound, value, bound});
}

int cmd_invariants(const std::string& path) {
    RunConfig cfg;
    if (int rc = load_config(path, cfg); rc != 0) return rc;
    std::vector<InvariantCheck> checks;
    try {
        const Grid g = cfg.make_grid();
        const PhysParams& p = cfg.variant.params;

        // Discrete adjointness of grad/div on random fields.
        {
            std::mt19937_64 rng(2024);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            CellField c(g);
            for (double& v : c.data) v = dist(rng);
            FaceField v(g);
            for (double& x : v.u) x = dist(rng);
            for (int j = 1; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) v.vy(i, j) = dist(rng);
            const CellField dv = divergence(g, v);
            const FaceField gc = grad(g, c);
            double lhs = 0.0, rhs = 0.0, scale = 0.0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    lhs += dv(i, j) * c(i, j);
                    scale += std::abs(dv(i, j) * c(i, j));
                }
            for (std::size_t k = 0; k < v.u.size(); ++k) rhs -= v.u[k] * gc.u[k];
            for (std::size_t k = 0; k < v.v.size(); ++k) rhs -= v.v[k] * gc.v[k];
            report(checks, "grad-div-adjointness", std::abs(lhs - rhs) / scale, 1e-12);
        }
        // Surface summation by parts.
        {
            std::mt19937_64 rng(2025);
            std::uniform_real_distribution<double> dist(-1.0, 1.0);
            WallField w(g);
            for (double& x : w.data) x = dist(rng);
            const WallField lw = surface_laplacian(g, w);
            const WallField dw = surface_grad(g, w);
            double lhs = 0.0, rhs = 0.0, scale = 0.0;
            for (int i = 0; i < g.nx; ++i) {
                lhs += w[i] * lw[i];
                rhs -= dw[i] * dw[i];
                scale += std::abs(w[i] * lw[i]);
            }
            report(checks, "surface-summation-by-parts", std::abs(lhs - rhs) / scale, 1e-12);
        }

        // Short non-convective run: mass laws and energy decay, honoring the
        // [debug] flux_imbalance fixture if present.
        {
            VariantConfig vc = cfg.variant;
            vc.variant = Variant::NonconvectiveCH;
            Simulation sim(g, vc);
            IcParams icp = cfg.ic;
            icp.kind = IcKind::RandomSmooth;
            State s = initial_conditions(IcKind::RandomSmooth, g, p, icp);
            // Start away from wall equilibrium so transfer paths are active.
            for (int w = 0; w < 2; ++w)
                for (int i = 0; i < g.nx; ++i) s.ch.psi[w][i] += 0.2;
            const MassTotals m0 = masses(g, s.ch, p);
            double e_prev = sim.diagnostics(s).E_total;
            const double e_slack = 1e-10 * std::abs(e_prev);
            double worst_energy_rise = 0.0;
            for (int k = 0; k < 50; ++k) {
                sim.step(s);
                const double e = sim.diagnostics(s).E_total;
                worst_energy_rise = std::max(worst_energy_rise, e - e_prev);
                e_prev = e;
            }
            const MassTotals m1 = masses(g, s.ch, p);
            const double area = g.Lx * g.Ly + 2.0 * g.Lx;
            report(checks, "combined-mass-conservation", std::abs(m1.combined - m0.combined),
                   1e-11 * area);
            if (std::isinf(p.L)) {
                report(checks, "separate-bulk-mass", std::abs(m1.bulk - m0.bulk),
                       1e-11 * g.Lx * g.Ly);
                report(checks, "separate-surface-mass", std::abs(m1.surf_total - m0.surf_total),
                       1e-11 * 2.0 * g.Lx);
            }
            report(checks, "energy-decay", worst_energy_rise, e_slack);
        }

        // Coupled incompressibility after projection.
        if (cfg.variant.variant != Variant::NonconvectiveCH) {
            Simulation sim(g, cfg.variant);
            State s = cfg.make_initial_state(g);
            for (int k = 0; k < 10; ++k) sim.step(s);
            const auto r = incompressibility_residuals(g, s.flow);
            report(checks, "incompressibility", r.r_div, 10.0 * cfg.variant.ns_opts.proj_tol);
        }
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    }

    bool all_pass = true;
    for (const auto& c : checks) {
        std::printf("%-28s %s   value %.3e  bound %.3e\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.value, c.bound);
        all_pass = all_pass && c.pass;
    }
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// convergence: refinement studies, printing observed orders.
// ---------------------------------------------------------------------------

int cmd_convergence(const std::string& path) {
    RunConfig cfg;
    if (int rc = load_config(path, cfg); rc != 0) return rc;
    const PhysParams& p = cfg.variant.params;
    bool ok = true;
    auto judge = [&](const char* name, double order, double lo, double hi) {
        const bool pass = order >= lo && order <= hi;
        std::printf("%-34s order %.3f   band [%.2f, %.2f]  %s\n", name, order, lo, hi,
                    pass ? "PASS" : "FAIL");
        ok = ok && pass;
    };

    // Spatial order of the gradient stencil.
    {
        auto err = [](int n) {
            const Grid g = build_grid(n, n, 1.0, 1.0);
            CellField c(g);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    c(i, j) = std::sin(2.0 * M_PI * g.x_center(i)) * std::cos(M_PI * g.y_center(j));
            const FaceField gc = grad(g, c);
            double e = 0.0;
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double exact = 2.0 * M_PI * std::cos(2.0 * M_PI * g.x_face(i)) *
                                         std::cos(M_PI * g.y_center(j));
                    e = std::max(e, std::abs(gc.ux(i, j) - exact));
                }
            return e;
        };
        judge("gradient-stencil", std::log2(err(16) / err(32)), 1.7, 2.3);
    }

    // Spatial self-convergence of the non-convective CH solution.
    {
        const double dt = 2e-5;
        const int steps = 40;
        auto solve_phi = [&](int n) {
            const Grid g = build_grid(n, n, cfg.Lx, cfg.Ly);
            IcParams icp = cfg.ic;
            icp.kind = IcKind::RandomSmooth;
            State s = initial_conditions(IcKind::RandomSmooth, g, p, icp);
            ChStepper stepper(g, p, cfg.variant.pot_f, cfg.variant.pot_g, dt);
            const FaceField u(g);
            for (int k = 0; k < steps; ++k) stepper.step(s.ch, u);
            return s.ch.phi;
        };
        const CellField c32 = solve_phi(32);
        const CellField c64 = solve_phi(64);
        const CellField c128 = solve_phi(128);
        auto restrict2 = [](const CellField& fine) {
            CellField out(fine.nx / 2, fine.ny / 2);
            for (int j = 0; j < out.ny; ++j)
                for (int i = 0; i < out.nx; ++i)
                    out(i, j) = 0.25 * (fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j) +
                                        fine(2 * i, 2 * j + 1) + fine(2 * i + 1, 2 * j + 1));
            return out;
        };
        auto l2diff = [](const CellField& a, const CellField& b) {
            double s2 = 0.0;
            for (std::size_t k = 0; k < a.data.size(); ++k) {
                const double d = a.data[k] - b.data[k];
                s2 += d * d;
            }
            return std::sqrt(s2 / a.data.size());
        };
        const double e1 = l2diff(c32, restrict2(c64));
        const double e2 = l2diff(c64, restrict2(c128));
        judge("ch-spatial-self-convergence", std::log2(e1 / e2), 1.7, 2.3);
    }

    // Temporal self-convergence of the coupled stepper.
    {
        const Grid g = build_grid(32, 32, cfg.Lx, cfg.Ly);
        const double T = 64e-4;
        auto final_phi = [&](double dt) {
            VariantConfig vc = cfg.variant;
            vc.variant = Variant::FullBulkSurface;
            vc.dt = dt;
            State s = initial_conditions(IcKind::DropletOnWall, g, p,
                                         {IcKind::DropletOnWall, 0.25});
            Simulation sim(g, vc);
            sim.run(s, T, nullptr);
            return s.ch.phi;
        };
        const CellField a = final_phi(4e-4);
        const CellField b = final_phi(2e-4);
        const CellField c = final_phi(1e-4);
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t k = 0; k < a.data.size(); ++k) {
            e1 += (a.data[k] - b.data[k]) * (a.data[k] - b.data[k]);
            e2 += (b.data[k] - c.data[k]) * (b.data[k] - c.data[k]);
        }
        judge("coupled-temporal-self-convergence", std::log2(std::sqrt(e1 / e2)), 0.7, 1.3);
    }

    // Formulation-equivalence residual.
    {
        auto resid = [&](int n) {
            const Grid g = build_grid(n, n, 1.0, 1.0);
            CellField phi(g);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i)
                    phi(i, j) =
                        std::sin(2.0 * M_PI * g.x_center(i)) * std::sin(M_PI * g.y_center(j));
            std::array<WallField, 2> psi{WallField(g), WallField(g)};
            for (Wall wall : kWalls) {
                const WallField tr = wall_trace(g, phi, wall);
                for (int i = 0; i < g.nx; ++i)
                    psi[wall_index(wall)][i] = p.alpha != 0.0 ? tr[i] / p.alpha : 0.0;
            }
            return formulation_residual(g, phi, psi, p, cfg.variant.pot_f, cfg.variant.pot_g)
                .total();
        };
        const double r32 = resid(32), r64 = resid(64), r128 = resid(128);
        const double order = 0.5 * (std::log2(r32 / r64) + std::log2(r64 / r128));
        judge("formulation-residual", order, 1.0, 3.0);
    }

    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bsflow: two-phase channel flow with bulk-surface Cahn-Hilliard dynamics"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "integrate a configuration and write outputs");
    run->add_option("config", config_path, "config file")->required();
    auto* check = app.add_subcommand("check", "validate a configuration");
    check->add_option("config", config_path, "config file")->required();
    auto* inv = app.add_subcommand("invariants", "run the invariant suite");
    inv->add_option("config", config_path, "config file")->required();
    auto* conv = app.add_subcommand("convergence", "run refinement studies");
    conv->add_option("config", config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path);
    if (check->parsed()) return cmd_check(config_path);
    if (inv->parsed()) return cmd_invariants(config_path);
    if (conv->parsed()) return cmd_convergence(config_path);
    return 1;
}
