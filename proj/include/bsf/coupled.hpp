/// @file coupled.hpp
/// @brief Full time steps (CH then NS, Lie splitting), variant selection,
///        initial conditions and trajectory production.

#pragma once

#include <functional>
#include <string>

#include "bsf/ch_solver.hpp"
#include "bsf/diagnostics.hpp"
#include "bsf/grid.hpp"
#include "bsf/model.hpp"
#include "bsf/ns_solver.hpp"
#include "bsf/potentials.hpp"

namespace bsf {

struct State {
    double time = 0.0;
    FlowState flow;
    ChState ch;

    State() = default;
    explicit State(const Grid& g) : flow(g), ch(g) {}
};

enum class Variant { FullBulkSurface, NeumannAGG, NonconvectiveCH };

/// NeumannAGG forces K = L = inf and freezes psi at +-1 (theta = 0);
/// NonconvectiveCH disables the flow solver (u stays 0).
struct VariantConfig {
    Variant variant = Variant::FullBulkSurface;
    PhysParams params;
    PotentialSpec pot_f;
    PotentialSpec pot_g;
    double dt = 1e-4;
    int diag_every = 1;
    ChOptions ch_opts;
    NsOptions ns_opts;
    double flux_imbalance = 0.0;  // verification fixture, see ChStepper
};

enum class IcKind { DropletOnWall, Stratified, RandomSmooth };

struct IcParams {
    IcKind kind = IcKind::Stratified;
    double radius = 0.25;       // droplet_on_wall
    double interface_y = -1.0;  // stratified; negative selects Ly/2
    double amplitude = 0.1;     // random_smooth
    double mean = 0.0;          // random_smooth
    unsigned long seed = 1234;
    int modes = 4;              // random_smooth band limit
};

/// Builds the initial state: phi per the chosen profile, psi the trace of
/// phi divided by alpha (zero when alpha = 0), u = 0, p = 0.
State initial_conditions(IcKind kind, const Grid& g, const PhysParams& params,
                         const IcParams& icp = {});

struct RunSummary {
    long steps = 0;
    long observer_calls = 0;
    long cfl_warnings = 0;
    double final_time = 0.0;
};

using Observer = std::function<void(long step, const State&, const DiagnosticsRecord&)>;

/// Owns the per-variant steppers; the CH matrix is assembled once.
class Simulation {
public:
    Simulation(const Grid& grid, const VariantConfig& cfg);

    /// One full step: (1) CH with the current velocity, (2) NS with the
    /// updated CH fields. Sub-solver failures carry the stage name.
    void step(State& s);

    /// Integrates to t_end (ceil(t_end/dt) steps), emitting diagnostics at
    /// step 0 and every diag_every steps. Aborts on non-finite fields.
    RunSummary run(State& s, double t_end, const Observer& observer);

    DiagnosticsRecord diagnostics(const State& s) const;
    const Grid& grid() const { return grid_; }
    const VariantConfig& config() const { return cfg_; }

private:
    Grid grid_;
    VariantConfig cfg_;
    ChStepper ch_;
    NsStepper ns_;
    FaceField zero_u_;
};

}  // namespace bsf
