#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bsf/ch_solver.hpp"
#include "bsf/coupled.hpp"
#include "bsf/diagnostics.hpp"
#include "bsf/grid.hpp"
#include "bsf/model.hpp"
#include "test_support.hpp"

using namespace bsf;
using namespace bsf::test;

namespace {

ChState uniform_state(const Grid& g, double phi, double psi) {
    ChState s(g);
    for (double& v : s.phi.data) v = phi;
    for (int w = 0; w < 2; ++w)
        for (double& v : s.psi[w].data) v = psi;
    return s;
}

ChState smooth_state(const Grid& g, const PhysParams& p, unsigned seed) {
    const IcParams icp{IcKind::RandomSmooth, 0.25, -1.0, 0.1, 0.0, seed, 3};
    return initial_conditions(IcKind::RandomSmooth, g, p, icp).ch;
}

double combined_mass(const Grid& g, const ChState& s, const PhysParams& p) {
    return masses(g, s, p).combined;
}

// Reference assembly of the pure Neumann bulk system (homogeneous Neumann
// conditions on phi and mu), written independently of the production
// assembler. Unknowns [dphi; mu], same ordering.
std::pair<SparseMatrix, std::vector<double>> reference_neumann_system(
    const Grid& g, const PhysParams& p, const PotentialSpec& pf, const ChState& s, double dt) {
    const int N = g.cell_count();
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    const double m = p.mob_bulk;
    const double sf = stabilization_constant(pf);
    std::vector<Triplet> t;
    std::vector<double> b(static_cast<std::size_t>(2 * N), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int c = g.cell(i, j);
            const int e = g.cell(g.wrap_x(i + 1), j);
            const int w = g.cell(g.wrap_x(i - 1), j);
            // phi row.
            t.push_back({c, c, 1.0 / dt});
            double dmu = 2.0 * m * ihx2;
            t.push_back({c, N + e, -m * ihx2});
            t.push_back({c, N + w, -m * ihx2});
            if (j > 0) {
                t.push_back({c, N + g.cell(i, j - 1), -m * ihy2});
                dmu += m * ihy2;
            }
            if (j < g.ny - 1) {
                t.push_back({c, N + g.cell(i, j + 1), -m * ihy2});
                dmu += m * ihy2;
            }
            t.push_back({c, N + c, dmu});
            // mu row.
            t.push_back({N + c, N + c, 1.0});
            double dphi = -2.0 * p.eps * ihx2 - sf / p.eps;
            t.push_back({N + c, e, p.eps * ihx2});
            t.push_back({N + c, w, p.eps * ihx2});
            double lap = (s.phi(g.wrap_x(i + 1), j) - 2.0 * s.phi(i, j) + s.phi(g.wrap_x(i - 1), j)) * ihx2;
            if (j > 0) {
                t.push_back({N + c, g.cell(i, j - 1), p.eps * ihy2});
                dphi -= p.eps * ihy2;
                lap += (s.phi(i, j - 1) - s.phi(i, j)) * ihy2;
            }
            if (j < g.ny - 1) {
                t.push_back({N + c, g.cell(i, j + 1), p.eps * ihy2});
                dphi -= p.eps * ihy2;
                lap += (s.phi(i, j + 1) - s.phi(i, j)) * ihy2;
            }
            t.push_back({N + c, c, dphi});
            b[c] = 0.0;  // u = 0
            b[N + c] = potential_derivative(pf, s.phi(i, j)) / p.eps - p.eps * lap;
        }
    }
    return {SparseMatrix(2 * N, std::move(t)), std::move(b)};
}

}  // namespace

TEST_CASE("pure phase is an exact fixed point") {
    const Grid g = build_grid(8, 8, 1.0, 1.0);
    PhysParams p = default_params();
    p.alpha = 1.0;
    const PotentialSpec pf, pg;  // polynomial
    ChState s = uniform_state(g, 1.0, 1.0);
    const FaceField u(g);
    ChStepper stepper(g, p, pf, pg, 1e-3);
    stepper.step(s, u);
    for (double v : s.phi.data) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    for (double v : s.mu.data) CHECK(std::abs(v) < 1e-12);
    for (int w = 0; w < 2; ++w) {
        for (double v : s.psi[w].data) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
        for (double v : s.theta[w].data) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("dt <= 0 is rejected") {
    const Grid g = build_grid(8, 8, 1.0, 1.0);
    CHECK_THROWS_AS(ChStepper(g, default_params(), PotentialSpec{}, PotentialSpec{}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("assembly is deterministic") {
    const Grid g = build_grid(12, 8, 1.0, 1.0);
    const PhysParams p = default_params();
    const ChState s = smooth_state(g, p, 5);
    const FaceField u = solenoidal_velocity(g, 6);
    const auto [A1, b1] = assemble_ch_system(s, u, g, p, {}, {}, 1e-3);
    const auto [A2, b2] = assemble_ch_system(s, u, g, p, {}, {}, 1e-3);
    CHECK(A1.row_offsets() == A2.row_offsets());
    CHECK(A1.col_indices() == A2.col_indices());
    CHECK(A1.values() == A2.values());
    CHECK(b1 == b2);
}

TEST_CASE("K=L=inf: no bulk/surface off-diagonal blocks; bulk rows match the "
          "reference Neumann assembly bitwise") {
    const Grid g = build_grid(12, 10, 1.0, 1.0);
    PhysParams p = default_params();
    p.K = kInf;
    p.L = kInf;
    const PotentialSpec pf;
    const ChState s = smooth_state(g, p, 7);
    const FaceField u(g);
    const double dt = 2e-3;
    const int N = g.cell_count();

    const auto [A, b] = assemble_ch_system(s, u, g, p, pf, pf, dt);
    // Pattern: bulk rows never reference surface unknowns and vice versa.
    for (int r = 0; r < 2 * N; ++r)
        for (int k = A.row_offsets()[r]; k < A.row_offsets()[r + 1]; ++k)
            CHECK(A.col_indices()[k] < 2 * N);
    for (int r = 2 * N; r < A.size(); ++r)
        for (int k = A.row_offsets()[r]; k < A.row_offsets()[r + 1]; ++k)
            CHECK(A.col_indices()[k] >= 2 * N);

    const auto [R, br] = reference_neumann_system(g, p, pf, s, dt);
    for (int r = 0; r < 2 * N; ++r) {
        const int a0 = A.row_offsets()[r], a1 = A.row_offsets()[r + 1];
        const int r0 = R.row_offsets()[r], r1 = R.row_offsets()[r + 1];
        REQUIRE(a1 - a0 == r1 - r0);
        for (int k = 0; k < a1 - a0; ++k) {
            CHECK(A.col_indices()[a0 + k] == R.col_indices()[r0 + k]);
            CHECK(A.values()[a0 + k] == R.values()[r0 + k]);  // bitwise
        }
        CHECK(b[r] == br[r]);  // bitwise
    }
}

TEST_CASE("phi-equation row sums vanish without the mass term (conservative stencil)") {
    const Grid g = build_grid(10, 8, 1.0, 1.0);
    PhysParams p = default_params();
    p.beta = 1.0;  // the wall-flux row sum cancels exactly when beta = 1
    const ChState s = smooth_state(g, p, 8);
    const FaceField u(g);
    const double dt = 1e-3;
    const auto [A, b] = assemble_ch_system(s, u, g, p, {}, {}, dt);
    const int N = g.cell_count();
    for (int r = 0; r < N; ++r) {
        double sum = 0.0;
        for (int k = A.row_offsets()[r]; k < A.row_offsets()[r + 1]; ++k) {
            if (A.col_indices()[k] == r) continue;  // dt-scaled mass term
            sum += A.values()[k];
        }
        sum += A.at(r, r) - 1.0 / dt;
        CHECK(std::abs(sum) < 1e-10);
    }
}

TEST_CASE("combined mass law telescopes exactly for L in {0, 1}") {
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    for (double L : {0.0, 1.0}) {
        PhysParams p = default_params();
        p.beta = 2.0;
        p.L = L;
        p.K = 0.5;
        ChState s = smooth_state(g, p, 17);
        const FaceField u = solenoidal_velocity(g, 18, 0.5);
        ChStepper stepper(g, p, {}, {}, 5e-4);
        const double m0 = combined_mass(g, s, p);
        for (int k = 0; k < 25; ++k) stepper.step(s, u);
        const double m1 = combined_mass(g, s, p);
        CHECK(std::abs(m1 - m0) < 1e-11 * (g.Lx * g.Ly + 2.0 * g.Lx));
    }
}

TEST_CASE("L=inf conserves bulk and surface masses separately") {
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    PhysParams p = default_params();
    p.L = kInf;
    p.K = 1.0;
    ChState s = smooth_state(g, p, 19);
    const FaceField u = solenoidal_velocity(g, 20, 0.5);
    ChStepper stepper(g, p, {}, {}, 5e-4);
    const MassTotals m0 = masses(g, s, p);
    for (int k = 0; k < 25; ++k) stepper.step(s, u);
    const MassTotals m1 = masses(g, s, p);
    CHECK(std::abs(m1.bulk - m0.bulk) < 1e-11 * g.Lx * g.Ly);
    CHECK(std::abs(m1.surf_total - m0.surf_total) < 1e-11 * 2.0 * g.Lx);
}

TEST_CASE("L=1 run transfers mass while conserving the combined total") {
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    PhysParams p = default_params();
    p.L = 1.0;
    ChState s = smooth_state(g, p, 23);
    // Push the walls out of chemical equilibrium.
    for (int w = 0; w < 2; ++w)
        for (int i = 0; i < g.nx; ++i) s.psi[w][i] += 0.3;
    ChStepper stepper(g, p, {}, {}, 1e-3);
    const MassTotals m0 = masses(g, s, p);
    const FaceField u(g);
    for (int k = 0; k < 50; ++k) stepper.step(s, u);
    const MassTotals m1 = masses(g, s, p);
    CHECK(std::abs(m1.combined - m0.combined) < 1e-11 * (g.Lx * g.Ly + 2.0 * g.Lx));
    CHECK(std::abs(m1.bulk - m0.bulk) > 1e-4);  // transfer occurred
}

TEST_CASE("pure transport conserves bulk mass per step (m = 0)") {
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    PhysParams p = default_params();
    p.mob_bulk = 0.0;
    p.mob_surf = 0.0;
    ChState s = smooth_state(g, p, 29);
    const FaceField u = solenoidal_velocity(g, 30, 1.0);
    ChStepper stepper(g, p, {}, {}, 1e-3);
    double prev = masses(g, s, p).bulk;
    for (int k = 0; k < 20; ++k) {
        stepper.step(s, u);
        const double cur = masses(g, s, p).bulk;
        CHECK(std::abs(cur - prev) < 1e-11 * g.Lx * g.Ly);
        prev = cur;
    }
}

TEST_CASE("discrete energy decays monotonically for u = 0") {
    const Grid g = build_grid(24, 24, 1.0, 1.0);
    PhysParams p = default_params();
    p.eps = 0.1;
    p.delta = 0.1;
    p.K = 1.0;
    p.L = 1.0;
    ChState s = smooth_state(g, p, 31);
    const FaceField u(g);
    const FlowState still(g);
    ChStepper stepper(g, p, {}, {}, 1e-4);
    double e_prev = total_energy(g, still, s, p, {}, {}).total();
    const double slack = 1e-10 * std::abs(e_prev);
    for (int k = 0; k < 300; ++k) {
        stepper.step(s, u);
        const double e = total_energy(g, still, s, p, {}, {}).total();
        CHECK(e <= e_prev + slack);
        e_prev = e;
    }
}

TEST_CASE("steady trace gap is non-increasing as K decreases to 0") {
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    std::vector<double> gaps;
    for (double K : {1.0, 0.1, 0.01, 0.0}) {
        PhysParams p = default_params();
        p.K = K;
        p.L = 1.0;
        State st = initial_conditions(IcKind::Stratified, g, p);
        // Start with the walls off the trace-coupled equilibrium.
        for (int w = 0; w < 2; ++w)
            for (int i = 0; i < g.nx; ++i) st.ch.psi[w][i] = 0.0;
        ChStepper stepper(g, p, {}, {}, 2e-3);
        const FaceField u(g);
        CellField prev = st.ch.phi;
        for (int k = 0; k < 4000; ++k) {
            stepper.step(st.ch, u);
            double dmax = 0.0;
            for (std::size_t q = 0; q < prev.data.size(); ++q)
                dmax = std::max(dmax, std::abs(prev.data[q] - st.ch.phi.data[q]));
            prev = st.ch.phi;
            if (dmax < 1e-10) break;
        }
        double gap = 0.0;
        for (Wall wall : kWalls) {
            const WallField tr = wall_trace(g, st.ch.phi, wall);
            const int w = wall_index(wall);
            for (int i = 0; i < g.nx; ++i)
                gap = std::max(gap, std::abs(p.alpha * st.ch.psi[w][i] - tr[i]));
        }
        gaps.push_back(gap);
    }
    for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] <= gaps[k - 1] + 1e-9);
    CHECK(gaps.back() < 0.05);  // K = 0 enforces the trace constraint
}

TEST_CASE("flux imbalance fixture breaks the combined mass law") {
    const Grid g = build_grid(16, 16, 1.0, 1.0);
    PhysParams p = default_params();
    p.L = 1.0;
    ChState s = smooth_state(g, p, 41);
    for (int w = 0; w < 2; ++w)
        for (int i = 0; i < g.nx; ++i) s.psi[w][i] += 0.3;
    ChStepper stepper(g, p, {}, {}, 1e-3);
    stepper.set_flux_imbalance(0.5);
    const double m0 = combined_mass(g, s, p);
    const FaceField u(g);
    for (int k = 0; k < 20; ++k) stepper.step(s, u);
    CHECK(std::abs(combined_mass(g, s, p) - m0) > 1e-6);
}
