/// Shared helpers for the unit suites: seeded random fields, norms, and
/// reference parameter sets.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "bsf/grid.hpp"
#include "bsf/model.hpp"

namespace bsf::test {

inline CellField random_cell_field(const Grid& g, unsigned seed, double lo = -1.0,
                                   double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    CellField f(g);
    for (double& v : f.data) v = dist(rng);
    return f;
}

inline WallField random_wall_field(const Grid& g, unsigned seed, double lo = -1.0,
                                   double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    WallField f(g);
    for (double& v : f.data) v = dist(rng);
    return f;
}

/// Random face field with zero normal velocity on the walls.
inline FaceField random_face_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FaceField f(g);
    for (double& v : f.u) v = dist(rng);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.vy(i, j) = dist(rng);
    return f;
}

/// Discretely divergence-free velocity from a random stream function on the
/// grid vertices (zero on the walls): u = dH/dy, v = -dH/dx.
inline FaceField solenoidal_velocity(const Grid& g, unsigned seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-scale, scale);
    // Stream function on vertices (i, j), j = 0..ny, zero at walls.
    std::vector<double> H(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) H[j * g.nx + i] = dist(rng);
    FaceField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.ux(i, j) = (H[(j + 1) * g.nx + i] - H[j * g.nx + i]) / g.hy;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            f.vy(i, j) = -(H[j * g.nx + i] - H[j * g.nx + g.wrap_x(i - 1)]) / g.hx;
    return f;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double l2_cell_norm(const Grid& g, const CellField& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s * g.hx * g.hy);
}

inline double l2_cell_diff(const Grid& g, const CellField& a, const CellField& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
        const double d = a.data[k] - b.data[k];
        s += d * d;
    }
    return std::sqrt(s * g.hx * g.hy);
}

/// 2x2 cell-average restriction of a fine field onto the coarse grid.
inline CellField restrict_field(const Grid& coarse, const CellField& fine) {
    CellField out(coarse.nx, coarse.ny);
    for (int j = 0; j < coarse.ny; ++j)
        for (int i = 0; i < coarse.nx; ++i)
            out(i, j) = 0.25 * (fine(2 * i, 2 * j) + fine(2 * i + 1, 2 * j) +
                                fine(2 * i, 2 * j + 1) + fine(2 * i + 1, 2 * j + 1));
    return out;
}

inline PhysParams default_params() {
    PhysParams p;
    p.rho1 = 1.0;
    p.rho2 = 3.0;
    p.nu1 = 1.0;
    p.nu2 = 2.0;
    p.eps = 0.1;
    p.delta = 0.1;
    p.K = 1.0;
    p.L = 1.0;
    p.alpha = 1.0;
    p.beta = 1.0;
    p.gamma_tau = 1.0;
    return p;
}

}  // namespace bsf::test
