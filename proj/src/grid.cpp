#include "bsf/grid.hpp"

#include <stdexcept>
#include <string>

namespace bsf {

namespace {

void check_cell_shape(const Grid& g, const CellField& c, const char* who) {
    if (c.nx != g.nx || c.ny != g.ny)
        throw std::invalid_argument(std::string(who) + ": cell field shape mismatch");
}

void check_face_shape(const Grid& g, const FaceField& f, const char* who) {
    if (f.nx != g.nx || f.ny != g.ny)
        throw std::invalid_argument(std::string(who) + ": face field shape mismatch");
}

void check_wall_shape(const Grid& g, const WallField& w, const char* who) {
    if (w.nx != g.nx)
        throw std::invalid_argument(std::string(who) + ": wall field shape mismatch");
}

}  // namespace

Grid build_grid(int nx, int ny, double Lx, double Ly) {
    if (nx < 8 || ny < 8)
        throw std::invalid_argument("build_grid: cell counts must be >= 8");
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw std::invalid_argument("build_grid: domain extents must be positive");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.Lx = Lx;
    g.Ly = Ly;
    g.hx = Lx / nx;
    g.hy = Ly / ny;
    return g;
}

FaceField grad(const Grid& g, const CellField& c) {
    check_cell_shape(g, c, "grad");
    FaceField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int im = g.wrap_x(i - 1);
            out.ux(i, j) = (c(i, j) - c(im, j)) / g.hx;
        }
    }
    // Interior horizontal faces only; wall faces stay zero.
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out.vy(i, j) = (c(i, j) - c(i, j - 1)) / g.hy;
    return out;
}

CellField divergence(const Grid& g, const FaceField& v) {
    check_face_shape(g, v, "divergence");
    CellField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap_x(i + 1);
            out(i, j) = (v.ux(ip, j) - v.ux(i, j)) / g.hx +
                        (v.vy(i, j + 1) - v.vy(i, j)) / g.hy;
        }
    }
    return out;
}

WallField surface_grad(const Grid& g, const WallField& w) {
    check_wall_shape(g, w, "surface_grad");
    WallField out(g);
    for (int i = 0; i < g.nx; ++i) {
        const int ip = g.wrap_x(i + 1);
        out[i] = (w[ip] - w[i]) / g.hx;
    }
    return out;
}

WallField surface_laplacian(const Grid& g, const WallField& w) {
    check_wall_shape(g, w, "surface_laplacian");
    WallField out(g);
    const double ihx2 = 1.0 / (g.hx * g.hx);
    for (int i = 0; i < g.nx; ++i) {
        const int ip = g.wrap_x(i + 1);
        const int im = g.wrap_x(i - 1);
        out[i] = (w[ip] - 2.0 * w[i] + w[im]) * ihx2;
    }
    return out;
}

WallField normal_derivative(const Grid& g, const CellField& c, Wall wall) {
    check_cell_shape(g, c, "normal_derivative");
    WallField out(g);
    // Quadratic fit through the three cell centers nearest the wall,
    // differentiated at the wall itself: d/dn = (2 c0 - 3 c1 + c2) / h
    // walking away from the wall (c0 nearest).
    const int j0 = g.wall_row(wall);
    const int step = (wall == Wall::Bottom) ? 1 : -1;
    for (int i = 0; i < g.nx; ++i) {
        const double c0 = c(i, j0);
        const double c1 = c(i, j0 + step);
        const double c2 = c(i, j0 + 2 * step);
        out[i] = (2.0 * c0 - 3.0 * c1 + c2) / g.hy;
    }
    return out;
}

WallField wall_trace(const Grid& g, const CellField& c, Wall wall) {
    check_cell_shape(g, c, "wall_trace");
    WallField out(g);
    const int j0 = g.wall_row(wall);
    const int step = (wall == Wall::Bottom) ? 1 : -1;
    for (int i = 0; i < g.nx; ++i) {
        out[i] = (15.0 * c(i, j0) - 10.0 * c(i, j0 + step) + 3.0 * c(i, j0 + 2 * step)) / 8.0;
    }
    return out;
}

}  // namespace bsf
