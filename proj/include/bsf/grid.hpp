/// @file grid.hpp
/// @brief Staggered periodic-channel grid and the discrete differential
///        operators in the bulk and on the two wall curves.
///
/// Layout (MAC staggering):
///   - cell-centered scalars (phi, mu, p): nx*ny values, center (i+1/2)hx, (j+1/2)hy
///   - u on vertical faces:   nx*ny values, face i is the LEFT face of cell i
///     (periodic in x), position (i*hx, (j+1/2)hy)
///   - v on horizontal faces: nx*(ny+1) values, face j is the BOTTOM face of
///     cell j, position ((i+1/2)hx, j*hy); rows j=0 and j=ny lie on the walls
///   - wall scalars (psi, theta): nx values per wall at x-cell centers
///
/// The domain is periodic in x; the walls are y = 0 (Bottom, outward normal
/// (0,-1)) and y = Ly (Top, outward normal (0,+1)).

#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace bsf {

enum class Wall { Bottom = 0, Top = 1 };

constexpr std::array<Wall, 2> kWalls = {Wall::Bottom, Wall::Top};

inline int wall_index(Wall w) { return w == Wall::Bottom ? 0 : 1; }

/// Outward normal y-component of a wall (-1 bottom, +1 top).
inline double wall_normal_y(Wall w) { return w == Wall::Bottom ? -1.0 : 1.0; }

struct Grid {
    int nx = 0;
    int ny = 0;
    double Lx = 0.0;
    double Ly = 0.0;
    double hx = 0.0;
    double hy = 0.0;

    int cell_count() const { return nx * ny; }
    int cell(int i, int j) const { return j * nx + i; }
    int wrap_x(int i) const { return (i % nx + nx) % nx; }

    double x_center(int i) const { return (i + 0.5) * hx; }
    double y_center(int j) const { return (j + 0.5) * hy; }
    double x_face(int i) const { return i * hx; }
    double y_face(int j) const { return j * hy; }

    /// Index of the cell row adjacent to a wall.
    int wall_row(Wall w) const { return w == Wall::Bottom ? 0 : ny - 1; }
};

/// Builds a grid for the periodic channel [0,Lx) x (0,Ly).
/// Requires nx, ny >= 8 and positive extents.
Grid build_grid(int nx, int ny, double Lx, double Ly);

/// Cell-centered scalar field.
struct CellField {
    int nx = 0, ny = 0;
    std::vector<double> data;

    CellField() = default;
    CellField(int nx_, int ny_, double value = 0.0)
        : nx(nx_), ny(ny_), data(static_cast<std::size_t>(nx_) * ny_, value) {}
    explicit CellField(const Grid& g, double value = 0.0) : CellField(g.nx, g.ny, value) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(j) * nx + i]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(j) * nx + i]; }
    std::size_t size() const { return data.size(); }
};

/// Face-centered vector field: u on vertical faces, v on horizontal faces.
/// v is stored including the two wall rows, which stay identically zero for
/// velocities (u.n = 0 on the static walls).
struct FaceField {
    int nx = 0, ny = 0;
    std::vector<double> u;  // nx * ny
    std::vector<double> v;  // nx * (ny+1)

    FaceField() = default;
    FaceField(int nx_, int ny_)
        : nx(nx_), ny(ny_),
          u(static_cast<std::size_t>(nx_) * ny_, 0.0),
          v(static_cast<std::size_t>(nx_) * (ny_ + 1), 0.0) {}
    explicit FaceField(const Grid& g) : FaceField(g.nx, g.ny) {}

    double& ux(int i, int j) { return u[static_cast<std::size_t>(j) * nx + i]; }
    double ux(int i, int j) const { return u[static_cast<std::size_t>(j) * nx + i]; }
    double& vy(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
    double vy(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }
};

/// Scalar field on one wall curve, collocated with x-cell centers.
struct WallField {
    int nx = 0;
    std::vector<double> data;

    WallField() = default;
    explicit WallField(int nx_, double value = 0.0)
        : nx(nx_), data(static_cast<std::size_t>(nx_), value) {}
    WallField(const Grid& g, double value = 0.0) : WallField(g.nx, value) {}

    double& operator[](int i) { return data[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return data[static_cast<std::size_t>(i)]; }
};

// ---------------------------------------------------------------------------
// Discrete operators.
//
// grad/div are the compact MAC pair: grad maps cells to faces (second-order
// centered at the face), div maps faces to cells (conservative). Wall faces
// carry zero gradient; one-sided wall derivatives live in normal_derivative.
// With that convention  <div v, c> = -<v, grad c>  exactly whenever v has
// zero normal component on the walls.
// ---------------------------------------------------------------------------

FaceField grad(const Grid& g, const CellField& c);
CellField divergence(const Grid& g, const FaceField& v);

/// Tangential gradient on a wall curve: 1D periodic staggered difference.
/// Entry i lives on the edge between nodes i and i+1 (x = (i+1)*hx).
WallField surface_grad(const Grid& g, const WallField& w);

/// 1D periodic 3-point Laplacian on a wall curve. Satisfies exact
/// summation by parts against surface_grad:
///   sum_i w_i (Lap w)_i hx = -sum_i (Dw)_i^2 hx.
WallField surface_laplacian(const Grid& g, const WallField& w);

/// Outward normal derivative of a cell field at a wall, one-sided
/// second-order (exact for quadratics in y).
WallField normal_derivative(const Grid& g, const CellField& c, Wall wall);

/// One-sided quadratic extrapolation of a cell field to a wall
/// (second-order wall trace; weights 15/8, -10/8, 3/8).
WallField wall_trace(const Grid& g, const CellField& c, Wall wall);

}  // namespace bsf
