#include "bsf/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bsf {

void PhysParams::validate() const {
    if (!(rho1 > 0.0) || !(rho2 > 0.0))
        throw std::invalid_argument("PhysParams: densities must be positive");
    if (!(nu1 > 0.0) || !(nu2 > 0.0))
        throw std::invalid_argument("PhysParams: viscosities must be positive");
    if (!(eps > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("PhysParams: eps and delta must be positive");
    if (mob_bulk < 0.0 || mob_surf < 0.0)
        throw std::invalid_argument("PhysParams: mobilities must be nonnegative");
    if (gamma_tau < 0.0)
        throw std::invalid_argument("PhysParams: gamma_tau must be nonnegative");
    if (K < 0.0 || L < 0.0)
        throw std::invalid_argument("PhysParams: K and L must lie in [0, inf]");
    if (K == 0.0 && alpha == 0.0)
        throw std::invalid_argument("PhysParams: K=0 requires alpha != 0");
}

CouplingCase coupling_case(const PhysParams& p) {
    auto classify = [](double r) {
        if (r == 0.0) return CouplingKind::Dirichlet;
        if (std::isinf(r)) return CouplingKind::Neumann;
        return CouplingKind::Robin;
    };
    return CouplingCase{classify(p.K), classify(p.L)};
}

double h_of_K(double r) {
    if (r < 0.0 || std::isnan(r))
        throw std::invalid_argument("h_of_K: argument must lie in [0, inf]");
    if (r == 0.0 || std::isinf(r)) return 0.0;
    return 1.0 / r;
}

double density_scalar(const PhysParams& p, double phi) {
    const double lo = std::min(p.rho1, p.rho2);
    const double hi = std::max(p.rho1, p.rho2);
    return std::clamp(0.5 * p.rho2 * (1.0 + phi) + 0.5 * p.rho1 * (1.0 - phi), lo, hi);
}

CellField density(const PhysParams& p, const CellField& phi) {
    CellField out(phi.nx, phi.ny);
    for (std::size_t k = 0; k < phi.size(); ++k) out.data[k] = density_scalar(p, phi.data[k]);
    return out;
}

double viscosity_scalar(const PhysParams& p, double phi) {
    const double lo = std::min(p.nu1, p.nu2);
    const double hi = std::max(p.nu1, p.nu2);
    return std::clamp(0.5 * p.nu2 * (1.0 + phi) + 0.5 * p.nu1 * (1.0 - phi), lo, hi);
}

CellField viscosity(const PhysParams& p, const CellField& phi) {
    CellField out(phi.nx, phi.ny);
    for (std::size_t k = 0; k < phi.size(); ++k) out.data[k] = viscosity_scalar(p, phi.data[k]);
    return out;
}

FaceField relative_flux(const PhysParams& p, const FaceField& grad_mu) {
    const double c = -0.5 * (p.rho2 - p.rho1) * p.mob_bulk;
    FaceField out(grad_mu.nx, grad_mu.ny);
    for (std::size_t k = 0; k < grad_mu.u.size(); ++k) out.u[k] = c * grad_mu.u[k];
    for (std::size_t k = 0; k < grad_mu.v.size(); ++k) out.v[k] = c * grad_mu.v[k];
    return out;
}

double robin_coeff_phi(const PhysParams& p, double hy) {
    if (std::isinf(p.K)) return 0.0;
    return 1.0 / (p.K + 0.5 * hy / p.eps);
}

double robin_coeff_mu(const PhysParams& p, double hy) {
    if (std::isinf(p.L)) return 0.0;
    if (p.mob_bulk == 0.0) return 0.0;  // no diffusive flux at all
    return 1.0 / (p.L + 0.5 * hy / p.mob_bulk);
}

}  // namespace bsf
