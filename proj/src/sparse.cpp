#include "bsf/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bsf {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void remove_mean(std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

std::vector<double> jacobi_diagonal(const SparseMatrix& A) {
    std::vector<double> d(static_cast<std::size_t>(A.size()), 1.0);
    const auto& off = A.row_offsets();
    const auto& col = A.col_indices();
    const auto& val = A.values();
    for (int i = 0; i < A.size(); ++i)
        for (int k = off[i]; k < off[i + 1]; ++k)
            if (col[k] == i && val[k] != 0.0) d[i] = val[k];
    return d;
}

double recomputed_residual(const SparseMatrix& A, const std::vector<double>& x,
                           const std::vector<double>& b, double bnorm) {
    std::vector<double> r(b.size());
    A.multiply(x, r);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = b[k] - r[k];
    return norm2(r) / (bnorm > 0.0 ? bnorm : 1.0);
}

struct BestIterate {
    std::vector<double> x;
    double residual = std::numeric_limits<double>::infinity();

    void offer(const std::vector<double>& cand, double res) {
        if (res < residual) {
            residual = res;
            x = cand;
        }
    }
};

SolveResult run_cg(const SparseMatrix& A, const std::vector<double>& b, const SolveOptions& opts) {
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0), r = b, z(n), p(n), Ap(n);
    const double bnorm = norm2(b);
    SolveResult out;
    if (bnorm == 0.0) {
        out.x = x;
        return out;
    }
    const std::vector<double> diag = opts.jacobi_precondition
                                         ? jacobi_diagonal(A)
                                         : std::vector<double>(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
    p = z;
    double rz = dot(r, z);
    BestIterate best;
    best.offer(x, 1.0);

    SolveStatus status = SolveStatus::MaxIterations;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        A.multiply(p, Ap);
        const double pAp = dot(p, Ap);
        if (pAp == 0.0 || !std::isfinite(pAp)) {
            status = SolveStatus::Breakdown;
            break;
        }
        const double alpha = rz / pAp;
        for (std::size_t k = 0; k < n; ++k) x[k] += alpha * p[k];
        for (std::size_t k = 0; k < n; ++k) r[k] -= alpha * Ap[k];
        if (opts.remove_constant_nullspace) remove_mean(x);
        const double res = norm2(r) / bnorm;
        best.offer(x, res);
        if (res <= opts.tol) {
            status = SolveStatus::Converged;
            ++it;
            break;
        }
        for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
        const double rz_new = dot(r, z);
        if (rz == 0.0 || !std::isfinite(rz_new)) {
            status = SolveStatus::Breakdown;
            break;
        }
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
    }
    out.status = status;
    out.x = best.x;
    out.iterations = it;
    out.residual = recomputed_residual(A, out.x, b, bnorm);
    if (out.residual <= opts.tol) out.status = SolveStatus::Converged;
    return out;
}

SolveResult run_bicgstab(const SparseMatrix& A, const std::vector<double>& b,
                         const SolveOptions& opts) {
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0), r = b;
    const double bnorm = norm2(b);
    SolveResult out;
    if (bnorm == 0.0) {
        out.x = x;
        return out;
    }
    const std::vector<double> diag = opts.jacobi_precondition
                                         ? jacobi_diagonal(A)
                                         : std::vector<double>(n, 1.0);
    std::vector<double> rhat = r, p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    BestIterate best;
    best.offer(x, 1.0);

    SolveStatus status = SolveStatus::MaxIterations;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const double rho_new = dot(rhat, r);
        if (rho_new == 0.0 || omega == 0.0 || !std::isfinite(rho_new)) {
            status = SolveStatus::Breakdown;
            break;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * (p[k] - omega * v[k]);
        for (std::size_t k = 0; k < n; ++k) phat[k] = p[k] / diag[k];
        A.multiply(phat, v);
        const double rhat_v = dot(rhat, v);
        if (rhat_v == 0.0 || !std::isfinite(rhat_v)) {
            status = SolveStatus::Breakdown;
            break;
        }
        alpha = rho / rhat_v;
        for (std::size_t k = 0; k < n; ++k) s[k] = r[k] - alpha * v[k];
        if (norm2(s) / bnorm <= opts.tol) {
            for (std::size_t k = 0; k < n; ++k) x[k] += alpha * phat[k];
            best.offer(x, norm2(s) / bnorm);
            status = SolveStatus::Converged;
            ++it;
            break;
        }
        for (std::size_t k = 0; k < n; ++k) shat[k] = s[k] / diag[k];
        A.multiply(shat, t);
        const double tt = dot(t, t);
        if (tt == 0.0 || !std::isfinite(tt)) {
            status = SolveStatus::Breakdown;
            break;
        }
        omega = dot(t, s) / tt;
        for (std::size_t k = 0; k < n; ++k) x[k] += alpha * phat[k] + omega * shat[k];
        for (std::size_t k = 0; k < n; ++k) r[k] = s[k] - omega * t[k];
        if (opts.remove_constant_nullspace) remove_mean(x);
        const double res = norm2(r) / bnorm;
        best.offer(x, res);
        if (res <= opts.tol) {
            status = SolveStatus::Converged;
            ++it;
            break;
        }
    }
    out.status = status;
    out.x = best.x;
    out.iterations = it;
    out.residual = recomputed_residual(A, out.x, b, bnorm);
    if (out.residual <= opts.tol) out.status = SolveStatus::Converged;
    return out;
}

// Banded LU with partial pivoting (LAPACK gbsv layout, kl = ku = bw).
SolveResult run_banded(const SparseMatrix& A, const std::vector<double>& b,
                       const SolveOptions& opts) {
    const int n = A.size();
    int bw = 0;
    const auto& off = A.row_offsets();
    const auto& col = A.col_indices();
    const auto& val = A.values();
    for (int i = 0; i < n; ++i)
        for (int k = off[i]; k < off[i + 1]; ++k) bw = std::max(bw, std::abs(col[k] - i));

    const int kl = bw, ku = bw;
    const int rows = 2 * kl + ku + 1;
    // Column-major band storage: entry (i, j) at band[(kl + ku + i - j) + j*rows].
    std::vector<double> band(static_cast<std::size_t>(rows) * n, 0.0);
    auto at = [&](int i, int j) -> double& {
        return band[static_cast<std::size_t>(j) * rows + (kl + ku + i - j)];
    };
    for (int i = 0; i < n; ++i)
        for (int k = off[i]; k < off[i + 1]; ++k) at(i, col[k]) += val[k];

    std::vector<double> x = b;
    std::vector<int> piv(n);
    SolveResult out;
    // Factor.
    for (int j = 0; j < n; ++j) {
        const int last = std::min(n - 1, j + kl);
        int p = j;
        double pmax = std::abs(at(j, j));
        for (int i = j + 1; i <= last; ++i) {
            if (std::abs(at(i, j)) > pmax) {
                pmax = std::abs(at(i, j));
                p = i;
            }
        }
        piv[j] = p;
        if (pmax == 0.0) {
            out.status = SolveStatus::Breakdown;
            out.x.assign(static_cast<std::size_t>(n), 0.0);
            out.residual = recomputed_residual(A, out.x, b, norm2(b));
            return out;
        }
        const int jend = std::min(n - 1, j + kl + ku);
        if (p != j)
            for (int c = j; c <= jend; ++c) std::swap(at(j, c), at(p, c));
        for (int i = j + 1; i <= last; ++i) {
            const double m = at(i, j) / at(j, j);
            at(i, j) = m;
            for (int c = j + 1; c <= jend; ++c) at(i, c) -= m * at(j, c);
        }
    }
    // Forward substitution with the stored multipliers.
    for (int j = 0; j < n; ++j) {
        if (piv[j] != j) std::swap(x[j], x[piv[j]]);
        const int last = std::min(n - 1, j + kl);
        for (int i = j + 1; i <= last; ++i) x[i] -= at(i, j) * x[j];
    }
    // Back substitution.
    for (int i = n - 1; i >= 0; --i) {
        const int jend = std::min(n - 1, i + kl + ku);
        for (int j = i + 1; j <= jend; ++j) x[i] -= at(i, j) * x[j];
        x[i] /= at(i, i);
    }

    out.x = std::move(x);
    out.iterations = 1;
    out.residual = recomputed_residual(A, out.x, b, norm2(b));
    out.status = SolveStatus::Converged;
    return out;
}

}  // namespace

SparseMatrix::SparseMatrix(int n, std::vector<Triplet> triplets) : n_(n) {
    if (n <= 0) throw std::invalid_argument("SparseMatrix: dimension must be positive");
    for (const auto& t : triplets)
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::invalid_argument("SparseMatrix: triplet index out of range");
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    col_indices_.reserve(triplets.size());
    values_.reserve(triplets.size());
    int last_row = 0;
    for (const Triplet& t : triplets) {
        if (t.row == last_row && !col_indices_.empty() &&
            row_offsets_[last_row] < static_cast<int>(col_indices_.size()) &&
            t.col == col_indices_.back()) {
            values_.back() += t.value;
        } else {
            while (last_row < t.row) row_offsets_[++last_row] = static_cast<int>(col_indices_.size());
            col_indices_.push_back(t.col);
            values_.push_back(t.value);
        }
    }
    while (last_row < n) row_offsets_[++last_row] = static_cast<int>(col_indices_.size());
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
    y.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
            s += values_[k] * x[col_indices_[k]];
        y[i] = s;
    }
}

double SparseMatrix::at(int i, int j) const {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
        if (col_indices_[k] == j) return values_[k];
    return 0.0;
}

SolveResult solve(const SparseMatrix& A, const std::vector<double>& b, const SolveOptions& opts) {
    if (static_cast<int>(b.size()) != A.size())
        throw std::invalid_argument("solve: dimension mismatch between A and b");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");

    std::vector<double> rhs = b;
    if (opts.remove_constant_nullspace) remove_mean(rhs);

    SolveResult out;
    switch (opts.method) {
        case SolveMethod::CG: out = run_cg(A, rhs, opts); break;
        case SolveMethod::BiCGStab: out = run_bicgstab(A, rhs, opts); break;
        case SolveMethod::DirectBanded: out = run_banded(A, rhs, opts); break;
    }
    if (opts.remove_constant_nullspace) remove_mean(out.x);
    return out;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::Breakdown: return "breakdown";
    }
    return "unknown";
}

}  // namespace bsf
