/// @file sparse.hpp
/// @brief Compressed sparse row matrices and the iterative/banded solvers
///        shared by the Cahn-Hilliard and Navier-Stokes steppers.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bsf {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Square sparse matrix in CSR form. Built from triplets; duplicate entries
/// are summed, column indices are sorted and unique within each row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int n, std::vector<Triplet> triplets);

    int size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }

    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& col_indices() const { return col_indices_; }
    const std::vector<double>& values() const { return values_; }

    /// y = A x
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;

    /// Entry (i, j), zero if absent.
    double at(int i, int j) const;

private:
    int n_ = 0;
    std::vector<int> row_offsets_;
    std::vector<int> col_indices_;
    std::vector<double> values_;
};

enum class SolveMethod { CG, BiCGStab, DirectBanded };

enum class SolveStatus { Converged, MaxIterations, Breakdown };

struct SolveOptions {
    SolveMethod method = SolveMethod::BiCGStab;
    double tol = 1e-10;   // relative: ||A x - b|| <= tol ||b||
    int max_iter = 10000;
    bool jacobi_precondition = true;
    /// Project b and x onto the mean-zero complement of the constant
    /// null space (pressure Poisson convention).
    bool remove_constant_nullspace = false;
};

struct SolveResult {
    std::vector<double> x;
    SolveStatus status = SolveStatus::Converged;
    int iterations = 0;
    double residual = 0.0;  // recomputed ||A x - b||_2 / ||b||_2

    bool converged() const { return status == SolveStatus::Converged; }
};

/// Solves A x = b. The returned residual is always recomputed from scratch.
/// Krylov breakdown (zero denominator in the recurrence) is reported as
/// SolveStatus::Breakdown together with the best iterate seen.
SolveResult solve(const SparseMatrix& A, const std::vector<double>& b, const SolveOptions& opts);

const char* to_string(SolveStatus s);

}  // namespace bsf
