#pragma once

#include <vector>

namespace rggenv {

/// Dense symmetric d x d matrix, row-major.
struct SymMatrix {
    int dim = 0;
    std::vector<double> entries;

    SymMatrix() = default;
    explicit SymMatrix(int d) : dim(d), entries(static_cast<std::size_t>(d) * d, 0.0) {}
    SymMatrix(int d, std::vector<double> e) : dim(d), entries(std::move(e)) {}

    static SymMatrix identity(int d);

    double& operator()(int i, int j) { return entries[static_cast<std::size_t>(i) * dim + j]; }
    double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i) * dim + j]; }
};

/// Smallest eigenvalue. Closed form for d = 2, cyclic Jacobi rotations for
/// d >= 3. Throws invalid_input if the matrix is not symmetric to 1e-12.
double lambda_min(const SymMatrix& h);

/// Largest eigenvalue, as -lambda_min(-H).
double lambda_max(const SymMatrix& h);

/// All eigenvalues in ascending order (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(const SymMatrix& h, double off_diagonal_tol = 1e-12);

}  // namespace rggenv
