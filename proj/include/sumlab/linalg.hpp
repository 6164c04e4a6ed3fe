#pragma once
// Dense helpers for tiny symmetric problems (dims <= 8 in practice).
#include <vector>

namespace sumlab {

// Eigenvalues of a symmetric n x n matrix (row-major), ascending.
// Cyclic Jacobi; a is consumed.
std::vector<double> sym_eigenvalues(std::vector<double> a, int n);

// Largest eigenvalue; if evec is non-null it receives a unit eigenvector.
double sym_eig_max(const std::vector<double>& a, int n, std::vector<double>* evec = nullptr);

// Largest singular value of a row-major m x n matrix.  right_vec, when
// requested, receives the attaining unit right singular vector (length n).
double top_singular_value(const std::vector<double>& a, int m, int n,
                          std::vector<double>* right_vec = nullptr);

// Sum of singular values of a row-major m x n matrix.
double trace_norm(const std::vector<double>& a, int m, int n);

}  // namespace sumlab
