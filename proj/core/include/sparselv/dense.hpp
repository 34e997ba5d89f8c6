#pragma once

// Thin wrappers over LAPACK for the dense problems that only appear at desk
// scale: full singular spectra, nonsymmetric eigenvalues of the Jacobian, and
// the direct solves used as oracles. Matrices are row-major n x n.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sparselv::dense {

/// Singular values in descending order.
std::vector<double> singular_values(std::span<const double> a, std::size_t n);

/// Eigenvalues of a general real matrix (unordered, conjugate pairs adjacent).
std::vector<std::complex<double>> eigenvalues(std::span<const double> a,
                                              std::size_t n);

/// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(std::span<const double> a,
                                          std::size_t n);

/// Solves a x = b by LU with partial pivoting.
std::vector<double> solve(std::span<const double> a, std::span<const double> b,
                          std::size_t n);

}  // namespace sparselv::dense
