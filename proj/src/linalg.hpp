// Copyright 2026 The oqrw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OQRW_LINALG_HPP
#define OQRW_LINALG_HPP

#include <complex>

#include <Eigen/Dense>

#include "errors.hpp"

namespace oqrw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default relative tolerance for rank decisions and approximate comparisons.
inline constexpr double kDefaultTol = 1e-10;
// A Hermitian matrix whose largest eigenvalue is below this is treated as
// having zero scale; rank decisions then fall back to an absolute cutoff.
inline constexpr double kZeroScale = 1e-12;
// Absolute eigenvalue cutoff used at zero scale.
inline constexpr double kAbsoluteFloor = 1e-14;

// Largest singular value.  Exact-ish for the small dense matrices used here.
double operator_norm(const Matrix& a);

// True iff ||a - a^*|| <= tol * max(||a||, floor).
bool is_hermitian(const Matrix& a, double tol = kDefaultTol);

// (a + a^*)/2 — used to absorb rounding drift on nominally Hermitian values.
Matrix hermitian_part(const Matrix& a);

// Eigenvalue cutoff for rank decisions: relative to the top of the spectrum,
// with an absolute floor once the whole spectrum is at noise scale.
double rank_cutoff(double lambda_max, double tol);

// Number of eigenvalues above the rank cutoff.  Requires a Hermitian input.
int support_rank(const Matrix& a, double tol = kDefaultTol);

// Orthogonal projection onto the span of eigenvectors whose eigenvalues
// exceed the rank cutoff.  Requires a Hermitian positive-semidefinite input
// (within tol); the zero matrix maps to the zero projection.
Matrix support_projection(const Matrix& a, double tol = kDefaultTol);

// Positive-semidefinite square root via eigendecomposition; eigenvalues
// inside the negative tolerance band are clamped to zero.
Matrix psd_sqrt(const Matrix& a, double tol = kDefaultTol);

// True iff a is Hermitian with spectrum >= -cutoff.
bool is_psd(const Matrix& a, double tol = kDefaultTol);

// True iff the support of rho is the whole space (full-rank positive state).
bool is_faithful(const Matrix& rho, double tol = kDefaultTol);

// True iff p is Hermitian and p^2 = p within tol.
bool is_projection(const Matrix& p, double tol = kDefaultTol);

// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& a);

}  // namespace oqrw

#endif  // OQRW_LINALG_HPP
