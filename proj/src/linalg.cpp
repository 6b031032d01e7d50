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

#include "linalg.hpp"

#include <algorithm>
#include <cmath>

namespace oqrw {

namespace {

// All spectral primitives funnel through the one self-adjoint solver so that
// rank decisions are consistent across the library.
Eigen::SelfAdjointEigenSolver<Matrix> decompose(const Matrix& a, double tol,
                                                const char* who) {
  if (a.rows() != a.cols()) {
    fail(Errc::DimensionMismatch, std::string(who) + ": matrix is " +
                                      std::to_string(a.rows()) + "x" +
                                      std::to_string(a.cols()));
  }
  if (!is_hermitian(a, tol)) {
    fail(Errc::NotHermitian, std::string(who) + ": asymmetry " +
                                 std::to_string((a - a.adjoint()).norm()) +
                                 " exceeds tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    fail(Errc::Inconsistent, std::string(who) + ": eigendecomposition failed");
  }
  return solver;
}

double negative_cutoff(const Eigen::VectorXd& eigs, double tol) {
  const double lambda_max = eigs.size() ? eigs.maxCoeff() : 0.0;
  return std::max(tol * std::max(lambda_max, 0.0), kAbsoluteFloor);
}

}  // namespace

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(a.norm(), 1.0);
  return (a - a.adjoint()).norm() <= tol * scale;
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double rank_cutoff(double lambda_max, double tol) {
  if (lambda_max < kZeroScale) return kAbsoluteFloor;
  return tol * lambda_max;
}

int support_rank(const Matrix& a, double tol) {
  const auto solver = decompose(a, tol, "support_rank");
  const Eigen::VectorXd eigs = solver.eigenvalues();
  const double cutoff = rank_cutoff(eigs.size() ? eigs.maxCoeff() : 0.0, tol);
  int rank = 0;
  for (Eigen::Index k = 0; k < eigs.size(); ++k) {
    if (eigs(k) > cutoff) ++rank;
  }
  return rank;
}

Matrix support_projection(const Matrix& a, double tol) {
  const auto solver = decompose(a, tol, "support_projection");
  const Eigen::VectorXd eigs = solver.eigenvalues();
  const double cutoff = rank_cutoff(eigs.size() ? eigs.maxCoeff() : 0.0, tol);
  Matrix p = Matrix::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < eigs.size(); ++k) {
    if (eigs(k) > cutoff) {
      const Vector v = solver.eigenvectors().col(k);
      p += v * v.adjoint();
    }
  }
  return hermitian_part(p);
}

Matrix psd_sqrt(const Matrix& a, double tol) {
  const auto solver = decompose(a, tol, "psd_sqrt");
  const Eigen::VectorXd eigs = solver.eigenvalues();
  const double neg = negative_cutoff(eigs, tol);
  Eigen::VectorXd roots(eigs.size());
  for (Eigen::Index k = 0; k < eigs.size(); ++k) {
    if (eigs(k) < -neg) {
      fail(Errc::NotPsd, "psd_sqrt: eigenvalue " + std::to_string(eigs(k)) +
                             " below negative tolerance");
    }
    roots(k) = std::sqrt(std::max(eigs(k), 0.0));
  }
  const Matrix& v = solver.eigenvectors();
  return hermitian_part(v * roots.asDiagonal() * v.adjoint());
}

bool is_psd(const Matrix& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  const auto solver = decompose(a, tol, "is_psd");
  const Eigen::VectorXd eigs = solver.eigenvalues();
  if (eigs.size() == 0) return true;
  return eigs.minCoeff() >= -negative_cutoff(eigs, tol);
}

bool is_faithful(const Matrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) return false;
  if (!is_hermitian(rho, tol)) return false;
  return support_rank(rho, tol) == static_cast<int>(rho.rows());
}

bool is_projection(const Matrix& p, double tol) {
  if (p.rows() != p.cols()) return false;
  if (!is_hermitian(p, tol)) return false;
  const double scale = std::max(p.norm(), 1.0);
  return (p * p - p).norm() <= tol * scale;
}

double min_eigenvalue(const Matrix& a) {
  const auto solver = decompose(a, kDefaultTol, "min_eigenvalue");
  const Eigen::VectorXd eigs = solver.eigenvalues();
  return eigs.size() ? eigs.minCoeff() : 0.0;
}

}  // namespace oqrw
