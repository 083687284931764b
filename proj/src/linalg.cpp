// Copyright 2026 The agreelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agreelab/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace agree {

double HermitianDeviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double MinEigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h,
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool IsHermitian(const ComplexMatrix& m, double tol) {
  return HermitianDeviation(m) <= tol;
}

bool IsPositiveSemidefinite(const ComplexMatrix& m, double tol) {
  return IsHermitian(m, tol) && MinEigenvalue(m) >= -tol;
}

bool HasUnitTrace(const ComplexMatrix& m, double tol) {
  return std::abs(m.trace() - Complex(1.0, 0.0)) <= tol;
}

double OperatorNorm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

ComplexMatrix Projector(const ComplexVector& v) { return v * v.adjoint(); }

}  // namespace agree
