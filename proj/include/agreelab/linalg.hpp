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

#ifndef AGREELAB_LINALG_HPP_
#define AGREELAB_LINALG_HPP_

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace agree {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Thresholds shared by the quantum and process backends.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;

// max |M - M^dagger| entrywise.
double HermitianDeviation(const ComplexMatrix& m);

// Smallest eigenvalue of the hermitian part of m.
double MinEigenvalue(const ComplexMatrix& m);

bool IsHermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool IsPositiveSemidefinite(const ComplexMatrix& m, double tol = kPsdTol);
bool HasUnitTrace(const ComplexMatrix& m, double tol = kTraceTol);

// Largest singular value.
double OperatorNorm(const ComplexMatrix& m);

ComplexMatrix Kron(const ComplexMatrix& a, const ComplexMatrix& b);

// |v><v|
ComplexMatrix Projector(const ComplexVector& v);

}  // namespace agree

#endif  // AGREELAB_LINALG_HPP_
