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

#ifndef AGREELAB_PROCESS_HPP_
#define AGREELAB_PROCESS_HPP_

// Process matrices: joint probabilities p(i, j, k) = tr[(A_i ⊗ B_j ⊗ E_k) W]
// for Choi operators of the three labs' instrument branches, without
// assuming a causal order between the labs.
//
// Conventions (part of the scenario file format):
//   * Choi operator of a map M from H_in to H_out:
//       C = sum_{a,b} |a><b| ⊗ M(|a><b|),   input factor first,
//     i.e. C = sum_m (I ⊗ K_m)|Φ+><Φ+|(I ⊗ K_m)^dagger with the unnormalized
//     |Φ+> = sum_a |a>|a>. Then M(X) = tr_in[(X^T ⊗ I) C].
//   * W acts on A_in ⊗ A_out ⊗ B_in ⊗ B_out ⊗ E_in ⊗ E_out, in that order,
//     with the last factor varying fastest.
//   * Under these conventions a lab fed the state rho sees rho^T on its input
//     factor, and an identity wire from one lab's output to another's input is
//     the unnormalized |Φ+><Φ+| on that pair of factors.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "agreelab/linalg.hpp"
#include "agreelab/probability.hpp"
#include "agreelab/quantum.hpp"

namespace agree {

enum class Lab { kAlice = 0, kBob = 1, kEvent = 2 };

std::string LabName(Lab lab);

struct LabDim {
  std::size_t in = 1;
  std::size_t out = 1;
  friend bool operator==(const LabDim&, const LabDim&) = default;
};

struct LabDims {
  std::array<LabDim, 3> labs;  // indexed by Lab

  const LabDim& operator[](Lab l) const { return labs[static_cast<int>(l)]; }
  LabDim& operator[](Lab l) { return labs[static_cast<int>(l)]; }
  // dim(A_in ⊗ A_out ⊗ B_in ⊗ B_out ⊗ E_in ⊗ E_out)
  std::size_t Total() const;
  std::size_t OutputProduct() const;
  // The six factor dimensions in storage order.
  std::array<std::size_t, 6> Factors() const;

  static LabDims Of(const Instrument& a, const Instrument& b,
                    const Instrument& e);

  friend bool operator==(const LabDims&, const LabDims&) = default;
};

class ChoiOperator {
 public:
  ChoiOperator(std::size_t dim_in, std::size_t dim_out, ComplexMatrix m);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  ComplexMatrix m_;
};

ChoiOperator choi_of_branch(const KrausBranch& branch, std::size_t dim_in,
                            std::size_t dim_out);
std::vector<ChoiOperator> ChoiOperators(const Instrument& instr);

using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// A candidate W. Only the shape is enforced on construction; the physical
// conditions are checked by validate_process, and process_joint rejects any W
// whose probabilities fail to normalize.
class ProcessMatrix {
 public:
  ProcessMatrix(LabDims dims, SparseComplexMatrix w);
  ProcessMatrix(LabDims dims, const ComplexMatrix& dense);

  const LabDims& dims() const { return dims_; }
  const SparseComplexMatrix& matrix() const { return w_; }
  ComplexMatrix Dense() const { return ComplexMatrix(w_); }
  Complex Trace() const;

  ProcessMatrix Scaled(double factor) const;

 private:
  LabDims dims_;
  SparseComplexMatrix w_;
};

// Raw probabilities tr[(A_i ⊗ B_j ⊗ E_k) W], row-major in (i, j, k).
// The parallel kernel splits W's rows into a fixed number of chunks and
// reduces the chunk partials in chunk order, so the result does not depend on
// the thread count.
std::vector<double> process_table(const ProcessMatrix& w,
                                  const std::vector<ChoiOperator>& alice,
                                  const std::vector<ChoiOperator>& bob,
                                  const std::vector<ChoiOperator>& event);

// Single-threaded reference for process_table. It performs the same chunked
// reduction, so the two agree bit for bit.
std::vector<double> process_table_serial(
    const ProcessMatrix& w, const std::vector<ChoiOperator>& alice,
    const std::vector<ChoiOperator>& bob,
    const std::vector<ChoiOperator>& event);

JointDistribution process_joint(const ProcessMatrix& w, const Instrument& alice,
                                const Instrument& bob, const Instrument& event,
                                double tol = 1e-9);
JointDistribution process_joint_serial(const ProcessMatrix& w,
                                       const Instrument& alice,
                                       const Instrument& bob,
                                       const Instrument& event,
                                       double tol = 1e-9);

// W for labs connected in a definite order: rho enters the first lab, each
// lab's output is wired to the next lab's input, the last output is
// discarded. Labs absent from `order` must be trivial (dims 1 -> 1).
ProcessMatrix embed_definite_order(const DensityMatrix& rho,
                                   const std::vector<Lab>& order,
                                   const LabDims& dims);

// Order used by a sequential scenario.
std::vector<Lab> LabSequence(Order order);

ProcessMatrix mix_processes(const std::vector<ProcessMatrix>& ws,
                            const std::vector<double>& weights);

struct ProcessTolerances {
  double hermitian = 1e-10;
  double psd = 1e-10;
  double trace = 1e-8;
  double normalization = 1e-9;
};

struct ProcessDiagnostics {
  double hermitian_deviation = 0;
  double min_eigenvalue = 0;
  double trace_deviation = 0;  // |tr W - prod of output dims|
  double normalization_probe = 0;  // max |sum_ijk p - 1| over random instruments
  bool hermitian_ok = false;
  bool psd_ok = false;
  bool trace_ok = false;
  bool normalization_ok = false;
  bool passes = false;
  std::string Describe() const;
};

// Smallest eigenvalue of a hermitian sparse matrix, computed block by block
// over the connected components of its sparsity pattern.
double SparseMinEigenvalue(const SparseComplexMatrix& m);

ProcessDiagnostics validate_process(const ProcessMatrix& w,
                                    std::size_t probe_trials = 16,
                                    std::uint64_t seed = 0,
                                    const ProcessTolerances& tol = {});

}  // namespace agree

#endif  // AGREELAB_PROCESS_HPP_
