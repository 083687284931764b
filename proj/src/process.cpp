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

#include "agreelab/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "agreelab/errors.hpp"
#include "agreelab/random.hpp"

namespace agree {

std::string LabName(Lab lab) {
  switch (lab) {
    case Lab::kAlice: return "alice";
    case Lab::kBob: return "bob";
    case Lab::kEvent: return "event";
  }
  return "?";
}

std::size_t LabDims::Total() const {
  std::size_t n = 1;
  for (const LabDim& l : labs) n *= l.in * l.out;
  return n;
}

std::size_t LabDims::OutputProduct() const {
  std::size_t n = 1;
  for (const LabDim& l : labs) n *= l.out;
  return n;
}

std::array<std::size_t, 6> LabDims::Factors() const {
  return {labs[0].in, labs[0].out, labs[1].in,
          labs[1].out, labs[2].in, labs[2].out};
}

LabDims LabDims::Of(const Instrument& a, const Instrument& b,
                    const Instrument& e) {
  return LabDims{{LabDim{a.dim_in(), a.dim_out()},
                  LabDim{b.dim_in(), b.dim_out()},
                  LabDim{e.dim_in(), e.dim_out()}}};
}

ChoiOperator::ChoiOperator(std::size_t dim_in, std::size_t dim_out,
                           ComplexMatrix m)
    : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(m)) {
  const auto n = static_cast<Eigen::Index>(dim_in_ * dim_out_);
  if (m_.rows() != n || m_.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "Choi matrix has wrong size");
  }
}

ChoiOperator choi_of_branch(const KrausBranch& branch, std::size_t dim_in,
                            std::size_t dim_out) {
  const auto din = static_cast<Eigen::Index>(dim_in);
  const auto dout = static_cast<Eigen::Index>(dim_out);
  ComplexMatrix c = ComplexMatrix::Zero(din * dout, din * dout);
  for (const ComplexMatrix& k : branch) {
    if (k.rows() != dout || k.cols() != din) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "Kraus operator shape does not match the branch dims");
    }
    // Block (a, b) of C is M(|a><b|) = K|a><b|K^dagger.
    for (Eigen::Index a = 0; a < din; ++a) {
      for (Eigen::Index b = 0; b < din; ++b) {
        c.block(a * dout, b * dout, dout, dout) +=
            k.col(a) * k.col(b).adjoint();
      }
    }
  }
  return ChoiOperator(dim_in, dim_out, std::move(c));
}

std::vector<ChoiOperator> ChoiOperators(const Instrument& instr) {
  std::vector<ChoiOperator> out;
  out.reserve(instr.num_outcomes());
  for (const KrausBranch& b : instr.branches()) {
    out.push_back(choi_of_branch(b, instr.dim_in(), instr.dim_out()));
  }
  return out;
}

ProcessMatrix::ProcessMatrix(LabDims dims, SparseComplexMatrix w)
    : dims_(dims), w_(std::move(w)) {
  const auto n = static_cast<Eigen::Index>(dims_.Total());
  if (w_.rows() != n || w_.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "W is " + std::to_string(w_.rows()) + "x" +
                    std::to_string(w_.cols()) + ", lab dimensions need " +
                    std::to_string(n));
  }
  w_.makeCompressed();
}

ProcessMatrix::ProcessMatrix(LabDims dims, const ComplexMatrix& dense)
    : ProcessMatrix(dims, SparseComplexMatrix(dense.sparseView(0.0, 0.0))) {}

Complex ProcessMatrix::Trace() const {
  Complex t(0, 0);
  for (Eigen::Index r = 0; r < w_.outerSize(); ++r) t += w_.coeff(r, r);
  return t;
}

ProcessMatrix ProcessMatrix::Scaled(double factor) const {
  return ProcessMatrix(dims_, SparseComplexMatrix(w_ * Complex(factor, 0)));
}

namespace {

void CheckChois(const std::vector<ChoiOperator>& chois, const LabDim& dim,
                Lab lab) {
  if (chois.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                LabName(lab) + " instrument has no outcomes");
  }
  for (const ChoiOperator& c : chois) {
    if (c.dim_in() != dim.in || c.dim_out() != dim.out) {
      throw Error(ErrorCode::kDimensionMismatch,
                  LabName(lab) + " instrument acts " +
                      std::to_string(c.dim_in()) + " -> " +
                      std::to_string(c.dim_out()) + ", W expects " +
                      std::to_string(dim.in) + " -> " +
                      std::to_string(dim.out));
    }
  }
}

// Accumulates rows [row_begin, row_end) of W into acc.
//   p(i,j,k) = sum_{r,c} W(r,c) X(c,r),  X = A_i ⊗ B_j ⊗ E_k,
// and X(c,r) factorizes over the three labs' index blocks.
void AccumulateRows(const SparseComplexMatrix& w,
                    const std::vector<ChoiOperator>& alice,
                    const std::vector<ChoiOperator>& bob,
                    const std::vector<ChoiOperator>& event,
                    Eigen::Index row_begin, Eigen::Index row_end,
                    std::vector<Complex>& acc) {
  const auto nb = static_cast<Eigen::Index>(bob.front().matrix().rows());
  const auto ne = static_cast<Eigen::Index>(event.front().matrix().rows());
  const std::size_t ni = alice.size(), nj = bob.size(), nk = event.size();
  std::vector<Complex> av(ni), bv(nj), ev(nk);
  for (Eigen::Index r = row_begin; r < row_end; ++r) {
    const Eigen::Index ra = r / (nb * ne);
    const Eigen::Index rb = (r / ne) % nb;
    const Eigen::Index re = r % ne;
    for (SparseComplexMatrix::InnerIterator it(w, r); it; ++it) {
      const Eigen::Index c = it.col();
      const Eigen::Index ca = c / (nb * ne);
      const Eigen::Index cb = (c / ne) % nb;
      const Eigen::Index ce = c % ne;
      const Complex wv = it.value();
      for (std::size_t i = 0; i < ni; ++i) av[i] = alice[i].matrix()(ca, ra);
      for (std::size_t j = 0; j < nj; ++j) bv[j] = bob[j].matrix()(cb, rb);
      for (std::size_t k = 0; k < nk; ++k) ev[k] = event[k].matrix()(ce, re);
      for (std::size_t i = 0; i < ni; ++i) {
        if (av[i] == Complex(0, 0)) continue;
        const Complex wa = wv * av[i];
        for (std::size_t j = 0; j < nj; ++j) {
          if (bv[j] == Complex(0, 0)) continue;
          const Complex wab = wa * bv[j];
          Complex* out = &acc[(i * nj + j) * nk];
          for (std::size_t k = 0; k < nk; ++k) out[k] += wab * ev[k];
        }
      }
    }
  }
}

std::vector<double> RealParts(const std::vector<Complex>& acc) {
  std::vector<double> out(acc.size());
  for (std::size_t n = 0; n < acc.size(); ++n) out[n] = acc[n].real();
  return out;
}

// Fixed so that the reduction order is independent of the thread count.
constexpr Eigen::Index kChunks = 64;

}  // namespace

namespace {

// Both kernels reduce the same 64 fixed row chunks in chunk order, so they
// return bit-identical tables; `parallel` only decides who computes a chunk.
std::vector<double> ChunkedTable(const ProcessMatrix& w,
                                 const std::vector<ChoiOperator>& alice,
                                 const std::vector<ChoiOperator>& bob,
                                 const std::vector<ChoiOperator>& event,
                                 bool parallel) {
  CheckChois(alice, w.dims()[Lab::kAlice], Lab::kAlice);
  CheckChois(bob, w.dims()[Lab::kBob], Lab::kBob);
  CheckChois(event, w.dims()[Lab::kEvent], Lab::kEvent);
  const std::size_t cells = alice.size() * bob.size() * event.size();
  const Eigen::Index rows = w.matrix().rows();
  std::vector<std::vector<Complex>> partial(
      kChunks, std::vector<Complex>(cells, Complex(0, 0)));
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (Eigen::Index chunk = 0; chunk < kChunks; ++chunk) {
    const Eigen::Index begin = rows * chunk / kChunks;
    const Eigen::Index end = rows * (chunk + 1) / kChunks;
    AccumulateRows(w.matrix(), alice, bob, event, begin, end,
                   partial[static_cast<std::size_t>(chunk)]);
  }
  std::vector<Complex> acc(cells, Complex(0, 0));
  for (const auto& part : partial) {
    for (std::size_t n = 0; n < cells; ++n) acc[n] += part[n];
  }
  return RealParts(acc);
}

}  // namespace

std::vector<double> process_table_serial(
    const ProcessMatrix& w, const std::vector<ChoiOperator>& alice,
    const std::vector<ChoiOperator>& bob,
    const std::vector<ChoiOperator>& event) {
  return ChunkedTable(w, alice, bob, event, false);
}

std::vector<double> process_table(const ProcessMatrix& w,
                                  const std::vector<ChoiOperator>& alice,
                                  const std::vector<ChoiOperator>& bob,
                                  const std::vector<ChoiOperator>& event) {
  return ChunkedTable(w, alice, bob, event, true);
}

JointDistribution process_joint(const ProcessMatrix& w,
                                const Instrument& alice, const Instrument& bob,
                                const Instrument& event, double tol) {
  const OutcomeSpace space(alice.num_outcomes(), bob.num_outcomes(),
                           event.num_outcomes());
  return validate_joint(process_table(w, ChoiOperators(alice),
                                      ChoiOperators(bob), ChoiOperators(event)),
                        space, tol);
}

JointDistribution process_joint_serial(const ProcessMatrix& w,
                                       const Instrument& alice,
                                       const Instrument& bob,
                                       const Instrument& event, double tol) {
  const OutcomeSpace space(alice.num_outcomes(), bob.num_outcomes(),
                           event.num_outcomes());
  return validate_joint(
      process_table_serial(w, ChoiOperators(alice), ChoiOperators(bob),
                           ChoiOperators(event)),
      space, tol);
}

std::vector<Lab> LabSequence(Order order) {
  if (order == Order::kAliceBobEvent) {
    return {Lab::kAlice, Lab::kBob, Lab::kEvent};
  }
  return {Lab::kAlice, Lab::kEvent, Lab::kBob};
}

ProcessMatrix embed_definite_order(const DensityMatrix& rho,
                                   const std::vector<Lab>& order,
                                   const LabDims& dims) {
  if (order.empty() || order.size() > 3) {
    throw Error(ErrorCode::kDimensionMismatch,
                "order must list one to three labs");
  }
  std::array<bool, 3> used{false, false, false};
  for (Lab l : order) {
    if (used[static_cast<int>(l)]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  LabName(l) + " appears twice in the order");
    }
    used[static_cast<int>(l)] = true;
  }
  for (int l = 0; l < 3; ++l) {
    if (!used[l] && !(dims.labs[l] == LabDim{1, 1})) {
      throw Error(ErrorCode::kDimensionMismatch,
                  LabName(static_cast<Lab>(l)) +
                      " is not in the order but is not trivial");
    }
  }
  if (rho.dim() != dims[order.front()].in) {
    throw Error(ErrorCode::kDimensionMismatch,
                "state dimension " + std::to_string(rho.dim()) +
                    " does not match " + LabName(order.front()) + " input " +
                    std::to_string(dims[order.front()].in));
  }
  for (std::size_t s = 0; s + 1 < order.size(); ++s) {
    if (dims[order[s]].out != dims[order[s + 1]].in) {
      throw Error(ErrorCode::kDimensionMismatch,
                  LabName(order[s]) + " output does not match " +
                      LabName(order[s + 1]) + " input");
    }
  }

  // Factor slots in storage order: 2*lab is the lab's input, 2*lab+1 its
  // output.
  const std::array<std::size_t, 6> factors = dims.Factors();
  auto flat = [&](const std::array<std::size_t, 6>& idx) {
    std::size_t f = 0;
    for (int s = 0; s < 6; ++s) f = f * factors[s] + idx[s];
    return static_cast<Eigen::Index>(f);
  };

  struct Wire {
    int from_slot;
    int to_slot;
    std::size_t dim;
  };
  std::vector<Wire> wires;
  for (std::size_t s = 0; s + 1 < order.size(); ++s) {
    wires.push_back({2 * static_cast<int>(order[s]) + 1,
                     2 * static_cast<int>(order[s + 1]),
                     dims[order[s]].out});
  }
  const int first_in = 2 * static_cast<int>(order.front());
  const int last_out = 2 * static_cast<int>(order.back()) + 1;
  const std::size_t d_first = dims[order.front()].in;
  const std::size_t d_last = dims[order.back()].out;

  std::vector<Eigen::Triplet<Complex>> triplets;
  std::array<std::size_t, 6> row{}, col{};
  // rho^T on the first input, |Φ+><Φ+| on each wire, identity on the last
  // output.
  auto emit_wires = [&](auto&& self, std::size_t w, Complex value) -> void {
    if (w == wires.size()) {
      for (std::size_t c = 0; c < d_last; ++c) {
        row[last_out] = col[last_out] = c;
        triplets.emplace_back(flat(row), flat(col), value);
      }
      return;
    }
    const Wire& wire = wires[w];
    for (std::size_t a = 0; a < wire.dim; ++a) {
      for (std::size_t b = 0; b < wire.dim; ++b) {
        row[wire.from_slot] = row[wire.to_slot] = a;
        col[wire.from_slot] = col[wire.to_slot] = b;
        self(self, w + 1, value);
      }
    }
  };
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t x = 0; x < d_first; ++x) {
    for (std::size_t y = 0; y < d_first; ++y) {
      const Complex v = m(static_cast<Eigen::Index>(y),
                          static_cast<Eigen::Index>(x));
      if (v == Complex(0, 0)) continue;
      row[first_in] = x;
      col[first_in] = y;
      emit_wires(emit_wires, 0, v);
    }
  }

  const auto n = static_cast<Eigen::Index>(dims.Total());
  SparseComplexMatrix w(n, n);
  w.setFromTriplets(triplets.begin(), triplets.end());
  return ProcessMatrix(dims, std::move(w));
}

ProcessMatrix mix_processes(const std::vector<ProcessMatrix>& ws,
                            const std::vector<double>& weights) {
  if (ws.empty() || ws.size() != weights.size()) {
    throw Error(ErrorCode::kBadWeights,
                "need one weight per process matrix");
  }
  double sum = 0;
  for (double x : weights) {
    if (!(x >= 0.0)) throw Error(ErrorCode::kBadWeights, "negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::kBadWeights,
                "weights sum to " + std::to_string(sum));
  }
  const LabDims dims = ws.front().dims();
  const auto n = static_cast<Eigen::Index>(dims.Total());
  SparseComplexMatrix acc(n, n);
  for (std::size_t s = 0; s < ws.size(); ++s) {
    if (!(ws[s].dims() == dims)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "mixed process matrices have different lab dimensions");
    }
    if (weights[s] == 0.0) continue;
    acc += ws[s].matrix() * Complex(weights[s], 0);
  }
  acc.prune(Complex(0, 0), 0.0);
  return ProcessMatrix(dims, std::move(acc));
}

double SparseMinEigenvalue(const SparseComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 0) return 0.0;
  // Union-find over the (symmetrized) sparsity graph.
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseComplexMatrix::InnerIterator it(m, r); it; ++it) {
      const Eigen::Index a = find(r), b = find(it.col());
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(n));
  for (Eigen::Index x = 0; x < n; ++x) members[find(x)].push_back(x);

  double min_eig = INFINITY;
  std::vector<Eigen::Index> local(static_cast<std::size_t>(n), -1);
  for (const auto& comp : members) {
    if (comp.empty()) continue;
    const auto size = static_cast<Eigen::Index>(comp.size());
    for (Eigen::Index t = 0; t < size; ++t) local[comp[t]] = t;
    ComplexMatrix block = ComplexMatrix::Zero(size, size);
    for (Eigen::Index t = 0; t < size; ++t) {
      for (SparseComplexMatrix::InnerIterator it(m, comp[t]); it; ++it) {
        block(t, local[it.col()]) = it.value();
      }
    }
    min_eig = std::min(min_eig, MinEigenvalue(block));
  }
  return min_eig;
}

std::string ProcessDiagnostics::Describe() const {
  std::ostringstream os;
  os << "hermiticity deviation " << hermitian_deviation
     << (hermitian_ok ? "" : " (FAILED)") << ", min eigenvalue "
     << min_eigenvalue << (psd_ok ? "" : " (FAILED)") << ", trace deviation "
     << trace_deviation << (trace_ok ? "" : " (FAILED)")
     << ", normalization probe " << normalization_probe
     << (normalization_ok ? "" : " (FAILED)");
  return os.str();
}

ProcessDiagnostics validate_process(const ProcessMatrix& w,
                                    std::size_t probe_trials,
                                    std::uint64_t seed,
                                    const ProcessTolerances& tol) {
  ProcessDiagnostics d;
  const SparseComplexMatrix& m = w.matrix();
  const SparseComplexMatrix adj = m.adjoint();
  const SparseComplexMatrix diff = m - adj;
  d.hermitian_deviation = 0;
  for (Eigen::Index r = 0; r < diff.outerSize(); ++r) {
    for (SparseComplexMatrix::InnerIterator it(diff, r); it; ++it) {
      d.hermitian_deviation = std::max(d.hermitian_deviation,
                                       std::abs(it.value()));
    }
  }
  d.hermitian_ok = d.hermitian_deviation <= tol.hermitian;
  const SparseComplexMatrix herm = (m + adj) * Complex(0.5, 0);
  d.min_eigenvalue = SparseMinEigenvalue(herm);
  d.psd_ok = d.min_eigenvalue >= -tol.psd;
  d.trace_deviation = std::abs(
      w.Trace() - Complex(static_cast<double>(w.dims().OutputProduct()), 0));
  d.trace_ok = d.trace_deviation <= tol.trace;

  Rng rng(MixSeed(seed, 0x70726f6265ULL));
  const LabDims& dims = w.dims();
  for (std::size_t t = 0; t < probe_trials; ++t) {
    std::array<std::vector<ChoiOperator>, 3> chois;
    for (int l = 0; l < 3; ++l) {
      const LabDim ld = dims.labs[l];
      const Instrument instr = RandomKrausInstrument(
          rng, ld.in, ld.out, UniformIndex(rng, 1, 3), UniformIndex(rng, 1, 2));
      chois[l] = ChoiOperators(instr);
    }
    const std::vector<double> table =
        process_table(w, chois[0], chois[1], chois[2]);
    const double total = std::accumulate(table.begin(), table.end(), 0.0);
    d.normalization_probe = std::max(d.normalization_probe,
                                     std::abs(total - 1.0));
  }
  d.normalization_ok = d.normalization_probe <= tol.normalization;
  d.passes = d.hermitian_ok && d.psd_ok && d.trace_ok && d.normalization_ok;
  return d;
}

}  // namespace agree
