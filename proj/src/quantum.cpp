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

#include "agreelab/quantum.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

#include "agreelab/errors.hpp"
#include "agreelab/process.hpp"

namespace agree {

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw Error(ErrorCode::kInvalidState, "density matrix must be square");
  }
  const double herm = HermitianDeviation(m_);
  if (herm > kHermitianTol) {
    throw Error(ErrorCode::kInvalidState,
                "not hermitian (deviation " + std::to_string(herm) + ")");
  }
  const double min_eig = MinEigenvalue(m_);
  if (min_eig < -kPsdTol) {
    throw Error(ErrorCode::kInvalidState,
                "not positive semidefinite (min eigenvalue " +
                    std::to_string(min_eig) + ")");
  }
  if (!HasUnitTrace(m_)) {
    throw Error(ErrorCode::kInvalidState,
                "trace is " + std::to_string(m_.trace().real()));
  }
}

DensityMatrix DensityMatrix::MaximallyMixed(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(d, d) /
                       static_cast<double>(dim));
}

DensityMatrix DensityMatrix::Pure(const ComplexVector& psi) {
  return DensityMatrix(Projector(psi.normalized()));
}

Instrument::Instrument(std::size_t dim_in, std::size_t dim_out,
                       std::vector<KrausBranch> branches)
    : dim_in_(dim_in), dim_out_(dim_out), branches_(std::move(branches)) {
  if (dim_in_ == 0 || dim_out_ == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "instrument dimension 0");
  }
  if (branches_.empty()) {
    throw Error(ErrorCode::kInvalidInstrument, "instrument has no outcomes");
  }
  for (std::size_t x = 0; x < branches_.size(); ++x) {
    if (branches_[x].empty()) {
      throw Error(ErrorCode::kInvalidInstrument,
                  "branch " + std::to_string(x) + " has no Kraus operators");
    }
    for (const ComplexMatrix& k : branches_[x]) {
      if (static_cast<std::size_t>(k.rows()) != dim_out_ ||
          static_cast<std::size_t>(k.cols()) != dim_in_) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "Kraus operator of branch " + std::to_string(x) +
                        " is " + std::to_string(k.rows()) + "x" +
                        std::to_string(k.cols()) + ", expected " +
                        std::to_string(dim_out_) + "x" +
                        std::to_string(dim_in_));
      }
    }
  }
}

Instrument Instrument::Identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return Instrument(dim, dim, {{ComplexMatrix::Identity(d, d)}});
}

Instrument Instrument::Projective(
    const std::vector<ComplexMatrix>& projectors) {
  if (projectors.empty()) {
    throw Error(ErrorCode::kInvalidInstrument, "no projectors");
  }
  const auto dim = static_cast<std::size_t>(projectors.front().rows());
  std::vector<KrausBranch> branches;
  branches.reserve(projectors.size());
  for (const ComplexMatrix& p : projectors) branches.push_back({p});
  return Instrument(dim, dim, std::move(branches));
}

Instrument Instrument::FromBasis(const ComplexMatrix& basis) {
  std::vector<ComplexMatrix> projectors;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    projectors.push_back(Projector(basis.col(c)));
  }
  return Projective(projectors);
}

ComplexMatrix Instrument::Effect(std::size_t x) const {
  const auto d = static_cast<Eigen::Index>(dim_in_);
  ComplexMatrix f = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& k : branches_[x]) f += k.adjoint() * k;
  return f;
}

std::string InstrumentDiagnostics::Describe() const {
  std::ostringstream os;
  os << "trace-preservation deviation " << trace_preservation_deviation
     << ", Choi min eigenvalues [";
  for (std::size_t x = 0; x < choi_min_eigenvalue.size(); ++x) {
    os << (x ? ", " : "") << choi_min_eigenvalue[x];
  }
  os << "]" << (passes ? " (ok)" : " (FAILED)");
  return os.str();
}

InstrumentDiagnostics validate_instrument(const Instrument& instr,
                                          double tol) {
  InstrumentDiagnostics d;
  const auto n = static_cast<Eigen::Index>(instr.dim_in());
  ComplexMatrix total = -ComplexMatrix::Identity(n, n);
  bool cp_ok = true;
  for (std::size_t x = 0; x < instr.num_outcomes(); ++x) {
    total += instr.Effect(x);
    const ChoiOperator c =
        choi_of_branch(instr.branch(x), instr.dim_in(), instr.dim_out());
    const double e = MinEigenvalue(c.matrix());
    d.choi_min_eigenvalue.push_back(e);
    cp_ok = cp_ok && e >= -std::max(tol, kPsdTol);
  }
  d.trace_preservation_deviation = OperatorNorm(total);
  d.passes = cp_ok && d.trace_preservation_deviation <= tol;
  return d;
}

void RequireValid(const Instrument& instr, const std::string& name,
                  double tol) {
  const InstrumentDiagnostics d = validate_instrument(instr, tol);
  if (!d.passes) {
    throw Error(ErrorCode::kInvalidInstrument,
                "instrument '" + name + "': " + d.Describe());
  }
}

ComplexMatrix apply_branch(const KrausBranch& branch,
                           const ComplexMatrix& rho) {
  if (branch.empty()) {
    throw Error(ErrorCode::kInvalidInstrument, "empty Kraus branch");
  }
  const ComplexMatrix& k0 = branch.front();
  if (rho.rows() != rho.cols() || k0.cols() != rho.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Kraus operators act on dimension " +
                    std::to_string(k0.cols()) + ", state has dimension " +
                    std::to_string(rho.rows()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(k0.rows(), k0.rows());
  for (const ComplexMatrix& k : branch) out += k * rho * k.adjoint();
  return out;
}

std::string OrderName(Order o) {
  return o == Order::kAliceBobEvent ? "ABE" : "AEB";
}

Order ParseOrder(const std::string& s) {
  if (s == "ABE") return Order::kAliceBobEvent;
  if (s == "AEB") return Order::kAliceEventBob;
  throw Error(ErrorCode::kParseError,
              "order must be \"ABE\" or \"AEB\", got \"" + s + "\"");
}

namespace {

void CheckChain(std::size_t have, std::size_t want, const char* what) {
  if (have != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": dimension " + std::to_string(have) +
                    " does not chain into " + std::to_string(want));
  }
}

}  // namespace

QuantumScenario::QuantumScenario(DensityMatrix state, Instrument alice,
                                 Instrument bob, Instrument event_instr,
                                 Order order, Event event)
    : state_(std::move(state)),
      alice_(std::move(alice)),
      bob_(std::move(bob)),
      event_instr_(std::move(event_instr)),
      order_(order),
      event_(std::move(event)) {
  CheckChain(state_.dim(), alice_.dim_in(), "state -> Alice");
  if (order_ == Order::kAliceBobEvent) {
    CheckChain(alice_.dim_out(), bob_.dim_in(), "Alice -> Bob");
    CheckChain(bob_.dim_out(), event_instr_.dim_in(), "Bob -> event");
  } else {
    CheckChain(alice_.dim_out(), event_instr_.dim_in(), "Alice -> event");
    CheckChain(event_instr_.dim_out(), bob_.dim_in(), "event -> Bob");
  }
  if (event_.size_k() != event_instr_.num_outcomes()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "event is defined over " + std::to_string(event_.size_k()) +
                    " outcomes, event instrument has " +
                    std::to_string(event_instr_.num_outcomes()));
  }
}

std::vector<double> sequential_table(const QuantumScenario& s) {
  const OutcomeSpace space = s.space();
  std::vector<double> table(space.total(), 0.0);
  const Instrument& second =
      s.order() == Order::kAliceBobEvent ? s.bob() : s.event_instrument();
  const Instrument& last =
      s.order() == Order::kAliceBobEvent ? s.event_instrument() : s.bob();

  // The last instrument only contributes through its effects.
  std::vector<ComplexMatrix> effects;
  for (std::size_t z = 0; z < last.num_outcomes(); ++z) {
    effects.push_back(last.Effect(z));
  }

  for (std::size_t i = 0; i < s.alice().num_outcomes(); ++i) {
    const ComplexMatrix after_a =
        apply_branch(s.alice().branch(i), s.state().matrix());
    for (std::size_t y = 0; y < second.num_outcomes(); ++y) {
      const ComplexMatrix after_second =
          apply_branch(second.branch(y), after_a);
      for (std::size_t z = 0; z < last.num_outcomes(); ++z) {
        const double prob =
            (effects[z].cwiseProduct(after_second.transpose())).sum().real();
        const std::size_t j = s.order() == Order::kAliceBobEvent ? y : z;
        const std::size_t k = s.order() == Order::kAliceBobEvent ? z : y;
        table[space.flat(i, j, k)] = prob;
      }
    }
  }
  return table;
}

JointDistribution sequential_joint(const QuantumScenario& s, double tol) {
  return validate_joint(sequential_table(s), s.space(), tol);
}

void CheckBlockRotationParams(const BlockRotationParams& params) {
  const double q = params.q;
  const double r = params.r;
  if (!(q > 0.0 && q < 0.5)) {
    throw Error(ErrorCode::kParameterOutOfRange,
                "q = " + std::to_string(q) + " must satisfy 0 < q < 1/2");
  }
  if (!(r > 0.0 && r < 1.0 - 2.0 * q)) {
    throw Error(ErrorCode::kParameterOutOfRange,
                "r = " + std::to_string(r) + " must satisfy 0 < r < 1 - 2q");
  }
  if (!std::isfinite(params.theta) || !std::isfinite(params.phi)) {
    throw Error(ErrorCode::kParameterOutOfRange, "angles must be finite");
  }
}

ComplexMatrix BlockRotationBobBasis(double theta, double phi) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  ComplexMatrix b = ComplexMatrix::Zero(4, 4);
  b(0, 0) = ct;  b(1, 0) = st;    // b0 = c a0 + s a1
  b(0, 1) = -st; b(1, 1) = ct;    // b1 = -s a0 + c a1
  b(2, 2) = cp;  b(3, 2) = sp;    // b2 = c a2 + s a3
  b(2, 3) = -sp; b(3, 3) = cp;    // b3 = -s a2 + c a3
  return b;
}

ComplexVector BlockRotationEventVector(const BlockRotationParams& params) {
  CheckBlockRotationParams(params);
  const ComplexMatrix b = BlockRotationBobBasis(params.theta, params.phi);
  const double q = params.q, r = params.r;
  return std::sqrt(q) * b.col(0) + std::sqrt(q) * b.col(1) +
         std::sqrt(r) * b.col(2) + std::sqrt(1.0 - 2.0 * q - r) * b.col(3);
}

QuantumScenario block_rotation_example(const BlockRotationParams& params,
                                       const DensityMatrix& rho) {
  CheckBlockRotationParams(params);
  if (rho.dim() != 4) {
    throw Error(ErrorCode::kDimensionMismatch,
                "the block-rotation example needs a 4-dimensional state");
  }
  const ComplexMatrix e0 = Projector(BlockRotationEventVector(params));
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  return QuantumScenario(
      rho, Instrument::FromBasis(ComplexMatrix::Identity(4, 4)),
      Instrument::FromBasis(BlockRotationBobBasis(params.theta, params.phi)),
      Instrument::Projective({e0, id - e0}), Order::kAliceBobEvent,
      Event(2, {0}));
}

ClosedFormPosteriors block_rotation_closed_form(
    const BlockRotationParams& params) {
  CheckBlockRotationParams(params);
  const double q = params.q, r = params.r;
  const double rest = 1.0 - 2.0 * q - r;
  const double c2 = std::cos(params.phi) * std::cos(params.phi);
  const double s2 = std::sin(params.phi) * std::sin(params.phi);
  return {{q, q, c2 * r + s2 * rest, s2 * r + c2 * rest}, {q, q, r, rest}};
}

}  // namespace agree
