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

#ifndef AGREELAB_QUANTUM_HPP_
#define AGREELAB_QUANTUM_HPP_

// Density matrices, instruments in Kraus form, and joint outcome
// probabilities of three instruments applied one after another.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "agreelab/linalg.hpp"
#include "agreelab/probability.hpp"

namespace agree {

class DensityMatrix {
 public:
  // Throws kInvalidState unless m is hermitian, PSD and of unit trace.
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix MaximallyMixed(std::size_t dim);
  static DensityMatrix Pure(const ComplexVector& psi);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

// Kraus operators of one completely positive map, each dim_out x dim_in.
using KrausBranch = std::vector<ComplexMatrix>;

// A collection of CP maps (one per outcome) whose sum is trace preserving.
// The constructor only checks shapes; trace preservation is checked by
// validate_instrument so that deliberately broken instruments can be
// diagnosed.
class Instrument {
 public:
  Instrument(std::size_t dim_in, std::size_t dim_out,
             std::vector<KrausBranch> branches);

  // Single-branch identity channel.
  static Instrument Identity(std::size_t dim);
  // Projective measurement with branches P_x rho P_x.
  static Instrument Projective(const std::vector<ComplexMatrix>& projectors);
  // Projective measurement onto the columns of an orthonormal basis; one
  // branch per basis vector.
  static Instrument FromBasis(const ComplexMatrix& basis);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  std::size_t num_outcomes() const { return branches_.size(); }
  const std::vector<KrausBranch>& branches() const { return branches_; }
  const KrausBranch& branch(std::size_t x) const { return branches_[x]; }

  // sum_m K_m^dagger K_m for one branch: the effect of that outcome.
  ComplexMatrix Effect(std::size_t x) const;

 private:
  std::size_t dim_in_;
  std::size_t dim_out_;
  std::vector<KrausBranch> branches_;
};

struct InstrumentDiagnostics {
  std::vector<double> choi_min_eigenvalue;  // per branch
  double trace_preservation_deviation = 0;  // ||sum K^dagger K - I||
  bool passes = false;
  std::string Describe() const;
};

InstrumentDiagnostics validate_instrument(const Instrument& instr,
                                          double tol = 1e-9);

// Throws kInvalidInstrument with the diagnostics when validation fails.
void RequireValid(const Instrument& instr, const std::string& name,
                  double tol = 1e-9);

// sum_m K_m rho K_m^dagger, unnormalized; its trace is the branch probability.
ComplexMatrix apply_branch(const KrausBranch& branch, const ComplexMatrix& rho);

enum class Order {
  kAliceBobEvent,  // E_k o B_j o A_i
  kAliceEventBob,  // B_j o E_k o A_i
};

std::string OrderName(Order o);
Order ParseOrder(const std::string& s);

class QuantumScenario {
 public:
  // Checks that dimensions chain along the order and that event lives on the
  // event instrument's outcomes.
  QuantumScenario(DensityMatrix state, Instrument alice, Instrument bob,
                  Instrument event_instr, Order order, Event event);

  const DensityMatrix& state() const { return state_; }
  const Instrument& alice() const { return alice_; }
  const Instrument& bob() const { return bob_; }
  const Instrument& event_instrument() const { return event_instr_; }
  Order order() const { return order_; }
  const Event& event() const { return event_; }
  OutcomeSpace space() const {
    return OutcomeSpace(alice_.num_outcomes(), bob_.num_outcomes(),
                        event_instr_.num_outcomes());
  }

 private:
  DensityMatrix state_;
  Instrument alice_;
  Instrument bob_;
  Instrument event_instr_;
  Order order_;
  Event event_;
};

// Raw p(i, j, k) before validation, row-major in (i, j, k) whatever the
// temporal order.
std::vector<double> sequential_table(const QuantumScenario& s);

JointDistribution sequential_joint(const QuantumScenario& s,
                                   double tol = 1e-9);

// Four-level example: Alice measures the computational basis {|a_i>}, Bob the
// basis obtained by rotating the {a0, a1} block by theta and the {a2, a3}
// block by phi, then the binary measurement {|e0><e0|, I - |e0><e0|} with
// |e0> = sqrt(q)|b0> + sqrt(q)|b1> + sqrt(r)|b2> + sqrt(1-2q-r)|b3>.
// Order Alice, Bob, event; the event is outcome k = 0.
struct BlockRotationParams {
  double theta = 0;
  double phi = 0;
  double q = 0.2;
  double r = 0.1;
};

void CheckBlockRotationParams(const BlockRotationParams& params);

// Columns are |b_0>..|b_3> in the computational basis.
ComplexMatrix BlockRotationBobBasis(double theta, double phi);
ComplexVector BlockRotationEventVector(const BlockRotationParams& params);

QuantumScenario block_rotation_example(const BlockRotationParams& params,
                                       const DensityMatrix& rho);

struct ClosedFormPosteriors {
  std::array<double, 4> alice;
  std::array<double, 4> bob;
};

// qA(i) = (q, q, c_phi^2 r + s_phi^2 (1-2q-r), s_phi^2 r + c_phi^2 (1-2q-r)),
// qB(j) = (q, q, r, 1-2q-r). qA holds for the maximally mixed input state;
// qB holds for any state giving Bob's outcomes positive probability.
ClosedFormPosteriors block_rotation_closed_form(
    const BlockRotationParams& params);

}  // namespace agree

#endif  // AGREELAB_QUANTUM_HPP_
