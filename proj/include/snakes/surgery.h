// Copyright 2026 Snakes Contributors
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

#ifndef SNAKES_SURGERY_H
#define SNAKES_SURGERY_H

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace snakes {

using cplx = std::complex<double>;

/// Dense statevector over at most 12 qubits; qubit q is bit q of the index.
class PureState {
public:
    static constexpr int kMaxQubits = 12;

    explicit PureState(int num_qubits = 1);
    /// Single-qubit state a|0> + b|1>; throws unless normalised.
    static PureState qubit(cplx a, cplx b);
    /// Takes ownership of 2^n amplitudes; throws unless normalised.
    static PureState from_amplitudes(std::vector<cplx> amp);
    /// a|+> + b|->.
    static PureState plus_minus(cplx a, cplx b);

    int num_qubits() const {
        return n_;
    }
    const std::vector<cplx> &amplitudes() const {
        return amp_;
    }
    double norm() const;
    void normalise();

    /// Appends the qubits of other as the most significant qubits.
    PureState tensor(const PureState &other) const;

    void apply_x(int q);
    void apply_z(int q);
    void apply_h(int q);
    /// exp(-i phi Z / 2).
    void apply_rz(int q, double phi);
    void apply_cnot(int control, int target);

    /// Projects onto Z_q = (-1)^outcome and returns the branch probability
    /// (the state is renormalised unless that probability is zero).
    double measure_z(int q, int outcome);
    /// Projects onto X_a X_b = (-1)^outcome.
    double measure_xx(int a, int b, int outcome);

    /// Removes qubit q, which must be in the Z eigenstate |value>.
    PureState drop_qubit(int q, int value) const;

private:
    void check_qubit(int q) const;

    int n_;
    std::vector<cplx> amp_;
};

/// |<a|b>|^2.
double fidelity(const PureState &a, const PureState &b);

/// Haar-random single-qubit state from the seed.
PureState random_qubit_state(uint64_t seed);

struct TraceStep {
    std::string action;
    std::vector<int> qubits;
    int outcome = -1;
};

struct ProtocolTrace {
    std::vector<TraceStep> steps;
    double phi_err = 0;
    /// Probability of the outcome branch that was followed.
    double probability = 1;
};

struct ProtocolRun {
    PureState state;
    ProtocolTrace trace;
};

/// Grow, split, shuttle the head under Rz(phi_err), then measure the tail
/// (defect_flag false) or the head (true) and apply the X^m correction.
/// outcomes = {grow XX outcome, final Z outcome}; each must be 0 or 1.
ProtocolRun single_snake_branch(const PureState &psi, bool defect_flag, double phi_err, const std::vector<int> &outcomes);

/// Samples the measurement outcomes from the seed.
ProtocolRun run_single_snake_protocol(const PureState &psi, bool defect_flag, double phi_err, uint64_t seed);

/// Two snakes, heads shuttled under Rz(phi_err) and CNOT'd head1 -> head2.
/// success measures the tails and applies X1^m1 X2^(m1+m2) on the heads;
/// failure measures the heads and applies X1^m1 X2^(m1+m2) on the tails.  The
/// returned state is the surviving two-qubit state (snake 1 is qubit 0).
/// outcomes = {grow1, grow2, m1, m2}.
ProtocolRun interacting_branch(const PureState &psi1, const PureState &psi2, bool success_flag, double phi_err,
                               const std::vector<int> &outcomes);

/// Success branch with the correction X1^m1 X2^m2 on the heads instead,
/// which leaves snake 2 flipped whenever m1 = 1.
ProtocolRun interacting_branch_literal(const PureState &psi1, const PureState &psi2, double phi_err,
                                      const std::vector<int> &outcomes);

ProtocolRun run_interacting_protocol(const PureState &psi1, const PureState &psi2, bool success_flag, double phi_err,
                                     uint64_t seed);

/// a|+>|+...+> + b|->|-...-> on one tail (qubit 0) and k heads.
PureState hydra_state(int k_heads, const PureState &psi = PureState::plus_minus(1, 0));

struct SurgeryCheck {
    std::string protocol;
    int branches = 0;
    double min_fidelity = 1;
    /// Largest |sum of branch probabilities - 1| over the inputs.
    double probability_error = 0;
};

/// Every outcome branch of teleport-back, teleport-forward and both
/// interacting branches over random_qubit_state(seed) inputs and the given
/// defect angles.  Fidelity is taken against the frame-tracked target:
/// psi, Rz(+-phi) psi for an unflagged forward move, CNOT(psi1, psi2) on
/// success (phi = 0) and psi1 (x) psi2 on failure.
std::vector<SurgeryCheck> verify_surgery(const std::vector<uint64_t> &state_seeds, const std::vector<double> &angles);

/// All outcome combinations of a protocol with the given number of binary
/// measurements.
std::vector<std::vector<int>> all_outcomes(int measurements);

}  // namespace snakes

#endif
