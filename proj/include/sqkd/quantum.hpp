#ifndef SQKD_QUANTUM_HPP_
#define SQKD_QUANTUM_HPP_

#include <complex>
#include <vector>

#include "sqkd/common.hpp"
#include "sqkd/random.hpp"

namespace sqkd {

// Preparation/measurement bases. Z eigenstates are the computational states
// |0>, |1>; X eigenstates are (|0>+|1>)/sqrt2 and (|0>-|1>)/sqrt2.
enum class Basis { Z, X };

// Exact state vector over one or two qubits. Amplitude index i addresses the
// computational basis state whose bit for qubit q is (i >> (num_qubits-1-q)) & 1,
// i.e. qubit 0 occupies the most significant position: index = |q0 q1>.
//
// Convention used by every higher layer: qubit 0 is the photon polarization,
// qubit 1 (when present) is Eve's ancilla.
struct QuantumRegister {
    int num_qubits = 0;
    std::vector<std::complex<double>> amplitudes;
};

struct MeasurementOutcome {
    Bit bit = 0;
    QuantumRegister post_state;
};

// Single-qubit register in the given basis eigenstate.
QuantumRegister prepare(Basis basis, Bit bit);

// Kronecker product; qubit indices of `a` precede those of `b`. The combined
// register may not exceed two qubits.
QuantumRegister tensor(const QuantumRegister& a, const QuantumRegister& b);

// Controlled-NOT on a two-qubit register. Self-inverse.
QuantumRegister apply_cnot(const QuantumRegister& reg, int control, int target);

// Hadamard on one qubit. Self-inverse.
QuantumRegister apply_hadamard(const QuantumRegister& reg, int idx);

// Projective measurement of one qubit with Born-rule sampling. An X-basis
// measurement is performed as Hadamard, Z measurement, Hadamard on the
// post-state, so there is a single projection code path. The post-state is
// the renormalized projection; measuring it again with the same idx and
// basis returns the same bit with probability 1. Throws SimulationError if
// both outcome probabilities are below 1e-12 (corrupt register).
MeasurementOutcome measure(const QuantumRegister& reg, int idx, Basis basis, RandomStream& rng);

// Removes qubit idx from a two-qubit register. The qubit must be unentangled
// and in a definite Z eigenstate (every amplitude on the other branch below
// 1e-12 in magnitude); throws SimulationError otherwise. The surviving
// amplitudes are returned unscaled, so a register that entered normalized
// leaves normalized.
QuantumRegister discard_qubit(const QuantumRegister& reg, int idx);

double squared_norm(const QuantumRegister& reg);

}  // namespace sqkd

#endif  // SQKD_QUANTUM_HPP_
