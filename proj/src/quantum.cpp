#include "sqkd/quantum.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace sqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Vanishing-probability threshold for projections and detachment.
constexpr double kZeroTolerance = 1e-12;

std::size_t dimension(const QuantumRegister& reg) {
    return std::size_t{1} << reg.num_qubits;
}

int qubit_bit(const QuantumRegister& reg, std::size_t index, int qubit) {
    return static_cast<int>((index >> (reg.num_qubits - 1 - qubit)) & 1u);
}

void check_qubit_index(const QuantumRegister& reg, int idx, const char* op) {
    if (idx < 0 || idx >= reg.num_qubits) {
        throw std::invalid_argument(std::string(op) + ": qubit index " + std::to_string(idx) +
                                    " out of range for " + std::to_string(reg.num_qubits) +
                                    "-qubit register");
    }
}

}  // namespace

QuantumRegister prepare(Basis basis, Bit bit) {
    if (bit != 0 && bit != 1) {
        throw std::invalid_argument("prepare: bit must be 0 or 1");
    }
    QuantumRegister reg;
    reg.num_qubits = 1;
    if (basis == Basis::Z) {
        reg.amplitudes = bit == 0 ? std::vector<std::complex<double>>{1.0, 0.0}
                                  : std::vector<std::complex<double>>{0.0, 1.0};
    } else {
        reg.amplitudes = bit == 0 ? std::vector<std::complex<double>>{kInvSqrt2, kInvSqrt2}
                                  : std::vector<std::complex<double>>{kInvSqrt2, -kInvSqrt2};
    }
    return reg;
}

QuantumRegister tensor(const QuantumRegister& a, const QuantumRegister& b) {
    if (a.num_qubits < 1 || b.num_qubits < 1) {
        throw std::invalid_argument("tensor: operands must hold at least one qubit");
    }
    if (a.num_qubits + b.num_qubits > 2) {
        throw std::invalid_argument("tensor: combined register would exceed two qubits");
    }
    QuantumRegister out;
    out.num_qubits = a.num_qubits + b.num_qubits;
    out.amplitudes.resize(dimension(out));
    const std::size_t dim_b = dimension(b);
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        for (std::size_t j = 0; j < dim_b; ++j) {
            out.amplitudes[i * dim_b + j] = a.amplitudes[i] * b.amplitudes[j];
        }
    }
    return out;
}

QuantumRegister apply_cnot(const QuantumRegister& reg, int control, int target) {
    if (reg.num_qubits != 2) {
        throw std::invalid_argument("apply_cnot: register must hold exactly two qubits");
    }
    check_qubit_index(reg, control, "apply_cnot");
    check_qubit_index(reg, target, "apply_cnot");
    if (control == target) {
        throw std::invalid_argument("apply_cnot: control and target must differ");
    }
    const std::size_t target_mask = std::size_t{1} << (reg.num_qubits - 1 - target);
    QuantumRegister out = reg;
    for (std::size_t i = 0; i < reg.amplitudes.size(); ++i) {
        if (qubit_bit(reg, i, control) == 1) {
            out.amplitudes[i ^ target_mask] = reg.amplitudes[i];
        }
    }
    return out;
}

QuantumRegister apply_hadamard(const QuantumRegister& reg, int idx) {
    check_qubit_index(reg, idx, "apply_hadamard");
    const std::size_t mask = std::size_t{1} << (reg.num_qubits - 1 - idx);
    QuantumRegister out = reg;
    for (std::size_t i = 0; i < reg.amplitudes.size(); ++i) {
        if ((i & mask) == 0) {
            const auto lo = reg.amplitudes[i];
            const auto hi = reg.amplitudes[i | mask];
            out.amplitudes[i] = (lo + hi) * kInvSqrt2;
            out.amplitudes[i | mask] = (lo - hi) * kInvSqrt2;
        }
    }
    return out;
}

MeasurementOutcome measure(const QuantumRegister& reg, int idx, Basis basis, RandomStream& rng) {
    check_qubit_index(reg, idx, "measure");
    if (basis == Basis::X) {
        MeasurementOutcome out = measure(apply_hadamard(reg, idx), idx, Basis::Z, rng);
        out.post_state = apply_hadamard(out.post_state, idx);
        return out;
    }
    double prob[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < reg.amplitudes.size(); ++i) {
        prob[qubit_bit(reg, i, idx)] += std::norm(reg.amplitudes[i]);
    }
    if (prob[0] < kZeroTolerance && prob[1] < kZeroTolerance) {
        throw SimulationError("measure: corrupt register, both outcomes have vanishing probability");
    }
    const double total = prob[0] + prob[1];
    const Bit outcome = rng.uniform() * total < prob[0] ? 0 : 1;

    QuantumRegister post = reg;
    const double scale = 1.0 / std::sqrt(prob[outcome]);
    for (std::size_t i = 0; i < post.amplitudes.size(); ++i) {
        if (qubit_bit(post, i, idx) == outcome) {
            post.amplitudes[i] *= scale;
        } else {
            post.amplitudes[i] = 0.0;
        }
    }
    return {outcome, std::move(post)};
}

QuantumRegister discard_qubit(const QuantumRegister& reg, int idx) {
    if (reg.num_qubits != 2) {
        throw std::invalid_argument("discard_qubit: register must hold exactly two qubits");
    }
    check_qubit_index(reg, idx, "discard_qubit");
    double peak[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < reg.amplitudes.size(); ++i) {
        peak[qubit_bit(reg, i, idx)] =
            std::max(peak[qubit_bit(reg, i, idx)], std::abs(reg.amplitudes[i]));
    }
    int live;
    if (peak[1] < kZeroTolerance) {
        live = 0;
    } else if (peak[0] < kZeroTolerance) {
        live = 1;
    } else {
        throw SimulationError("discard_qubit: qubit is entangled or not in a Z eigenstate");
    }
    QuantumRegister out;
    out.num_qubits = reg.num_qubits - 1;
    out.amplitudes.reserve(dimension(out));
    for (std::size_t i = 0; i < reg.amplitudes.size(); ++i) {
        if (qubit_bit(reg, i, idx) == live) {
            out.amplitudes.push_back(reg.amplitudes[i]);
        }
    }
    return out;
}

double squared_norm(const QuantumRegister& reg) {
    double sum = 0.0;
    for (const auto& amp : reg.amplitudes) {
        sum += std::norm(amp);
    }
    return sum;
}

}  // namespace sqkd
