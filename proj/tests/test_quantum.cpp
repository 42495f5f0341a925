#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sqkd/quantum.hpp"

using namespace sqkd;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

QuantumRegister make_register(std::vector<std::complex<double>> amps) {
    QuantumRegister reg;
    reg.num_qubits = amps.size() == 2 ? 1 : 2;
    reg.amplitudes = std::move(amps);
    return reg;
}

// Test-only state source; normalizes Gaussian amplitudes.
QuantumRegister random_state(int num_qubits, std::mt19937_64& gen) {
    std::normal_distribution<double> normal;
    QuantumRegister reg;
    reg.num_qubits = num_qubits;
    reg.amplitudes.resize(std::size_t{1} << num_qubits);
    for (auto& amp : reg.amplitudes) {
        amp = {normal(gen), normal(gen)};
    }
    const double scale = 1.0 / std::sqrt(squared_norm(reg));
    for (auto& amp : reg.amplitudes) {
        amp *= scale;
    }
    return reg;
}

double max_deviation(const QuantumRegister& a, const QuantumRegister& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
        worst = std::max(worst, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    }
    return worst;
}

// Exact Z-outcome probability straight from the amplitudes; the independent
// check for every Born-statistics assertion below.
double exact_probability(const QuantumRegister& reg, int qubit, int value) {
    double p = 0.0;
    for (std::size_t i = 0; i < reg.amplitudes.size(); ++i) {
        if (static_cast<int>((i >> (reg.num_qubits - 1 - qubit)) & 1u) == value) {
            p += std::norm(reg.amplitudes[i]);
        }
    }
    return p;
}

}  // namespace

TEST_CASE("prepare produces the four protocol states") {
    CHECK(prepare(Basis::Z, 0).amplitudes == std::vector<std::complex<double>>{1.0, 0.0});
    CHECK(prepare(Basis::Z, 1).amplitudes == std::vector<std::complex<double>>{0.0, 1.0});

    const auto plus = prepare(Basis::X, 0);
    CHECK(plus.amplitudes[0].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(plus.amplitudes[1].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));

    const auto minus = prepare(Basis::X, 1);
    CHECK(minus.amplitudes[0].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(minus.amplitudes[1].real() == doctest::Approx(-0.7071067811865476).epsilon(1e-15));

    CHECK_THROWS_AS(prepare(Basis::Z, 2), std::invalid_argument);
}

TEST_CASE("tensor follows Kronecker ordering with qubit 0 first") {
    const auto zero = prepare(Basis::Z, 0);
    const auto one = prepare(Basis::Z, 1);
    const auto plus = prepare(Basis::X, 0);

    CHECK(tensor(zero, zero).amplitudes == std::vector<std::complex<double>>{1.0, 0.0, 0.0, 0.0});
    CHECK(tensor(one, zero).amplitudes == std::vector<std::complex<double>>{0.0, 0.0, 1.0, 0.0});

    const auto joint = tensor(plus, zero);
    CHECK(joint.amplitudes[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(joint.amplitudes[1].real() == 0.0);
    CHECK(joint.amplitudes[2].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(joint.amplitudes[3].real() == 0.0);

    CHECK_THROWS_AS(tensor(joint, zero), std::invalid_argument);
}

TEST_CASE("cnot permutes basis states and creates Bell states by linearity") {
    const auto bell = apply_cnot(tensor(prepare(Basis::X, 0), prepare(Basis::Z, 0)), 0, 1);
    CHECK(bell.amplitudes[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
    CHECK(bell.amplitudes[1].real() == 0.0);
    CHECK(bell.amplitudes[2].real() == 0.0);
    CHECK(bell.amplitudes[3].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));

    const auto flipped = apply_cnot(make_register({0.0, 0.0, 1.0, 0.0}), 0, 1);
    CHECK(flipped.amplitudes == std::vector<std::complex<double>>{0.0, 0.0, 0.0, 1.0});

    auto reg = make_register({1.0, 0.0});
    CHECK_THROWS_AS(apply_cnot(reg, 0, 1), std::invalid_argument);
    auto two = tensor(reg, reg);
    CHECK_THROWS_AS(apply_cnot(two, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(apply_cnot(two, 0, 2), std::invalid_argument);
}

TEST_CASE("cnot and hadamard are self-inverse on random states") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto state = random_state(2, gen);
        CHECK(max_deviation(apply_cnot(apply_cnot(state, 0, 1), 0, 1), state) < 1e-12);
        CHECK(max_deviation(apply_cnot(apply_cnot(state, 1, 0), 1, 0), state) < 1e-12);
        CHECK(max_deviation(apply_hadamard(apply_hadamard(state, 0), 0), state) < 1e-12);
        CHECK(max_deviation(apply_hadamard(apply_hadamard(state, 1), 1), state) < 1e-12);
    }
}

TEST_CASE("hadamard maps computational states to superpositions") {
    const auto plus = apply_hadamard(prepare(Basis::Z, 0), 0);
    CHECK(max_deviation(plus, prepare(Basis::X, 0)) < 1e-15);
    const auto minus = apply_hadamard(prepare(Basis::Z, 1), 0);
    CHECK(max_deviation(minus, prepare(Basis::X, 1)) < 1e-15);
    CHECK_THROWS_AS(apply_hadamard(plus, 1), std::invalid_argument);
}

TEST_CASE("norm is preserved across long random gate sequences") {
    std::mt19937_64 gen(11);
    QuantumRegister state = tensor(prepare(Basis::Z, 0), prepare(Basis::Z, 0));
    for (int step = 0; step < 10000; ++step) {
        switch (gen() % 3) {
            case 0: state = apply_hadamard(state, gen() % 2); break;
            case 1: state = apply_cnot(state, 0, 1); break;
            default: state = apply_cnot(state, 1, 0); break;
        }
        CHECK(std::abs(squared_norm(state) - 1.0) < 1e-9);
    }
}

TEST_CASE("measure on eigenstates is deterministic with unchanged post-state") {
    RandomStream rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto z = measure(prepare(Basis::Z, 0), 0, Basis::Z, rng);
        CHECK(z.bit == 0);
        CHECK(z.post_state.amplitudes == std::vector<std::complex<double>>{1.0, 0.0});

        const auto x = measure(prepare(Basis::X, 0), 0, Basis::X, rng);
        CHECK(x.bit == 0);
        const auto x1 = measure(prepare(Basis::X, 1), 0, Basis::X, rng);
        CHECK(x1.bit == 1);
    }
}

TEST_CASE("measuring |+> in Z is a fair coin") {
    RandomStream rng(17);
    int zeros = 0;
    const int trials = 10000;
    for (int trial = 0; trial < trials; ++trial) {
        if (measure(prepare(Basis::X, 0), 0, Basis::Z, rng).bit == 0) {
            ++zeros;
        }
    }
    const double frequency = static_cast<double>(zeros) / trials;
    CHECK(frequency >= 0.485);
    CHECK(frequency <= 0.515);
}

TEST_CASE("empirical frequencies track exact Born probabilities") {
    std::mt19937_64 gen(23);
    RandomStream rng(29);
    const int trials = 10000;
    for (int state_index = 0; state_index < 20; ++state_index) {
        const int qubits = state_index % 2 == 0 ? 1 : 2;
        const auto state = random_state(qubits, gen);
        const int qubit = qubits == 2 ? state_index % 2 : 0;
        const double p0 = exact_probability(state, qubit, 0);
        int zeros = 0;
        for (int trial = 0; trial < trials; ++trial) {
            if (measure(state, qubit, Basis::Z, rng).bit == 0) {
                ++zeros;
            }
        }
        const double frequency = static_cast<double>(zeros) / trials;
        const double bound = 4.0 * std::sqrt(p0 * (1.0 - p0) / trials);
        CHECK(std::abs(frequency - p0) <= doctest::Approx(bound).epsilon(1e-9));
    }
}

TEST_CASE("repeated measurement reproduces the outcome") {
    std::mt19937_64 gen(31);
    RandomStream rng(37);
    for (int trial = 0; trial < 500; ++trial) {
        const auto state = random_state(2, gen);
        const int qubit = trial % 2;
        const Basis basis = trial % 4 < 2 ? Basis::Z : Basis::X;
        const auto first = measure(state, qubit, basis, rng);
        CHECK(std::abs(squared_norm(first.post_state) - 1.0) < 1e-9);
        const auto second = measure(first.post_state, qubit, basis, rng);
        CHECK(second.bit == first.bit);
    }
}

TEST_CASE("entangled ancilla copies the photon bit") {
    RandomStream rng(41);
    for (Bit bit : {0, 1}) {
        for (int trial = 0; trial < 100; ++trial) {
            auto joint = apply_cnot(tensor(prepare(Basis::Z, bit), prepare(Basis::Z, 0)), 0, 1);
            const auto photon = measure(joint, 0, Basis::Z, rng);
            CHECK(photon.bit == bit);
            const auto ancilla = measure(photon.post_state, 1, Basis::Z, rng);
            CHECK(ancilla.bit == bit);
        }
    }
}

TEST_CASE("measure rejects a corrupt register") {
    RandomStream rng(43);
    const auto corrupt = make_register({0.0, 0.0});
    CHECK_THROWS_AS(measure(corrupt, 0, Basis::Z, rng), SimulationError);
}

TEST_CASE("discard_qubit drops an eigenstate qubit and rejects entanglement") {
    const auto joint = tensor(prepare(Basis::X, 0), prepare(Basis::Z, 0));
    const auto photon = discard_qubit(joint, 1);
    CHECK(photon.num_qubits == 1);
    CHECK(max_deviation(photon, prepare(Basis::X, 0)) < 1e-15);

    const auto keep_other_side = discard_qubit(tensor(prepare(Basis::Z, 1), prepare(Basis::X, 1)), 0);
    CHECK(max_deviation(keep_other_side, prepare(Basis::X, 1)) < 1e-15);

    const auto bell = apply_cnot(tensor(prepare(Basis::X, 0), prepare(Basis::Z, 0)), 0, 1);
    CHECK_THROWS_AS(discard_qubit(bell, 1), SimulationError);
    CHECK_THROWS_AS(discard_qubit(prepare(Basis::Z, 0), 0), std::invalid_argument);
}
