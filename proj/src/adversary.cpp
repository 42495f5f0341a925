#include "sqkd/adversary.hpp"

namespace sqkd {

namespace {

// Honest channel: photons pass untouched in both directions.
class NoEavesdropper final : public Eavesdropper {
public:
    PhotonInFlight on_forward(PhotonInFlight photon, EveMemory&, std::uint64_t,
                              RandomStream&) const override {
        return photon;
    }
    PhotonInFlight on_return(PhotonInFlight photon, EveMemory&, std::uint64_t,
                             RandomStream&) const override {
        return photon;
    }
};

// Textbook intercept-resend on the forward line: Z-measure Alice's photon and
// send a fresh copy of the outcome towards Bob. Detectable — an X-prepared
// CTRL photon collapses, so Alice's X check errs half the time.
class InterceptResendForwardEve final : public Eavesdropper {
public:
    PhotonInFlight on_forward(PhotonInFlight photon, EveMemory& memory, std::uint64_t round_id,
                              RandomStream& rng) const override {
        auto outcome = measure(*photon.state, photon.photon_qubit, Basis::Z, rng);
        *photon.state = outcome.post_state;
        memory.readout_log.emplace_back(round_id, outcome.bit);
        photon.state = std::make_shared<QuantumRegister>(prepare(Basis::Z, outcome.bit));
        photon.photon_qubit = 0;
        return photon;
    }
    PhotonInFlight on_return(PhotonInFlight photon, EveMemory&, std::uint64_t,
                             RandomStream&) const override {
        return photon;
    }
};

// Z-measures every photon on the return line (our reading of the mock
// protocol's attack surface). Learns every SIFT bit but collapses X-prepared
// CTRL photons, so it is caught the same way as intercept-resend.
class MeasureReturnZEve final : public Eavesdropper {
public:
    PhotonInFlight on_forward(PhotonInFlight photon, EveMemory&, std::uint64_t,
                              RandomStream&) const override {
        return photon;
    }
    PhotonInFlight on_return(PhotonInFlight photon, EveMemory& memory, std::uint64_t round_id,
                             RandomStream& rng) const override {
        auto outcome = measure(*photon.state, photon.photon_qubit, Basis::Z, rng);
        *photon.state = outcome.post_state;
        memory.readout_log.emplace_back(round_id, outcome.bit);
        return photon;
    }
};

// The wavelength-tagging attack.
//
// Forward (step 2): CNOT the photon into a fresh |0> ancilla, shift the
// wavelength label, keep the joint register.
//
// Return: a photon still carrying the shifted label was reflected by Bob
// (CTRL) — undo the CNOT, which resets the ancilla to exactly |0> and erases
// the interaction (step 4a). An unshifted return photon is Bob-fresh (SIFT) —
// Bob consumed the tagged one, so Eve's retained ancilla has collapsed to
// Bob's measured bit; she reads it out in Z (step 4b).
class TaggingEve final : public Eavesdropper {
public:
    explicit TaggingEve(bool untag_on_return) : untag_on_return_(untag_on_return) {}

    PhotonInFlight on_forward(PhotonInFlight photon, EveMemory& memory, std::uint64_t,
                              RandomStream&) const override {
        if (memory.ancilla) {
            throw SimulationError("tagging on_forward: ancilla slot already occupied");
        }
        const int ancilla_qubit = photon.state->num_qubits;
        auto joint = std::make_shared<QuantumRegister>(
            apply_cnot(tensor(*photon.state, prepare(Basis::Z, 0)), photon.photon_qubit, ancilla_qubit));
        photon.state = joint;
        photon.tag = WavelengthTag::Shifted;
        memory.ancilla = EveMemory::AncillaSlot{std::move(joint), ancilla_qubit};
        return photon;
    }

    PhotonInFlight on_return(PhotonInFlight photon, EveMemory& memory, std::uint64_t round_id,
                             RandomStream& rng) const override {
        if (!memory.ancilla) {
            throw SimulationError("tagging on_return: no ancilla in flight for this round");
        }
        if (photon.tag == WavelengthTag::Shifted) {
            memory.classification_log.emplace_back(round_id, Mode::CTRL);
            const int ancilla_qubit = memory.ancilla->ancilla_qubit;
            *photon.state = apply_cnot(*photon.state, photon.photon_qubit, ancilla_qubit);
            // The ancilla is back to |0>; detach it and release the photon.
            photon.state = std::make_shared<QuantumRegister>(discard_qubit(*photon.state, ancilla_qubit));
            memory.ancilla.reset();
            if (untag_on_return_) {
                photon.tag = WavelengthTag::Original;
            }
        } else {
            memory.classification_log.emplace_back(round_id, Mode::SIFT);
            auto outcome =
                measure(*memory.ancilla->joint, memory.ancilla->ancilla_qubit, Basis::Z, rng);
            memory.readout_log.emplace_back(round_id, outcome.bit);
            memory.ancilla.reset();
        }
        return photon;
    }

private:
    bool untag_on_return_;
};

// Apparatus-fingerprint attack: Bob's fresh photons are distinguishable from
// Alice's, so Eve identifies a Bob-fresh return photon with probability d and
// Z-measures it. Reflected photons are never misidentified, and the measured
// photon is a Z eigenstate, so nothing is disturbed.
class FingerprintEve final : public Eavesdropper {
public:
    explicit FingerprintEve(double d) : d_(d) {}

    PhotonInFlight on_forward(PhotonInFlight photon, EveMemory&, std::uint64_t,
                              RandomStream&) const override {
        return photon;
    }

    PhotonInFlight on_return(PhotonInFlight photon, EveMemory& memory, std::uint64_t round_id,
                             RandomStream& rng) const override {
        if (photon.origin == PhotonOrigin::Bob && rng.bernoulli(d_)) {
            auto outcome = measure(*photon.state, photon.photon_qubit, Basis::Z, rng);
            *photon.state = outcome.post_state;
            memory.readout_log.emplace_back(round_id, outcome.bit);
            memory.classification_log.emplace_back(round_id, Mode::SIFT);
        }
        return photon;
    }

private:
    double d_;
};

}  // namespace

EveRoundResult finish_round(const EveMemory& memory, std::uint64_t round_id) {
    if (memory.ancilla) {
        throw SimulationError("finish_round: ancilla slot still occupied");
    }
    EveRoundResult result;
    for (const auto& [id, bit] : memory.readout_log) {
        if (id == round_id) {
            result.bit = bit;
        }
    }
    for (const auto& [id, mode] : memory.classification_log) {
        if (id == round_id) {
            result.classified_mode = mode;
        }
    }
    return result;
}

std::unique_ptr<Eavesdropper> make_eavesdropper(const EveStrategy& strategy, bool untag_on_return) {
    switch (strategy.kind) {
        case StrategyKind::None:
            return std::make_unique<NoEavesdropper>();
        case StrategyKind::InterceptResendForward:
            return std::make_unique<InterceptResendForwardEve>();
        case StrategyKind::MeasureReturnZ:
            return std::make_unique<MeasureReturnZEve>();
        case StrategyKind::Tagging:
            return std::make_unique<TaggingEve>(untag_on_return);
        case StrategyKind::Fingerprint:
            if (!(strategy.fingerprint_d >= 0.0 && strategy.fingerprint_d <= 1.0)) {
                throw ConfigError("d: must lie in [0, 1]");
            }
            return std::make_unique<FingerprintEve>(strategy.fingerprint_d);
    }
    throw std::invalid_argument("make_eavesdropper: unhandled strategy kind");
}

}  // namespace sqkd
