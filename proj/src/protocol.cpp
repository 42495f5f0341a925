#include "sqkd/protocol.hpp"

#include "sqkd/adversary.hpp"

namespace sqkd {

RoundCategory category_of(Mode mode, Basis basis) {
    if (mode == Mode::CTRL) {
        return basis == Basis::Z ? RoundCategory::CTRL_Z : RoundCategory::CTRL_X;
    }
    return basis == Basis::Z ? RoundCategory::SIFT_Z : RoundCategory::SIFT_X;
}

const char* basis_name(Basis b) {
    return b == Basis::Z ? "Z" : "X";
}

const char* mode_name(Mode m) {
    return m == Mode::CTRL ? "CTRL" : "SIFT";
}

const char* category_name(RoundCategory c) {
    switch (c) {
        case RoundCategory::CTRL_Z: return "CTRL_Z";
        case RoundCategory::CTRL_X: return "CTRL_X";
        case RoundCategory::SIFT_Z: return "SIFT_Z";
        case RoundCategory::SIFT_X: return "SIFT_X";
    }
    throw std::invalid_argument("category_name: unhandled category");
}

AlicePreparation alice_prepare(RandomStream& rng) {
    AlicePreparation prep;
    prep.basis = rng.bit() == 0 ? Basis::Z : Basis::X;
    prep.bit = rng.bit();
    prep.photon.state = std::make_shared<QuantumRegister>(prepare(prep.basis, prep.bit));
    prep.photon.photon_qubit = 0;
    prep.photon.tag = WavelengthTag::Original;
    prep.photon.direction = Direction::Forward;
    prep.photon.origin = PhotonOrigin::Alice;
    return prep;
}

BobResult bob_process(PhotonInFlight photon, double sift_probability, RandomStream& rng) {
    if (photon.direction != Direction::Forward) {
        throw SimulationError("bob_process: photon already on the return leg");
    }
    BobResult result;
    result.mode = rng.bernoulli(sift_probability) ? Mode::SIFT : Mode::CTRL;
    if (result.mode == Mode::CTRL) {
        // Reflection: same register, same tag, direction flipped.
        photon.direction = Direction::Return;
        result.photon = std::move(photon);
        return result;
    }
    auto outcome = measure(*photon.state, photon.photon_qubit, Basis::Z, rng);
    // Collapse the shared register so an entangled holder sees it too.
    *photon.state = outcome.post_state;
    result.bob_bit = outcome.bit;
    result.photon.state = std::make_shared<QuantumRegister>(prepare(Basis::Z, outcome.bit));
    result.photon.photon_qubit = 0;
    result.photon.tag = WavelengthTag::Original;  // fresh photons are never tagged
    result.photon.direction = Direction::Return;
    result.photon.origin = PhotonOrigin::Bob;
    return result;
}

Bit alice_verify(const PhotonInFlight& photon, Basis alice_basis, Mode mode, RandomStream& rng) {
    if (photon.direction != Direction::Return) {
        throw SimulationError("alice_verify: photon still on the forward leg");
    }
    const Basis basis = mode == Mode::CTRL ? alice_basis : Basis::Z;
    return measure(*photon.state, photon.photon_qubit, basis, rng).bit;
}

void apply_channel_noise(PhotonInFlight& photon, double p, RandomStream& rng) {
    if (p <= 0.0 || !rng.bernoulli(p)) {
        return;
    }
    if (photon.state->num_qubits == 1) {
        *photon.state = prepare(Basis::Z, rng.bit());
        return;
    }
    // Entangled register: collapse the photon qubit first, then splice in the
    // replacement eigenstate next to the surviving ancilla part.
    auto outcome = measure(*photon.state, photon.photon_qubit, Basis::Z, rng);
    QuantumRegister rest = discard_qubit(outcome.post_state, photon.photon_qubit);
    QuantumRegister fresh = prepare(Basis::Z, rng.bit());
    *photon.state = photon.photon_qubit == 0 ? tensor(fresh, rest) : tensor(rest, fresh);
}

RoundRecord run_round(std::uint64_t round_id, const Eavesdropper& eve, EveMemory& memory,
                      const RunConfig& config, RandomStream& rng) {
    AlicePreparation prep = alice_prepare(rng);

    PhotonInFlight forward = eve.on_forward(std::move(prep.photon), memory, round_id, rng);
    apply_channel_noise(forward, config.p_noise, rng);

    BobResult bob = bob_process(std::move(forward), config.sift_probability, rng);

    PhotonInFlight returned = eve.on_return(std::move(bob.photon), memory, round_id, rng);
    apply_channel_noise(returned, config.p_noise, rng);

    const Bit return_bit = alice_verify(returned, prep.basis, bob.mode, rng);
    const EveRoundResult eve_result = finish_round(memory, round_id);

    RoundRecord record;
    record.round_id = round_id;
    record.alice_basis = prep.basis;
    record.alice_bit = prep.bit;
    record.mode = bob.mode;
    record.bob_bit = bob.bob_bit;
    record.alice_return_bit = return_bit;
    record.eve_bit = eve_result.bit;
    record.eve_classified_mode = eve_result.classified_mode;
    return record;
}

SiftResult sift(const std::vector<RoundRecord>& records, const RunConfig& config) {
    SiftResult result;
    for (const RoundRecord& record : records) {
        switch (category_of(record.mode, record.alice_basis)) {
            case RoundCategory::CTRL_Z:
            case RoundCategory::CTRL_X: {
                if (!record.alice_return_bit) {
                    throw SimulationError("sift: CTRL round lacks Alice's verification bit");
                }
                result.check_sets[category_of(record.mode, record.alice_basis)].emplace_back(
                    record.alice_bit, *record.alice_return_bit);
                break;
            }
            case RoundCategory::SIFT_Z: {
                if (!record.bob_bit) {
                    throw SimulationError("sift: SIFT round lacks Bob's bit");
                }
                RandomStream disclosure(
                    derive_seed(config.seed, kDisclosureDomain, record.round_id));
                const bool disclosed = disclosure.uniform() < config.check_sample_fraction;
                result.raw_key_pairs.push_back(
                    {record.round_id, record.alice_bit, *record.bob_bit, disclosed});
                if (disclosed) {
                    result.check_sets[RoundCategory::SIFT_Z].emplace_back(record.alice_bit,
                                                                          *record.bob_bit);
                }
                break;
            }
            case RoundCategory::SIFT_X:
                break;  // dropped by the sifting rule
        }
    }
    return result;
}

}  // namespace sqkd
