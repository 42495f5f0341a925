#ifndef SQKD_PROTOCOL_HPP_
#define SQKD_PROTOCOL_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sqkd/config.hpp"
#include "sqkd/quantum.hpp"
#include "sqkd/random.hpp"

namespace sqkd {

// Classical wavelength side channel (lambda vs lambda + delta-lambda).
// Alice's and Bob's detectors register both values identically; only Eve can
// discriminate them. No numeric wavelength is modeled — only the label matters.
enum class WavelengthTag { Original, Shifted };

// Bob's two modes: reflect the photon (CTRL) or Z-measure it and resend a
// fresh copy (SIFT).
enum class Mode { CTRL, SIFT };

enum class Direction { Forward, Return };

// Which apparatus emitted the photon. Alice's and Bob's sources are
// physically distinguishable to a sufficiently powerful eavesdropper; honest
// parties never read this field.
enum class PhotonOrigin { Alice, Bob };

// Derived from (mode, Alice's basis). SIFT_Z rounds form the raw key; SIFT_X
// rounds are dropped; CTRL rounds are disturbance checks.
enum class RoundCategory { CTRL_Z, CTRL_X, SIFT_Z, SIFT_X };

// The photon travelling on the quantum channel. `state` is shared
// deliberately: when Eve entangles an ancilla with the photon, her retained
// slot and the in-flight photon alias the same joint register, so a collapse
// on either side is seen by both holders.
struct PhotonInFlight {
    std::shared_ptr<QuantumRegister> state;
    int photon_qubit = 0;
    WavelengthTag tag = WavelengthTag::Original;
    Direction direction = Direction::Forward;
    PhotonOrigin origin = PhotonOrigin::Alice;
};

// Classical transcript of one protocol round; never mutated once complete.
struct RoundRecord {
    std::uint64_t round_id = 0;
    Basis alice_basis = Basis::Z;
    Bit alice_bit = 0;
    Mode mode = Mode::CTRL;
    std::optional<Bit> bob_bit;            // present iff mode == SIFT
    std::optional<Bit> alice_return_bit;   // Alice's measurement of the returned photon
    std::optional<Bit> eve_bit;            // Eve's readout, if her strategy produced one
    std::optional<Mode> eve_classified_mode;

    bool operator==(const RoundRecord&) const = default;
};

RoundCategory category_of(Mode mode, Basis basis);

const char* basis_name(Basis b);
const char* mode_name(Mode m);
const char* category_name(RoundCategory c);

struct AlicePreparation {
    Basis basis = Basis::Z;
    Bit bit = 0;
    PhotonInFlight photon;
};

struct BobResult {
    Mode mode = Mode::CTRL;
    std::optional<Bit> bob_bit;  // present iff mode == SIFT
    PhotonInFlight photon;
};

// Step 1: uniform basis and bit, photon prepared accordingly, tag Original.
AlicePreparation alice_prepare(RandomStream& rng);

// Step 3. CTRL reflects the identical register back (tag preserved). SIFT
// Z-measures the photon qubit — collapsing any ancilla entangled with it —
// and returns a fresh, never-tagged photon carrying the measured bit.
BobResult bob_process(PhotonInFlight photon, double sift_probability, RandomStream& rng);

// Step 5's check measurement: returned CTRL photons are measured in Alice's
// preparation basis, returned SIFT photons in Z.
Bit alice_verify(const PhotonInFlight& photon, Basis alice_basis, Mode mode, RandomStream& rng);

// Classical channel noise: with probability p per traversal the photon qubit
// is replaced by a uniformly random Z eigenstate. On an entangled register
// the photon qubit is first collapsed in Z so the replacement leaves a
// well-formed joint state.
void apply_channel_noise(PhotonInFlight& photon, double p, RandomStream& rng);

class Eavesdropper;  // adversary.hpp
struct EveMemory;

// One full round: alice_prepare -> Eve forward hook -> bob_process -> Eve
// return hook -> alice_verify -> Eve round flush. Exactly one forward and one
// return hook invocation.
RoundRecord run_round(std::uint64_t round_id, const Eavesdropper& eve, EveMemory& memory,
                      const RunConfig& config, RandomStream& rng);

struct SiftResult {
    struct KeyPair {
        std::uint64_t round_id = 0;
        Bit alice_bit = 0;
        Bit bob_bit = 0;
        bool disclosed = false;  // used for QBER estimation; still part of the raw key

        bool operator==(const KeyPair&) const = default;
    };
    // One entry per SIFT_Z round, in round order.
    std::vector<KeyPair> raw_key_pairs;
    // (expected, observed) check pairs; only categories that produced pairs
    // appear. CTRL pairs compare Alice's bit with her return measurement,
    // disclosed SIFT_Z pairs compare Alice's bit with Bob's.
    std::map<RoundCategory, std::vector<std::pair<Bit, Bit>>> check_sets;
};

// Public discussion + sifting. The disclosed SIFT_Z sample is selected by a
// per-round stream derived from (config.seed, kDisclosureDomain, round_id),
// so the result is independent of record ordering or execution parallelism.
SiftResult sift(const std::vector<RoundRecord>& records, const RunConfig& config);

}  // namespace sqkd

#endif  // SQKD_PROTOCOL_HPP_
