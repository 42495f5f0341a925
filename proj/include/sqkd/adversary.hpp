#ifndef SQKD_ADVERSARY_HPP_
#define SQKD_ADVERSARY_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sqkd/config.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd {

// Eve's working state for the round in flight. The ancilla slot holds the
// joint register she shares with the travelling photon between the forward
// and return hooks; it must be empty at round start and at round end.
struct EveMemory {
    struct AncillaSlot {
        std::shared_ptr<QuantumRegister> joint;
        int ancilla_qubit = 1;
    };
    std::optional<AncillaSlot> ancilla;
    std::vector<std::pair<std::uint64_t, Bit>> readout_log;
    std::vector<std::pair<std::uint64_t, Mode>> classification_log;
};

struct EveRoundResult {
    std::optional<Bit> bit;
    std::optional<Mode> classified_mode;
};

// Channel hooks available to an eavesdropping strategy. A hook sees only the
// photon (register, tag, origin) and Eve's own memory — never Bob's mode or
// Alice's basis, so information can leak only through the modeled physics.
// Implementations are stateless; one instance may serve concurrent rounds,
// each with its own EveMemory and RandomStream.
class Eavesdropper {
public:
    virtual ~Eavesdropper() = default;

    virtual PhotonInFlight on_forward(PhotonInFlight photon, EveMemory& memory,
                                      std::uint64_t round_id, RandomStream& rng) const = 0;

    virtual PhotonInFlight on_return(PhotonInFlight photon, EveMemory& memory,
                                     std::uint64_t round_id, RandomStream& rng) const = 0;
};

// Flushes the round's readout and mode classification out of the memory
// logs. Throws SimulationError if an ancilla is still in flight.
EveRoundResult finish_round(const EveMemory& memory, std::uint64_t round_id);

std::unique_ptr<Eavesdropper> make_eavesdropper(const EveStrategy& strategy, bool untag_on_return);

}  // namespace sqkd

#endif  // SQKD_ADVERSARY_HPP_
