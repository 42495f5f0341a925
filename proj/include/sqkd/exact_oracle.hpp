#ifndef SQKD_EXACT_ORACLE_HPP_
#define SQKD_EXACT_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "sqkd/config.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd {

using Rational = boost::multiprecision::cpp_rational;

// Exact expectations for a run, computed by exhaustively walking every random
// choice of a protocol round — Alice's basis and bit, Eve's strategy
// branches, Bob's mode, every Born-rule branch — with exact rational
// probabilities over amplitudes in Q[sqrt 2]. Shares no code with the
// sampling simulator, so it serves as an independent oracle for it.
struct ExactReport {
    // P(round lands in category); all four categories present.
    std::map<RoundCategory, Rational> category_probability;
    // P(check error | category) for CTRL_Z, CTRL_X and SIFT_Z; a category
    // with probability zero is absent. CTRL errors compare Alice's return
    // measurement with her bit, SIFT_Z errors compare Bob's bit with hers.
    std::map<RoundCategory, Rational> error_probability;
    // P(Eve logged a bit equal to Bob's | SIFT).
    std::optional<Rational> eve_match_bob_given_sift;
    // P(Eve logged a bit | SIFT_Z) and P(her bit equals Bob's | logged).
    std::optional<Rational> eve_known_given_sift_z;
    std::optional<Rational> eve_agreement_given_sift_z;
    // P(Eve's mode guess is correct | she guessed) and P(she guessed).
    std::optional<Rational> classification_accuracy;
    Rational classified_probability = 0;
    // Leaves of the one-round branch tree.
    std::uint64_t leaf_count = 0;
};

// Rounds are mutually independent (Eve's memory is scoped to one round), so
// the full branch tree is the one-round tree to the power config.rounds and
// every per-category expectation equals its one-round value. The walk covers
// one round exhaustively; the budget check still applies to the full tree:
// throws SimulationError when leaf_count^rounds would exceed ~1e5 leaves.
// config.seed is ignored.
ExactReport enumerate_exact(const RunConfig& config);

}  // namespace sqkd

#endif  // SQKD_EXACT_ORACLE_HPP_
