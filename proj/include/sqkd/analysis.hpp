#ifndef SQKD_ANALYSIS_HPP_
#define SQKD_ANALYSIS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sqkd/config.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd {

enum class Verdict { CONTINUE, ABORT };

const char* verdict_name(Verdict v);

// Aggregate statistics over one run's transcript.
//
// Eve's statistics are taken over the raw key (SIFT_Z rounds):
// eve_known_fraction is the share of raw-key rounds where she logged a bit,
// eve_agreement the share of those logged bits that equal Bob's, and
// mutual_information_bits her per-bit information about Alice's key over the
// logged rounds (0 when she logged nothing).
struct RunReport {
    std::map<RoundCategory, std::uint64_t> counts;  // all four categories
    std::map<RoundCategory, double> qber;           // only categories with check pairs
    double sift_rate = 0.0;                         // raw-key pairs / rounds
    double eve_agreement = 0.0;
    double eve_known_fraction = 0.0;
    double mutual_information_bits = 0.0;
    Verdict verdict = Verdict::CONTINUE;

    bool operator==(const RunReport&) const = default;
};

// Mismatch fraction of (expected, observed) pairs; empty input yields an
// absent value, never zero.
std::optional<double> qber(const std::vector<std::pair<Bit, Bit>>& check_pairs);

// ABORT iff any present check-category QBER strictly exceeds the threshold.
Verdict verdict(const std::map<RoundCategory, double>& qbers, double threshold);

// I(A;E) in bits from an empirical 2x2 joint count table, joint_counts[a][e].
// Zero cells contribute nothing; an all-zero table is an error.
double mutual_information(const std::array<std::array<std::uint64_t, 2>, 2>& joint_counts);

// I(A;E) in bits for the observed channel p(e|a) driven by a uniform input
// marginal. The protocol guarantees uniform raw-key bits, so this is the
// estimator build_report uses; unlike the empirical-marginal form it reports
// exactly 1.0 for a perfectly correlated channel at any sample size.
double channel_mutual_information(const std::array<std::array<std::uint64_t, 2>, 2>& joint_counts);

// Probability that at least one of `check_photons` disturbance checks fires
// when each errs independently with probability per_photon_error.
double detection_probability(double per_photon_error, std::uint64_t check_photons);

RunReport build_report(const std::vector<RoundRecord>& records, const SiftResult& sifted,
                       const RunConfig& config);

}  // namespace sqkd

#endif  // SQKD_ANALYSIS_HPP_
