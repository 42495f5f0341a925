#ifndef SQKD_CONFIG_HPP_
#define SQKD_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "sqkd/common.hpp"

namespace sqkd {

enum class StrategyKind { None, InterceptResendForward, MeasureReturnZ, Tagging, Fingerprint };

// Eavesdropper selection plus parameters. fingerprint_d is the probability
// that Eve's apparatus fingerprinting identifies a Bob-fresh photon on the
// return line; it is meaningful only for StrategyKind::Fingerprint.
struct EveStrategy {
    StrategyKind kind = StrategyKind::None;
    double fingerprint_d = 0.0;

    static EveStrategy none() { return {StrategyKind::None, 0.0}; }
    static EveStrategy intercept_resend_forward() { return {StrategyKind::InterceptResendForward, 0.0}; }
    static EveStrategy measure_return_z() { return {StrategyKind::MeasureReturnZ, 0.0}; }
    static EveStrategy tagging() { return {StrategyKind::Tagging, 0.0}; }
    static EveStrategy fingerprint(double d) { return {StrategyKind::Fingerprint, d}; }

    bool operator==(const EveStrategy&) const = default;
};

const char* strategy_name(StrategyKind kind);

// Accepts the names used in config documents and on the command line:
// none | intercept_resend_forward | measure_return_z | tagging | fingerprint.
// Throws ConfigError for anything else.
StrategyKind strategy_from_name(const std::string& name);

struct RunConfig {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    EveStrategy strategy;
    double sift_probability = 0.5;      // Bob's probability of choosing SIFT
    double check_sample_fraction = 0.2; // disclosed share of SIFT_Z rounds
    double qber_threshold = 0.05;       // abort when any check QBER strictly exceeds this
    double p_noise = 0.0;               // classical channel noise per traversal
    bool untag_on_return = false;       // Eve restores lambda on returned CTRL photons

    bool operator==(const RunConfig&) const = default;
};

// Throws ConfigError naming the offending field.
void validate(const RunConfig& config);

}  // namespace sqkd

#endif  // SQKD_CONFIG_HPP_
