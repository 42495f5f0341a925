#include "sqkd/config.hpp"

namespace sqkd {

const char* strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::None: return "none";
        case StrategyKind::InterceptResendForward: return "intercept_resend_forward";
        case StrategyKind::MeasureReturnZ: return "measure_return_z";
        case StrategyKind::Tagging: return "tagging";
        case StrategyKind::Fingerprint: return "fingerprint";
    }
    throw std::invalid_argument("strategy_name: unhandled kind");
}

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "none") return StrategyKind::None;
    if (name == "intercept_resend_forward") return StrategyKind::InterceptResendForward;
    if (name == "measure_return_z") return StrategyKind::MeasureReturnZ;
    if (name == "tagging") return StrategyKind::Tagging;
    if (name == "fingerprint") return StrategyKind::Fingerprint;
    throw ConfigError("strategy: unknown strategy '" + name + "'");
}

namespace {

void check_unit_interval(double value, const char* field) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ConfigError(std::string(field) + ": must lie in [0, 1]");
    }
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.rounds < 1) {
        throw ConfigError("rounds: must be at least 1");
    }
    check_unit_interval(config.sift_probability, "sift_probability");
    check_unit_interval(config.check_sample_fraction, "check_sample_fraction");
    check_unit_interval(config.qber_threshold, "qber_threshold");
    check_unit_interval(config.p_noise, "p_noise");
    if (config.strategy.kind == StrategyKind::Fingerprint) {
        check_unit_interval(config.strategy.fingerprint_d, "d");
    }
}

}  // namespace sqkd
