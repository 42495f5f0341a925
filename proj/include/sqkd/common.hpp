#ifndef SQKD_COMMON_HPP_
#define SQKD_COMMON_HPP_

#include <stdexcept>
#include <string>

namespace sqkd {

// Classical bit. Every protocol outcome, key bit and readout is 0 or 1.
using Bit = int;

// Protocol state-machine misuse or a corrupted quantum state. These indicate
// a bug in the calling code, not a recoverable runtime condition.
class SimulationError : public std::logic_error {
public:
    explicit SimulationError(const std::string& what) : std::logic_error(what) {}
};

// Invalid experiment configuration. The message begins with the path of the
// offending field, e.g. "sweep.strategies[1]: unknown strategy 'foo'".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqkd

#endif  // SQKD_COMMON_HPP_
