#ifndef SQKD_RUN_HPP_
#define SQKD_RUN_HPP_

#include <vector>

#include "sqkd/analysis.hpp"
#include "sqkd/protocol.hpp"

namespace sqkd {

struct ProtocolRun {
    std::vector<RoundRecord> records;
    RunReport report;
};

// Drives config.rounds independent rounds and reports on the transcript.
// Each round draws from its own stream derived from (config.seed,
// kRoundDomain, round_id), so the result is byte-identical whether rounds run
// serially or across threads. threads == 0 means hardware concurrency.
ProtocolRun run_protocol(const RunConfig& config, int threads = 1);

}  // namespace sqkd

#endif  // SQKD_RUN_HPP_
