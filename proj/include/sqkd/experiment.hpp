#ifndef SQKD_EXPERIMENT_HPP_
#define SQKD_EXPERIMENT_HPP_

#include <string>
#include <utility>
#include <vector>

#include "sqkd/analysis.hpp"
#include "sqkd/config.hpp"
#include "sqkd/exact_oracle.hpp"
#include "sqkd/run.hpp"

namespace sqkd {

enum class OutputFormat { Json, Csv };

struct NamedRun {
    std::string name;
    RunConfig config;

    bool operator==(const NamedRun&) const = default;
};

struct ExperimentSpec {
    std::vector<NamedRun> runs;  // nonempty, unique names
    OutputFormat format = OutputFormat::Json;
    std::string out_path;  // empty means stdout

    bool operator==(const ExperimentSpec&) const = default;
};

// Parses and validates a JSON config document. Two layouts are accepted: a
// single run object (fields: rounds, seed, strategy, d, sift_probability,
// check_sample_fraction, qber_threshold, p_noise, untag_on_return, name,
// format, out, sweep) or a {"runs": [...], "format": ..., "out": ...}
// document listing expanded runs. A sweep block (strategies / seeds /
// d_grid) expands into one named run per combination, all sharing the base
// fields. Defaults: sift_probability 0.5, check_sample_fraction 0.2,
// qber_threshold 0.05, p_noise 0, untag_on_return false. Errors are reported
// as ConfigError with the offending field path.
ExperimentSpec parse_config(const std::string& document);

// Serializes a spec so that parse_config(emit_config(spec)) == spec.
std::string emit_config(const ExperimentSpec& spec);

struct RunResult {
    std::string name;
    RunConfig config;
    RunReport report;
};

// Byte-stable report renderers: keys sorted, rates with six decimals, CSV
// rows ordered by run name then category.
std::string render_json(const std::vector<RunResult>& results);
std::string render_csv(const std::vector<RunResult>& results);
std::string render_exact_json(const std::vector<std::pair<std::string, ExactReport>>& results);

// One RoundRecord as a single JSON line (no trailing newline).
std::string format_transcript_line(const std::string& run_name, const RoundRecord& record);

struct ExecuteOptions {
    int threads = 1;           // rounds-level parallelism; 0 = hardware
    bool exact = false;        // run the exact enumeration instead of Monte Carlo
    std::string transcript_path;  // dump every RoundRecord when nonempty
};

// Runs every run in the spec in declared order and writes the report to
// spec.out_path (stdout when empty). An ABORT verdict is a simulation
// result, not an execution failure; errors are thrown.
void execute(const ExperimentSpec& spec, const ExecuteOptions& options);

}  // namespace sqkd

#endif  // SQKD_EXPERIMENT_HPP_
