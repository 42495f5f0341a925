#include "sqkd/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sqkd {

namespace {

using nlohmann::json;

// Categories in lexicographic name order, the order reports use.
constexpr RoundCategory kReportCategories[] = {RoundCategory::CTRL_X, RoundCategory::CTRL_Z,
                                               RoundCategory::SIFT_X, RoundCategory::SIFT_Z};

std::string fmt_rate(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

std::string fmt_g(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%g", value);
    return buffer;
}

std::string json_string(const std::string& value) {
    return json(value).dump();
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ConfigError(path.empty() ? message : path + ": " + message);
}

const json* find(const json& object, const std::string& key) {
    auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

double get_real(const json& value, const std::string& key) {
    if (!value.is_number()) {
        fail(key, "must be a number");
    }
    return value.get<double>();
}

void check_known_keys(const json& object, const std::set<std::string>& allowed,
                      const std::string& prefix) {
    for (const auto& [key, unused] : object.items()) {
        if (!allowed.contains(key)) {
            fail(prefix.empty() ? key : prefix + "." + key, "unknown field");
        }
    }
}

RunConfig parse_run_config(const json& object, const std::string& prefix) {
    const auto path = [&](const std::string& key) {
        return prefix.empty() ? key : prefix + "." + key;
    };
    const auto uint_field = [&](const char* key) {
        const json* value = find(object, key);
        if (value == nullptr) fail(path(key), "missing");
        if (!value->is_number_unsigned()) fail(path(key), "must be a nonnegative integer");
        return value->get<std::uint64_t>();
    };
    RunConfig config;
    config.rounds = uint_field("rounds");
    config.seed = uint_field("seed");
    {
        const json* value = find(object, "strategy");
        if (value == nullptr) fail(path("strategy"), "missing");
        if (!value->is_string()) fail(path("strategy"), "must be a string");
        try {
            config.strategy.kind = strategy_from_name(value->get<std::string>());
        } catch (const ConfigError&) {
            fail(path("strategy"), "unknown strategy '" + value->get<std::string>() + "'");
        }
    }
    if (const json* value = find(object, "d")) {
        if (config.strategy.kind != StrategyKind::Fingerprint) {
            fail(path("d"), "only meaningful for strategy 'fingerprint'");
        }
        config.strategy.fingerprint_d = get_real(*value, path("d"));
        if (!(config.strategy.fingerprint_d >= 0.0 && config.strategy.fingerprint_d <= 1.0)) {
            fail(path("d"), "must lie in [0, 1]");
        }
    } else if (config.strategy.kind == StrategyKind::Fingerprint) {
        fail(path("d"), "required for strategy 'fingerprint'");
    }
    const auto real_field = [&](const char* key, double* destination) {
        if (const json* value = find(object, key)) {
            *destination = get_real(*value, path(key));
            if (!(*destination >= 0.0 && *destination <= 1.0)) {
                fail(path(key), "must lie in [0, 1]");
            }
        }
    };
    real_field("sift_probability", &config.sift_probability);
    real_field("check_sample_fraction", &config.check_sample_fraction);
    real_field("qber_threshold", &config.qber_threshold);
    real_field("p_noise", &config.p_noise);
    if (const json* value = find(object, "untag_on_return")) {
        if (!value->is_boolean()) {
            fail(path("untag_on_return"), "must be a boolean");
        }
        config.untag_on_return = value->get<bool>();
    }
    validate(config);
    return config;
}

std::vector<NamedRun> expand_sweep(const json& sweep, const RunConfig& base,
                                   std::uint64_t base_seed) {
    check_known_keys(sweep, {"strategies", "seeds", "d_grid"}, "sweep");
    std::vector<std::string> strategies;
    if (const json* value = find(sweep, "strategies")) {
        if (!value->is_array() || value->empty()) {
            fail("sweep.strategies", "must be a nonempty array of strategy names");
        }
        for (std::size_t i = 0; i < value->size(); ++i) {
            const json& entry = (*value)[i];
            if (!entry.is_string()) {
                fail("sweep.strategies[" + std::to_string(i) + "]", "must be a string");
            }
            try {
                strategy_from_name(entry.get<std::string>());
            } catch (const ConfigError&) {
                fail("sweep.strategies[" + std::to_string(i) + "]",
                     "unknown strategy '" + entry.get<std::string>() + "'");
            }
            strategies.push_back(entry.get<std::string>());
        }
    } else {
        strategies.push_back(strategy_name(base.strategy.kind));
    }

    std::vector<std::uint64_t> seeds;
    if (const json* value = find(sweep, "seeds")) {
        if (!value->is_array() || value->empty()) {
            fail("sweep.seeds", "must be a nonempty array of seeds");
        }
        for (std::size_t i = 0; i < value->size(); ++i) {
            const json& entry = (*value)[i];
            if (!entry.is_number_unsigned()) {
                fail("sweep.seeds[" + std::to_string(i) + "]", "must be a nonnegative integer");
            }
            seeds.push_back(entry.get<std::uint64_t>());
        }
    } else {
        seeds.push_back(base_seed);
    }

    std::vector<double> d_grid;
    if (const json* value = find(sweep, "d_grid")) {
        if (!value->is_array() || value->empty()) {
            fail("sweep.d_grid", "must be a nonempty array of reals");
        }
        for (std::size_t i = 0; i < value->size(); ++i) {
            const double d = get_real((*value)[i], "sweep.d_grid[" + std::to_string(i) + "]");
            if (!(d >= 0.0 && d <= 1.0)) {
                fail("sweep.d_grid[" + std::to_string(i) + "]", "must lie in [0, 1]");
            }
            d_grid.push_back(d);
        }
        if (std::find(strategies.begin(), strategies.end(), "fingerprint") == strategies.end()) {
            fail("sweep.d_grid", "requires strategy 'fingerprint'");
        }
    }

    std::vector<NamedRun> runs;
    for (const std::string& strategy : strategies) {
        for (std::uint64_t seed : seeds) {
            RunConfig config = base;
            config.strategy.kind = strategy_from_name(strategy);
            if (config.strategy.kind != StrategyKind::Fingerprint) {
                config.strategy.fingerprint_d = 0.0;
            }
            config.seed = seed;
            std::string name = strategy;
            if (seeds.size() > 1) {
                name += "_s" + std::to_string(seed);
            }
            if (config.strategy.kind == StrategyKind::Fingerprint && !d_grid.empty()) {
                for (double d : d_grid) {
                    RunConfig grid_config = config;
                    grid_config.strategy.fingerprint_d = d;
                    validate(grid_config);
                    runs.push_back({name + "_d" + fmt_g(d), grid_config});
                }
            } else {
                validate(config);
                runs.push_back({name, config});
            }
        }
    }
    return runs;
}

const std::set<std::string> kRunKeys = {
    "rounds", "seed", "strategy", "d", "sift_probability", "check_sample_fraction",
    "qber_threshold", "p_noise", "untag_on_return"};

}  // namespace

ExperimentSpec parse_config(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& error) {
        throw ConfigError(std::string("config: not valid JSON (") + error.what() + ")");
    }
    if (!doc.is_object()) {
        throw ConfigError("config: top level must be an object");
    }

    ExperimentSpec spec;
    if (const json* value = find(doc, "format")) {
        if (!value->is_string() || (value->get<std::string>() != "json" &&
                                    value->get<std::string>() != "csv")) {
            fail("format", "must be 'json' or 'csv'");
        }
        spec.format = value->get<std::string>() == "json" ? OutputFormat::Json : OutputFormat::Csv;
    }
    if (const json* value = find(doc, "out")) {
        if (!value->is_string()) {
            fail("out", "must be a string path");
        }
        spec.out_path = value->get<std::string>();
    }

    if (const json* runs = find(doc, "runs")) {
        check_known_keys(doc, {"runs", "format", "out"}, "");
        if (!runs->is_array() || runs->empty()) {
            fail("runs", "at least one run required");
        }
        for (std::size_t i = 0; i < runs->size(); ++i) {
            const json& entry = (*runs)[i];
            const std::string prefix = "runs[" + std::to_string(i) + "]";
            if (!entry.is_object()) {
                fail(prefix, "must be an object");
            }
            std::set<std::string> allowed = kRunKeys;
            allowed.insert("name");
            check_known_keys(entry, allowed, prefix);
            const json* name = find(entry, "name");
            if (name == nullptr || !name->is_string() || name->get<std::string>().empty()) {
                fail(prefix + ".name", "missing or empty");
            }
            spec.runs.push_back({name->get<std::string>(), parse_run_config(entry, prefix)});
        }
    } else {
        std::set<std::string> allowed = kRunKeys;
        allowed.insert("name");
        allowed.insert("format");
        allowed.insert("out");
        allowed.insert("sweep");
        check_known_keys(doc, allowed, "");
        RunConfig base = parse_run_config(doc, "");
        std::string base_name = "run";
        if (const json* name = find(doc, "name")) {
            if (!name->is_string() || name->get<std::string>().empty()) {
                fail("name", "must be a nonempty string");
            }
            base_name = name->get<std::string>();
        }
        if (const json* sweep = find(doc, "sweep")) {
            if (!sweep->is_object()) {
                fail("sweep", "must be an object");
            }
            spec.runs = expand_sweep(*sweep, base, base.seed);
        } else {
            spec.runs.push_back({base_name, base});
        }
    }

    std::set<std::string> seen;
    for (const NamedRun& run : spec.runs) {
        if (!seen.insert(run.name).second) {
            fail("runs", "duplicate name '" + run.name + "'");
        }
    }
    return spec;
}

std::string emit_config(const ExperimentSpec& spec) {
    json doc;
    doc["format"] = spec.format == OutputFormat::Json ? "json" : "csv";
    if (!spec.out_path.empty()) {
        doc["out"] = spec.out_path;
    }
    doc["runs"] = json::array();
    for (const NamedRun& run : spec.runs) {
        json entry;
        entry["name"] = run.name;
        entry["rounds"] = run.config.rounds;
        entry["seed"] = run.config.seed;
        entry["strategy"] = strategy_name(run.config.strategy.kind);
        if (run.config.strategy.kind == StrategyKind::Fingerprint) {
            entry["d"] = run.config.strategy.fingerprint_d;
        }
        entry["sift_probability"] = run.config.sift_probability;
        entry["check_sample_fraction"] = run.config.check_sample_fraction;
        entry["qber_threshold"] = run.config.qber_threshold;
        entry["p_noise"] = run.config.p_noise;
        entry["untag_on_return"] = run.config.untag_on_return;
        doc["runs"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

namespace {

std::string render_config_echo(const RunConfig& config) {
    std::ostringstream out;
    out << "{\"check_sample_fraction\":" << fmt_rate(config.check_sample_fraction);
    if (config.strategy.kind == StrategyKind::Fingerprint) {
        out << ",\"d\":" << fmt_rate(config.strategy.fingerprint_d);
    }
    out << ",\"p_noise\":" << fmt_rate(config.p_noise)
        << ",\"qber_threshold\":" << fmt_rate(config.qber_threshold)
        << ",\"rounds\":" << config.rounds << ",\"seed\":" << config.seed
        << ",\"sift_probability\":" << fmt_rate(config.sift_probability) << ",\"strategy\":"
        << json_string(strategy_name(config.strategy.kind))
        << ",\"untag_on_return\":" << (config.untag_on_return ? "true" : "false") << "}";
    return out.str();
}

}  // namespace

std::string render_json(const std::vector<RunResult>& results) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const RunResult& result = results[i];
        out << "{\"config\":" << render_config_echo(result.config) << ",\"counts\":{";
        bool first = true;
        for (RoundCategory category : kReportCategories) {
            if (!first) out << ",";
            first = false;
            out << "\"" << category_name(category) << "\":" << result.report.counts.at(category);
        }
        out << "},\"eve_agreement\":" << fmt_rate(result.report.eve_agreement)
            << ",\"eve_known_fraction\":" << fmt_rate(result.report.eve_known_fraction)
            << ",\"mutual_information_bits\":" << fmt_rate(result.report.mutual_information_bits)
            << ",\"name\":" << json_string(result.name) << ",\"qber\":{";
        first = true;
        for (RoundCategory category : kReportCategories) {
            auto it = result.report.qber.find(category);
            if (it == result.report.qber.end()) continue;
            if (!first) out << ",";
            first = false;
            out << "\"" << category_name(category) << "\":" << fmt_rate(it->second);
        }
        out << "},\"sift_rate\":" << fmt_rate(result.report.sift_rate) << ",\"verdict\":\""
            << verdict_name(result.report.verdict) << "\"}";
        out << (i + 1 < results.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return out.str();
}

std::string render_csv(const std::vector<RunResult>& results) {
    std::vector<const RunResult*> ordered;
    ordered.reserve(results.size());
    for (const RunResult& result : results) {
        ordered.push_back(&result);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const RunResult* a, const RunResult* b) { return a->name < b->name; });

    std::ostringstream out;
    out << "run_name,category,count,qber,sift_rate,eve_agreement,eve_known_fraction,"
           "mutual_information_bits,verdict\n";
    for (const RunResult* result : ordered) {
        for (RoundCategory category : kReportCategories) {
            out << result->name << "," << category_name(category) << ","
                << result->report.counts.at(category) << ",";
            auto it = result->report.qber.find(category);
            if (it != result->report.qber.end()) {
                out << fmt_rate(it->second);
            }
            out << "," << fmt_rate(result->report.sift_rate) << ","
                << fmt_rate(result->report.eve_agreement) << ","
                << fmt_rate(result->report.eve_known_fraction) << ","
                << fmt_rate(result->report.mutual_information_bits) << ","
                << verdict_name(result->report.verdict) << "\n";
        }
    }
    return out.str();
}

namespace {

std::string rational_string(const Rational& value) {
    std::ostringstream out;
    out << value;
    return out.str();
}

std::string optional_rational(const std::optional<Rational>& value) {
    return value ? json_string(rational_string(*value)) : "null";
}

}  // namespace

std::string render_exact_json(const std::vector<std::pair<std::string, ExactReport>>& results) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& [name, report] = results[i];
        out << "{\"category_probability\":{";
        bool first = true;
        for (RoundCategory category : kReportCategories) {
            if (!first) out << ",";
            first = false;
            out << "\"" << category_name(category)
                << "\":" << json_string(rational_string(report.category_probability.at(category)));
        }
        out << "},\"category_probability_value\":{";
        first = true;
        for (RoundCategory category : kReportCategories) {
            if (!first) out << ",";
            first = false;
            out << "\"" << category_name(category) << "\":"
                << fmt_rate(report.category_probability.at(category).convert_to<double>());
        }
        out << "},\"classification_accuracy\":" << optional_rational(report.classification_accuracy)
            << ",\"classified_probability\":"
            << json_string(rational_string(report.classified_probability))
            << ",\"error_probability\":{";
        first = true;
        for (RoundCategory category : kReportCategories) {
            auto it = report.error_probability.find(category);
            if (it == report.error_probability.end()) continue;
            if (!first) out << ",";
            first = false;
            out << "\"" << category_name(category) << "\":" << json_string(rational_string(it->second));
        }
        out << "},\"error_probability_value\":{";
        first = true;
        for (RoundCategory category : kReportCategories) {
            auto it = report.error_probability.find(category);
            if (it == report.error_probability.end()) continue;
            if (!first) out << ",";
            first = false;
            out << "\"" << category_name(category) << "\":"
                << fmt_rate(it->second.convert_to<double>());
        }
        out << "},\"eve_agreement_given_sift_z\":"
            << optional_rational(report.eve_agreement_given_sift_z)
            << ",\"eve_known_given_sift_z\":" << optional_rational(report.eve_known_given_sift_z)
            << ",\"eve_match_bob_given_sift\":" << optional_rational(report.eve_match_bob_given_sift)
            << ",\"leaf_count\":" << report.leaf_count << ",\"name\":" << json_string(name) << "}";
        out << (i + 1 < results.size() ? ",\n" : "\n");
    }
    out << "]\n";
    return out.str();
}

std::string format_transcript_line(const std::string& run_name, const RoundRecord& record) {
    const auto optional_bit = [](const std::optional<Bit>& bit) {
        return bit ? std::to_string(*bit) : std::string("null");
    };
    std::ostringstream out;
    out << "{\"alice_basis\":\"" << basis_name(record.alice_basis)
        << "\",\"alice_bit\":" << record.alice_bit
        << ",\"alice_return_bit\":" << optional_bit(record.alice_return_bit)
        << ",\"bob_bit\":" << optional_bit(record.bob_bit)
        << ",\"eve_bit\":" << optional_bit(record.eve_bit) << ",\"eve_mode\":";
    if (record.eve_classified_mode) {
        out << "\"" << mode_name(*record.eve_classified_mode) << "\"";
    } else {
        out << "null";
    }
    out << ",\"mode\":\"" << mode_name(record.mode) << "\",\"round\":" << record.round_id
        << ",\"run\":" << json_string(run_name) << "}";
    return out.str();
}

namespace {

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("out: cannot open '" + path + "' for writing");
    }
    out << payload;
    if (!out) {
        throw std::runtime_error("out: failed writing '" + path + "'");
    }
}

}  // namespace

void execute(const ExperimentSpec& spec, const ExecuteOptions& options) {
    if (spec.runs.empty()) {
        throw ConfigError("runs: at least one run required");
    }
    if (options.exact) {
        std::vector<std::pair<std::string, ExactReport>> results;
        for (const NamedRun& run : spec.runs) {
            if (run.config.rounds > 6) {
                throw ConfigError("rounds: --exact requires at most 6 rounds (run '" + run.name +
                                  "')");
            }
            results.emplace_back(run.name, enumerate_exact(run.config));
        }
        write_output(spec.out_path, render_exact_json(results));
        return;
    }

    std::vector<RunResult> results;
    std::string transcript;
    for (const NamedRun& run : spec.runs) {
        ProtocolRun outcome = run_protocol(run.config, options.threads);
        if (!options.transcript_path.empty()) {
            for (const RoundRecord& record : outcome.records) {
                transcript += format_transcript_line(run.name, record);
                transcript += '\n';
            }
        }
        results.push_back({run.name, run.config, outcome.report});
    }
    if (!options.transcript_path.empty()) {
        std::ofstream out(options.transcript_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("emit-transcript: cannot open '" + options.transcript_path +
                                     "' for writing");
        }
        out << transcript;
    }
    write_output(spec.out_path,
                 spec.format == OutputFormat::Json ? render_json(results) : render_csv(results));
}

}  // namespace sqkd
