#include "sqkd/analysis.hpp"

#include <cmath>

namespace sqkd {

const char* verdict_name(Verdict v) {
    return v == Verdict::CONTINUE ? "CONTINUE" : "ABORT";
}

std::optional<double> qber(const std::vector<std::pair<Bit, Bit>>& check_pairs) {
    if (check_pairs.empty()) {
        return std::nullopt;
    }
    std::uint64_t mismatches = 0;
    for (const auto& [expected, observed] : check_pairs) {
        if (expected != observed) {
            ++mismatches;
        }
    }
    return static_cast<double>(mismatches) / static_cast<double>(check_pairs.size());
}

Verdict verdict(const std::map<RoundCategory, double>& qbers, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("verdict: threshold must lie in [0, 1]");
    }
    for (const auto& [category, value] : qbers) {
        if (value > threshold) {
            return Verdict::ABORT;
        }
    }
    return Verdict::CONTINUE;
}

double mutual_information(const std::array<std::array<std::uint64_t, 2>, 2>& joint_counts) {
    const double total = static_cast<double>(joint_counts[0][0] + joint_counts[0][1] +
                                             joint_counts[1][0] + joint_counts[1][1]);
    if (total == 0.0) {
        throw std::invalid_argument("mutual_information: all-zero table");
    }
    const double pa[2] = {(joint_counts[0][0] + joint_counts[0][1]) / total,
                          (joint_counts[1][0] + joint_counts[1][1]) / total};
    const double pe[2] = {(joint_counts[0][0] + joint_counts[1][0]) / total,
                          (joint_counts[0][1] + joint_counts[1][1]) / total};
    double info = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int e = 0; e < 2; ++e) {
            if (joint_counts[a][e] == 0) {
                continue;
            }
            const double p = joint_counts[a][e] / total;
            info += p * std::log2(p / (pa[a] * pe[e]));
        }
    }
    return std::max(info, 0.0);  // rounding guard
}

double channel_mutual_information(const std::array<std::array<std::uint64_t, 2>, 2>& joint_counts) {
    double row_total[2] = {
        static_cast<double>(joint_counts[0][0] + joint_counts[0][1]),
        static_cast<double>(joint_counts[1][0] + joint_counts[1][1]),
    };
    const int rows = (row_total[0] > 0.0 ? 1 : 0) + (row_total[1] > 0.0 ? 1 : 0);
    if (rows == 0) {
        throw std::invalid_argument("channel_mutual_information: all-zero table");
    }
    const double input_mass = 1.0 / rows;
    double pe[2] = {0.0, 0.0};
    for (int a = 0; a < 2; ++a) {
        if (row_total[a] == 0.0) {
            continue;
        }
        for (int e = 0; e < 2; ++e) {
            pe[e] += input_mass * joint_counts[a][e] / row_total[a];
        }
    }
    double info = 0.0;
    for (int a = 0; a < 2; ++a) {
        if (row_total[a] == 0.0) {
            continue;
        }
        for (int e = 0; e < 2; ++e) {
            if (joint_counts[a][e] == 0) {
                continue;
            }
            const double conditional = joint_counts[a][e] / row_total[a];
            info += input_mass * conditional * std::log2(conditional / pe[e]);
        }
    }
    return std::max(info, 0.0);
}

double detection_probability(double per_photon_error, std::uint64_t check_photons) {
    if (!(per_photon_error >= 0.0 && per_photon_error <= 1.0)) {
        throw std::invalid_argument("detection_probability: error rate must lie in [0, 1]");
    }
    return 1.0 - std::pow(1.0 - per_photon_error, static_cast<double>(check_photons));
}

RunReport build_report(const std::vector<RoundRecord>& records, const SiftResult& sifted,
                       const RunConfig& config) {
    if (records.empty()) {
        throw std::invalid_argument("build_report: empty transcript");
    }
    RunReport report;
    for (RoundCategory category : {RoundCategory::CTRL_Z, RoundCategory::CTRL_X,
                                   RoundCategory::SIFT_Z, RoundCategory::SIFT_X}) {
        report.counts[category] = 0;
    }

    std::uint64_t sift_z_total = 0;
    std::uint64_t logged = 0;
    std::uint64_t agree = 0;
    std::array<std::array<std::uint64_t, 2>, 2> joint{{{0, 0}, {0, 0}}};
    for (const RoundRecord& record : records) {
        const RoundCategory category = category_of(record.mode, record.alice_basis);
        ++report.counts[category];
        if (category != RoundCategory::SIFT_Z) {
            continue;
        }
        ++sift_z_total;
        if (record.eve_bit) {
            ++logged;
            if (record.bob_bit && *record.eve_bit == *record.bob_bit) {
                ++agree;
            }
            joint[record.alice_bit][*record.eve_bit] += 1;
        }
    }

    for (const auto& [category, pairs] : sifted.check_sets) {
        if (auto rate = qber(pairs)) {
            report.qber[category] = *rate;
        }
    }
    report.sift_rate =
        static_cast<double>(sifted.raw_key_pairs.size()) / static_cast<double>(records.size());
    report.eve_known_fraction =
        sift_z_total == 0 ? 0.0 : static_cast<double>(logged) / static_cast<double>(sift_z_total);
    report.eve_agreement =
        logged == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(logged);
    report.mutual_information_bits = logged == 0 ? 0.0 : channel_mutual_information(joint);
    report.verdict = verdict(report.qber, config.qber_threshold);
    return report;
}

}  // namespace sqkd
