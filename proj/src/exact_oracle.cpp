#include "sqkd/exact_oracle.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace sqkd {

namespace {

constexpr double kBranchBudget = 1e5;

// Exact real number a + b*sqrt(2). Every amplitude reachable in this
// protocol lives in this ring: preparation introduces 1/sqrt2 = (1/2)*sqrt2,
// Hadamard multiplies by 1/sqrt2, CNOT only permutes.
struct Root2 {
    Rational a = 0;
    Rational b = 0;

    bool is_zero() const { return a == 0 && b == 0; }
};

Root2 operator+(const Root2& x, const Root2& y) { return {x.a + y.a, x.b + y.b}; }
Root2 operator-(const Root2& x, const Root2& y) { return {x.a - y.a, x.b - y.b}; }
Root2 operator*(const Root2& x, const Root2& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
}
Root2 mul_inv_sqrt2(const Root2& x) { return {x.b, x.a / 2}; }

// Unnormalized exact state; probabilities are taken as weight ratios, so no
// branch ever needs an (irrational) renormalization factor.
struct ExactState {
    int num_qubits = 0;
    std::vector<Root2> amps;
};

int state_bit(const ExactState& s, std::size_t index, int qubit) {
    return static_cast<int>((index >> (s.num_qubits - 1 - qubit)) & 1u);
}

ExactState exact_prepare(Basis basis, Bit bit) {
    const Root2 one{1, 0};
    const Root2 zero{0, 0};
    const Root2 inv_sqrt2{0, Rational(1, 2)};
    if (basis == Basis::Z) {
        return {1, bit == 0 ? std::vector<Root2>{one, zero} : std::vector<Root2>{zero, one}};
    }
    return {1, bit == 0 ? std::vector<Root2>{inv_sqrt2, inv_sqrt2}
                        : std::vector<Root2>{inv_sqrt2, Root2{} - inv_sqrt2}};
}

ExactState exact_tensor(const ExactState& x, const ExactState& y) {
    ExactState out;
    out.num_qubits = x.num_qubits + y.num_qubits;
    out.amps.resize(std::size_t{1} << out.num_qubits);
    for (std::size_t i = 0; i < x.amps.size(); ++i) {
        for (std::size_t j = 0; j < y.amps.size(); ++j) {
            out.amps[i * y.amps.size() + j] = x.amps[i] * y.amps[j];
        }
    }
    return out;
}

ExactState exact_cnot(const ExactState& s, int control, int target) {
    const std::size_t target_mask = std::size_t{1} << (s.num_qubits - 1 - target);
    ExactState out = s;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (state_bit(s, i, control) == 1) {
            out.amps[i ^ target_mask] = s.amps[i];
        }
    }
    return out;
}

ExactState exact_hadamard(const ExactState& s, int qubit) {
    const std::size_t mask = std::size_t{1} << (s.num_qubits - 1 - qubit);
    ExactState out = s;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if ((i & mask) == 0) {
            const Root2 lo = s.amps[i];
            const Root2 hi = s.amps[i | mask];
            out.amps[i] = mul_inv_sqrt2(lo + hi);
            out.amps[i | mask] = mul_inv_sqrt2(lo - hi);
        }
    }
    return out;
}

// Sum of squared amplitudes over the sub-block where `qubit` reads `value`.
// The square of a + b*sqrt2 is a^2 + 2b^2 + 2ab*sqrt2; a legitimate Born
// weight must come out rational, so a surviving sqrt2 part is a hard error.
Rational block_weight(const ExactState& s, int qubit, int value) {
    Rational rational_part = 0;
    Rational sqrt2_part = 0;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (state_bit(s, i, qubit) == value) {
            const Root2& amp = s.amps[i];
            rational_part += amp.a * amp.a + 2 * amp.b * amp.b;
            sqrt2_part += 2 * amp.a * amp.b;
        }
    }
    if (sqrt2_part != 0) {
        throw SimulationError("exact oracle: irrational Born weight");
    }
    return rational_part;
}

ExactState project(const ExactState& s, int qubit, int value) {
    ExactState out = s;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (state_bit(s, i, qubit) != value) {
            out.amps[i] = Root2{};
        }
    }
    return out;
}

// Drops `qubit`, keeping the sub-block where it reads `value`.
ExactState extract_block(const ExactState& s, int qubit, int value) {
    ExactState out;
    out.num_qubits = s.num_qubits - 1;
    out.amps.reserve(std::size_t{1} << out.num_qubits);
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        if (state_bit(s, i, qubit) == value) {
            out.amps.push_back(s.amps[i]);
        }
    }
    return out;
}

struct Tally {
    std::map<RoundCategory, Rational> cat_weight;
    std::map<RoundCategory, Rational> cat_error;
    Rational sift_weight = 0;
    Rational sift_match = 0;
    Rational sift_z_weight = 0;
    Rational sift_z_logged = 0;
    Rational sift_z_agree = 0;
    Rational classified_weight = 0;
    Rational classified_correct = 0;
    std::uint64_t leaves = 0;
};

// One branch of the round in progress. The in-flight register carries the
// ancilla while Eve's tag is attached; once Bob consumes a tagged photon the
// collapsed joint register moves to `retained`.
struct Branch {
    Rational p = 1;
    Basis alice_basis = Basis::Z;
    Bit alice_bit = 0;
    ExactState channel;
    bool shifted = false;
    bool origin_bob = false;
    std::optional<ExactState> retained;
    Mode mode = Mode::CTRL;
    std::optional<Bit> bob_bit;
    std::optional<Bit> return_bit;
    std::optional<Bit> eve_bit;
    std::optional<Mode> eve_mode;
};

class RoundWalker {
public:
    explicit RoundWalker(const RunConfig& config)
        : strategy_(config.strategy.kind),
          fingerprint_d_(config.strategy.fingerprint_d),
          sift_probability_(config.sift_probability),
          p_noise_(config.p_noise) {}

    Tally walk() {
        for (Basis basis : {Basis::Z, Basis::X}) {
            for (Bit bit : {0, 1}) {
                Branch branch;
                branch.p = Rational(1, 4);
                branch.alice_basis = basis;
                branch.alice_bit = bit;
                branch.channel = exact_prepare(basis, bit);
                eve_forward(std::move(branch));
            }
        }
        return std::move(tally_);
    }

private:
    using Next = void (RoundWalker::*)(Branch);

    // Splits on a Z measurement of `qubit` in branch.channel; zero-weight
    // outcomes are skipped, so deterministic measurements do not fork.
    void fork_z_measure(Branch branch, int qubit, Next next,
                        const std::function<void(Branch&, Bit)>& on_outcome) {
        const Rational w0 = block_weight(branch.channel, qubit, 0);
        const Rational w1 = block_weight(branch.channel, qubit, 1);
        const Rational total = w0 + w1;
        for (Bit outcome : {0, 1}) {
            const Rational w = outcome == 0 ? w0 : w1;
            if (w == 0) {
                continue;
            }
            Branch fork = branch;
            fork.p *= w / total;
            fork.channel = project(fork.channel, qubit, outcome);
            on_outcome(fork, outcome);
            (this->*next)(std::move(fork));
        }
    }

    void eve_forward(Branch branch) {
        switch (strategy_) {
            case StrategyKind::None:
            case StrategyKind::MeasureReturnZ:
            case StrategyKind::Fingerprint:
                forward_noise(std::move(branch));
                return;
            case StrategyKind::InterceptResendForward:
                fork_z_measure(std::move(branch), 0, &RoundWalker::forward_noise,
                               [](Branch& fork, Bit outcome) {
                                   fork.eve_bit = outcome;
                                   fork.channel = exact_prepare(Basis::Z, outcome);
                               });
                return;
            case StrategyKind::Tagging:
                branch.channel = exact_cnot(exact_tensor(branch.channel, exact_prepare(Basis::Z, 0)), 0, 1);
                branch.shifted = true;
                forward_noise(std::move(branch));
                return;
        }
    }

    void forward_noise(Branch branch) { noise(std::move(branch), &RoundWalker::bob); }

    void return_noise(Branch branch) { noise(std::move(branch), &RoundWalker::verify); }

    void noise(Branch branch, Next next) {
        const Rational q(p_noise_);
        if (q == 0) {
            (this->*next)(std::move(branch));
            return;
        }
        if (q != 1) {
            Branch clean = branch;
            clean.p *= 1 - q;
            (this->*next)(std::move(clean));
        }
        if (branch.channel.num_qubits == 1) {
            for (Bit fresh : {0, 1}) {
                Branch fork = branch;
                fork.p *= q / 2;
                fork.channel = exact_prepare(Basis::Z, fresh);
                (this->*next)(std::move(fork));
            }
            return;
        }
        // Entangled register: collapse the photon qubit, then splice in the
        // replacement next to the surviving ancilla part.
        const Rational w0 = block_weight(branch.channel, 0, 0);
        const Rational w1 = block_weight(branch.channel, 0, 1);
        const Rational total = w0 + w1;
        for (Bit collapsed : {0, 1}) {
            const Rational w = collapsed == 0 ? w0 : w1;
            if (w == 0) {
                continue;
            }
            const ExactState rest = extract_block(branch.channel, 0, collapsed);
            for (Bit fresh : {0, 1}) {
                Branch fork = branch;
                fork.p *= (q / 2) * (w / total);
                fork.channel = exact_tensor(exact_prepare(Basis::Z, fresh), rest);
                (this->*next)(std::move(fork));
            }
        }
    }

    void bob(Branch branch) {
        const Rational ps(sift_probability_);
        if (ps != 1) {
            Branch ctrl = branch;
            ctrl.p *= 1 - ps;
            ctrl.mode = Mode::CTRL;
            eve_return(std::move(ctrl));
        }
        if (ps == 0) {
            return;
        }
        branch.p *= ps;
        branch.mode = Mode::SIFT;
        fork_z_measure(std::move(branch), 0, &RoundWalker::eve_return, [](Branch& fork, Bit outcome) {
            fork.bob_bit = outcome;
            if (fork.channel.num_qubits > 1) {
                fork.retained = fork.channel;  // collapsed joint register stays with Eve
            }
            fork.channel = exact_prepare(Basis::Z, outcome);
            fork.shifted = false;  // fresh photons are never tagged
            fork.origin_bob = true;
        });
    }

    void eve_return(Branch branch) {
        switch (strategy_) {
            case StrategyKind::None:
            case StrategyKind::InterceptResendForward:
                return_noise(std::move(branch));
                return;
            case StrategyKind::MeasureReturnZ:
                fork_z_measure(std::move(branch), 0, &RoundWalker::return_noise,
                               [](Branch& fork, Bit outcome) { fork.eve_bit = outcome; });
                return;
            case StrategyKind::Tagging: {
                if (branch.shifted) {
                    branch.eve_mode = Mode::CTRL;
                    branch.channel = exact_cnot(branch.channel, 0, 1);
                    if (block_weight(branch.channel, 1, 1) != 0) {
                        throw SimulationError("exact oracle: ancilla not reset by reverse CNOT");
                    }
                    branch.channel = extract_block(branch.channel, 1, 0);
                    return_noise(std::move(branch));
                    return;
                }
                branch.eve_mode = Mode::SIFT;
                if (!branch.retained) {
                    throw SimulationError("exact oracle: no retained ancilla on SIFT return");
                }
                const ExactState joint = *branch.retained;
                const Rational w0 = block_weight(joint, 1, 0);
                const Rational w1 = block_weight(joint, 1, 1);
                const Rational total = w0 + w1;
                for (Bit outcome : {0, 1}) {
                    const Rational w = outcome == 0 ? w0 : w1;
                    if (w == 0) {
                        continue;
                    }
                    Branch fork = branch;
                    fork.p *= w / total;
                    fork.eve_bit = outcome;
                    fork.retained.reset();
                    return_noise(std::move(fork));
                }
                return;
            }
            case StrategyKind::Fingerprint: {
                const Rational d(fingerprint_d_);
                if (!branch.origin_bob || d == 0) {
                    return_noise(std::move(branch));
                    return;
                }
                if (d != 1) {
                    Branch missed = branch;
                    missed.p *= 1 - d;
                    return_noise(std::move(missed));
                }
                branch.p *= d;
                branch.eve_mode = Mode::SIFT;
                fork_z_measure(std::move(branch), 0, &RoundWalker::return_noise,
                               [](Branch& fork, Bit outcome) { fork.eve_bit = outcome; });
                return;
            }
        }
    }

    void verify(Branch branch) {
        const Basis basis = branch.mode == Mode::CTRL ? branch.alice_basis : Basis::Z;
        if (basis == Basis::X) {
            branch.channel = exact_hadamard(branch.channel, 0);
        }
        fork_z_measure(std::move(branch), 0, &RoundWalker::leaf,
                       [](Branch& fork, Bit outcome) { fork.return_bit = outcome; });
    }

    void leaf(Branch branch) {
        const Bit return_bit = *branch.return_bit;
        const RoundCategory category = category_of(branch.mode, branch.alice_basis);
        tally_.cat_weight[category] += branch.p;
        if (category == RoundCategory::CTRL_Z || category == RoundCategory::CTRL_X) {
            if (return_bit != branch.alice_bit) {
                tally_.cat_error[category] += branch.p;
            }
        } else if (category == RoundCategory::SIFT_Z) {
            if (*branch.bob_bit != branch.alice_bit) {
                tally_.cat_error[category] += branch.p;
            }
        }
        if (branch.mode == Mode::SIFT) {
            tally_.sift_weight += branch.p;
            if (branch.eve_bit && *branch.eve_bit == *branch.bob_bit) {
                tally_.sift_match += branch.p;
            }
        }
        if (category == RoundCategory::SIFT_Z) {
            tally_.sift_z_weight += branch.p;
            if (branch.eve_bit) {
                tally_.sift_z_logged += branch.p;
                if (*branch.eve_bit == *branch.bob_bit) {
                    tally_.sift_z_agree += branch.p;
                }
            }
        }
        if (branch.eve_mode) {
            tally_.classified_weight += branch.p;
            if (*branch.eve_mode == branch.mode) {
                tally_.classified_correct += branch.p;
            }
        }
        ++tally_.leaves;
    }

    StrategyKind strategy_;
    double fingerprint_d_;
    double sift_probability_;
    double p_noise_;
    Tally tally_;
};

}  // namespace

ExactReport enumerate_exact(const RunConfig& config) {
    validate(config);
    Tally tally = RoundWalker(config).walk();

    if (static_cast<double>(config.rounds) * std::log(static_cast<double>(tally.leaves)) >
        std::log(kBranchBudget)) {
        throw SimulationError("enumerate_exact: branch budget exceeded (" +
                              std::to_string(tally.leaves) + "^" +
                              std::to_string(config.rounds) + " leaves)");
    }

    ExactReport report;
    report.leaf_count = tally.leaves;
    for (RoundCategory category : {RoundCategory::CTRL_Z, RoundCategory::CTRL_X,
                                   RoundCategory::SIFT_Z, RoundCategory::SIFT_X}) {
        report.category_probability[category] = tally.cat_weight[category];
    }
    for (RoundCategory category :
         {RoundCategory::CTRL_Z, RoundCategory::CTRL_X, RoundCategory::SIFT_Z}) {
        if (tally.cat_weight[category] != 0) {
            report.error_probability[category] = tally.cat_error[category] / tally.cat_weight[category];
        }
    }
    if (tally.sift_weight != 0) {
        report.eve_match_bob_given_sift = tally.sift_match / tally.sift_weight;
    }
    if (tally.sift_z_weight != 0) {
        report.eve_known_given_sift_z = tally.sift_z_logged / tally.sift_z_weight;
    }
    if (tally.sift_z_logged != 0) {
        report.eve_agreement_given_sift_z = tally.sift_z_agree / tally.sift_z_logged;
    }
    if (tally.classified_weight != 0) {
        report.classification_accuracy = tally.classified_correct / tally.classified_weight;
    }
    report.classified_probability = tally.classified_weight;
    return report;
}

}  // namespace sqkd
