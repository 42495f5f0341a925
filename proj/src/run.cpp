#include "sqkd/run.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include "sqkd/adversary.hpp"

namespace sqkd {

ProtocolRun run_protocol(const RunConfig& config, int threads) {
    validate(config);
    const auto eve = make_eavesdropper(config.strategy, config.untag_on_return);

    std::vector<RoundRecord> records(config.rounds);
    const auto simulate_range = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t round_id = begin; round_id < end; ++round_id) {
            RandomStream rng(derive_seed(config.seed, kRoundDomain, round_id));
            EveMemory memory;
            records[round_id] = run_round(round_id, *eve, memory, config, rng);
        }
    };

    std::uint64_t worker_count = threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                              : static_cast<std::uint64_t>(threads);
    worker_count = std::min<std::uint64_t>(worker_count, config.rounds);
    if (worker_count <= 1) {
        simulate_range(0, config.rounds);
    } else {
        std::vector<std::thread> workers;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const std::uint64_t chunk = (config.rounds + worker_count - 1) / worker_count;
        for (std::uint64_t w = 0; w < worker_count; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(begin + chunk, config.rounds);
            workers.emplace_back([&, begin, end] {
                try {
                    simulate_range(begin, end);
                } catch (...) {
                    std::scoped_lock lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    const SiftResult sifted = sift(records, config);
    RunReport report = build_report(records, sifted, config);
    return {std::move(records), std::move(report)};
}

}  // namespace sqkd
