#include "seplam/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace seplam {

std::vector<CertificateSample> evaluate_batch(std::span<const double> thetas, const PointEvaluator& f,
                                              unsigned threads, const StopPredicate& stop) {
    const std::size_t n = thetas.size();
    std::vector<std::optional<CertificateSample>> slots(n);
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> cut{kNone};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || i > cut.load()) return;
            try {
                CertificateSample s = f(thetas[i]);
                const bool fire = stop && stop(s);
                slots[i] = std::move(s);
                if (fire) {
                    std::size_t cur = cut.load();
                    while (i < cur && !cut.compare_exchange_weak(cur, i)) {
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cut.store(0);
                return;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const std::size_t keep = cut.load() == kNone ? n : cut.load() + 1;
    std::vector<CertificateSample> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(std::move(*slots[i]));
    return out;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("SEPLAM_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace seplam
