#pragma once
// Minimal fork-join helper. Work is split into contiguous index blocks whose
// boundaries depend only on (n, workers); callers are expected to write to
// disjoint outputs so results never depend on scheduling.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string_view>
#include <thread>
#include <vector>

namespace impact_lattice {

inline constexpr const char* kThreadsEnvVar = "IMPACT_LATTICE_THREADS";

/// Worker count from IMPACT_LATTICE_THREADS; unset, 0 or unparsable means auto.
inline std::size_t worker_count_from_env() {
    std::size_t requested = 0;
    if (const char* env = std::getenv(kThreadsEnvVar)) {
        std::string_view sv{env};
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec == std::errc{} && ptr == sv.data() + sv.size()) requested = v;
    }
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

class Executor {
public:
    explicit Executor(std::size_t workers = 1) : workers_{std::max<std::size_t>(1, workers)} {}

    static Executor from_env() { return Executor{worker_count_from_env()}; }
    static Executor serial() { return Executor{1}; }

    std::size_t workers() const noexcept { return workers_; }

    /// Calls fn(begin, end) over a partition of [0, n). Rethrows the first
    /// exception raised by any block.
    template <class Fn>
    void parallel_for(std::size_t n, Fn&& fn) const {
        const std::size_t blocks = std::min(workers_, n);
        if (blocks <= 1) {
            if (n > 0) fn(std::size_t{0}, n);
            return;
        }
        std::vector<std::exception_ptr> errors(blocks);
        {
            std::vector<std::jthread> pool;
            pool.reserve(blocks - 1);
            for (std::size_t b = 1; b < blocks; ++b) {
                pool.emplace_back([&, b] {
                    try {
                        fn(n * b / blocks, n * (b + 1) / blocks);
                    } catch (...) {
                        errors[b] = std::current_exception();
                    }
                });
            }
            try {
                fn(std::size_t{0}, n / blocks);
            } catch (...) {
                errors[0] = std::current_exception();
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

private:
    std::size_t workers_;
};

}  // namespace impact_lattice
