#include "newtonosc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace newtonosc {

namespace {

std::size_t initial_threads() {
    if (const char* env = std::getenv("NEWTONOSC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

std::atomic<std::size_t>& threads_setting() {
    static std::atomic<std::size_t> value{initial_threads()};
    return value;
}

thread_local bool in_parallel_region = false;

}  // namespace

std::size_t thread_count() { return threads_setting().load(); }

void set_thread_count(std::size_t n) { threads_setting().store(std::max<std::size_t>(1, n)); }

std::size_t chunk_count(std::size_t count) {
    if (count == 0) return 0;
    return std::min(count, thread_count());
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (count == 0) return;
    const std::size_t chunks = chunk_count(count);
    auto bounds = [&](std::size_t c) { return count * c / chunks; };
    if (chunks == 1 || in_parallel_region) {
        for (std::size_t c = 0; c < chunks; ++c) body(bounds(c), bounds(c + 1), c);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    {
        std::vector<std::jthread> workers;
        workers.reserve(chunks - 1);
        for (std::size_t c = 1; c < chunks; ++c) {
            workers.emplace_back([&, c] {
                in_parallel_region = true;
                try {
                    body(bounds(c), bounds(c + 1), c);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
        in_parallel_region = true;
        try {
            body(bounds(0), bounds(1), 0);
        } catch (...) {
            errors[0] = std::current_exception();
        }
        in_parallel_region = false;
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace newtonosc
