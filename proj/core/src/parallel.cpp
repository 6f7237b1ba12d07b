#include "stratx/parallel.hpp"

#include <cstdlib>

namespace stratx {

std::size_t worker_count() {
    static const std::size_t cached = [] {
        std::size_t workers = std::thread::hardware_concurrency();
        if (workers == 0) workers = 1;
        if (const char* env = std::getenv("STRATX_THREADS")) {
            char* end = nullptr;
            const long requested = std::strtol(env, &end, 10);
            if (end != env && requested >= 1 && static_cast<std::size_t>(requested) < workers) {
                workers = static_cast<std::size_t>(requested);
            }
        }
        return workers;
    }();
    return cached;
}

} // namespace stratx
