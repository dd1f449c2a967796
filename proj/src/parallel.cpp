#include "collapselab/parallel.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace collapselab {

std::size_t worker_count() {
    if (const char* env = std::getenv("COLLAPSE_LAB_THREADS")) {
        try {
            const long parsed = std::stol(env);
            if (parsed >= 1) return static_cast<std::size_t>(parsed);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace collapselab
