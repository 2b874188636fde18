#include "combing/parallel.hpp"

#include <cstdlib>
#include <string>

namespace combing {

unsigned worker_count() {
    if (const char* env = std::getenv("COMBING_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return unsigned(v);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace combing
