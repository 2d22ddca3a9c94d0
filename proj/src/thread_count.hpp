#pragma once

#include <cstdlib>
#include <thread>

namespace gaugeme::detail {

// requested > 0 wins; otherwise the GAUGE_ME_THREADS environment variable,
// then hardware concurrency. Always >= 1.
inline int resolve_thread_count(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("GAUGE_ME_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v < 1024)
            return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

} // namespace gaugeme::detail
