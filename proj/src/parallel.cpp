#include "darboux/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace darboux {

std::size_t thread_count()
{
    std::size_t requested = 0;
    if (const char* env = std::getenv("DARBOUX_THREADS")) {
        const char* end = env + std::strlen(env);
        if (std::from_chars(env, end, requested).ec != std::errc())
            requested = 0;
    }
    if (requested == 0)
        requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

} // namespace darboux
