#include "repvote/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace repvote {

std::size_t default_jobs() {
  if (const char* env = std::getenv("REPVOTE_JOBS")) {
    std::size_t jobs = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, jobs);
    if (ec == std::errc() && ptr == end && jobs > 0) return jobs;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace repvote
