#include "ordembed/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace ordembed {
namespace {

constexpr std::size_t kMaxChunks = 256;

std::size_t initial_thread_count() {
  if (const char* env = std::getenv("ORDEMBED_THREADS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::atomic<std::size_t>& thread_setting() {
  static std::atomic<std::size_t> threads{initial_thread_count()};
  return threads;
}

}  // namespace

std::size_t thread_count() { return thread_setting().load(); }

void set_thread_count(std::size_t threads) { thread_setting().store(std::max<std::size_t>(1, threads)); }

std::size_t chunk_count(std::size_t count) { return std::min(count, kMaxChunks); }

void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(count);
  if (chunks == 0) return;
  const std::size_t base = count / chunks;
  const std::size_t extra = count % chunks;
  auto bounds = [&](std::size_t c) {
    const std::size_t begin = c * base + std::min(c, extra);
    return std::pair{begin, begin + base + (c < extra ? 1 : 0)};
  };

  const std::size_t workers = std::min(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      body(c, b, e);
    }
    return;
  }

  // Failures are kept per chunk and the lowest one is rethrown, matching
  // what the serial path would report.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(chunks);
  auto work = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      try {
        auto [b, e] = bounds(c);
        body(c, b, e);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  parallel_chunks(count, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace ordembed
