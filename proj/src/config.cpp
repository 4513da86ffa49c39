#include "hardyp/config.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "hardyp/errors.hpp"

namespace hardyp {

namespace {

constexpr std::uint64_t kDefaultCap = 2ULL << 30;

std::uint64_t read_env_cap() {
  const char* raw = std::getenv(kMemoryCapEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultCap;
  try {
    std::size_t used = 0;
    const auto value = std::stoull(raw, &used);
    if (used != std::string(raw).size() || value == 0) return kDefaultCap;
    return value;
  } catch (const std::exception&) {
    return kDefaultCap;
  }
}

std::atomic<std::uint64_t>& cap_slot() {
  static std::atomic<std::uint64_t> slot{read_env_cap()};
  return slot;
}

}  // namespace

std::uint64_t memory_cap() { return cap_slot().load(std::memory_order_relaxed); }

void set_memory_cap(std::uint64_t bytes) { cap_slot().store(bytes, std::memory_order_relaxed); }

void check_allocation(std::uint64_t bytes, const char* what) {
  const auto cap = memory_cap();
  if (bytes > cap) throw ResourceError(std::string(what) + " exceeds memory cap", bytes, cap);
}

}  // namespace hardyp
