#pragma once

#include <cstdint>
#include <string_view>

namespace hardyp {

inline constexpr std::string_view kVersion = "0.3.1";

/// Environment variable holding the memory cap in bytes.
inline constexpr const char* kMemoryCapEnv = "HARDYP_MEMORY_CAP";

/// Memory cap honored by sieves and convolutions. Read from the environment on
/// first use (default 2 GiB); set_memory_cap overrides it.
std::uint64_t memory_cap();
void set_memory_cap(std::uint64_t bytes);

/// Throws ResourceError when `bytes` exceeds the cap.
void check_allocation(std::uint64_t bytes, const char* what);

}  // namespace hardyp
