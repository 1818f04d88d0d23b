#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace charprobe {

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

// 64-bit FNV-1a; used where a fast, stable, platform-independent hash is
// needed (test embeddings, cache keys).
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace charprobe
