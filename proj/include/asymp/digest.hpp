#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace asymp {

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Seed of the named stream derived from a master seed: the first eight bytes
/// of SHA-256("<master>/<name>"), big-endian. Streams with different names
/// are independent of the order in which they are requested.
std::uint64_t stream_seed(std::uint64_t master, std::string_view name);

}  // namespace asymp
