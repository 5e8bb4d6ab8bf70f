#include "asymp/digest.hpp"

#include <openssl/sha.h>

#include <array>

namespace asymp {

namespace {

std::array<unsigned char, SHA256_DIGEST_LENGTH> digest(std::string_view bytes) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> out{};
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), out.data());
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * SHA256_DIGEST_LENGTH);
  for (unsigned char c : digest(bytes)) {
    hex.push_back(kHex[c >> 4]);
    hex.push_back(kHex[c & 15]);
  }
  return hex;
}

std::uint64_t stream_seed(std::uint64_t master, std::string_view name) {
  const auto d = digest(std::to_string(master) + "/" + std::string(name));
  std::uint64_t s = 0;
  for (int i = 0; i < 8; ++i) s = (s << 8) | d[static_cast<std::size_t>(i)];
  return s;
}

}  // namespace asymp
