#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace balloon {

/// 256-bit opaque hash value. Ordering is lexicographic over the bytes, which
/// is also the big-endian numeric order.
struct Digest {
  static constexpr std::size_t kSize = 32;
  std::array<std::uint8_t, kSize> bytes{};

  static Digest from_hex(std::string_view hex);
  std::string hex() const;
  /// First 8 hex characters, for logs.
  std::string short_hex() const { return hex().substr(0, 8); }

  /// Value of the digest read as a big-endian unsigned integer, reduced mod n.
  std::uint64_t mod(std::uint64_t n) const;
  /// Top 64 bits, big-endian.
  std::uint64_t prefix64() const;

  friend auto operator<=>(const Digest&, const Digest&) = default;
};

std::ostream& operator<<(std::ostream& os, const Digest& d);

struct DigestHash {
  std::size_t operator()(const Digest& d) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t); ++i) h = (h << 8) | d.bytes[i];
    return h;
  }
};

/// Pluggable 256-bit hash function.
class Hasher {
 public:
  virtual ~Hasher() = default;
  virtual Digest hash(std::span<const std::uint8_t> data) const = 0;
  virtual std::string_view name() const = 0;
};

/// SHA-256 backed by OpenSSL. Shared, stateless, thread-safe.
std::shared_ptr<const Hasher> sha256_hasher();

}  // namespace balloon

template <>
struct std::hash<balloon::Digest> : balloon::DigestHash {};
