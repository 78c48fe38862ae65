#include "balloon/digest.hpp"

#include <openssl/evp.h>

#include <ostream>

#include "balloon/rational.hpp"
#include <stdexcept>

namespace balloon {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class Sha256Hasher final : public Hasher {
 public:
  Digest hash(std::span<const std::uint8_t> data) const override {
    Digest out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != Digest::kSize) {
      throw std::runtime_error("EVP_Digest(sha256) failed");
    }
    return out;
  }
  std::string_view name() const override { return "sha256"; }
};

}  // namespace

Digest Digest::from_hex(std::string_view hex) {
  if (hex.size() != 2 * kSize) throw std::invalid_argument("digest hex must be 64 characters");
  Digest d;
  for (std::size_t i = 0; i < kSize; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("digest hex has a non-hex character");
    d.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return d;
}

std::string Digest::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * kSize, '0');
  for (std::size_t i = 0; i < kSize; ++i) {
    out[2 * i] = kDigits[bytes[i] >> 4];
    out[2 * i + 1] = kDigits[bytes[i] & 0x0f];
  }
  return out;
}

std::uint64_t Digest::mod(std::uint64_t n) const {
  if (n == 0) throw std::domain_error("digest mod 0");
  uint128 r = 0;
  for (std::uint8_t byte : bytes) r = ((r << 8) | byte) % n;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t Digest::prefix64() const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | bytes[i];
  return v;
}

std::ostream& operator<<(std::ostream& os, const Digest& d) { return os << d.hex(); }

std::shared_ptr<const Hasher> sha256_hasher() {
  static const auto instance = std::make_shared<const Sha256Hasher>();
  return instance;
}

}  // namespace balloon
