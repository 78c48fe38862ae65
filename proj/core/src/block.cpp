#include "balloon/block.hpp"

#include <algorithm>

#include "balloon/errors.hpp"

namespace balloon {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
  void raw(const Digest& d) { out_.insert(out_.end(), d.bytes.begin(), d.bytes.end()); }
  void optional_digest(const std::optional<Digest>& d) {
    if (!d) {
      u32(0);
      return;
    }
    u32(Digest::kSize);
    raw(*d);
  }
  void digest_set(std::vector<Digest> set) {
    std::sort(set.begin(), set.end());
    u32(static_cast<std::uint32_t>(set.size()));
    for (const auto& d : set) raw(d);
  }
  void string(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | in_[pos_++];
    return v;
  }
  Digest raw() {
    need(Digest::kSize);
    Digest d;
    std::copy_n(in_.begin() + static_cast<std::ptrdiff_t>(pos_), Digest::kSize, d.bytes.begin());
    pos_ += Digest::kSize;
    return d;
  }
  std::optional<Digest> optional_digest() {
    const std::uint32_t len = u32();
    if (len == 0) return std::nullopt;
    if (len != Digest::kSize) throw Error(ErrorCode::MalformedBlock, "digest length " + std::to_string(len));
    return raw();
  }
  std::vector<Digest> digest_list() {
    const std::uint32_t count = u32();
    need(static_cast<std::size_t>(count) * Digest::kSize);
    std::vector<Digest> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(raw());
    return out;
  }
  std::string string() {
    const std::uint32_t len = u32();
    need(len);
    std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  in_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
    pos_ += len;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::MalformedBlock, "truncated block encoding");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void write_chain_fields(Writer& w, const Block& b) {
  w.optional_digest(b.root);
  w.optional_digest(b.guider);
  w.u64(b.clock);
  w.digest_set(b.samples);
  w.u64(b.nonce);
  w.digest_set(b.anchors);
  if (b.weight.num() <= 0) throw Error(ErrorCode::MalformedBlock, "block weight must be positive");
  w.u64(static_cast<std::uint64_t>(b.weight.num()));
  w.u64(static_cast<std::uint64_t>(b.weight.den()));
  if (b.timestamp.count() < 0) throw Error(ErrorCode::MalformedBlock, "negative timestamp");
  w.u64(static_cast<std::uint64_t>(b.timestamp.count()));
  w.u32(static_cast<std::uint32_t>(b.payload.size()));
  for (const auto& tx : b.payload) w.string(tx);
}

}  // namespace

std::vector<std::uint8_t> encode_chain_fields(const Block& b) {
  Writer w;
  write_chain_fields(w, b);
  return w.take();
}

std::vector<std::uint8_t> encode_block(const Block& b) {
  Writer w;
  write_chain_fields(w, b);
  w.optional_digest(b.parent);
  w.u64(b.number);
  if (!b.proof) {
    w.u8(0);
  } else {
    w.u8(1);
    w.u32(static_cast<std::uint32_t>(b.proof->siblings.size()));
    for (const auto& d : b.proof->siblings) w.raw(d);
  }
  return w.take();
}

Block decode_block(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Block b;
  b.root = r.optional_digest();
  b.guider = r.optional_digest();
  b.clock = r.u64();
  b.samples = r.digest_list();
  b.nonce = r.u64();
  b.anchors = r.digest_list();
  const std::uint64_t num = r.u64();
  const std::uint64_t den = r.u64();
  if (num == 0 || den == 0 || num > INT64_MAX || den > INT64_MAX) {
    throw Error(ErrorCode::MalformedBlock, "bad weight");
  }
  b.weight = Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
  if (b.weight.num() != static_cast<std::int64_t>(num)) {
    throw Error(ErrorCode::MalformedBlock, "weight not in lowest terms");
  }
  const std::uint64_t ts = r.u64();
  if (ts > INT64_MAX) throw Error(ErrorCode::MalformedBlock, "bad timestamp");
  b.timestamp = Timestamp(static_cast<std::int64_t>(ts));
  const std::uint32_t txs = r.u32();
  for (std::uint32_t i = 0; i < txs; ++i) b.payload.push_back(r.string());
  b.parent = r.optional_digest();
  b.number = r.u64();
  const std::uint8_t has_proof = r.u8();
  if (has_proof > 1) throw Error(ErrorCode::MalformedBlock, "bad proof flag");
  if (has_proof == 1) b.proof = MerkleProof{r.digest_list()};
  if (!r.done()) throw Error(ErrorCode::MalformedBlock, "trailing bytes after block");
  canonicalize(b);
  return b;
}

Digest chain_hash(const Block& b, const Hasher& hasher) { return hasher.hash(encode_chain_fields(b)); }

Digest block_id(const Block& b, const Hasher& hasher) { return hasher.hash(encode_block(b)); }

Block make_initial_genesis(const ProtocolParams& params) {
  params.validate();
  Block g0;
  g0.weight = params.diff_required;
  g0.payload = encode_params(params);
  return g0;
}

void canonicalize(Block& b) {
  std::sort(b.samples.begin(), b.samples.end());
  std::sort(b.anchors.begin(), b.anchors.end());
}

}  // namespace balloon
