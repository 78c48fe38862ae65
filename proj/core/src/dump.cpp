#include "balloon/dump.hpp"

#include <istream>
#include <ostream>

#include "balloon/errors.hpp"

namespace balloon {
namespace {

int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto byte : bytes) {
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorCode::MalformedDump, "odd hex length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(ErrorCode::MalformedDump, "bad hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

void write_dump(std::ostream& out, const BlockGraph& g) {
  for (const auto& id : g.insertion_order()) out << to_hex(encode_block(g.block(id))) << '\n';
}

ProtocolParams params_of(const BlockGraph& g) { return decode_params(g.block(g.genesis_root()).payload); }

BlockGraph read_dump(std::istream& in, SampleCheck mode, std::shared_ptr<const Hasher> hasher) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<BlockGraph> g;
  ProtocolParams params;
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::MalformedDump, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    Block b;
    try {
      b = decode_block(from_hex(line));
    } catch (const Error& e) {
      throw fail(e.what());
    }
    if (!g) {
      try {
        params = decode_params(b.payload);
        params.validate();
        g.emplace(std::move(b), hasher);
      } catch (const Error& e) {
        throw fail(std::string("first block is not a valid initial genesis: ") + e.what());
      }
      continue;
    }
    if (auto missing = g->missing_references(b); !missing.empty()) {
      throw fail("reference " + missing.front().short_hex() + " precedes its target");
    }
    auto outcome = accept_block(*g, std::move(b), params, mode);
    if (!outcome.verdict) {
      throw fail("block " + outcome.id.short_hex() + " rejected: " + std::string(to_string(*outcome.verdict.reason)) +
                 " (" + outcome.verdict.detail + ")");
    }
  }
  if (!g) throw Error(ErrorCode::MalformedDump, "empty dump");
  return std::move(*g);
}

void write_order(std::ostream& out, const OrderedChain& chain, const BlockGraph& g) {
  for (std::size_t i = 0; i < chain.blocks.size(); ++i) {
    const BlockRecord& rec = g.record(chain.blocks[i]);
    out << i << '\t' << rec.id.hex() << '\t' << g.view(rec.view).number << '\t' << rec.block.clock << '\t'
        << rec.chain << '\n';
  }
}

}  // namespace balloon
