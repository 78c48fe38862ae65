#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace balloon::cli {

/// Process exit codes shared by every verb.
enum Exit : int { kOk = 0, kFailed = 1, kBadInput = 2 };

struct RunOptions {
  std::vector<std::string> configs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> duration;  ///< seconds, as a rational
  std::string out_dir = ".";
  unsigned jobs = 1;
};

/// Runs every scenario and writes <stem>.metrics.jsonl, <stem>.dump and
/// <stem>.order.tsv into out_dir. Exit 1 if any run saw a safety violation or
/// crashed, 2 on configuration errors.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);

/// Prints the ordered chain of a dump.
int cmd_order(const std::string& dump_path, std::ostream& out, std::ostream& err);

/// Compares the confirmed prefixes of two dumps. Exit 0 iff one is a prefix
/// of the other.
int cmd_diff(const std::string& dump_a, const std::string& dump_b, std::ostream& out, std::ostream& err);

/// Rebuilds a dump, validating every block (relaxed sample check, since dumps
/// record what a node accepted under network delay). With a block (hex
/// encoding) the block is also checked against the rebuilt graph. Exit 1 on a
/// rejection.
int cmd_validate(const std::string& dump_path, const std::optional<std::string>& block_hex, std::ostream& out,
                 std::ostream& err);

/// Parses argv and dispatches to a verb.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace balloon::cli
