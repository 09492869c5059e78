#pragma once

// Line-delimited JSON chain file: one block per line, in index order.
// Loading is strict: each line must be the canonical dump of the block it
// decodes to, so any edit to the file is either rejected or changes a field.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "signcast/errors.hpp"
#include "signcast/ledger/chain.hpp"

namespace signcast::ledger {

class ChainStoreError : public DecodeError {
 public:
  ChainStoreError(std::size_t line, const std::string& message)
      : DecodeError("chain file line " + std::to_string(line) + ": " + message), line_(line) {}
  // Zero-based line, equal to the block index it should hold.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::string BlockToLine(const Block& block);
Block BlockFromLine(std::string_view line);

class ChainStore {
 public:
  explicit ChainStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }
  bool Exists() const { return std::filesystem::exists(path_); }

  void Append(const Block& block) const;
  // Replaces the file atomically.
  void Rewrite(const std::vector<Block>& blocks) const;
  std::vector<Block> Load() const;

  // Moves the current file to `archive` and starts a fresh file holding the
  // checkpoint genesis of `chain`. Returns the new chain.
  Chain CheckpointTo(const Chain& chain, const std::filesystem::path& archive) const;

 private:
  std::filesystem::path path_;
};

}  // namespace signcast::ledger
