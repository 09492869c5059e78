#include "signcast/ledger/chain_store.hpp"

#include <fstream>

namespace signcast::ledger {

std::string BlockToLine(const Block& block) { return block.ToJson().dump(); }

Block BlockFromLine(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw DecodeError("not valid JSON");
  Block b = Block::FromJson(j);
  if (BlockToLine(b) != line) throw DecodeError("line is not in canonical form");
  return b;
}

void ChainStore::Append(const Block& block) const {
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open chain file " + path_.string());
  out << BlockToLine(block) << '\n';
  out.flush();
  if (!out) throw Error("write to chain file failed");
}

void ChainStore::Rewrite(const std::vector<Block>& blocks) const {
  std::filesystem::path tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot open chain file " + tmp.string());
    for (const Block& b : blocks) out << BlockToLine(b) << '\n';
    out.flush();
    if (!out) throw Error("write to chain file failed");
  }
  std::filesystem::rename(tmp, path_);
}

std::vector<Block> ChainStore::Load() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw NotFoundError("chain file not found: " + path_.string());
  std::vector<Block> blocks;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    try {
      blocks.push_back(BlockFromLine(line));
    } catch (const std::exception& e) {
      throw ChainStoreError(n, e.what());
    }
    ++n;
  }
  return blocks;
}

Chain ChainStore::CheckpointTo(const Chain& chain, const std::filesystem::path& archive) const {
  Rewrite(chain.Blocks());
  std::filesystem::rename(path_, archive);
  Chain next = chain.Checkpoint();
  Rewrite(next.Blocks());
  return next;
}

}  // namespace signcast::ledger
