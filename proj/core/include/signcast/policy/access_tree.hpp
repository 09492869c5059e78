#pragma once

// Threshold-gate access trees. Interior nodes are k-of-n gates (k = 1 is OR,
// k = n is AND); leaves carry a single attribute. Nodes live in an arena and
// are addressed by id; a node's index() is its 1-based position under its
// parent and is the x-coordinate its share is evaluated at.

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "signcast/crypto/bytes.hpp"
#include "signcast/crypto/group.hpp"

namespace signcast::policy {

inline constexpr std::size_t kMaxDepth = 16;
inline constexpr std::size_t kMaxLeaves = 256;

using AttributeSet = std::set<std::string>;

// Trims ASCII whitespace; throws ArgumentError if the result is empty or
// contains whitespace or one of the reserved characters "(),@".
std::string NormalizeAttribute(std::string_view raw);
AttributeSet MakeAttributeSet(const std::vector<std::string>& raw);

struct AccessNode {
  enum class Kind { kInterior, kLeaf };

  Kind kind = Kind::kLeaf;
  std::size_t threshold = 1;           // k_x
  std::vector<std::size_t> children;   // node ids, in index order
  std::string attribute;               // leaves only
  std::size_t parent = 0;              // unused for the root
  std::size_t index = 0;               // 1..num_x under the parent; 0 for the root

  bool is_leaf() const { return kind == Kind::kLeaf; }
  std::size_t num_children() const { return children.size(); }
};

class AccessTree {
 public:
  static AccessTree Leaf(std::string attribute);
  // k-of-n gate over the given subtrees; throws ArgumentError unless
  // 1 <= k <= n, and enforces the depth and leaf limits.
  static AccessTree Gate(std::size_t k, std::vector<AccessTree> children);
  static AccessTree And(std::vector<AccessTree> children);
  static AccessTree Or(std::vector<AccessTree> children);

  const std::vector<AccessNode>& nodes() const { return nodes_; }
  const AccessNode& node(std::size_t id) const { return nodes_.at(id); }
  std::size_t root() const { return 0; }

  // Leaf node ids, left to right. Ciphertext leaf components follow this order.
  const std::vector<std::size_t>& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t depth() const;

  // Policy text that parses back to an identical tree.
  std::string ToString() const;
  nlohmann::json ToJson() const;
  static AccessTree FromJson(const nlohmann::json& j);

  // Canonical binary form; equal trees give equal bytes.
  Bytes Encode() const;
  void EncodeTo(ByteWriter& w) const;
  static AccessTree Decode(ByteReader& r);

  friend bool operator==(const AccessTree& a, const AccessTree& b);

 private:
  friend struct TreeBuilder;
  void Finish();

  std::vector<AccessNode> nodes_;
  std::vector<std::size_t> leaves_;
};

// q_x(0) for every node, by node id.
struct ShareAssignment {
  std::vector<crypto::Scalar> node_share;

  const crypto::Scalar& share(std::size_t node_id) const { return node_share.at(node_id); }
};

// Top-down polynomial sharing: q_root(0) = s, deg q_x = k_x - 1 with random
// higher coefficients, q_x(0) = q_parent(index(x)).
ShareAssignment ShareSecret(const AccessTree& tree, const crypto::Scalar& s, const crypto::GroupContext& ctx,
                            Rng& rng);

struct SatisfyResult {
  bool satisfied = false;
  // For each interior node on the satisfying frontier: exactly k_x child
  // indices (1-based), the smallest satisfying ones.
  std::map<std::size_t, std::vector<std::size_t>> chosen;
};

SatisfyResult Satisfies(const AccessTree& tree, const AttributeSet& attrs);
// Per node id: whether the subtree rooted there is satisfied by attrs.
std::vector<char> SatisfiedNodes(const AccessTree& tree, const AttributeSet& attrs);

// Delta_{i,S}(at) = prod_{j in S, j != i} (at - j) / (i - j) over Z_p.
// Throws ArgumentError if i is not in S or S has duplicates.
crypto::Scalar LagrangeCoefficient(const crypto::Scalar& i, const std::vector<crypto::Scalar>& set,
                                   const crypto::Scalar& at);

// Coefficients Delta_{index(z),S'}(0) for the chosen children of an interior
// node, in the order of `chosen_indices`.
std::vector<crypto::Scalar> ChildCoefficients(const crypto::GroupContext& ctx,
                                              const std::vector<std::size_t>& chosen_indices);

}  // namespace signcast::policy
