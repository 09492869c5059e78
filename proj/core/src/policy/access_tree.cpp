#include "signcast/policy/access_tree.hpp"

#include <algorithm>
#include <functional>

#include "signcast/errors.hpp"

namespace signcast::policy {

namespace {

constexpr std::uint8_t kTagLeaf = 0;
constexpr std::uint8_t kTagGate = 1;

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool IsReserved(char c) { return c == '(' || c == ')' || c == ',' || c == '@'; }

}  // namespace

std::string NormalizeAttribute(std::string_view raw) {
  std::size_t b = 0;
  std::size_t e = raw.size();
  while (b < e && IsSpace(raw[b])) ++b;
  while (e > b && IsSpace(raw[e - 1])) --e;
  std::string out(raw.substr(b, e - b));
  if (out.empty()) throw ArgumentError("attribute is empty");
  for (char c : out) {
    if (IsSpace(c) || IsReserved(c)) throw ArgumentError("attribute contains a reserved character: " + out);
  }
  if (out == "and" || out == "or") throw ArgumentError("attribute may not be a policy keyword: " + out);
  return out;
}

AttributeSet MakeAttributeSet(const std::vector<std::string>& raw) {
  AttributeSet set;
  for (const auto& a : raw) set.insert(NormalizeAttribute(a));
  return set;
}

// Copies subtrees into a fresh arena in pre-order so ids are canonical.
struct TreeBuilder {
  static std::size_t Copy(AccessTree& dst, const AccessTree& src, std::size_t src_id, std::size_t parent,
                          std::size_t index) {
    const AccessNode& from = src.nodes_[src_id];
    const std::size_t id = dst.nodes_.size();
    AccessNode n;
    n.kind = from.kind;
    n.threshold = from.threshold;
    n.attribute = from.attribute;
    n.parent = parent;
    n.index = index;
    dst.nodes_.push_back(std::move(n));
    for (std::size_t i = 0; i < from.children.size(); ++i) {
      std::size_t child = Copy(dst, src, from.children[i], id, i + 1);
      dst.nodes_[id].children.push_back(child);
    }
    return id;
  }
};

AccessTree AccessTree::Leaf(std::string attribute) {
  AccessTree t;
  AccessNode n;
  n.kind = AccessNode::Kind::kLeaf;
  n.attribute = NormalizeAttribute(attribute);
  t.nodes_.push_back(std::move(n));
  t.Finish();
  return t;
}

AccessTree AccessTree::Gate(std::size_t k, std::vector<AccessTree> children) {
  if (children.empty()) throw ArgumentError("gate needs at least one child");
  if (k < 1 || k > children.size()) {
    throw ArgumentError("threshold " + std::to_string(k) + " out of range 1.." + std::to_string(children.size()));
  }
  AccessTree t;
  AccessNode root;
  root.kind = AccessNode::Kind::kInterior;
  root.threshold = k;
  t.nodes_.push_back(std::move(root));
  std::size_t leaves = 0;
  std::size_t depth = 0;
  for (std::size_t i = 0; i < children.size(); ++i) {
    leaves += children[i].leaf_count();
    depth = std::max(depth, children[i].depth());
    std::size_t id = TreeBuilder::Copy(t, children[i], children[i].root(), 0, i + 1);
    t.nodes_[0].children.push_back(id);
  }
  if (leaves > kMaxLeaves) throw ArgumentError("policy has more than " + std::to_string(kMaxLeaves) + " leaves");
  if (depth + 1 > kMaxDepth) throw ArgumentError("policy deeper than " + std::to_string(kMaxDepth) + " levels");
  t.Finish();
  return t;
}

AccessTree AccessTree::And(std::vector<AccessTree> children) {
  const std::size_t n = children.size();
  return Gate(n, std::move(children));
}

AccessTree AccessTree::Or(std::vector<AccessTree> children) { return Gate(1, std::move(children)); }

void AccessTree::Finish() {
  leaves_.clear();
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].is_leaf()) leaves_.push_back(id);
  }
}

std::size_t AccessTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t id) -> std::size_t {
    std::size_t d = 0;
    for (std::size_t c : nodes_[id].children) d = std::max(d, walk(c));
    return d + 1;
  };
  return walk(root());
}

std::string AccessTree::ToString() const {
  std::function<std::string(std::size_t, bool)> print = [&](std::size_t id, bool nested) -> std::string {
    const AccessNode& n = nodes_[id];
    if (n.is_leaf()) return n.attribute;
    const std::size_t count = n.children.size();
    const bool infix = count >= 2 && (n.threshold == count || n.threshold == 1);
    std::string out;
    if (infix) {
      const char* op = n.threshold == count ? " and " : " or ";
      for (std::size_t i = 0; i < count; ++i) {
        if (i) out += op;
        out += print(n.children[i], true);
      }
      return nested ? "(" + out + ")" : out;
    }
    out = "(";
    for (std::size_t i = 0; i < count; ++i) {
      if (i) out += ", ";
      out += print(n.children[i], false);
    }
    return out + ")@" + std::to_string(n.threshold);
  };
  return print(root(), false);
}

nlohmann::json AccessTree::ToJson() const {
  std::function<nlohmann::json(std::size_t)> walk = [&](std::size_t id) {
    const AccessNode& n = nodes_[id];
    if (n.is_leaf()) return nlohmann::json{{"kind", "leaf"}, {"attribute", n.attribute}};
    nlohmann::json children = nlohmann::json::array();
    for (std::size_t c : n.children) children.push_back(walk(c));
    return nlohmann::json{{"kind", "gate"}, {"k", n.threshold}, {"children", std::move(children)}};
  };
  return walk(root());
}

AccessTree AccessTree::FromJson(const nlohmann::json& j) {
  std::function<AccessTree(const nlohmann::json&, std::size_t)> walk = [&](const nlohmann::json& v,
                                                                           std::size_t level) -> AccessTree {
    if (level > kMaxDepth) throw DecodeError("policy JSON deeper than allowed");
    if (!v.is_object() || !v.contains("kind") || !v["kind"].is_string()) throw DecodeError("policy node without kind");
    const std::string kind = v["kind"].get<std::string>();
    try {
      if (kind == "leaf") {
        if (!v.contains("attribute") || !v["attribute"].is_string()) throw DecodeError("leaf without attribute");
        return Leaf(v["attribute"].get<std::string>());
      }
      if (kind == "gate") {
        if (!v.contains("k") || !v["k"].is_number_unsigned() || !v.contains("children") ||
            !v["children"].is_array()) {
          throw DecodeError("gate without k or children");
        }
        std::vector<AccessTree> kids;
        for (const auto& c : v["children"]) kids.push_back(walk(c, level + 1));
        return Gate(v["k"].get<std::size_t>(), std::move(kids));
      }
    } catch (const ArgumentError& e) {
      throw DecodeError(std::string("invalid policy JSON: ") + e.what());
    }
    throw DecodeError("unknown policy node kind: " + kind);
  };
  return walk(j, 1);
}

void AccessTree::EncodeTo(ByteWriter& w) const {
  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    const AccessNode& n = nodes_[id];
    if (n.is_leaf()) {
      w.PutU8(kTagLeaf);
      w.PutBlob(AsBytes(n.attribute));
      return;
    }
    w.PutU8(kTagGate);
    w.PutU32(static_cast<std::uint32_t>(n.threshold));
    w.PutU32(static_cast<std::uint32_t>(n.children.size()));
    for (std::size_t c : n.children) walk(c);
  };
  walk(root());
}

Bytes AccessTree::Encode() const {
  ByteWriter w;
  EncodeTo(w);
  return std::move(w).Take();
}

AccessTree AccessTree::Decode(ByteReader& r) {
  std::size_t leaves = 0;
  std::function<AccessTree(std::size_t)> walk = [&](std::size_t level) -> AccessTree {
    if (level > kMaxDepth) throw DecodeError("encoded policy deeper than allowed");
    const std::uint8_t tag = r.GetU8();
    try {
      if (tag == kTagLeaf) {
        if (++leaves > kMaxLeaves) throw DecodeError("encoded policy has too many leaves");
        ByteSpan raw = r.GetBlob(4096);
        std::string attr(raw.begin(), raw.end());
        AccessTree leaf = Leaf(attr);
        if (leaf.nodes_[0].attribute != attr) throw DecodeError("attribute not in normalized form");
        return leaf;
      }
      if (tag == kTagGate) {
        const std::uint32_t k = r.GetU32();
        const std::uint32_t n = r.GetU32();
        if (n == 0 || n > kMaxLeaves) throw DecodeError("encoded gate has invalid child count");
        std::vector<AccessTree> kids;
        kids.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i) kids.push_back(walk(level + 1));
        return Gate(k, std::move(kids));
      }
    } catch (const ArgumentError& e) {
      throw DecodeError(std::string("invalid encoded policy: ") + e.what());
    }
    throw DecodeError("unknown policy node tag");
  };
  return walk(1);
}

bool operator==(const AccessTree& a, const AccessTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const AccessNode& x = a.nodes_[i];
    const AccessNode& y = b.nodes_[i];
    if (x.kind != y.kind || x.threshold != y.threshold || x.attribute != y.attribute || x.children != y.children) {
      return false;
    }
  }
  return true;
}

ShareAssignment ShareSecret(const AccessTree& tree, const crypto::Scalar& s, const crypto::GroupContext& ctx,
                            Rng& rng) {
  ctx.CheckProfile(s.profile());
  ShareAssignment out;
  out.node_share.resize(tree.nodes().size());
  out.node_share[tree.root()] = s;
  // Pre-order ids: every parent precedes its children.
  for (std::size_t id = 0; id < tree.nodes().size(); ++id) {
    const AccessNode& n = tree.node(id);
    if (n.is_leaf()) continue;
    std::vector<crypto::Scalar> coeffs{out.node_share[id]};
    for (std::size_t d = 1; d < n.threshold; ++d) coeffs.push_back(ctx.RandomScalar(rng));
    for (std::size_t c : n.children) {
      const crypto::Scalar x = crypto::Scalar::FromU64(ctx.profile(), tree.node(c).index);
      crypto::Scalar acc = coeffs.back();
      for (std::size_t d = coeffs.size() - 1; d-- > 0;) acc = acc * x + coeffs[d];
      out.node_share[c] = acc;
    }
  }
  return out;
}

std::vector<char> SatisfiedNodes(const AccessTree& tree, const AttributeSet& attrs) {
  const auto& nodes = tree.nodes();
  std::vector<char> ok(nodes.size(), 0);
  // Children have larger ids than their parent, so a reverse sweep is bottom-up.
  for (std::size_t id = nodes.size(); id-- > 0;) {
    const AccessNode& n = nodes[id];
    if (n.is_leaf()) {
      ok[id] = attrs.count(n.attribute) ? 1 : 0;
      continue;
    }
    std::size_t count = 0;
    for (std::size_t c : n.children) count += ok[c];
    ok[id] = count >= n.threshold ? 1 : 0;
  }
  return ok;
}

SatisfyResult Satisfies(const AccessTree& tree, const AttributeSet& attrs) {
  const auto& nodes = tree.nodes();
  const std::vector<char> ok = SatisfiedNodes(tree, attrs);
  SatisfyResult result;
  result.satisfied = ok[tree.root()] != 0;
  if (!result.satisfied) return result;
  std::vector<std::size_t> stack{tree.root()};
  while (!stack.empty()) {
    const std::size_t id = stack.back();
    stack.pop_back();
    const AccessNode& n = nodes[id];
    if (n.is_leaf()) continue;
    std::vector<std::size_t>& picked = result.chosen[id];
    for (std::size_t c : n.children) {
      if (!ok[c]) continue;
      picked.push_back(nodes[c].index);
      stack.push_back(c);
      if (picked.size() == n.threshold) break;
    }
  }
  return result;
}

crypto::Scalar LagrangeCoefficient(const crypto::Scalar& i, const std::vector<crypto::Scalar>& set,
                                   const crypto::Scalar& at) {
  bool found = false;
  for (std::size_t a = 0; a < set.size(); ++a) {
    if (set[a].profile() != i.profile()) throw GroupMismatchError("Lagrange set mixes curve profiles");
    if (set[a] == i) found = true;
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      if (set[a] == set[b]) throw ArgumentError("Lagrange set has duplicate elements");
    }
  }
  if (!found) throw ArgumentError("Lagrange index not in set");
  crypto::Scalar num = crypto::Scalar::FromU64(i.profile(), 1);
  crypto::Scalar den = num;
  for (const auto& j : set) {
    if (j == i) continue;
    num = num * (at - j);
    den = den * (i - j);
  }
  return num * den.Inverse();
}

std::vector<crypto::Scalar> ChildCoefficients(const crypto::GroupContext& ctx,
                                              const std::vector<std::size_t>& chosen_indices) {
  std::vector<crypto::Scalar> set;
  set.reserve(chosen_indices.size());
  for (std::size_t idx : chosen_indices) set.push_back(crypto::Scalar::FromU64(ctx.profile(), idx));
  const crypto::Scalar zero(ctx.profile(), 0);
  std::vector<crypto::Scalar> out;
  out.reserve(set.size());
  for (const auto& i : set) out.push_back(LagrangeCoefficient(i, set, zero));
  return out;
}

}  // namespace signcast::policy
