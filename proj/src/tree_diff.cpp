#include "histslice/tree_diff.hpp"

#include "histslice/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace histslice {

std::string_view to_string(EditType type) {
  switch (type) {
  case EditType::insert:
    return "insert";
  case EditType::remove:
    return "delete";
  case EditType::update:
    return "update";
  case EditType::move:
    return "move";
  }
  return "?";
}

namespace {

constexpr int kMinHeight = 2;
constexpr double kMinDice = 0.5;
constexpr std::size_t kMaxSimilaritySize = 4000;

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

/// Per-tree derived data: preorder numbering, subtree sizes, heights and
/// structural hashes.
struct TreeIndex {
  const SyntaxTree &tree;
  std::vector<NodeId> pre;          // preorder sequence
  std::vector<std::uint32_t> order; // node -> preorder index
  std::vector<std::uint32_t> size;  // subtree size including the node
  std::vector<int> height;
  std::vector<std::size_t> hash;
  std::vector<std::size_t> label_hash;

  explicit TreeIndex(const SyntaxTree &t) : tree(t) {
    const std::size_t n = t.size();
    order.assign(n, UINT32_MAX);
    size.assign(n, 0);
    height.assign(n, 0);
    hash.assign(n, 0);
    label_hash.assign(n, 0);
    pre = t.preorder();
    for (std::uint32_t i = 0; i < pre.size(); ++i)
      order[pre[i]] = i;
    for (NodeId id : t.postorder()) {
      const Node &node = t.node(id);
      std::size_t h = mix(std::size_t(node.kind) + 1,
                          std::hash<std::string>{}(node.label));
      label_hash[id] = h;
      std::uint32_t sz = 1;
      int ht = 1;
      for (NodeId c : node.children) {
        h = mix(h, hash[c]);
        sz += size[c];
        ht = std::max(ht, height[c] + 1);
      }
      hash[id] = mix(h, node.children.size());
      size[id] = sz;
      height[id] = ht;
    }
  }

  bool contains(NodeId ancestor, NodeId node) const {
    return order[node] >= order[ancestor] &&
           order[node] < order[ancestor] + size[ancestor];
  }

  NodeId parent(NodeId id) const { return tree.node(id).parent; }
  const std::vector<NodeId> &children(NodeId id) const {
    return tree.node(id).children;
  }
  bool is_leaf(NodeId id) const { return tree.node(id).children.empty(); }
};

template <class Eq>
std::vector<std::pair<std::size_t, std::size_t>>
lcs_indices(std::size_t n, std::size_t m, Eq eq) {
  std::vector<std::vector<std::uint32_t>> dp(
      n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      dp[i][j] = eq(i, j) ? dp[i + 1][j + 1] + 1
                          : std::max(dp[i + 1][j], dp[i][j + 1]);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (eq(i, j)) {
      out.emplace_back(i, j);
      ++i;
      ++j;
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

class Matcher {
public:
  Matcher(const TreeIndex &src, const TreeIndex &dst)
      : src_(src), dst_(dst), s2d_(src.tree.size(), kNoNode),
        d2s_(dst.tree.size(), kNoNode) {}

  void run() {
    top_down();
    bottom_up();
    NodeId rs = src_.tree.root(), rd = dst_.tree.root();
    if (s2d_[rs] == kNoNode && d2s_[rd] == kNoNode)
      link(rs, rd);
    recovery();
  }

  std::vector<NodeId> take_src_to_dst() { return std::move(s2d_); }
  std::vector<NodeId> take_dst_to_src() { return std::move(d2s_); }

private:
  void link(NodeId s, NodeId d) {
    s2d_[s] = d;
    d2s_[d] = s;
  }

  void link_subtrees(NodeId s, NodeId d) {
    std::vector<std::pair<NodeId, NodeId>> stack{{s, d}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      link(a, b);
      const auto &ca = src_.children(a);
      const auto &cb = dst_.children(b);
      for (std::size_t i = 0; i < ca.size(); ++i)
        stack.emplace_back(ca[i], cb[i]);
    }
  }

  bool subtree_free(const TreeIndex &idx, const std::vector<NodeId> &map,
                    NodeId root) const {
    for (std::uint32_t i = idx.order[root]; i < idx.order[root] + idx.size[root];
         ++i)
      if (map[idx.pre[i]] != kNoNode)
        return false;
    return true;
  }

  bool iso(NodeId s, NodeId d) const {
    return src_.hash[s] == dst_.hash[d] &&
           isomorphic(src_.tree, s, dst_.tree, d);
  }

  // Subtrees whose shape occurs exactly once on each side are matched whole.
  void top_down() {
    std::unordered_map<std::size_t, int> count_src, count_dst;
    std::unordered_map<std::size_t, NodeId> where_dst;
    for (NodeId id : src_.pre)
      if (src_.height[id] >= kMinHeight)
        ++count_src[src_.hash[id]];
    for (NodeId id : dst_.pre)
      if (dst_.height[id] >= kMinHeight) {
        ++count_dst[dst_.hash[id]];
        where_dst[dst_.hash[id]] = id;
      }
    for (NodeId s : src_.pre) {
      if (s2d_[s] != kNoNode || src_.height[s] < kMinHeight)
        continue;
      const std::size_t h = src_.hash[s];
      if (count_src[h] != 1 || count_dst[h] != 1)
        continue;
      NodeId d = where_dst[h];
      if (d2s_[d] != kNoNode || !iso(s, d))
        continue;
      if (!subtree_free(dst_, d2s_, d))
        continue;
      link_subtrees(s, d);
    }
  }

  double dice(NodeId s, NodeId d) const {
    std::size_t common = 0;
    for (std::uint32_t i = src_.order[s] + 1; i < src_.order[s] + src_.size[s];
         ++i) {
      NodeId p = s2d_[src_.pre[i]];
      if (p != kNoNode && dst_.contains(d, p) && p != d)
        ++common;
    }
    const double denom = double(src_.size[s] - 1) + double(dst_.size[d] - 1);
    return denom == 0 ? 0.0 : 2.0 * double(common) / denom;
  }

  // Unmatched containers are paired with the same-kind container that holds
  // most of their matched descendants.
  void bottom_up() {
    for (NodeId s : src_.tree.postorder()) {
      if (s2d_[s] != kNoNode || src_.is_leaf(s) || s == src_.tree.root())
        continue;
      std::vector<NodeId> candidates;
      for (std::uint32_t i = src_.order[s] + 1;
           i < src_.order[s] + src_.size[s]; ++i) {
        NodeId p = s2d_[src_.pre[i]];
        if (p == kNoNode)
          continue;
        for (NodeId a = dst_.parent(p); a != kNoNode; a = dst_.parent(a)) {
          if (a == dst_.tree.root())
            break;
          if (d2s_[a] == kNoNode &&
              dst_.tree.node(a).kind == src_.tree.node(s).kind)
            candidates.push_back(a);
        }
      }
      if (candidates.empty())
        continue;
      std::sort(candidates.begin(), candidates.end(),
                [&](NodeId x, NodeId y) { return dst_.order[x] < dst_.order[y]; });
      candidates.erase(std::unique(candidates.begin(), candidates.end()),
                       candidates.end());
      NodeId best = kNoNode;
      double best_score = kMinDice;
      for (NodeId d : candidates) {
        double score = dice(s, d);
        if (score > best_score ||
            (score == best_score && best == kNoNode && score >= kMinDice)) {
          best = d;
          best_score = score;
        }
      }
      if (best != kNoNode)
        link(s, best);
    }
  }

  double label_similarity(NodeId s, NodeId d) const {
    if (src_.size[s] > kMaxSimilaritySize || dst_.size[d] > kMaxSimilaritySize)
      return 0.0;
    std::vector<std::size_t> a, b;
    for (std::uint32_t i = src_.order[s]; i < src_.order[s] + src_.size[s]; ++i)
      a.push_back(src_.label_hash[src_.pre[i]]);
    for (std::uint32_t i = dst_.order[d]; i < dst_.order[d] + dst_.size[d]; ++i)
      b.push_back(dst_.label_hash[dst_.pre[i]]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
      if (a[i] == b[j]) {
        ++common;
        ++i;
        ++j;
      } else if (a[i] < b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return 2.0 * double(common) / double(a.size() + b.size());
  }

  void recovery() {
    for (NodeId s : src_.pre) {
      NodeId d = s2d_[s];
      if (d != kNoNode)
        recover_children(s, d);
    }
  }

  void recover_children(NodeId s, NodeId d) {
    auto unmatched = [](const std::vector<NodeId> &children,
                        const std::vector<NodeId> &map) {
      std::vector<NodeId> out;
      for (NodeId c : children)
        if (map[c] == kNoNode)
          out.push_back(c);
      return out;
    };
    auto a = unmatched(src_.children(s), s2d_);
    auto b = unmatched(dst_.children(d), d2s_);
    if (a.empty() || b.empty())
      return;

    auto pass = [&](auto eq, bool whole) {
      auto pairs = lcs_indices(a.size(), b.size(),
                               [&](std::size_t i, std::size_t j) {
                                 return eq(a[i], b[j]);
                               });
      for (auto [i, j] : pairs) {
        if (whole && subtree_free(src_, s2d_, a[i]) &&
            subtree_free(dst_, d2s_, b[j]))
          link_subtrees(a[i], b[j]);
        else
          link(a[i], b[j]);
      }
      a = unmatched(src_.children(s), s2d_);
      b = unmatched(dst_.children(d), d2s_);
    };

    pass([&](NodeId x, NodeId y) { return iso(x, y); }, true);
    if (a.empty() || b.empty())
      return;
    pass(
        [&](NodeId x, NodeId y) {
          const Node &nx = src_.tree.node(x);
          const Node &ny = dst_.tree.node(y);
          return nx.kind == ny.kind && nx.label == ny.label;
        },
        false);
    if (a.empty() || b.empty())
      return;
    pass(
        [&](NodeId x, NodeId y) {
          const Node &nx = src_.tree.node(x);
          const Node &ny = dst_.tree.node(y);
          if (nx.kind != ny.kind)
            return false;
          if (nx.children.empty() && ny.children.empty())
            return true;
          return label_similarity(x, y) >= kMinDice;
        },
        false);
  }

  const TreeIndex &src_;
  const TreeIndex &dst_;
  std::vector<NodeId> s2d_;
  std::vector<NodeId> d2s_;
};

/// Mutable tree used both to generate and to replay edit scripts.
struct WorkTree {
  struct WNode {
    NodeKind kind;
    std::string label;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
  };
  std::vector<WNode> nodes;
  NodeId root = kNoNode;

  explicit WorkTree(const SyntaxTree &t) {
    nodes.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Node &n = t.node(NodeId(i));
      nodes.push_back({n.kind, n.label, n.parent, n.children});
    }
    root = t.root();
  }

  std::size_t index_in_parent(NodeId id) const {
    const auto &sib = nodes[nodes[id].parent].children;
    return std::size_t(std::find(sib.begin(), sib.end(), id) - sib.begin());
  }

  void detach(NodeId id) {
    NodeId p = nodes[id].parent;
    if (p == kNoNode)
      throw std::invalid_argument("cannot detach the root");
    auto &sib = nodes[p].children;
    sib.erase(std::find(sib.begin(), sib.end(), id));
    nodes[id].parent = kNoNode;
  }

  void attach(NodeId id, NodeId parent, std::size_t pos) {
    if (parent >= nodes.size())
      throw std::invalid_argument("bad parent");
    auto &sib = nodes[parent].children;
    if (pos > sib.size())
      throw std::invalid_argument("bad position");
    sib.insert(sib.begin() + long(pos), id);
    nodes[id].parent = parent;
  }

  NodeId create(NodeKind kind, std::string label) {
    nodes.push_back({kind, std::move(label), kNoNode, {}});
    return NodeId(nodes.size() - 1);
  }

  SyntaxTree to_tree() const {
    SyntaxTree out;
    std::function<NodeId(NodeId)> copy = [&](NodeId id) {
      NodeId n = out.add_node(nodes[id].kind, nodes[id].label);
      for (NodeId c : nodes[id].children)
        out.add_child(n, copy(c));
      return n;
    };
    if (root != kNoNode)
      out.set_root(copy(root));
    return out;
  }
};

class ScriptGenerator {
public:
  ScriptGenerator(const SyntaxTree &before, const SyntaxTree &after,
                  const std::vector<NodeId> &s2d)
      : before_(before), after_(after), work_(before) {
    w2a_.assign(before.size(), kNoNode);
    a2w_.assign(after.size(), kNoNode);
    for (std::size_t s = 0; s < s2d.size(); ++s)
      if (s2d[s] != kNoNode) {
        w2a_[s] = s2d[s];
        a2w_[s2d[s]] = NodeId(s);
      }
    src_in_order_.assign(before.size(), false);
    dst_in_order_.assign(after.size(), false);
  }

  std::vector<EditOp> run() {
    std::deque<NodeId> queue{after_.root()};
    while (!queue.empty()) {
      NodeId x = queue.front();
      queue.pop_front();
      for (NodeId c : after_.node(x).children)
        queue.push_back(c);
      visit(x);
    }
    remove_unmatched();
    return std::move(ops_);
  }

private:
  NodeId before_id(NodeId w) const {
    return w < before_.size() ? w : kNoNode;
  }

  void visit(NodeId x) {
    const Node &xn = after_.node(x);
    NodeId w = a2w_[x];
    if (x == after_.root()) {
      if (work_.nodes[w].label != xn.label)
        update(w, x);
    } else {
      NodeId z = a2w_[xn.parent];
      if (w == kNoNode) {
        std::size_t k = find_pos(x);
        w = work_.create(xn.kind, xn.label);
        w2a_.push_back(x);
        src_in_order_.push_back(false);
        a2w_[x] = w;
        work_.attach(w, z, k);
        EditOp op;
        op.type = EditType::insert;
        op.node = w;
        op.parent = z;
        op.position = k;
        op.kind = xn.kind;
        op.label = xn.label;
        op.after_node = x;
        ops_.push_back(std::move(op));
      } else {
        if (work_.nodes[w].label != xn.label)
          update(w, x);
        if (work_.nodes[w].parent != z)
          move(w, z, x);
      }
    }
    src_in_order_[w] = true;
    dst_in_order_[x] = true;
    align_children(w, x);
  }

  void update(NodeId w, NodeId x) {
    work_.nodes[w].label = after_.node(x).label;
    EditOp op;
    op.type = EditType::update;
    op.node = w;
    op.label = after_.node(x).label;
    op.before_node = before_id(w);
    op.after_node = x;
    ops_.push_back(std::move(op));
  }

  void move(NodeId w, NodeId z, NodeId x) {
    work_.detach(w);
    std::size_t k = find_pos(x);
    work_.attach(w, z, k);
    EditOp op;
    op.type = EditType::move;
    op.node = w;
    op.parent = z;
    op.position = k;
    op.before_node = before_id(w);
    op.after_node = x;
    ops_.push_back(std::move(op));
  }

  void align_children(NodeId w, NodeId x) {
    for (NodeId c : work_.nodes[w].children)
      src_in_order_[c] = false;
    for (NodeId c : after_.node(x).children)
      dst_in_order_[c] = false;
    std::vector<NodeId> s1, s2;
    for (NodeId c : work_.nodes[w].children)
      if (w2a_[c] != kNoNode && after_.node(w2a_[c]).parent == x)
        s1.push_back(c);
    for (NodeId c : after_.node(x).children)
      if (a2w_[c] != kNoNode && work_.nodes[a2w_[c]].parent == w)
        s2.push_back(c);
    auto lcs = lcs_indices(s1.size(), s2.size(), [&](std::size_t i, std::size_t j) {
      return w2a_[s1[i]] == s2[j];
    });
    std::vector<bool> aligned(s1.size(), false);
    for (auto [i, j] : lcs) {
      src_in_order_[s1[i]] = true;
      dst_in_order_[s2[j]] = true;
      aligned[i] = true;
    }
    for (NodeId b : s2) {
      for (std::size_t i = 0; i < s1.size(); ++i) {
        NodeId a = s1[i];
        if (w2a_[a] != b || aligned[i])
          continue;
        move(a, w, b);
        src_in_order_[a] = true;
        dst_in_order_[b] = true;
        aligned[i] = true;
      }
    }
  }

  std::size_t find_pos(NodeId x) const {
    const Node &xn = after_.node(x);
    const auto &siblings = after_.node(xn.parent).children;
    for (NodeId c : siblings) {
      if (dst_in_order_[c]) {
        if (c == x)
          return 0;
        break;
      }
    }
    NodeId v = kNoNode;
    for (NodeId c : siblings) {
      if (c == x)
        break;
      if (dst_in_order_[c])
        v = c;
    }
    if (v == kNoNode)
      return 0;
    NodeId u = a2w_[v];
    return work_.index_in_parent(u) + 1;
  }

  void remove_unmatched() {
    std::vector<NodeId> post;
    std::function<void(NodeId)> walk = [&](NodeId id) {
      for (NodeId c : work_.nodes[id].children)
        walk(c);
      post.push_back(id);
    };
    walk(work_.root);
    for (NodeId w : post) {
      if (w2a_[w] != kNoNode)
        continue;
      if (!work_.nodes[w].children.empty())
        throw std::logic_error("deleting a node that still has children");
      work_.detach(w);
      EditOp op;
      op.type = EditType::remove;
      op.node = w;
      op.before_node = before_id(w);
      ops_.push_back(std::move(op));
    }
  }

  const SyntaxTree &before_;
  const SyntaxTree &after_;
  WorkTree work_;
  std::vector<NodeId> w2a_;
  std::vector<NodeId> a2w_;
  std::vector<bool> src_in_order_;
  std::vector<bool> dst_in_order_;
  std::vector<EditOp> ops_;
};

} // namespace

TreeDiff tree_diff(const SyntaxTree &before, const SyntaxTree &after) {
  if (!before.parseable() || !after.parseable())
    throw DiffOnUnparseable("cannot diff an unparseable tree");
  if (before.root() == kNoNode || after.root() == kNoNode)
    throw std::invalid_argument("tree without a root");
  if (before.node(before.root()).kind != after.node(after.root()).kind)
    throw std::invalid_argument("root kinds differ");

  TreeIndex src(before), dst(after);
  Matcher matcher(src, dst);
  matcher.run();
  TreeDiff out;
  out.before_to_after = matcher.take_src_to_dst();
  out.after_to_before = matcher.take_dst_to_src();
  out.ops = ScriptGenerator(before, after, out.before_to_after).run();
  return out;
}

SyntaxTree apply_edit_ops(const SyntaxTree &before,
                          const std::vector<EditOp> &ops) {
  WorkTree work(before);
  for (const auto &op : ops) {
    switch (op.type) {
    case EditType::insert: {
      if (op.node != work.nodes.size())
        throw std::invalid_argument("insert ids must be sequential");
      NodeId id = work.create(op.kind, op.label);
      work.attach(id, op.parent, op.position);
      break;
    }
    case EditType::remove:
      if (op.node >= work.nodes.size() || !work.nodes[op.node].children.empty())
        throw std::invalid_argument("delete of a missing or inner node");
      work.detach(op.node);
      break;
    case EditType::update:
      if (op.node >= work.nodes.size())
        throw std::invalid_argument("update of a missing node");
      work.nodes[op.node].label = op.label;
      break;
    case EditType::move:
      if (op.node >= work.nodes.size())
        throw std::invalid_argument("move of a missing node");
      work.detach(op.node);
      work.attach(op.node, op.parent, op.position);
      break;
    }
  }
  return work.to_tree();
}

} // namespace histslice
