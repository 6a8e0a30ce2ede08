#include "histslice/dependency_graph.hpp"

#include "histslice/edit_scripts.hpp"
#include "histslice/error.hpp"
#include "histslice/parallel.hpp"
#include "lexer.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

namespace histslice {

std::string_view to_string(DepKind kind) {
  switch (kind) {
  case DepKind::textual:
    return "textual";
  case DepKind::build:
    return "build";
  case DepKind::commit:
    return "commit";
  }
  return "?";
}

namespace {

const FileChange *find_post_image(const Commit &commit, const FilePath &path) {
  for (const auto &fc : commit.file_changes)
    if (fc.path == path && fc.kind != ChangeKind::deleted)
      return &fc;
  return nullptr;
}

// Lines of the pre-image covered by the element's hunks, widened by
// `context` and clamped to the file.
std::vector<std::size_t> covered_lines(const FileChange &fc,
                                       std::size_t context) {
  const std::size_t n = fc.before ? fc.before->lines.size() : 0;
  std::vector<std::size_t> lines;
  for (const auto &h : fc.hunks) {
    // An empty pre-image side sits between lines old_start-1 and old_start.
    const long first = long(h.old_start) - long(context);
    const long last = long(h.old_start) + long(h.old_len) - 1 + long(context);
    for (long l = std::max(1L, first); l <= std::min(long(n), last); ++l)
      lines.push_back(std::size_t(l));
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  return lines;
}

// Maps post-image line numbers of `fc` to its pre-image. Lines that `fc`
// itself wrote are dropped and reported through `wrote`.
std::vector<std::size_t> map_to_pre_image(const FileChange &fc,
                                          const std::vector<std::size_t> &lines,
                                          bool &wrote) {
  std::vector<std::size_t> out;
  long delta = 0;
  std::size_t k = 0;
  const auto &hunks = fc.hunks;
  for (std::size_t l : lines) {
    while (k < hunks.size() && hunks[k].new_start + hunks[k].new_len <= l) {
      delta += long(hunks[k].new_len) - long(hunks[k].old_len);
      ++k;
    }
    if (k < hunks.size() && hunks[k].new_start <= l &&
        l < hunks[k].new_start + hunks[k].new_len) {
      wrote = true;
      continue;
    }
    out.push_back(std::size_t(long(l) - delta));
  }
  return out;
}

void trace_lines(const History &history, std::size_t from_index,
                 const ChangeElement &element, FilePath path,
                 std::vector<std::size_t> lines, DependencySet &out) {
  const auto &commits = history.commits();
  for (std::size_t j = from_index; j-- > 0 && !lines.empty();) {
    const FileChange *fc = find_post_image(commits[j], path);
    if (!fc)
      continue;
    if (fc->binary)
      return;
    bool wrote = false;
    lines = map_to_pre_image(*fc, lines, wrote);
    ChangeElement older{commits[j].id, fc->path};
    if (wrote)
      out.insert({element, older, DepKind::textual});
    if (fc->kind == ChangeKind::added)
      return;
    if (fc->kind == ChangeKind::renamed && !lines.empty()) {
      out.insert({element, older, DepKind::textual});
      path = *fc->old_path;
    }
  }
}

// An added path that existed earlier in the range depends on whatever
// removed it.
void trace_removal(const History &history, std::size_t index,
                   const ChangeElement &element, DependencySet &out) {
  const auto &commits = history.commits();
  for (std::size_t j = index; j-- > 0;) {
    for (const auto &fc : commits[j].file_changes) {
      if (fc.kind == ChangeKind::deleted && fc.path == element.file) {
        if (!fc.binary)
          out.insert({element, {commits[j].id, fc.path}, DepKind::textual});
        return;
      }
      if (fc.kind == ChangeKind::renamed && fc.old_path == element.file) {
        if (!fc.binary)
          out.insert({element, {commits[j].id, fc.path}, DepKind::textual});
        return;
      }
      if (fc.path == element.file)
        return;
    }
  }
}

} // namespace

DependencySet textual_deps(const History &history, std::size_t context) {
  const auto &commits = history.commits();
  std::vector<DependencySet> partial(commits.size());
  parallel_for(commits.size(), [&](std::size_t i) {
    for (const auto &fc : commits[i].file_changes) {
      if (fc.binary)
        continue;
      ChangeElement element{commits[i].id, fc.path};
      if (fc.kind == ChangeKind::added) {
        trace_removal(history, i, element, partial[i]);
        continue;
      }
      trace_lines(history, i, element, fc.source_path(),
                  covered_lines(fc, context), partial[i]);
    }
  });
  DependencySet out;
  for (auto &p : partial)
    out.merge(p);
  return out;
}

namespace {

void add_words(std::string_view text, std::set<std::string> &out) {
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  };
  for (std::size_t i = 0; i < text.size();) {
    if (!word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && word_char(text[j]))
      ++j;
    std::string_view word = text.substr(i, j - i);
    if (!std::isdigit(static_cast<unsigned char>(word[0])) &&
        !detail::is_java_keyword(word))
      out.emplace(word);
    i = j;
  }
}

void reference_names(const SyntaxTree &tree, NodeId id,
                     std::set<std::string> &out) {
  const Node &n = tree.node(id);
  switch (n.kind) {
  case NodeKind::Identifier:
  case NodeKind::MethodCall:
  case NodeKind::FieldAccess:
  case NodeKind::MethodRef:
  case NodeKind::TypeRef:
  case NodeKind::Annotation:
  case NodeKind::ImportDecl:
    add_words(n.label, out);
    break;
  default:
    break;
  }
}

std::string strip_dims(std::string name) {
  while (name.size() >= 2 && name.compare(name.size() - 2, 2, "[]") == 0)
    name.resize(name.size() - 2);
  return name;
}

struct Declaration {
  std::string name;
  bool changed = false;
};

/// Declarations visible in `tree`, with `changed` set when the declaration
/// was introduced or its header (everything but bodies and initializers)
/// was touched.
std::vector<Declaration> declarations(const SyntaxTree &tree,
                                      const std::vector<bool> &inserted_or_updated,
                                      const std::vector<bool> &touched) {
  auto subtree_touched = [&](NodeId root) {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      if (touched[id])
        return true;
      for (NodeId c : tree.node(id).children)
        stack.push_back(c);
    }
    return false;
  };
  auto header_changed = [&](NodeId decl, NodeKind body_kind) {
    if (inserted_or_updated[decl])
      return true;
    for (NodeId c : tree.node(decl).children)
      if (tree.node(c).kind != body_kind && subtree_touched(c))
        return true;
    return false;
  };
  auto name_of = [&](NodeId decl) {
    for (NodeId c : tree.node(decl).children)
      if (tree.node(c).kind == NodeKind::Name)
        return tree.node(c).label;
    return std::string();
  };

  std::vector<Declaration> out;
  for (NodeId id : tree.preorder()) {
    const Node &n = tree.node(id);
    switch (n.kind) {
    case NodeKind::TypeDecl:
      out.push_back({name_of(id), header_changed(id, NodeKind::TypeBody)});
      break;
    case NodeKind::MethodDecl:
    case NodeKind::CtorDecl:
      out.push_back({name_of(id), header_changed(id, NodeKind::Block)});
      break;
    case NodeKind::EnumConstant:
      out.push_back({n.label, inserted_or_updated[id] || touched[id]});
      break;
    case NodeKind::FieldDecl: {
      bool shared = inserted_or_updated[id];
      for (NodeId c : n.children)
        if (tree.node(c).kind != NodeKind::VarDeclarator && subtree_touched(c))
          shared = true;
      for (NodeId c : n.children)
        if (tree.node(c).kind == NodeKind::VarDeclarator)
          out.push_back({strip_dims(tree.node(c).label), shared || touched[c]});
      break;
    }
    default:
      break;
    }
  }
  return out;
}

struct ElementFacts {
  std::set<std::string> uses;
  std::vector<Declaration> declarations;
  bool known = false; ///< false when the file could not be analyzed
};

ElementFacts analyze_element(const FileChange &fc) {
  ElementFacts facts;
  if (fc.binary || !is_source_file(fc.path) || !fc.after)
    return facts;
  SyntaxTree after = parse(join_lines(*fc.after));
  if (!after.parseable())
    return facts;
  const std::size_t n = after.size();
  std::vector<bool> strong(n, false), touched(n, false);

  if (!fc.before) {
    std::fill(strong.begin(), strong.end(), true);
    std::fill(touched.begin(), touched.end(), true);
    for (NodeId id : after.preorder())
      reference_names(after, id, facts.uses);
  } else {
    SyntaxTree before = parse(join_lines(*fc.before));
    if (!before.parseable())
      return facts;
    TreeDiff diff = tree_diff(before, after);
    for (const auto &op : diff.ops) {
      switch (op.type) {
      case EditType::insert:
      case EditType::update:
        strong[op.after_node] = touched[op.after_node] = true;
        reference_names(after, op.after_node, facts.uses);
        break;
      case EditType::move:
        touched[op.after_node] = true;
        break;
      case EditType::remove: {
        NodeId cur = before.node(op.before_node).parent;
        while (cur != kNoNode && diff.before_to_after[cur] == kNoNode)
          cur = before.node(cur).parent;
        if (cur != kNoNode)
          touched[diff.before_to_after[cur]] = true;
        break;
      }
      }
    }
  }
  facts.declarations = declarations(after, strong, touched);
  facts.known = true;
  return facts;
}

} // namespace

DependencySet build_deps(const History &history) {
  const auto &commits = history.commits();
  std::vector<std::vector<ElementFacts>> facts(commits.size());
  parallel_for(commits.size(), [&](std::size_t i) {
    for (const auto &fc : commits[i].file_changes)
      facts[i].push_back(analyze_element(fc));
  });

  // name -> declaring file -> element that introduced or last changed it
  std::map<std::string, std::map<FilePath, ChangeElement>> table;
  DependencySet out;
  for (std::size_t i = 0; i < commits.size(); ++i) {
    const Commit &c = commits[i];
    std::map<std::string, std::set<FilePath>> local;
    for (std::size_t k = 0; k < c.file_changes.size(); ++k) {
      const FileChange &fc = c.file_changes[k];
      if (fc.binary)
        continue;
      ChangeElement element{c.id, fc.path};
      for (const auto &name : facts[i][k].uses) {
        auto it = table.find(name);
        if (it == table.end())
          continue;
        for (const auto &[file, target] : it->second)
          out.insert({element, target, DepKind::build});
      }
    }
    for (std::size_t k = 0; k < c.file_changes.size(); ++k) {
      const FileChange &fc = c.file_changes[k];
      if (fc.kind == ChangeKind::deleted || fc.kind == ChangeKind::renamed) {
        const FilePath &gone = fc.source_path();
        for (auto &[name, files] : table) {
          auto it = files.find(gone);
          if (it == files.end())
            continue;
          ChangeElement keep = it->second;
          files.erase(it);
          if (fc.kind == ChangeKind::renamed)
            files.emplace(fc.path, keep);
        }
      }
      if (fc.binary || !facts[i][k].known)
        continue;
      ChangeElement element{c.id, fc.path};
      for (const auto &decl : facts[i][k].declarations)
        if (decl.changed && !decl.name.empty()) {
          table[decl.name][fc.path] = element;
          local[decl.name].insert(fc.path);
        }
    }
    // Files of one commit can need each other too; these edges survive
    // elimination and keep a wrongly split commit buildable.
    for (std::size_t k = 0; k < c.file_changes.size(); ++k) {
      const FileChange &fc = c.file_changes[k];
      if (fc.binary)
        continue;
      for (const auto &name : facts[i][k].uses) {
        auto it = local.find(name);
        if (it == local.end())
          continue;
        for (const auto &file : it->second)
          if (file != fc.path)
            out.insert({{c.id, fc.path}, {c.id, file}, DepKind::build});
      }
    }
  }
  return out;
}

DependencySet commit_deps(const History &history) {
  DependencySet out;
  for (const auto &c : history.commits()) {
    std::vector<FilePath> files;
    for (const auto &fc : c.file_changes)
      if (!fc.binary)
        files.push_back(fc.path);
    for (const auto &a : files)
      for (const auto &b : files)
        if (a != b)
          out.insert({{c.id, a}, {c.id, b}, DepKind::commit});
  }
  return out;
}

DependencyGraph::DependencyGraph(std::vector<ChangeElement> nodes,
                                 const DependencySet &edges)
    : nodes_(std::move(nodes)) {
  rank_.resize(nodes_.size());
  std::uint32_t rank = 0;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second)
      throw InvariantViolation("duplicate graph node " + to_string(nodes_[i]));
    if (i > 0 && nodes_[i].commit != nodes_[i - 1].commit)
      ++rank;
    rank_[i] = rank;
    auto &group = by_commit_[nodes_[i].commit];
    if (!group.empty() && rank_[group.back()] != rank)
      throw InvariantViolation("graph nodes are not grouped by commit");
    group.push_back(i);
  }
  edges_.reserve(edges.size());
  for (const auto &d : edges) {
    auto from = index_of(d.from);
    auto to = index_of(d.to);
    if (!from || !to)
      throw InvariantViolation("edge endpoint is not a graph node: " +
                               to_string(d.from) + " -> " + to_string(d.to));
    edges_.push_back({*from, *to, d.kind});
  }
  std::sort(edges_.begin(), edges_.end());
  out_.resize(nodes_.size());
  for (std::uint32_t e = 0; e < edges_.size(); ++e)
    out_[edges_[e].from].push_back(e);
}

std::optional<std::uint32_t>
DependencyGraph::index_of(const ChangeElement &element) const {
  auto it = index_.find(element);
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

Dependency DependencyGraph::dependency(const Edge &edge) const {
  return {nodes_[edge.from], nodes_[edge.to], edge.kind};
}

std::size_t DependencyGraph::eliminated_count() const {
  return std::size_t(std::count(eliminated_.begin(), eliminated_.end(), true));
}

std::vector<std::uint32_t>
DependencyGraph::elements_of(const CommitId &commit) const {
  auto it = by_commit_.find(commit);
  return it == by_commit_.end() ? std::vector<std::uint32_t>{} : it->second;
}

std::size_t DependencyGraph::count(DepKind kind, bool effective_only) const {
  std::size_t n = 0;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edges_[e].kind == kind && !(effective_only && is_eliminated(e)))
      ++n;
  return n;
}

DependencyGraph build_graph(const History &history, std::size_t context) {
  DependencySet edges = textual_deps(history, context);
  edges.merge(build_deps(history));
  edges.merge(commit_deps(history));
  return DependencyGraph(change_elements(history), edges);
}

DependencyGraph eliminate(DependencyGraph graph,
                          const std::map<CommitId, SystematicVerdict> &verdicts) {
  std::set<CommitId> splittable;
  for (const auto &[commit, nodes] : graph.by_commit_) {
    auto it = verdicts.find(commit);
    if (it == verdicts.end())
      throw InvariantViolation("no verdict for commit " + commit.value);
    if (it->second.splittable)
      splittable.insert(commit);
  }
  graph.eliminated_.assign(graph.edges_.size(), false);
  for (std::size_t e = 0; e < graph.edges_.size(); ++e) {
    const auto &edge = graph.edges_[e];
    if (edge.kind == DepKind::commit &&
        splittable.count(graph.nodes_[edge.from].commit))
      graph.eliminated_[e] = true;
  }
  graph.split_commits_ = std::move(splittable);
  return graph;
}

void validate(const DependencyGraph &graph) {
  const auto &edges = graph.edges();
  std::set<std::pair<std::uint32_t, std::uint32_t>> commit_pairs;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto &edge = edges[e];
    const std::string label = to_string(graph.nodes()[edge.from]) + " -> " +
                              to_string(graph.nodes()[edge.to]);
    if (edge.kind == DepKind::commit) {
      if (edge.from == edge.to ||
          graph.commit_rank(edge.from) != graph.commit_rank(edge.to))
        throw InvariantViolation("commit edge across commits: " + label);
      commit_pairs.emplace(edge.from, edge.to);
    } else {
      // Build edges may also join two files of one commit.
      const bool backward =
          graph.commit_rank(edge.to) < graph.commit_rank(edge.from) ||
          (edge.kind == DepKind::build && edge.from != edge.to &&
           graph.commit_rank(edge.to) == graph.commit_rank(edge.from));
      if (!backward)
        throw InvariantViolation(std::string(to_string(edge.kind)) +
                                 " edge does not point backward: " + label);
      if (graph.is_eliminated(e))
        throw InvariantViolation("non-commit edge eliminated: " + label);
    }
  }
  for (const auto &[a, b] : commit_pairs)
    if (!commit_pairs.count({b, a}))
      throw InvariantViolation("asymmetric commit edge");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!graph.is_eliminated(e))
      continue;
    const auto &commit = graph.nodes()[edges[e].from].commit;
    if (!graph.split_commits().count(commit))
      throw InvariantViolation("eliminated edge outside a split commit");
  }
}

std::string to_edge_list(const DependencyGraph &graph) {
  std::string out;
  const auto &edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (graph.is_eliminated(e))
      continue;
    out += to_string(graph.nodes()[edges[e].from]);
    out += '\t';
    out += to_string(edges[e].kind);
    out += '\t';
    out += to_string(graph.nodes()[edges[e].to]);
    out += '\n';
  }
  return out;
}

std::string to_json(const DependencyGraph &graph) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto &n : graph.nodes())
    doc["nodes"].push_back({{"commit", n.commit.value}, {"file", n.file.value}});
  doc["edges"] = nlohmann::ordered_json::array();
  const auto &edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    doc["edges"].push_back({{"from", to_string(graph.nodes()[edges[e].from])},
                            {"to", to_string(graph.nodes()[edges[e].to])},
                            {"kind", to_string(edges[e].kind)},
                            {"eliminated", graph.is_eliminated(e)}});
  }
  return doc.dump(2) + "\n";
}

} // namespace histslice
