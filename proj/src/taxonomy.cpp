#include "clump/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <queue>
#include <random>
#include <sstream>

#include "clump/errors.hpp"

namespace clump {

namespace {

std::string_view trimView(std::string_view s) {
  const char* ws = " \t\r\n\v\f";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename Fn>
void forEachLine(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t lineNo = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto end = (nl == std::string_view::npos) ? text.size() : nl;
    ++lineNo;
    fn(text.substr(pos, end - pos), lineNo);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

std::string Taxonomy::normalizeLabel(std::string_view raw) {
  auto t = trimView(raw);
  std::string out(t);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

ItemId Taxonomy::internLabel(std::string label) {
  auto [it, inserted] =
      labelIndex_.try_emplace(std::move(label), static_cast<ItemId>(labels_.size()));
  if (inserted) {
    labels_.push_back(it->first);
    parents_.push_back(kNoItem);
    children_.emplace_back();
  }
  return it->second;
}

Taxonomy Taxonomy::fromEdgeList(std::string_view text) {
  Taxonomy t;
  bool sawEdge = false;
  forEachLine(text, [&](std::string_view rawLine, std::size_t lineNo) {
    auto line = trimView(rawLine);
    if (line.empty() || line.front() == '#') return;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("taxonomy line " + std::to_string(lineNo) +
                      ": expected child<TAB>parent");
    }
    std::string child = normalizeLabel(line.substr(0, tab));
    std::string parent = normalizeLabel(line.substr(tab + 1));
    if (child.empty() || parent.empty()) {
      throw DataError("taxonomy line " + std::to_string(lineNo) +
                      ": empty label");
    }
    if (child == parent) {
      throw DataError("taxonomy line " + std::to_string(lineNo) + ": '" +
                      child + "' declared as its own parent");
    }
    ItemId cid = t.internLabel(child);
    ItemId pid = t.internLabel(parent);
    if (t.parents_[cid] == pid) return;  // repeated edge, harmless
    if (t.parents_[cid] != kNoItem) {
      throw DataError("conflicting parents for '" + child + "': '" +
                      t.labels_[t.parents_[cid]] + "' and '" + parent + "'");
    }
    t.parents_[cid] = pid;
    t.children_[pid].push_back(cid);
    sawEdge = true;
  });
  if (!sawEdge) throw DataError("empty taxonomy input");

  std::vector<ItemId> roots;
  for (ItemId id = 0; id < t.labels_.size(); ++id) {
    if (t.parents_[id] == kNoItem) roots.push_back(id);
  }
  if (roots.empty()) {
    throw DataError("taxonomy has no root: every label appears as a child "
                    "(edges form a cycle)");
  }
  if (roots.size() > 1) {
    std::string msg = "taxonomy has multiple roots:";
    for (ItemId id : roots) msg += " '" + t.labels_[id] + "'";
    throw DataError(msg);
  }
  t.root_ = roots.front();
  t.finalize();
  return t;
}

Taxonomy Taxonomy::fromFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open taxonomy file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading taxonomy file: " + path.string());
  return fromEdgeList(buf.str());
}

void Taxonomy::finalize() {
  const std::size_t n = labels_.size();
  levels_.assign(n, 0);
  preorderIdx_.assign(n, 0);
  preorderEnd_.assign(n, 0);
  postorderIdx_.assign(n, 0);
  leafLo_.assign(n, 0);
  leafHi_.assign(n, 0);
  leaves_.clear();

  levels_[root_] = 1;
  height_ = 1;

  // One preorder walk assigns preorder positions, levels, leaf ranges and
  // postorder positions (on frame exit). An explicit stack keeps deep
  // chain-shaped inputs from overflowing the call stack.
  std::uint32_t preCounter = 0;
  std::uint32_t postCounter = 0;
  std::size_t visited = 0;
  struct Frame {
    ItemId id;
    std::size_t nextChild;
  };
  std::vector<Frame> stack;
  stack.push_back({root_, 0});
  preorderIdx_[root_] = preCounter++;
  leafLo_[root_] = 0;
  ++visited;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& kids = children_[f.id];
    if (f.nextChild < kids.size()) {
      ItemId c = kids[f.nextChild++];
      levels_[c] = levels_[f.id] + 1;
      height_ = std::max(height_, levels_[c]);
      preorderIdx_[c] = preCounter++;
      leafLo_[c] = static_cast<std::uint32_t>(leaves_.size());
      ++visited;
      stack.push_back({c, 0});
    } else {
      if (kids.empty()) leaves_.push_back(f.id);
      leafHi_[f.id] = static_cast<std::uint32_t>(leaves_.size());
      preorderEnd_[f.id] = preCounter;
      postorderIdx_[f.id] = postCounter++;
      stack.pop_back();
    }
  }
  if (visited < n) {
    throw DataError("taxonomy cycle detected: " +
                    std::to_string(n - visited) +
                    " node(s) unreachable from the root");
  }
  lmDen_ = std::max<std::int64_t>(static_cast<std::int64_t>(totalLeaves()) - 1, 1);
}

std::optional<ItemId> Taxonomy::find(std::string_view rawLabel) const {
  auto it = labelIndex_.find(normalizeLabel(rawLabel));
  if (it == labelIndex_.end()) return std::nullopt;
  return it->second;
}

std::string Taxonomy::toEdgeList() const {
  // Emit every non-root node in preorder; loading these lines recreates
  // the children in the original order.
  std::vector<ItemId> order(nodeCount());
  for (ItemId id = 0; id < nodeCount(); ++id) order[preorderIdx_[id]] = id;
  std::string out;
  for (ItemId id : order) {
    if (id == root_) continue;
    out += labels_[id];
    out += '\t';
    out += labels_[parents_[id]];
    out += '\n';
  }
  return out;
}

Taxonomy Taxonomy::synthetic(const SyntheticTaxonomyParams& p) {
  if (p.leafTarget < 1) throw ConfigError("synthetic taxonomy: leafTarget must be >= 1");
  if (p.branchingMin < 2) throw ConfigError("synthetic taxonomy: branchingMin must be >= 2");
  if (p.branchingMax < p.branchingMin) {
    throw ConfigError("synthetic taxonomy: branchingMax < branchingMin");
  }
  if (p.leafTarget > 1 && p.depthTarget < 1) {
    throw ConfigError("synthetic taxonomy: infeasible, depthTarget must be >= 1 "
                      "to grow beyond the root");
  }

  Taxonomy t;
  ItemId root = t.internLabel("n0");
  t.root_ = root;
  std::vector<std::uint32_t> level{1};

  std::mt19937_64 rng(p.seed);
  auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
    return lo + static_cast<std::uint32_t>(rng() % (hi - lo + 1));
  };

  std::queue<ItemId> frontier;  // leaves that may still be expanded
  if (p.depthTarget >= 1) frontier.push(root);
  std::uint64_t leaves = 1;
  std::uint64_t nextLabel = 1;

  while (leaves < p.leafTarget && !frontier.empty()) {
    ItemId node = frontier.front();
    frontier.pop();
    std::uint64_t needed = p.leafTarget - leaves;
    std::uint32_t bmax =
        static_cast<std::uint32_t>(std::min<std::uint64_t>(p.branchingMax, needed + 1));
    std::uint32_t b = bmax >= p.branchingMin ? uniform(p.branchingMin, bmax)
                                             : p.branchingMin;
    for (std::uint32_t i = 0; i < b; ++i) {
      ItemId c = t.internLabel("n" + std::to_string(nextLabel++));
      t.parents_[c] = node;
      t.children_[node].push_back(c);
      level.push_back(level[node] + 1);
      if (level[c] <= p.depthTarget) frontier.push(c);
    }
    leaves += b - 1;
  }

  const std::uint64_t tolerance = std::max<std::uint64_t>(1, p.leafTarget / 10);
  const std::uint64_t miss = leaves > p.leafTarget ? leaves - p.leafTarget
                                                   : p.leafTarget - leaves;
  if (miss > tolerance) {
    throw ConfigError("synthetic taxonomy: infeasible parameters, reached " +
                      std::to_string(leaves) + " leaves for target " +
                      std::to_string(p.leafTarget));
  }
  t.finalize();
  return t;
}

}  // namespace clump
