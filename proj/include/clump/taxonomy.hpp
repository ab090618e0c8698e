#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clump/rational.hpp"

namespace clump {

// Dense handle into a Taxonomy node table. Valid iff < nodeCount().
using ItemId = std::uint32_t;
inline constexpr ItemId kNoItem = 0xffffffffu;

struct SyntheticTaxonomyParams {
  std::uint32_t leafTarget = 8;
  std::uint32_t branchingMin = 2;
  std::uint32_t branchingMax = 3;
  std::uint32_t depthTarget = 3;
  std::uint64_t seed = 0;
};

// Rooted item tree; parents are more general than their children, and an
// item counts as its own ancestor. Immutable after construction, so any
// number of readers may share one instance without synchronization.
//
// Labels are normalized (trimmed, ASCII-lowercased) and unique. Children
// keep the order in which the input file introduced them; every derived
// order (preorder, postorder, leaf ranges) follows from that, which keeps
// all downstream output reproducible.
class Taxonomy {
 public:
  // Parses `child<TAB>parent` lines; '#' lines and blank lines are ignored.
  // The root is the unique label that never appears as a child.
  static Taxonomy fromEdgeList(std::string_view text);
  static Taxonomy fromFile(const std::filesystem::path& path);

  // Deterministic random tree: same params, same tree. Final leaf count is
  // within 10% of leafTarget (exact for branchingMin == 2) and the height
  // is at most depthTarget + 1.
  static Taxonomy synthetic(const SyntheticTaxonomyParams& params);

  std::size_t nodeCount() const { return labels_.size(); }
  ItemId root() const { return root_; }
  const std::string& label(ItemId id) const { return labels_[id]; }
  ItemId parent(ItemId id) const { return parents_[id]; }
  std::span<const ItemId> children(ItemId id) const {
    return children_[id];
  }
  bool isLeaf(ItemId id) const { return children_[id].empty(); }

  std::uint32_t level(ItemId id) const { return levels_[id]; }  // root = 1
  std::uint32_t height() const { return height_; }
  std::uint32_t leafCount(ItemId id) const {
    return leafHi_[id] - leafLo_[id];
  }
  std::uint32_t totalLeaves() const { return leafCount(root_); }

  std::optional<ItemId> find(std::string_view rawLabel) const;
  bool isAncestor(ItemId ancestor, ItemId descendant) const {
    return preorderIdx_[ancestor] <= preorderIdx_[descendant] &&
           preorderIdx_[descendant] < preorderEnd_[ancestor];
  }

  // Loss metric of generalizing to this node: the fraction of the leaf
  // domain indistinguishable from it, (leaves(id) - 1) / (totalLeaves - 1).
  // The root is pinned to 1 so the degenerate single-leaf tree stays defined.
  Rational lm(ItemId id) const {
    return Rational(lmNumerator(id), lmDen_);
  }
  // Numerator of lm() over the shared denominator lmDenominator(); keeping
  // one denominator lets callers compare distortion sums with plain integers.
  std::int64_t lmNumerator(ItemId id) const {
    if (id == root_) return lmDen_;
    return static_cast<std::int64_t>(leafCount(id)) - 1;
  }
  std::int64_t lmDenominator() const { return lmDen_; }

  std::uint32_t preorderIndex(ItemId id) const { return preorderIdx_[id]; }
  std::uint32_t postorderIndex(ItemId id) const { return postorderIdx_[id]; }
  std::span<const ItemId> leaves() const { return leaves_; }  // preorder
  // Half-open range into leaves() covering the subtree at id.
  std::pair<std::uint32_t, std::uint32_t> leafRange(ItemId id) const {
    return {leafLo_[id], leafHi_[id]};
  }

  // Deepest-first order, ties by preorder position. Generalized
  // transactions sort with this key so that equality is structural.
  bool nodeLess(ItemId a, ItemId b) const {
    if (levels_[a] != levels_[b]) return levels_[a] > levels_[b];
    return preorderIdx_[a] < preorderIdx_[b];
  }

  // Edge list in preorder; fromEdgeList(toEdgeList()) rebuilds the same
  // structure node-for-node.
  std::string toEdgeList() const;

  static std::string normalizeLabel(std::string_view raw);

 private:
  Taxonomy() = default;
  ItemId internLabel(std::string label);
  void finalize();  // derives orders/levels/counts and validates shape

  std::vector<std::string> labels_;
  std::vector<ItemId> parents_;
  std::vector<std::vector<ItemId>> children_;
  ItemId root_ = kNoItem;

  std::vector<std::uint32_t> levels_;
  std::vector<std::uint32_t> preorderIdx_;
  std::vector<std::uint32_t> preorderEnd_;  // preorder index one past subtree
  std::vector<std::uint32_t> postorderIdx_;
  std::vector<ItemId> leaves_;
  std::vector<std::uint32_t> leafLo_;
  std::vector<std::uint32_t> leafHi_;
  std::uint32_t height_ = 0;
  std::int64_t lmDen_ = 1;
  std::unordered_map<std::string, ItemId> labelIndex_;
};

}  // namespace clump
