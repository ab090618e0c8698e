#include "clump/lcg.hpp"

#include <algorithm>
#include <cassert>

#include "clump/errors.hpp"

namespace clump {

GeneralizedTransaction::GeneralizedTransaction(std::vector<ItemId> items,
                                               const Taxonomy& taxonomy)
    : items_(std::move(items)) {
  for (ItemId id : items_) {
    if (id >= taxonomy.nodeCount()) {
      throw DataError("generalized transaction references an item outside "
                      "the taxonomy");
    }
  }
  std::sort(items_.begin(), items_.end(),
            [&](ItemId a, ItemId b) { return taxonomy.nodeLess(a, b); });
}

GeneralizedTransaction GeneralizedTransaction::withoutDuplicates() const {
  GeneralizedTransaction out;
  out.items_ = items_;
  out.items_.erase(std::unique(out.items_.begin(), out.items_.end()),
                   out.items_.end());
  return out;
}

std::string GeneralizedTransaction::toLabelString(const Taxonomy& taxonomy,
                                                  const char* separator) const {
  std::string out;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i > 0) out += separator;
    out += taxonomy.label(items_[i]);
  }
  return out;
}

std::size_t minTranSize(std::span<const ItemBag> group) {
  if (group.empty()) throw DataError("minTranSize of an empty group");
  std::size_t m = group.front().size();
  for (const auto& bag : group) m = std::min(m, bag.size());
  return m;
}

LcgEngine::LcgEngine(const Taxonomy& taxonomy) : taxonomy_(taxonomy) {
  stamp_.assign(taxonomy.nodeCount(), 0);
}

void LcgEngine::touch(ItemId id, std::size_t width) {
  if (stamp_[id] != epoch_) {
    stamp_[id] = epoch_;
    std::fill_n(counts_.begin() + static_cast<std::ptrdiff_t>(id) *
                                      static_cast<std::ptrdiff_t>(width),
                width, 0);
    touchedNodes_.push_back(id);
  }
}

GeneralizedTransaction LcgEngine::lcg(std::span<const ItemBag> group) {
  if (group.empty()) {
    throw DataError("least common generalization of an empty group");
  }
  const std::size_t width = group.size();
  const std::size_t nodes = taxonomy_.nodeCount();
  if (counts_.size() < nodes * width) counts_.resize(nodes * width);
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  touchedNodes_.clear();

  // Per-member coverage counts for each item that occurs, bag-aware: an
  // item appearing twice in a member contributes 2.
  std::size_t minLen = group.front().size();
  for (std::size_t j = 0; j < width; ++j) {
    const ItemBag& bag = group[j];
    if (bag.empty()) {
      throw DataError("least common generalization over an empty transaction");
    }
    minLen = std::min(minLen, bag.size());
    for (ItemId id : bag) {
      if (id >= nodes) throw DataError("item outside taxonomy");
      touch(id, width);
      ++counts_[id * width + j];
    }
  }

  // Close the touched set over ancestors so roll-ups always land on a
  // zero-initialized parent. Only nodes in this set can ever hold a
  // nonzero count, so the sweep below may ignore the rest of the tree.
  const std::size_t baseCount = touchedNodes_.size();
  for (std::size_t i = 0; i < baseCount; ++i) {
    for (ItemId p = taxonomy_.parent(touchedNodes_[i]); p != kNoItem;
         p = taxonomy_.parent(p)) {
      if (stamp_[p] == epoch_) break;
      touch(p, width);
    }
  }

  std::sort(touchedNodes_.begin(), touchedNodes_.end(), [&](ItemId a, ItemId b) {
    return taxonomy_.postorderIndex(a) < taxonomy_.postorderIndex(b);
  });

  // Bottom-up sweep. The invariant is that counts_[i][j] holds the number
  // of still-unrepresented items of member j inside the subtree at i. A
  // node whose minimum count is positive emits that many copies, each
  // consuming one item per member; whatever remains unrepresented rolls up
  // to the parent, where a higher ancestor may still cover it.
  emitted_.clear();
  const ItemId root = taxonomy_.root();
  for (ItemId id : touchedNodes_) {
    if (id == root) continue;
    std::int32_t mc = counts_[id * width];
    for (std::size_t j = 1; j < width && mc > 0; ++j) {
      mc = std::min(mc, counts_[id * width + j]);
    }
    if (mc > 0) {
      emitted_.insert(emitted_.end(), static_cast<std::size_t>(mc), id);
    }
    ItemId p = taxonomy_.parent(id);
    assert(stamp_[p] == epoch_);
    for (std::size_t j = 0; j < width; ++j) {
      counts_[p * width + j] += counts_[id * width + j] - mc;
    }
  }

  // Pad with root copies up to the shortest member length.
  assert(emitted_.size() <= minLen);
  emitted_.insert(emitted_.end(), minLen - emitted_.size(), root);
  return GeneralizedTransaction(std::vector<ItemId>(emitted_.begin(), emitted_.end()),
                                taxonomy_);
}

GeneralizedTransaction LcgEngine::lcgPair(ItemBag a, ItemBag b) {
  const ItemBag pair[2] = {a, b};
  return lcg(pair);
}

GeneralizedTransaction lcgOf(std::span<const ItemBag> group,
                             const Taxonomy& taxonomy) {
  LcgEngine engine(taxonomy);
  return engine.lcg(group);
}

GeneralizedTransaction lcgOf(std::span<const Transaction> group,
                             const Taxonomy& taxonomy) {
  auto bags = bagsOf(group);
  return lcgOf(bags, taxonomy);
}

GeneralizedTransaction incrementalLcg(const GeneralizedTransaction& current,
                                      ItemBag next, const Taxonomy& taxonomy) {
  LcgEngine engine(taxonomy);
  return engine.lcgPair(current.items(), next);
}

Distortion ggd(std::size_t groupSize, std::uint64_t memberLengthSum,
               const GeneralizedTransaction& g, const Taxonomy& taxonomy) {
  std::int64_t lmSum = 0;
  for (ItemId id : g.items()) lmSum += taxonomy.lmNumerator(id);
  Distortion d;
  d.generalizationPart =
      Rational(static_cast<std::int64_t>(groupSize) * lmSum, taxonomy.lmDenominator());
  d.suppressionPart = static_cast<std::int64_t>(memberLengthSum) -
                      static_cast<std::int64_t>(groupSize) *
                          static_cast<std::int64_t>(g.length());
  assert(d.suppressionPart >= 0);
  return d;
}

Distortion ggd(std::span<const ItemBag> group, const GeneralizedTransaction& g,
               const Taxonomy& taxonomy) {
  std::uint64_t sum = 0;
  for (const auto& bag : group) sum += bag.size();
  return ggd(group.size(), sum, g, taxonomy);
}

std::vector<ItemBag> bagsOf(std::span<const Transaction> transactions) {
  std::vector<ItemBag> bags;
  bags.reserve(transactions.size());
  for (const auto& t : transactions) bags.emplace_back(t.items);
  return bags;
}

}  // namespace clump
