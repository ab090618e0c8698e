#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clump/rational.hpp"
#include "clump/taxonomy.hpp"
#include "clump/transaction.hpp"

namespace clump {

// View over the items of one transaction (original or generalized).
using ItemBag = std::span<const ItemId>;

// Multiset of taxonomy nodes standing for a group of transactions: each
// node represents one distinct item per member. Items are kept sorted
// deepest-first (ties by preorder position) so equality is structural and
// rendering is stable.
class GeneralizedTransaction {
 public:
  GeneralizedTransaction() = default;
  GeneralizedTransaction(std::vector<ItemId> items, const Taxonomy& taxonomy);

  ItemBag items() const { return items_; }
  std::size_t length() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool operator==(const GeneralizedTransaction&) const = default;

  // One copy of each distinct node, canonical order preserved.
  GeneralizedTransaction withoutDuplicates() const;

  std::string toLabelString(const Taxonomy& taxonomy,
                            const char* separator = " ") const;

 private:
  std::vector<ItemId> items_;
};

// Distortion of generalizing a group to a common generalized transaction:
// the generalization term |S| * sum of per-item loss, plus one unit per
// suppressed item occurrence.
struct Distortion {
  Rational generalizationPart;
  std::int64_t suppressionPart = 0;
  Rational total() const { return generalizationPart + Rational(suppressionPart); }
};

std::size_t minTranSize(std::span<const ItemBag> group);

// Computes least common generalizations with one bottom-up sweep over the
// taxonomy: per node, count how many not-yet-represented items of each
// member its subtree holds; a node whose count is positive for every
// member emits that many copies, consuming one item per member per copy,
// and the unconsumed remainder rolls up to the parent. The result is
// padded with root copies up to the shortest member length.
//
// An engine instance recycles its buffers across calls (the clustering
// loop calls this once per candidate), and is cheap to construct. Not
// thread-safe; use one engine per thread.
class LcgEngine {
 public:
  explicit LcgEngine(const Taxonomy& taxonomy);

  GeneralizedTransaction lcg(std::span<const ItemBag> group);
  GeneralizedTransaction lcgPair(ItemBag a, ItemBag b);

  const Taxonomy& taxonomy() const { return taxonomy_; }

 private:
  void touch(ItemId id, std::size_t width);

  const Taxonomy& taxonomy_;
  std::vector<std::int32_t> counts_;   // node-major, one slot per member
  std::vector<std::uint32_t> stamp_;   // epoch tag; mismatching counts are zero
  std::uint32_t epoch_ = 0;
  std::vector<ItemId> touchedNodes_;
  std::vector<ItemId> emitted_;
};

// One-shot conveniences over a fresh engine.
GeneralizedTransaction lcgOf(std::span<const ItemBag> group, const Taxonomy& taxonomy);
GeneralizedTransaction lcgOf(std::span<const Transaction> group, const Taxonomy& taxonomy);

// Least common generalization of a maintained group representative and one
// more transaction; equivalent to recomputing over the enlarged group but
// touches only two bags.
GeneralizedTransaction incrementalLcg(const GeneralizedTransaction& current,
                                      ItemBag next, const Taxonomy& taxonomy);

// Group generalization distortion for `groupSize` members whose lengths sum
// to `memberLengthSum`, generalized to g. Each item of g represents one
// distinct item per member; everything past |g| is suppressed at unit cost.
Distortion ggd(std::size_t groupSize, std::uint64_t memberLengthSum,
               const GeneralizedTransaction& g, const Taxonomy& taxonomy);
Distortion ggd(std::span<const ItemBag> group, const GeneralizedTransaction& g,
               const Taxonomy& taxonomy);

// Helper to build bag views over transactions.
std::vector<ItemBag> bagsOf(std::span<const Transaction> transactions);

}  // namespace clump
