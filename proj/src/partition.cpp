#include "clump/partition.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "clump/errors.hpp"

namespace clump {

namespace {

struct PartitionState {
  std::vector<ItemId> representation;  // pairwise disjoint subtrees
  std::set<ItemId> frozen;             // representation items never expanded again
  std::vector<std::uint32_t> members;  // db indices, input order
};

// The most general expandable representation item: smallest level, ties by
// preorder position. kNoItem when every item is a leaf or frozen.
ItemId pickExpandable(const PartitionState& s, const Taxonomy& taxonomy) {
  ItemId best = kNoItem;
  for (ItemId id : s.representation) {
    if (taxonomy.isLeaf(id) || s.frozen.count(id)) continue;
    if (best == kNoItem || taxonomy.level(id) < taxonomy.level(best) ||
        (taxonomy.level(id) == taxonomy.level(best) &&
         taxonomy.preorderIndex(id) < taxonomy.preorderIndex(best))) {
      best = id;
    }
  }
  return best;
}

}  // namespace

AnonymizedDb partitionAnonymize(const TransactionDb& db, const Taxonomy& taxonomy,
                                std::uint32_t k) {
  if (k < 2) throw ConfigError("k must be >= 2");
  if (db.size() < k) {
    throw DataError("k exceeds database size: k=" + std::to_string(k) +
                    ", |D|=" + std::to_string(db.size()));
  }

  // Duplicates collapse on entry; this algorithm sees item sets.
  std::vector<std::vector<ItemId>> distinctItems(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    auto items = db[i].items;
    if (items.empty()) {
      throw DataError("transaction '" + db[i].tid + "' is empty");
    }
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    distinctItems[i] = std::move(items);
  }

  PartitionState initial;
  initial.representation.push_back(taxonomy.root());
  initial.members.resize(db.size());
  for (std::uint32_t i = 0; i < db.size(); ++i) initial.members[i] = i;

  std::deque<PartitionState> work;
  work.push_back(std::move(initial));
  std::vector<PartitionState> finished;

  while (!work.empty()) {
    PartitionState state = std::move(work.front());
    work.pop_front();

    ItemId x = pickExpandable(state, taxonomy);
    if (x == kNoItem) {
      finished.push_back(std::move(state));
      continue;
    }

    // Group members by the set of x's children they reach. A member whose
    // only coverage of x is the item x itself cannot specialize it and
    // goes straight to the merged remainder.
    auto kids = taxonomy.children(x);
    std::map<std::vector<ItemId>, std::vector<std::uint32_t>> groups;
    std::vector<std::uint32_t> merged;
    for (std::uint32_t m : state.members) {
      std::vector<ItemId> key;
      for (ItemId c : kids) {
        for (ItemId item : distinctItems[m]) {
          if (taxonomy.isAncestor(c, item)) {
            key.push_back(c);
            break;
          }
        }
      }
      if (key.empty()) {
        merged.push_back(m);
      } else {
        groups[std::move(key)].push_back(m);
      }
    }

    std::vector<std::pair<std::vector<ItemId>, std::vector<std::uint32_t>>>
        survivors;
    for (auto& [key, ms] : groups) {
      if (ms.size() >= k) {
        survivors.emplace_back(key, std::move(ms));
      } else {
        merged.insert(merged.end(), ms.begin(), ms.end());
      }
    }

    // A remainder smaller than k cannot stand as its own partition, and
    // survivors must not strand it, so the whole split is abandoned and x
    // merely freezes.
    if (survivors.empty() || (!merged.empty() && merged.size() < k)) {
      state.frozen.insert(x);
      work.push_back(std::move(state));
      continue;
    }

    for (auto& [key, ms] : survivors) {
      PartitionState next;
      next.frozen = state.frozen;
      for (ItemId id : state.representation) {
        if (id != x) next.representation.push_back(id);
      }
      next.representation.insert(next.representation.end(), key.begin(),
                                 key.end());
      next.members = std::move(ms);
      std::sort(next.members.begin(), next.members.end());
      work.push_back(std::move(next));
    }
    if (!merged.empty()) {
      PartitionState rest;
      rest.representation = state.representation;
      rest.frozen = std::move(state.frozen);
      rest.frozen.insert(x);
      rest.members = std::move(merged);
      std::sort(rest.members.begin(), rest.members.end());
      work.push_back(std::move(rest));
    }
  }

  // Assemble the release: groups ordered by first member, each emitting its
  // representation set; member lengths are distinct-item counts here.
  std::sort(finished.begin(), finished.end(),
            [](const PartitionState& a, const PartitionState& b) {
              return a.members.front() < b.members.front();
            });

  AnonymizedDb out;
  out.groups.reserve(finished.size());
  out.groupOfMember.assign(db.size(), 0);
  for (auto& p : finished) {
    AnonymizedGroup g;
    g.generalized = GeneralizedTransaction(std::move(p.representation), taxonomy);
    g.members = std::move(p.members);
    g.memberEffectiveLen.reserve(g.members.size());
    for (std::uint32_t m : g.members) {
      g.memberEffectiveLen.push_back(
          static_cast<std::uint32_t>(distinctItems[m].size()));
      out.groupOfMember[m] = static_cast<std::uint32_t>(out.groups.size());
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

}  // namespace clump
