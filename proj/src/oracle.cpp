#include "clump/oracle.hpp"

#include <algorithm>
#include <set>

#include "clump/errors.hpp"

namespace clump::oracle {

namespace {

// Kuhn's augmenting-path matching: left side = items of g, right side =
// item occurrences of the member. Instances are tiny here, so the simple
// O(V*E) routine is plenty.
bool hasPerfectAssignment(ItemBag g, ItemBag member, const Taxonomy& taxonomy) {
  if (g.size() > member.size()) return false;
  std::vector<int> matchOfRight(member.size(), -1);
  std::vector<char> visited(member.size());

  auto tryAssign = [&](auto&& self, std::size_t left) -> bool {
    for (std::size_t right = 0; right < member.size(); ++right) {
      if (visited[right]) continue;
      if (!taxonomy.isAncestor(g[left], member[right])) continue;
      visited[right] = 1;
      if (matchOfRight[right] < 0 ||
          self(self, static_cast<std::size_t>(matchOfRight[right]))) {
        matchOfRight[right] = static_cast<int>(left);
        return true;
      }
    }
    return false;
  };

  for (std::size_t left = 0; left < g.size(); ++left) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!tryAssign(tryAssign, left)) return false;
  }
  return true;
}

}  // namespace

bool isCommonGeneralization(const GeneralizedTransaction& g, ItemBag member,
                            const Taxonomy& taxonomy) {
  return hasPerfectAssignment(g.items(), member, taxonomy);
}

bool isCommonGeneralization(const GeneralizedTransaction& g,
                            std::span<const ItemBag> members,
                            const Taxonomy& taxonomy) {
  for (const auto& member : members) {
    if (!hasPerfectAssignment(g.items(), member, taxonomy)) return false;
  }
  return true;
}

std::vector<GeneralizedTransaction> enumerateGeneralizations(
    ItemBag bag, const Taxonomy& taxonomy, std::size_t guard) {
  // For each occurrence, the choices are: any ancestor represents it, or it
  // is suppressed. Walking the full cross product and deduplicating the
  // resulting multisets yields exactly the generalized transactions.
  std::vector<std::vector<ItemId>> options;
  std::size_t total = 1;
  for (ItemId item : bag) {
    if (item >= taxonomy.nodeCount()) throw DataError("item outside taxonomy");
    std::vector<ItemId> opts{kNoItem};  // suppressed
    for (ItemId a = item; a != kNoItem; a = taxonomy.parent(a)) opts.push_back(a);
    if (total > guard / opts.size()) {
      throw DataError("generalization enumeration guard exceeded");
    }
    total *= opts.size();
    options.push_back(std::move(opts));
  }

  std::set<std::vector<ItemId>> seen;
  std::vector<std::size_t> odometer(options.size(), 0);
  while (true) {
    std::vector<ItemId> candidate;
    for (std::size_t i = 0; i < options.size(); ++i) {
      ItemId chosen = options[i][odometer[i]];
      if (chosen != kNoItem) candidate.push_back(chosen);
    }
    std::sort(candidate.begin(), candidate.end(), [&](ItemId a, ItemId b) {
      return taxonomy.nodeLess(a, b);
    });
    seen.insert(std::move(candidate));

    std::size_t pos = 0;
    while (pos < odometer.size() && ++odometer[pos] == options[pos].size()) {
      odometer[pos] = 0;
      ++pos;
    }
    if (pos == odometer.size()) break;
  }

  std::vector<GeneralizedTransaction> out;
  out.reserve(seen.size());
  for (auto& items : seen) {
    out.emplace_back(std::vector<ItemId>(items), taxonomy);
  }
  return out;
}

GeneralizedTransaction bruteForceLcg(std::span<const ItemBag> group,
                                     const Taxonomy& taxonomy,
                                     std::size_t guard) {
  if (group.empty()) throw DataError("bruteForceLcg of an empty group");
  std::size_t minLen = group.front().size();
  std::size_t shortest = 0;
  for (std::size_t j = 0; j < group.size(); ++j) {
    if (group[j].empty()) throw DataError("bruteForceLcg over an empty transaction");
    if (group[j].size() < minLen) {
      minLen = group[j].size();
      shortest = j;
    }
  }

  // Every common generalization generalizes the shortest member, so its
  // generalizations of the right length are the full candidate set.
  auto candidates = enumerateGeneralizations(group[shortest], taxonomy, guard);
  std::vector<GeneralizedTransaction> common;
  for (auto& g : candidates) {
    if (g.length() != minLen) continue;
    if (isCommonGeneralization(g, group, taxonomy)) common.push_back(std::move(g));
  }

  std::vector<const GeneralizedTransaction*> minimal;
  for (const auto& g : common) {
    bool isMinimal = true;
    for (const auto& other : common) {
      if (other == g) continue;
      // `other` more specific than g means g generalizes `other`.
      if (isCommonGeneralization(g, other.items(), taxonomy)) {
        isMinimal = false;
        break;
      }
    }
    if (isMinimal) minimal.push_back(&g);
  }
  if (minimal.size() != 1) {
    throw ValidationError("least common generalization is not unique: found " +
                          std::to_string(minimal.size()) + " minimal candidates");
  }
  return *minimal.front();
}

}  // namespace clump::oracle
