#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clump/lcg.hpp"
#include "clump/taxonomy.hpp"

namespace clump::oracle {

// Brute-force reference implementations for testing and post-run spot
// checks. Everything here works directly from the definition of a
// generalized transaction (injective assignment of generalized items to
// distinct original items), independent of the bottom-up engine it is
// used to validate. Exponential; only for instances small enough to
// enumerate.

inline constexpr std::size_t kDefaultEnumerationGuard = 1'000'000;

// True iff g is a generalized transaction of every member: for each member
// there is an injective assignment of g's items to distinct item
// occurrences with the ancestor relation holding (decided by maximum
// bipartite matching).
bool isCommonGeneralization(const GeneralizedTransaction& g,
                            std::span<const ItemBag> members,
                            const Taxonomy& taxonomy);
bool isCommonGeneralization(const GeneralizedTransaction& g, ItemBag member,
                            const Taxonomy& taxonomy);

// Every generalized transaction of the bag, including the empty one,
// deduplicated. Throws DataError when the candidate space exceeds `guard`.
std::vector<GeneralizedTransaction> enumerateGeneralizations(
    ItemBag bag, const Taxonomy& taxonomy,
    std::size_t guard = kDefaultEnumerationGuard);

// The unique most specific common generalization of the group, found by
// exhaustive search over candidates of the required length. Throws
// DataError if the enumeration guard trips and ValidationError if the
// minimal candidate is not unique (which would indicate a broken input or
// a broken engine under test).
GeneralizedTransaction bruteForceLcg(std::span<const ItemBag> group,
                                     const Taxonomy& taxonomy,
                                     std::size_t guard = kDefaultEnumerationGuard);

}  // namespace clump::oracle
