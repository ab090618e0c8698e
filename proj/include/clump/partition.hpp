#pragma once

#include <cstdint>

#include "clump/clump.hpp"
#include "clump/taxonomy.hpp"
#include "clump/transaction.hpp"

namespace clump {

// Top-down baseline: starting from a single group represented by the
// root, repeatedly drill one representation item down to the non-empty
// subsets of its children, keep the sub-partitions that still hold k
// members, and merge the rest back with that item frozen. Works on item
// sets (duplicates collapse on entry). Groups in the result carry the
// distinct-item length of each member, which is what this algorithm's
// distortion accounting is based on.
AnonymizedDb partitionAnonymize(const TransactionDb& db, const Taxonomy& taxonomy,
                                std::uint32_t k);

}  // namespace clump
