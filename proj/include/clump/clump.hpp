#pragma once

#include <cstdint>
#include <vector>

#include "clump/lcg.hpp"
#include "clump/taxonomy.hpp"
#include "clump/transaction.hpp"

namespace clump {

struct ClumpConfig {
  std::uint32_t k = 5;        // minimum cluster size
  std::uint32_t r = 10;       // clusters examined per assignment
  bool dedupOutput = false;   // drop duplicate items from emitted groups
  unsigned threads = 1;       // worker cap; results identical for any value
};

struct Cluster {
  std::vector<std::uint32_t> members;  // indices into the source db
  GeneralizedTransaction lcg;
  Distortion distortion;
};

// Greedy clustering anonymizer. Seeds floor(|D|/k) clusters from the
// length-descending order, fills each to size k by assigning every
// remaining transaction to the distortion-minimizing cluster among the
// first r still-open ones, then places the leftovers against all clusters.
// Ties break toward the lowest cluster index, so runs are deterministic.
std::vector<Cluster> cluster(const TransactionDb& db, const Taxonomy& taxonomy,
                             const ClumpConfig& cfg);

// Public release form of an anonymization result: per group, one
// generalized transaction repeated for each member. Groups are ordered by
// their first member in input order. The member indices double as the
// audit map and must never ship with the public output.
struct AnonymizedGroup {
  GeneralizedTransaction generalized;
  std::vector<std::uint32_t> members;            // ascending db indices
  std::vector<std::uint32_t> memberEffectiveLen; // length the algorithm saw
};

struct AnonymizedDb {
  std::vector<AnonymizedGroup> groups;
  std::vector<std::uint32_t> groupOfMember;  // db index -> group index
  std::size_t memberCount() const { return groupOfMember.size(); }
};

AnonymizedDb anonymize(const std::vector<Cluster>& clusters,
                       const TransactionDb& db, const ClumpConfig& cfg);

struct KAnonymityViolation {
  GeneralizedTransaction generalized;
  std::uint64_t occurrences;
};

struct KAnonymityCheck {
  bool ok = true;
  std::vector<KAnonymityViolation> violations;
};

// Verifies that every distinct released transaction occurs at least k
// times across the whole output (identical groups may merge, which only
// helps).
KAnonymityCheck verifyKAnonymity(const AnonymizedDb& out, std::uint32_t k);

}  // namespace clump
