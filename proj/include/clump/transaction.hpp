#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clump/taxonomy.hpp"

namespace clump {

// A transaction is a bag of item references; duplicate items are meaningful
// and preserved.
struct Transaction {
  std::string tid;
  std::vector<ItemId> items;
  std::size_t length() const { return items.size(); }
};

// Ordered list of transactions bound to the taxonomy used to resolve them.
// Immutable after construction and safe to share across threads.
class TransactionDb {
 public:
  TransactionDb() = default;
  TransactionDb(std::vector<Transaction> transactions, const Taxonomy& taxonomy);

  std::size_t size() const { return transactions_.size(); }
  bool empty() const { return transactions_.empty(); }
  const Transaction& operator[](std::size_t i) const { return transactions_[i]; }
  std::span<const Transaction> transactions() const { return transactions_; }
  const Taxonomy& taxonomy() const { return *taxonomy_; }

 private:
  std::vector<Transaction> transactions_;
  const Taxonomy* taxonomy_ = nullptr;  // non-owning, outlives the db
};

struct ParseOptions {
  // Unresolvable item labels are dropped (and counted) by default; set to
  // false to fail on the first unknown label instead.
  bool dropUnresolved = true;
};

struct ParseStats {
  std::uint64_t droppedTokens = 0;
  std::uint64_t droppedEmptyTransactions = 0;
};

// Parses `tid<TAB>item item ...` lines; a line without a tab is all items
// and gets a sequential tid. Blank and '#' lines are skipped. Duplicate
// items stay (bag semantics).
TransactionDb parseTransactions(std::string_view text, const Taxonomy& taxonomy,
                                const ParseOptions& opts = {},
                                ParseStats* stats = nullptr);

struct IngestOptions {
  bool mergeByUser = true;  // one transaction per AnonID
  bool dedupItems = true;   // drop repeated items after merging
};

struct IngestStats {
  std::uint64_t rowsTotal = 0;
  std::uint64_t rowsSkipped = 0;
  bool headerDetected = false;
  std::uint64_t usersSeen = 0;
  std::uint64_t tokensTotal = 0;
  std::uint64_t tokensDropped = 0;
  std::uint64_t transactionsOut = 0;
  std::uint64_t transactionsDroppedEmpty = 0;
};

// Ingests a query-log TSV with columns AnonID, QueryContent[, QueryTime,
// ItemRank, ClickURL]; trailing columns are ignored. A first line
// containing "AnonID" is treated as a header. Query content is lowercased
// and split on whitespace; tokens that do not resolve in the taxonomy are
// dropped and counted. Rows with fewer than two columns are skipped and
// counted, never fatal. Transactions left empty after filtering are
// dropped; zero surviving transactions is an error.
TransactionDb ingestQueryLog(std::string_view tsv, const Taxonomy& taxonomy,
                             const IngestOptions& opts, IngestStats& stats);

// Total item occurrences over the maximum possible, sum|t| / (|D| * leaves).
Rational density(const TransactionDb& db, const Taxonomy& taxonomy);

// Indices of db ordered by transaction length, longest first; ties keep
// input order. Bucket sort, O(|D| + max length).
std::vector<std::uint32_t> orderByLengthDesc(const TransactionDb& db);

struct SyntheticLogParams {
  std::uint32_t count = 1000;
  std::uint32_t lengthMin = 4;
  std::uint32_t lengthMax = 8;
  // Each transaction draws its items from the subtree of one "topic" node,
  // mimicking the topical coherence of real query histories.
  std::uint32_t topicLevel = 3;
  std::uint32_t topicCount = 0;  // 0 = every node at topicLevel
  double noiseProbability = 0.05;  // per-item chance of a uniform leaf
  bool allowDuplicateItems = false;
  std::uint64_t seed = 0;
};

// Deterministic synthetic transaction data over a taxonomy's leaves.
TransactionDb generateSyntheticLog(const Taxonomy& taxonomy,
                                   const SyntheticLogParams& params);

}  // namespace clump
