#include "clump/transaction.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <unordered_map>
#include <unordered_set>

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

template <typename Fn>
void forEachToken(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) fn(text.substr(start, i - start));
  }
}

void dedupPreservingOrder(std::vector<ItemId>& items) {
  std::unordered_set<ItemId> seen;
  auto out = items.begin();
  for (ItemId id : items) {
    if (seen.insert(id).second) *out++ = id;
  }
  items.erase(out, items.end());
}

}  // namespace

TransactionDb::TransactionDb(std::vector<Transaction> transactions,
                             const Taxonomy& taxonomy)
    : transactions_(std::move(transactions)), taxonomy_(&taxonomy) {
  std::unordered_set<std::string_view> tids;
  for (const auto& t : transactions_) {
    if (!tids.insert(t.tid).second) {
      throw DataError("duplicate transaction id: '" + t.tid + "'");
    }
    for (ItemId id : t.items) {
      if (id >= taxonomy.nodeCount()) {
        throw DataError("transaction '" + t.tid + "' references an item "
                        "outside the taxonomy");
      }
    }
  }
}

TransactionDb parseTransactions(std::string_view text, const Taxonomy& taxonomy,
                                const ParseOptions& opts, ParseStats* stats) {
  ParseStats local;
  ParseStats& st = stats ? *stats : local;
  std::vector<Transaction> out;
  std::uint64_t recordOrdinal = 0;
  forEachLine(text, [&](std::string_view rawLine, std::size_t lineNo) {
    auto line = trimView(rawLine);
    if (line.empty() || line.front() == '#') return;
    ++recordOrdinal;
    std::string tid;
    std::string_view itemsPart;
    auto tab = line.find('\t');
    if (tab != std::string_view::npos) {
      tid = std::string(trimView(line.substr(0, tab)));
      itemsPart = line.substr(tab + 1);
    } else {
      tid = std::to_string(recordOrdinal);
      itemsPart = line;
    }
    if (tid.empty()) {
      throw DataError("transaction line " + std::to_string(lineNo) +
                      ": empty tid");
    }
    std::vector<ItemId> items;
    forEachToken(itemsPart, [&](std::string_view token) {
      if (auto id = taxonomy.find(token)) {
        items.push_back(*id);
      } else if (opts.dropUnresolved) {
        ++st.droppedTokens;
      } else {
        throw DataError("transaction line " + std::to_string(lineNo) +
                        ": unknown item '" + std::string(token) + "'");
      }
    });
    if (items.empty()) {
      ++st.droppedEmptyTransactions;
      return;
    }
    out.push_back({std::move(tid), std::move(items)});
  });
  return TransactionDb(std::move(out), taxonomy);
}

TransactionDb ingestQueryLog(std::string_view tsv, const Taxonomy& taxonomy,
                             const IngestOptions& opts, IngestStats& stats) {
  stats = IngestStats{};
  std::vector<Transaction> out;
  std::unordered_map<std::string, std::size_t> slotOfUser;
  std::unordered_map<std::string, std::uint64_t> rowsOfUser;
  bool first = true;

  forEachLine(tsv, [&](std::string_view rawLine, std::size_t) {
    auto line = trimView(rawLine);
    if (line.empty()) return;
    if (first) {
      first = false;
      if (line.find("AnonID") != std::string_view::npos) {
        stats.headerDetected = true;
        return;
      }
    }
    ++stats.rowsTotal;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      ++stats.rowsSkipped;
      return;
    }
    auto anonId = trimView(line.substr(0, tab));
    auto rest = line.substr(tab + 1);
    auto tab2 = rest.find('\t');
    auto content = (tab2 == std::string_view::npos) ? rest : rest.substr(0, tab2);
    if (anonId.empty()) {
      ++stats.rowsSkipped;
      return;
    }

    std::string user(anonId);
    std::uint64_t userRow = ++rowsOfUser[user];

    std::vector<ItemId> items;
    forEachToken(content, [&](std::string_view token) {
      ++stats.tokensTotal;
      if (auto id = taxonomy.find(token)) {
        items.push_back(*id);
      } else {
        ++stats.tokensDropped;
      }
    });

    if (opts.mergeByUser) {
      auto [it, inserted] = slotOfUser.try_emplace(user, out.size());
      if (inserted) out.push_back({user, {}});
      auto& dst = out[it->second].items;
      dst.insert(dst.end(), items.begin(), items.end());
    } else {
      std::string tid = userRow == 1 ? user : user + "#" + std::to_string(userRow);
      out.push_back({std::move(tid), std::move(items)});
    }
  });

  stats.usersSeen = rowsOfUser.size();

  std::vector<Transaction> kept;
  kept.reserve(out.size());
  for (auto& t : out) {
    if (opts.dedupItems) dedupPreservingOrder(t.items);
    if (t.items.empty()) {
      ++stats.transactionsDroppedEmpty;
      continue;
    }
    kept.push_back(std::move(t));
  }
  stats.transactionsOut = kept.size();
  if (kept.empty()) {
    throw DataError("no transactions survived ingestion (" +
                    std::to_string(stats.rowsTotal) + " rows, " +
                    std::to_string(stats.tokensDropped) + " tokens dropped)");
  }
  return TransactionDb(std::move(kept), taxonomy);
}

Rational density(const TransactionDb& db, const Taxonomy& taxonomy) {
  if (db.empty()) throw DataError("density of an empty database");
  std::int64_t total = 0;
  for (const auto& t : db.transactions()) {
    total += static_cast<std::int64_t>(t.length());
  }
  return Rational(total, static_cast<std::int64_t>(db.size()) *
                             static_cast<std::int64_t>(taxonomy.totalLeaves()));
}

std::vector<std::uint32_t> orderByLengthDesc(const TransactionDb& db) {
  const std::size_t n = db.size();
  std::vector<std::uint32_t> order(n);
  if (n == 0) return order;
  std::size_t maxLen = 0;
  for (const auto& t : db.transactions()) maxLen = std::max(maxLen, t.length());

  // Stable bucket sort on length, longest bucket first.
  std::vector<std::uint32_t> start(maxLen + 2, 0);
  for (const auto& t : db.transactions()) ++start[t.length()];
  std::uint32_t acc = 0;
  for (std::size_t len = maxLen + 1; len-- > 0;) {
    std::uint32_t c = start[len];
    start[len] = acc;
    acc += c;
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    order[start[db[i].length()]++] = i;
  }
  return order;
}

TransactionDb generateSyntheticLog(const Taxonomy& taxonomy,
                                   const SyntheticLogParams& p) {
  if (p.count < 1) throw ConfigError("synthetic log: count must be >= 1");
  if (p.lengthMin < 1 || p.lengthMax < p.lengthMin) {
    throw ConfigError("synthetic log: invalid length range");
  }
  if (p.noiseProbability < 0.0 || p.noiseProbability > 1.0) {
    throw ConfigError("synthetic log: noiseProbability outside [0, 1]");
  }

  std::vector<ItemId> topics;
  std::uint32_t wantLevel = std::max<std::uint32_t>(
      1, std::min(p.topicLevel, taxonomy.height() > 1 ? taxonomy.height() - 1 : 1));
  for (ItemId id = 0; id < taxonomy.nodeCount(); ++id) {
    if (taxonomy.level(id) == wantLevel) topics.push_back(id);
  }
  std::sort(topics.begin(), topics.end(), [&](ItemId a, ItemId b) {
    return taxonomy.preorderIndex(a) < taxonomy.preorderIndex(b);
  });
  if (topics.empty()) topics.push_back(taxonomy.root());
  if (p.topicCount > 0 && topics.size() > p.topicCount) topics.resize(p.topicCount);

  const auto allLeaves = taxonomy.leaves();
  const std::uint32_t leafTotal = static_cast<std::uint32_t>(allLeaves.size());

  std::mt19937_64 rng(p.seed);
  auto pick = [&](std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); };
  auto chance = [&](double prob) {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) < prob;
  };

  std::vector<Transaction> out;
  out.reserve(p.count);
  for (std::uint32_t i = 0; i < p.count; ++i) {
    ItemId topic = topics[pick(static_cast<std::uint32_t>(topics.size()))];
    auto [lo, hi] = taxonomy.leafRange(topic);
    std::uint32_t len = p.lengthMin + pick(p.lengthMax - p.lengthMin + 1);
    if (!p.allowDuplicateItems) len = std::min(len, leafTotal);

    std::vector<ItemId> items;
    items.reserve(len);
    auto contains = [&](ItemId id) {
      return std::find(items.begin(), items.end(), id) != items.end();
    };
    while (items.size() < len) {
      bool offTopic = chance(p.noiseProbability);
      std::uint32_t poolLo = offTopic ? 0 : lo;
      std::uint32_t poolHi = offTopic ? leafTotal : hi;
      if (poolHi - poolLo < 1) {
        poolLo = 0;
        poolHi = leafTotal;
      }
      ItemId cand = allLeaves[poolLo + pick(poolHi - poolLo)];
      if (!p.allowDuplicateItems && contains(cand)) {
        // A few rejection attempts, then fall back to the first unused leaf
        // so generation always terminates deterministically.
        bool placed = false;
        for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
          cand = allLeaves[poolLo + pick(poolHi - poolLo)];
          placed = !contains(cand);
        }
        if (!placed) {
          for (std::uint32_t j = poolLo; j < poolHi && !placed; ++j) {
            cand = allLeaves[j];
            placed = !contains(cand);
          }
        }
        if (!placed) {
          for (std::uint32_t j = 0; j < leafTotal && !placed; ++j) {
            cand = allLeaves[j];
            placed = !contains(cand);
          }
        }
        if (!placed) break;  // every leaf already used
      }
      items.push_back(cand);
    }
    out.push_back({"s" + std::to_string(i + 1), std::move(items)});
  }
  return TransactionDb(std::move(out), taxonomy);
}

}  // namespace clump
