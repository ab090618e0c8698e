#include "clump/clump.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

#include "clump/errors.hpp"

namespace clump {

namespace {

// Working state of one cluster during the greedy pass. The distortion
// terms are integer numerators over the taxonomy's shared loss-metric
// denominator, so candidate comparisons are exact integer compares.
struct ClusterState {
  std::vector<std::uint32_t> members;
  std::vector<ItemId> lcgItems;
  std::uint64_t memberLengthSum = 0;
  std::int64_t generalizationNum = 0;
  std::int64_t suppressionCount = 0;
};

struct CandidateResult {
  std::int64_t totalNum = 0;
  std::size_t clusterIdx = 0;
  GeneralizedTransaction lcg;
};

std::int64_t lmNumSum(const GeneralizedTransaction& g, const Taxonomy& taxonomy) {
  std::int64_t sum = 0;
  for (ItemId id : g.items()) sum += taxonomy.lmNumerator(id);
  return sum;
}

// Distortion numerator of `state` after absorbing transaction `t`, along
// with the merged generalization.
CandidateResult evaluate(const ClusterState& state, const Transaction& t,
                         std::size_t clusterIdx, LcgEngine& engine,
                         const Taxonomy& taxonomy) {
  CandidateResult res;
  res.clusterIdx = clusterIdx;
  res.lcg = engine.lcgPair(state.lcgItems, t.items);
  const std::int64_t size = static_cast<std::int64_t>(state.members.size()) + 1;
  const std::int64_t lenSum =
      static_cast<std::int64_t>(state.memberLengthSum + t.length());
  const std::int64_t suppressed =
      lenSum - size * static_cast<std::int64_t>(res.lcg.length());
  res.totalNum = size * lmNumSum(res.lcg, taxonomy) +
                 suppressed * taxonomy.lmDenominator();
  return res;
}

void absorb(ClusterState& state, std::uint32_t dbIdx, const Transaction& t,
            CandidateResult&& chosen, const Taxonomy& taxonomy) {
  state.members.push_back(dbIdx);
  state.memberLengthSum += t.length();
  const std::int64_t size = static_cast<std::int64_t>(state.members.size());
  state.generalizationNum = size * lmNumSum(chosen.lcg, taxonomy);
  state.suppressionCount = static_cast<std::int64_t>(state.memberLengthSum) -
                           size * static_cast<std::int64_t>(chosen.lcg.length());
  state.lcgItems.assign(chosen.lcg.items().begin(), chosen.lcg.items().end());
}

}  // namespace

std::vector<Cluster> cluster(const TransactionDb& db, const Taxonomy& taxonomy,
                             const ClumpConfig& cfg) {
  if (cfg.k < 2) throw ConfigError("k must be >= 2");
  if (cfg.r < 1) throw ConfigError("r must be >= 1");
  if (db.size() < cfg.k) {
    throw DataError("k exceeds database size: k=" + std::to_string(cfg.k) +
                    ", |D|=" + std::to_string(db.size()));
  }
  for (const auto& t : db.transactions()) {
    if (t.items.empty()) {
      throw DataError("transaction '" + t.tid + "' is empty");
    }
  }

  const auto order = orderByLengthDesc(db);
  const std::size_t n = db.size() / cfg.k;
  LcgEngine engine(taxonomy);

  // Seed cluster i with the transaction at sorted position i*k; seeds sit
  // k apart so earlier clusters start with longer transactions.
  std::vector<ClusterState> states(n);
  for (std::size_t ci = 0; ci < n; ++ci) {
    const std::uint32_t dbIdx = order[ci * cfg.k];
    const Transaction& t = db[dbIdx];
    auto& s = states[ci];
    s.members.push_back(dbIdx);
    s.lcgItems = t.items;
    s.memberLengthSum = t.length();
    GeneralizedTransaction self(t.items, taxonomy);
    s.generalizationNum = lmNumSum(self, taxonomy);
    s.suppressionCount = 0;
  }

  std::set<std::uint32_t> open;  // clusters below size k, ascending index
  for (std::uint32_t ci = 0; ci < n; ++ci) open.insert(ci);

  auto isSeedPosition = [&](std::size_t pos) {
    return pos % cfg.k == 0 && pos / cfg.k < n;
  };

  // Fill phase: remaining transactions in sorted order go to the best of
  // the first r open clusters. Once every cluster holds k members the rest
  // are leftovers.
  std::vector<std::uint32_t> leftovers;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (isSeedPosition(pos)) continue;
    const std::uint32_t dbIdx = order[pos];
    if (open.empty()) {
      leftovers.push_back(dbIdx);
      continue;
    }
    const Transaction& t = db[dbIdx];
    bool haveBest = false;
    CandidateResult best;
    std::uint32_t examined = 0;
    for (auto it = open.begin(); it != open.end() && examined < cfg.r;
         ++it, ++examined) {
      CandidateResult cand = evaluate(states[*it], t, *it, engine, taxonomy);
      if (!haveBest || cand.totalNum < best.totalNum) {
        best = std::move(cand);
        haveBest = true;
      }
    }
    auto& chosenState = states[best.clusterIdx];
    absorb(chosenState, dbIdx, t, std::move(best), taxonomy);
    if (chosenState.members.size() >= cfg.k) {
      open.erase(static_cast<std::uint32_t>(best.clusterIdx));
    }
  }

  // Leftover phase: fewer than k transactions remain; each goes to the
  // best cluster overall. The candidate scan parallelizes over index
  // ranges and reduces in index order, so any thread count agrees.
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.threads,
                                      static_cast<unsigned>(n / 64) + 1));
  for (std::uint32_t dbIdx : leftovers) {
    const Transaction& t = db[dbIdx];
    CandidateResult best;
    if (workers <= 1 || n < 128) {
      bool have = false;
      for (std::size_t ci = 0; ci < n; ++ci) {
        CandidateResult cand = evaluate(states[ci], t, ci, engine, taxonomy);
        if (!have || cand.totalNum < best.totalNum) {
          best = std::move(cand);
          have = true;
        }
      }
    } else {
      const std::size_t chunk = (n + workers - 1) / workers;
      std::vector<std::future<CandidateResult>> parts;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        parts.push_back(std::async(std::launch::async, [&, lo, hi]() {
          LcgEngine localEngine(taxonomy);
          bool have = false;
          CandidateResult localBest;
          for (std::size_t ci = lo; ci < hi; ++ci) {
            CandidateResult cand =
                evaluate(states[ci], t, ci, localEngine, taxonomy);
            if (!have || cand.totalNum < localBest.totalNum) {
              localBest = std::move(cand);
              have = true;
            }
          }
          return localBest;
        }));
      }
      bool have = false;
      for (auto& part : parts) {
        CandidateResult cand = part.get();
        if (!have || cand.totalNum < best.totalNum ||
            (cand.totalNum == best.totalNum && cand.clusterIdx < best.clusterIdx)) {
          best = std::move(cand);
          have = true;
        }
      }
    }
    absorb(states[best.clusterIdx], dbIdx, t, std::move(best), taxonomy);
  }

  std::vector<Cluster> out;
  out.reserve(n);
  for (auto& s : states) {
    Cluster c;
    c.members = std::move(s.members);
    c.lcg = GeneralizedTransaction(std::move(s.lcgItems), taxonomy);
    c.distortion.generalizationPart =
        Rational(s.generalizationNum, taxonomy.lmDenominator());
    c.distortion.suppressionPart = s.suppressionCount;
    out.push_back(std::move(c));
  }
  return out;
}

AnonymizedDb anonymize(const std::vector<Cluster>& clusters,
                       const TransactionDb& db, const ClumpConfig& cfg) {
  std::vector<std::size_t> groupOrder(clusters.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) groupOrder[i] = i;
  auto firstMember = [&](std::size_t ci) {
    return *std::min_element(clusters[ci].members.begin(),
                             clusters[ci].members.end());
  };
  std::sort(groupOrder.begin(), groupOrder.end(),
            [&](std::size_t a, std::size_t b) {
              return firstMember(a) < firstMember(b);
            });

  AnonymizedDb out;
  out.groups.reserve(clusters.size());
  out.groupOfMember.assign(db.size(), 0);
  for (std::size_t ci : groupOrder) {
    AnonymizedGroup g;
    g.generalized = cfg.dedupOutput ? clusters[ci].lcg.withoutDuplicates()
                                    : clusters[ci].lcg;
    g.members = clusters[ci].members;
    std::sort(g.members.begin(), g.members.end());
    g.memberEffectiveLen.reserve(g.members.size());
    for (std::uint32_t m : g.members) {
      g.memberEffectiveLen.push_back(static_cast<std::uint32_t>(db[m].length()));
      out.groupOfMember[m] = static_cast<std::uint32_t>(out.groups.size());
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

KAnonymityCheck verifyKAnonymity(const AnonymizedDb& out, std::uint32_t k) {
  std::map<ItemBag, std::uint64_t, bool (*)(const ItemBag&, const ItemBag&)>
      occurrences(+[](const ItemBag& a, const ItemBag& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                            b.end());
      });
  std::map<ItemBag, const GeneralizedTransaction*,
           bool (*)(const ItemBag&, const ItemBag&)>
      sample(+[](const ItemBag& a, const ItemBag& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                            b.end());
      });
  for (const auto& g : out.groups) {
    occurrences[g.generalized.items()] += g.members.size();
    sample.emplace(g.generalized.items(), &g.generalized);
  }
  KAnonymityCheck check;
  for (const auto& [items, count] : occurrences) {
    if (count < k) {
      check.ok = false;
      check.violations.push_back({*sample.at(items), count});
    }
  }
  return check;
}

}  // namespace clump
