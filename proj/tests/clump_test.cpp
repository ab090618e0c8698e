#include "clump/clump.hpp"

#include <algorithm>
#include <numeric>

#include <doctest.h>

#include "clump/errors.hpp"
#include "clump/metrics.hpp"
#include "clump/oracle.hpp"
#include "fixtures.hpp"

using namespace clump;
using namespace clump::testing;

namespace {

Rational totalOf(const std::vector<Cluster>& clusters) {
  Rational total;
  for (const auto& c : clusters) total += c.distortion.total();
  return total;
}

std::vector<std::uint32_t> sortedMembers(const Cluster& c) {
  auto m = c.members;
  std::sort(m.begin(), m.end());
  return m;
}

}  // namespace

TEST_CASE("desk fixture clustering matches the worked example") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  ClumpConfig cfg;
  cfg.k = 2;
  cfg.r = 10;
  auto clusters = cluster(db, t, cfg);
  REQUIRE(clusters.size() == 2);

  CHECK(sortedMembers(clusters[0]) == std::vector<std::uint32_t>{0, 1});
  CHECK(clusters[0].lcg == gt(t, {"fruit", "beef", "food"}));
  CHECK(clusters[0].distortion.total() == Rational(18, 7));

  CHECK(sortedMembers(clusters[1]) == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(clusters[1].lcg == gt(t, {"chicken", "food"}));
  CHECK(clusters[1].distortion.total() == Rational(4));

  CHECK(totalOf(clusters) == Rational(46, 7));
}

TEST_CASE("candidate distortions behind the desk fixture's first choice") {
  const Taxonomy& t = foodTree();
  // assigning t2 to the cluster seeded with t1 versus the one seeded with t3
  std::vector<std::vector<ItemId>> intoFirst{bag(t, {"orange", "chicken", "beef"}),
                                             bag(t, {"banana", "beef", "cheese"})};
  auto v1 = views(intoFirst);
  auto lcg1 = lcgOf(std::span<const ItemBag>(v1), t);
  CHECK(lcg1 == gt(t, {"fruit", "beef", "food"}));
  CHECK(ggd(v1, lcg1, t).total() == Rational(18, 7));

  std::vector<std::vector<ItemId>> intoSecond{bag(t, {"chicken", "milk", "butter"}),
                                              bag(t, {"banana", "beef", "cheese"})};
  auto v2 = views(intoSecond);
  auto lcg2 = lcgOf(std::span<const ItemBag>(v2), t);
  CHECK(lcg2 == gt(t, {"meat", "dairy", "food"}));
  CHECK(ggd(v2, lcg2, t).total() == Rational(20, 7));
}

TEST_CASE("identical transactions collapse to one zero-distortion cluster") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(
      "a\torange beef\nb\torange beef\nc\torange beef\n", t);
  ClumpConfig cfg;
  cfg.k = 3;
  auto clusters = cluster(db, t, cfg);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members.size() == 3);
  CHECK(clusters[0].lcg == gt(t, {"orange", "beef"}));
  CHECK(totalOf(clusters) == Rational(0));
}

TEST_CASE("similar transactions cluster together and beat every alternative") {
  const Taxonomy& t = foodTree();
  // two shapes from disjoint subtrees; lengths differ so the seeds differ
  auto db = parseTransactions(
      "a1\torange banana apple\n"
      "b1\tmilk cheese\n"
      "a2\torange banana apple\n"
      "b2\tmilk cheese\n",
      t);
  ClumpConfig cfg;
  cfg.k = 2;
  auto clusters = cluster(db, t, cfg);
  REQUIRE(clusters.size() == 2);
  CHECK(sortedMembers(clusters[0]) == std::vector<std::uint32_t>{0, 2});
  CHECK(sortedMembers(clusters[1]) == std::vector<std::uint32_t>{1, 3});
  CHECK(totalOf(clusters) == Rational(0));

  // enumerate the other clusterings with both sides of size >= 2
  LcgEngine engine(t);
  std::vector<std::vector<std::uint32_t>> splits{{0, 1}, {0, 3}};
  for (const auto& left : splits) {
    std::vector<std::uint32_t> right;
    for (std::uint32_t i = 0; i < 4; ++i) {
      if (std::find(left.begin(), left.end(), i) == left.end()) right.push_back(i);
    }
    Rational alternative;
    for (const auto& side : {left, right}) {
      std::vector<ItemBag> bags;
      for (auto i : side) bags.emplace_back(db[i].items);
      auto g = engine.lcg(bags);
      alternative += ggd(bags, g, t).total();
    }
    CHECK(totalOf(clusters) <= alternative);
  }
}

TEST_CASE("one big cluster when k equals the database size") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  ClumpConfig cfg;
  cfg.k = 5;
  auto clusters = cluster(db, t, cfg);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].members.size() == 5);

  auto bags = bagsOf(db.transactions());
  auto expected = lcgOf(std::span<const ItemBag>(bags), t);
  CHECK(clusters[0].lcg == expected);
  CHECK(clusters[0].distortion.total() ==
        ggd(std::span<const ItemBag>(bags), expected, t).total());
}

TEST_CASE("configuration and data validation") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  ClumpConfig cfg;
  cfg.k = 1;
  CHECK_THROWS_AS(cluster(db, t, cfg), ConfigError);
  cfg.k = 2;
  cfg.r = 0;
  CHECK_THROWS_AS(cluster(db, t, cfg), ConfigError);
  cfg.r = 10;
  cfg.k = 100;
  CHECK_THROWS_AS(cluster(db, t, cfg), DataError);
}

TEST_CASE("anonymize orders groups and keeps the audit map private") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  ClumpConfig cfg;
  cfg.k = 2;
  auto out = anonymize(cluster(db, t, cfg), db, cfg);
  REQUIRE(out.groups.size() == 2);
  CHECK(out.groups[0].members == std::vector<std::uint32_t>{0, 1});
  CHECK(out.groups[1].members == std::vector<std::uint32_t>{2, 3, 4});
  CHECK(out.groupOfMember == std::vector<std::uint32_t>{0, 0, 1, 1, 1});
  CHECK(out.groups[0].memberEffectiveLen == std::vector<std::uint32_t>{3, 3});
}

TEST_CASE("duplicate removal in the released output") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(
      "a\torange banana\nb\tbanana apple\nc\torange apple\nd\tapple orange\n", t);
  ClumpConfig cfg;
  cfg.k = 4;
  auto clusters = cluster(db, t, cfg);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].lcg == gt(t, {"fruit", "fruit"}));

  auto plain = anonymize(clusters, db, cfg);
  CHECK(plain.groups[0].generalized == gt(t, {"fruit", "fruit"}));

  cfg.dedupOutput = true;
  auto deduped = anonymize(clusters, db, cfg);
  CHECK(deduped.groups[0].generalized == gt(t, {"fruit"}));
}

TEST_CASE("k-anonymity verification") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  ClumpConfig cfg;
  cfg.k = 2;
  auto out = anonymize(cluster(db, t, cfg), db, cfg);
  CHECK(verifyKAnonymity(out, 2).ok);
  CHECK(verifyKAnonymity(out, 3).ok == false);

  AnonymizedDb empty;
  CHECK(verifyKAnonymity(empty, 5).ok);

  AnonymizedDb tampered = out;
  tampered.groups[0].members.pop_back();
  auto check = verifyKAnonymity(tampered, 2);
  CHECK_FALSE(check.ok);
  REQUIRE(check.violations.size() == 1);
  CHECK(check.violations[0].occurrences == 1);
  CHECK(check.violations[0].generalized == gt(t, {"fruit", "beef", "food"}));
}

TEST_CASE("identical groups may merge across clusters when verifying") {
  const Taxonomy& t = foodTree();
  AnonymizedDb out;
  for (int g = 0; g < 2; ++g) {
    AnonymizedGroup group;
    group.generalized = gt(t, {"fruit"});
    group.members = {static_cast<std::uint32_t>(2 * g),
                     static_cast<std::uint32_t>(2 * g + 1)};
    group.memberEffectiveLen = {1, 1};
    out.groups.push_back(group);
  }
  out.groupOfMember = {0, 0, 1, 1};
  CHECK(verifyKAnonymity(out, 4).ok);
  CHECK_FALSE(verifyKAnonymity(out, 5).ok);
}

TEST_CASE("cluster size bounds and structural invariants on random runs") {
  SyntheticTaxonomyParams tp;
  tp.leafTarget = 120;
  tp.branchingMin = 2;
  tp.branchingMax = 4;
  tp.depthTarget = 6;
  tp.seed = 5;
  auto t = Taxonomy::synthetic(tp);

  for (std::uint32_t k : {2u, 5u, 7u}) {
    SyntheticLogParams lp;
    lp.count = 97;  // forces leftovers for every k here
    lp.lengthMin = 1;
    lp.lengthMax = 7;
    lp.topicLevel = 2;
    lp.noiseProbability = 0.2;
    lp.allowDuplicateItems = true;
    lp.seed = 1000 + k;
    auto db = generateSyntheticLog(t, lp);

    ClumpConfig cfg;
    cfg.k = k;
    cfg.r = 5;
    auto clusters = cluster(db, t, cfg);
    CHECK(clusters.size() == db.size() / k);

    std::vector<char> assigned(db.size(), 0);
    LcgEngine engine(t);
    for (const auto& c : clusters) {
      CHECK(c.members.size() >= k);
      CHECK(c.members.size() <= 2 * k - 1);
      std::size_t minLen = SIZE_MAX;
      std::vector<ItemBag> bags;
      for (auto m : c.members) {
        CHECK_FALSE(assigned[m]);
        assigned[m] = 1;
        minLen = std::min(minLen, db[m].length());
        bags.emplace_back(db[m].items);
      }
      CHECK(c.lcg.length() == minLen);
      // incremental bookkeeping equals recomputation from scratch
      CHECK(engine.lcg(bags) == c.lcg);
      CHECK(ggd(std::span<const ItemBag>(bags), c.lcg, t).total() ==
            c.distortion.total());
      CHECK(oracle::isCommonGeneralization(c.lcg, std::span<const ItemBag>(bags), t));
    }
    CHECK(std::all_of(assigned.begin(), assigned.end(), [](char c) { return c; }));

    auto out = anonymize(clusters, db, cfg);
    CHECK(verifyKAnonymity(out, k).ok);
    CHECK(totalDistortion(out, t).total() == totalOf(clusters));
  }
}

TEST_CASE("runs are deterministic and thread count does not matter") {
  SyntheticTaxonomyParams tp;
  tp.leafTarget = 200;
  tp.branchingMin = 2;
  tp.branchingMax = 4;
  tp.depthTarget = 6;
  tp.seed = 9;
  auto t = Taxonomy::synthetic(tp);
  SyntheticLogParams lp;
  lp.count = 403;
  lp.lengthMin = 2;
  lp.lengthMax = 8;
  lp.seed = 77;
  auto db = generateSyntheticLog(t, lp);

  ClumpConfig single;
  single.k = 3;
  single.r = 4;
  single.threads = 1;
  ClumpConfig multi = single;
  multi.threads = 8;

  auto a = cluster(db, t, single);
  auto b = cluster(db, t, single);
  auto c = cluster(db, t, multi);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].members == b[i].members);
    CHECK(a[i].members == c[i].members);
    CHECK(a[i].lcg == b[i].lcg);
    CHECK(a[i].lcg == c[i].lcg);
    CHECK(a[i].distortion.total() == c[i].distortion.total());
  }
}
