#include "clump/transaction.hpp"

#include <doctest.h>

#include "clump/errors.hpp"
#include "fixtures.hpp"

using namespace clump;
using namespace clump::testing;

TEST_CASE("parse transaction file with explicit tids") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  REQUIRE(db.size() == 5);
  CHECK(db[0].tid == "t1");
  CHECK(db[0].items == bag(t, {"orange", "chicken", "beef"}));
  CHECK(db[3].items == bag(t, {"apple", "chicken"}));
  CHECK(db[4].tid == "t5");
}

TEST_CASE("parse preserves duplicate items as a bag") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions("x\torange orange\n", t);
  REQUIRE(db.size() == 1);
  CHECK(db[0].items == bag(t, {"orange", "orange"}));
}

TEST_CASE("parse auto-assigns tids to bare lines and skips blanks") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions("orange beef\n\n# comment\nmilk cheese\n", t);
  REQUIRE(db.size() == 2);
  CHECK(db[0].tid == "1");
  CHECK(db[1].tid == "2");
  CHECK(db[1].items == bag(t, {"milk", "cheese"}));
}

TEST_CASE("parse drops unknown labels by default, can be made fatal") {
  const Taxonomy& t = foodTree();
  ParseStats stats;
  auto db = parseTransactions("a\tqwzx orange\n", t, {}, &stats);
  REQUIRE(db.size() == 1);
  CHECK(db[0].items == bag(t, {"orange"}));
  CHECK(stats.droppedTokens == 1);

  ParseOptions strict;
  strict.dropUnresolved = false;
  CHECK_THROWS_AS(parseTransactions("a\tqwzx orange\n", t, strict), DataError);
}

TEST_CASE("parse drops transactions left empty and rejects duplicate tids") {
  const Taxonomy& t = foodTree();
  ParseStats stats;
  auto db = parseTransactions("a\tzzz\nb\torange\n", t, {}, &stats);
  CHECK(db.size() == 1);
  CHECK(stats.droppedEmptyTransactions == 1);
  CHECK_THROWS_AS(parseTransactions("a\torange\na\tbeef\n", t), DataError);
}

TEST_CASE("query log ingestion reproduces the desk example") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  auto db = ingestQueryLog(
      "u1\torange chicken beef\nu2\tbanana beef cheese\n", t, {}, stats);
  REQUIRE(db.size() == 2);
  CHECK(db[0].items == bag(t, {"orange", "chicken", "beef"}));
  CHECK(db[1].items == bag(t, {"banana", "beef", "cheese"}));
  CHECK(stats.usersSeen == 2);
  CHECK(stats.tokensDropped == 0);
}

TEST_CASE("query log ingestion merges rows by user") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  auto db = ingestQueryLog("u1\torange\nu1\tapple\n", t, {}, stats);
  REQUIRE(db.size() == 1);
  CHECK(db[0].tid == "u1");
  CHECK(db[0].items == bag(t, {"orange", "apple"}));
  CHECK(stats.usersSeen == 1);
  CHECK(stats.rowsTotal == 2);
}

TEST_CASE("query log ingestion dedups merged items by default") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  auto db = ingestQueryLog("u1\torange beef\nu1\tbeef milk\n", t, {}, stats);
  REQUIRE(db.size() == 1);
  CHECK(db[0].items == bag(t, {"orange", "beef", "milk"}));

  IngestOptions keep;
  keep.dedupItems = false;
  auto db2 = ingestQueryLog("u1\torange beef\nu1\tbeef milk\n", t, keep, stats);
  CHECK(db2[0].items == bag(t, {"orange", "beef", "beef", "milk"}));
}

TEST_CASE("query log ingestion drops unknown tokens and counts them") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  auto db = ingestQueryLog("u3\tqwzx orange\n", t, {}, stats);
  REQUIRE(db.size() == 1);
  CHECK(db[0].items == bag(t, {"orange"}));
  CHECK(stats.tokensDropped == 1);
  CHECK(stats.tokensTotal == 2);
}

TEST_CASE("query log ingestion handles headers, case, and bad rows") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  auto db = ingestQueryLog(
      "AnonID\tQueryContent\tQueryTime\n"
      "u1\tOrange BEEF\t2006-03-01\n"
      "malformed-row-without-tab\n"
      "u2\tmilk\n",
      t, {}, stats);
  CHECK(stats.headerDetected);
  CHECK(stats.rowsTotal == 3);
  CHECK(stats.rowsSkipped == 1);
  REQUIRE(db.size() == 2);
  CHECK(db[0].items == bag(t, {"orange", "beef"}));
}

TEST_CASE("ingestion bookkeeping: survivors plus dropped equals users") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  auto db = ingestQueryLog("u1\torange\nu2\tzzzz\nu3\tmilk beef\n", t, {}, stats);
  CHECK(db.size() == 2);
  CHECK(stats.transactionsDroppedEmpty == 1);
  CHECK(stats.transactionsOut + stats.transactionsDroppedEmpty == stats.usersSeen);
}

TEST_CASE("ingestion with nothing surviving is fatal") {
  const Taxonomy& t = foodTree();
  IngestStats stats;
  CHECK_THROWS_AS(ingestQueryLog("u1\tzzzz\n", t, {}, stats), DataError);
  CHECK_THROWS_AS(ingestQueryLog("AnonID\tQueryContent\n", t, {}, stats),
                  DataError);
}

TEST_CASE("density over the desk fixture") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  CHECK(density(db, t) == Rational(13, 40));
}

TEST_CASE("density reaches one when every leaf occurs once") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(
      "full\torange banana apple chicken beef milk cheese butter\n", t);
  CHECK(density(db, t) == Rational(1));
}

TEST_CASE("length ordering is descending and stable") {
  const Taxonomy& t = foodTree();
  auto db = parseTransactions(kTableOneTransactions, t);
  auto order = orderByLengthDesc(db);
  CHECK(order == std::vector<std::uint32_t>{0, 1, 2, 3, 4});

  auto db2 = parseTransactions("a\torange\nb\torange banana apple milk cheese\nc\tmilk beef food\n", t);
  auto order2 = orderByLengthDesc(db2);
  CHECK(order2 == std::vector<std::uint32_t>{1, 2, 0});

  auto db3 = parseTransactions("a\torange milk\nb\tbeef milk\nc\tapple beef\n", t);
  CHECK(orderByLengthDesc(db3) == std::vector<std::uint32_t>{0, 1, 2});
}

TEST_CASE("length ordering is a permutation with non-increasing lengths") {
  SyntheticTaxonomyParams tp;
  tp.leafTarget = 40;
  tp.branchingMin = 2;
  tp.branchingMax = 4;
  tp.depthTarget = 5;
  tp.seed = 7;
  auto t = Taxonomy::synthetic(tp);
  SyntheticLogParams lp;
  lp.count = 200;
  lp.lengthMin = 1;
  lp.lengthMax = 9;
  lp.seed = 11;
  auto db = generateSyntheticLog(t, lp);
  auto order = orderByLengthDesc(db);
  REQUIRE(order.size() == db.size());
  std::vector<char> seen(db.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    CHECK_FALSE(seen[order[i]]);
    seen[order[i]] = 1;
    if (i > 0) CHECK(db[order[i - 1]].length() >= db[order[i]].length());
  }
}

TEST_CASE("synthetic logs are deterministic per seed") {
  const Taxonomy& t = foodTree();
  SyntheticLogParams lp;
  lp.count = 50;
  lp.lengthMin = 1;
  lp.lengthMax = 4;
  lp.topicLevel = 2;
  lp.seed = 3;
  auto a = generateSyntheticLog(t, lp);
  auto b = generateSyntheticLog(t, lp);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].tid == b[i].tid);
    CHECK(a[i].items == b[i].items);
  }
}
