#include "clump/taxonomy.hpp"

#include <doctest.h>

#include "clump/errors.hpp"
#include "fixtures.hpp"

using namespace clump;
using namespace clump::testing;

TEST_CASE("food tree loads with the expected shape") {
  const Taxonomy& t = foodTree();
  CHECK(t.nodeCount() == 12);  // root, three categories, eight leaves
  CHECK(t.totalLeaves() == 8);
  CHECK(t.label(t.root()) == "food");
  CHECK(t.height() == 3);
  CHECK(t.level(t.root()) == 1);
  CHECK(t.level(item(t, "fruit")) == 2);
  CHECK(t.level(item(t, "orange")) == 3);
  CHECK(t.leafCount(item(t, "fruit")) == 3);
  CHECK(t.leafCount(item(t, "orange")) == 1);
}

TEST_CASE("labels normalize to trimmed lowercase") {
  auto t = Taxonomy::fromEdgeList("  Fruit \tFOOD\norange\t fruit\n");
  CHECK(t.find("FRUIT").has_value());
  CHECK(t.find(" Orange ").has_value());
  CHECK(t.label(t.root()) == "food");
  CHECK_FALSE(t.find("banana").has_value());
}

TEST_CASE("loss metric values") {
  const Taxonomy& t = foodTree();
  CHECK(t.lm(item(t, "fruit")) == Rational(2, 7));
  CHECK(t.lm(item(t, "meat")) == Rational(1, 7));
  CHECK(t.lm(item(t, "orange")) == Rational(0));
  CHECK(t.lm(item(t, "food")) == Rational(1));
  CHECK(t.lmDenominator() == 7);
}

TEST_CASE("loss metric in the degenerate single-leaf tree") {
  auto t = Taxonomy::fromEdgeList("a\troot\n");
  CHECK(t.nodeCount() == 2);
  CHECK(t.totalLeaves() == 1);
  CHECK(t.lm(t.root()) == Rational(1));
  CHECK(t.lm(item(t, "a")) == Rational(0));
}

TEST_CASE("ancestor relation is reflexive and follows the tree") {
  const Taxonomy& t = foodTree();
  CHECK(t.isAncestor(item(t, "fruit"), item(t, "orange")));
  CHECK(t.isAncestor(item(t, "orange"), item(t, "orange")));
  CHECK(t.isAncestor(item(t, "food"), item(t, "butter")));
  CHECK_FALSE(t.isAncestor(item(t, "meat"), item(t, "orange")));
  CHECK_FALSE(t.isAncestor(item(t, "orange"), item(t, "fruit")));
}

TEST_CASE("validation failures") {
  CHECK_THROWS_AS(Taxonomy::fromEdgeList(""), DataError);
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("# only a comment\n"), DataError);
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("a\tb\nb\ta\n"), DataError);
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("a\ta\n"), DataError);
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("a\tr1\nb\tr2\n"), DataError);
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("a\tb\na\tc\nb\troot\nc\troot\n"),
                  DataError);
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("x y\n"), DataError);
  // a cycle hanging off an otherwise valid tree
  CHECK_THROWS_AS(Taxonomy::fromEdgeList("a\troot\nb\tc\nc\tb\n"), DataError);
}

TEST_CASE("repeated identical edges are tolerated") {
  auto t = Taxonomy::fromEdgeList("a\troot\na\troot\nb\troot\n");
  CHECK(t.nodeCount() == 3);
  CHECK(t.children(t.root()).size() == 2);
}

TEST_CASE("leaf counts add up across every internal node") {
  const Taxonomy& t = foodTree();
  for (ItemId id = 0; id < t.nodeCount(); ++id) {
    if (t.isLeaf(id)) {
      CHECK(t.leafCount(id) == 1);
      continue;
    }
    std::uint32_t sum = 0;
    for (ItemId c : t.children(id)) sum += t.leafCount(c);
    CHECK(sum == t.leafCount(id));
  }
}

TEST_CASE("edge list round-trips node for node") {
  const Taxonomy& t = foodTree();
  auto reloaded = Taxonomy::fromEdgeList(t.toEdgeList());
  CHECK(reloaded.toEdgeList() == t.toEdgeList());
  CHECK(reloaded.nodeCount() == t.nodeCount());
  CHECK(reloaded.totalLeaves() == t.totalLeaves());
  // identical child order in both instances
  for (ItemId id = 0; id < t.nodeCount(); ++id) {
    auto other = reloaded.find(t.label(id));
    REQUIRE(other.has_value());
    CHECK(t.level(id) == reloaded.level(*other));
    CHECK(t.leafCount(id) == reloaded.leafCount(*other));
  }
}

TEST_CASE("synthetic trees are deterministic and hit their contract") {
  SyntheticTaxonomyParams p;
  p.leafTarget = 8;
  p.branchingMin = 2;
  p.branchingMax = 3;
  p.depthTarget = 3;
  p.seed = 42;
  auto a = Taxonomy::synthetic(p);
  auto b = Taxonomy::synthetic(p);
  CHECK(a.toEdgeList() == b.toEdgeList());
  CHECK(a.totalLeaves() >= 7);
  CHECK(a.totalLeaves() <= 9);
  CHECK(a.height() <= p.depthTarget + 1);

  p.seed = 43;
  auto c = Taxonomy::synthetic(p);
  CHECK(a.toEdgeList() != c.toEdgeList());
}

TEST_CASE("synthetic tree at a realistic scale") {
  SyntheticTaxonomyParams p;
  p.leafTarget = 25000;
  p.branchingMin = 2;
  p.branchingMax = 6;
  p.depthTarget = 18;
  p.seed = 1;
  auto t = Taxonomy::synthetic(p);
  CHECK(t.totalLeaves() >= 22500);
  CHECK(t.totalLeaves() <= 27500);
  CHECK(t.height() <= 19);
}

TEST_CASE("synthetic tree rejects infeasible parameters") {
  SyntheticTaxonomyParams p;
  p.leafTarget = 100;
  p.depthTarget = 0;
  CHECK_THROWS_AS(Taxonomy::synthetic(p), ConfigError);
  p.depthTarget = 3;
  p.branchingMin = 1;
  CHECK_THROWS_AS(Taxonomy::synthetic(p), ConfigError);
  p.branchingMin = 2;
  p.branchingMax = 2;
  p.leafTarget = 1000;
  p.depthTarget = 2;  // at most 4 leaves reachable
  CHECK_THROWS_AS(Taxonomy::synthetic(p), ConfigError);
}

TEST_CASE("loss metric is monotone along ancestry on random trees") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticTaxonomyParams p;
    p.leafTarget = 30;
    p.branchingMin = 2;
    p.branchingMax = 4;
    p.depthTarget = 5;
    p.seed = seed;
    auto t = Taxonomy::synthetic(p);
    for (ItemId id = 0; id < t.nodeCount(); ++id) {
      if (id != t.root()) {
        CHECK(t.lm(t.parent(id)) >= t.lm(id));
        CHECK(t.lm(id) < Rational(1));  // only the root reaches 1 here
      }
      if (t.isLeaf(id)) {
        CHECK(t.lm(id) == Rational(0));
      } else {
        CHECK(t.lm(id) > Rational(0));
      }
    }
  }
}
