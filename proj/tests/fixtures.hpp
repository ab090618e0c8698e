#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <doctest.h>

#include "clump/lcg.hpp"
#include "clump/taxonomy.hpp"
#include "clump/transaction.hpp"

namespace clump::testing {

// The food tree used by most desk-scale checks: 8 leaves under three
// mid-level categories.
inline constexpr std::string_view kFoodTreeEdges =
    "fruit\tfood\n"
    "orange\tfruit\n"
    "banana\tfruit\n"
    "apple\tfruit\n"
    "meat\tfood\n"
    "chicken\tmeat\n"
    "beef\tmeat\n"
    "dairy\tfood\n"
    "milk\tdairy\n"
    "cheese\tdairy\n"
    "butter\tdairy\n";

// Five-transaction workload over the food tree.
inline constexpr std::string_view kTableOneTransactions =
    "t1\torange chicken beef\n"
    "t2\tbanana beef cheese\n"
    "t3\tchicken milk butter\n"
    "t4\tapple chicken\n"
    "t5\tchicken beef\n";

inline const Taxonomy& foodTree() {
  static const Taxonomy tree = Taxonomy::fromEdgeList(kFoodTreeEdges);
  return tree;
}

inline ItemId item(const Taxonomy& t, std::string_view label) {
  auto id = t.find(label);
  REQUIRE(id.has_value());
  return *id;
}

inline std::vector<ItemId> bag(const Taxonomy& t,
                               std::initializer_list<std::string_view> labels) {
  std::vector<ItemId> out;
  for (auto l : labels) out.push_back(item(t, l));
  return out;
}

inline GeneralizedTransaction gt(const Taxonomy& t,
                                 std::initializer_list<std::string_view> labels) {
  return GeneralizedTransaction(bag(t, labels), t);
}

// Bag views over a list of owned bags; keep the owner alive while using.
inline std::vector<ItemBag> views(const std::vector<std::vector<ItemId>>& bags) {
  std::vector<ItemBag> out;
  out.reserve(bags.size());
  for (const auto& b : bags) out.emplace_back(b);
  return out;
}

}  // namespace clump::testing
