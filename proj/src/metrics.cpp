#include "clump/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "clump/errors.hpp"
#include "clump/lcg.hpp"

namespace clump {

double round4(double value) { return std::round(value * 10000.0) / 10000.0; }

Distortion totalDistortion(const AnonymizedDb& out, const Taxonomy& taxonomy) {
  Distortion total;
  for (const auto& g : out.groups) {
    std::uint64_t lenSum = 0;
    for (std::uint32_t len : g.memberEffectiveLen) lenSum += len;
    Distortion d = ggd(g.members.size(), lenSum, g.generalized, taxonomy);
    total.generalizationPart += d.generalizationPart;
    total.suppressionPart += d.suppressionPart;
  }
  return total;
}

AnonymizationReport buildReport(const AnonymizedDb& out, const TransactionDb& db,
                                const Taxonomy& taxonomy,
                                const ReportParams& params) {
  AnonymizationReport r;
  r.algorithm = params.algorithm;
  r.k = params.k;
  r.r = params.r;
  r.dedupOutput = params.dedupOutput;
  r.runtimeMs = params.runtimeMs;
  r.transactionCount = db.size();
  r.taxonomySize = taxonomy.nodeCount();
  r.groupCount = out.groups.size();

  if (out.groups.empty()) {
    r.warning = "empty result: no groups were produced";
    return r;
  }

  Distortion d = totalDistortion(out, taxonomy);
  r.generalizationPart = d.generalizationPart;
  r.suppressionPart = d.suppressionPart;
  r.totalDistortion = d.total();
  if (!db.empty()) r.densityValue = density(db, taxonomy);

  std::uint64_t records = 0;
  std::uint64_t recordItems = 0;
  std::uint64_t recordLevelSum = 0;
  std::uint64_t groupItems = 0;
  std::uint64_t groupLevelSum = 0;
  for (const auto& g : out.groups) {
    const std::uint64_t copies = g.members.size();
    std::uint64_t levels = 0;
    for (ItemId id : g.generalized.items()) levels += taxonomy.level(id);
    records += copies;
    recordItems += copies * g.generalized.length();
    recordLevelSum += copies * levels;
    groupItems += g.generalized.length();
    groupLevelSum += levels;
    r.clusterSizeHistogram[static_cast<std::uint32_t>(copies)]++;
  }
  if (records > 0) {
    r.avgGeneralizedLength = static_cast<double>(recordItems) / records;
  }
  if (recordItems > 0) {
    r.avgItemLevel = static_cast<double>(recordLevelSum) / recordItems;
  }
  r.avgGeneralizedLengthPerGroup =
      static_cast<double>(groupItems) / out.groups.size();
  if (groupItems > 0) {
    r.avgItemLevelPerGroup = static_cast<double>(groupLevelSum) / groupItems;
  }
  return r;
}

std::string writeReportJson(const AnonymizationReport& r) {
  nlohmann::ordered_json j;
  j["algorithm"] = r.algorithm;
  j["k"] = r.k;
  j["r"] = r.r;
  j["dedup_output"] = r.dedupOutput;
  j["transaction_count"] = r.transactionCount;
  j["taxonomy_size"] = r.taxonomySize;
  j["group_count"] = r.groupCount;
  j["total_distortion"] = {{"rational", r.totalDistortion.str()},
                           {"decimal", round4(r.totalDistortion.toDouble())}};
  j["generalization_part"] = {
      {"rational", r.generalizationPart.str()},
      {"decimal", round4(r.generalizationPart.toDouble())}};
  j["suppression_part"] = r.suppressionPart;
  j["density"] = {{"rational", r.densityValue.str()},
                  {"decimal", round4(r.densityValue.toDouble())}};
  j["avg_generalized_length"] = round4(r.avgGeneralizedLength);
  j["avg_item_level"] = round4(r.avgItemLevel);
  j["avg_generalized_length_per_group"] = round4(r.avgGeneralizedLengthPerGroup);
  j["avg_item_level_per_group"] = round4(r.avgItemLevelPerGroup);
  j["runtime_ms"] = r.runtimeMs;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [size, count] : r.clusterSizeHistogram) {
    hist[std::to_string(size)] = count;
  }
  j["cluster_size_histogram"] = hist;
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j.dump(2) + "\n";
}

std::string reportCsvHeader() {
  return "algorithm,k,r,transactions,distortion,avg_len,avg_level,runtime_ms\n";
}

std::string reportCsvRow(const AnonymizationReport& r) {
  char dec[64];
  std::string variant =
      r.algorithm == "clump" ? (r.dedupOutput ? "clump2" : "clump1") : r.algorithm;
  std::ostringstream row;
  row << variant << ',' << r.k << ',' << r.r << ',' << r.transactionCount;
  auto dec4 = [&](double v) {
    std::snprintf(dec, sizeof(dec), "%.4f", v);
    return std::string(dec);
  };
  row << ',' << dec4(r.totalDistortion.toDouble()) << ','
      << dec4(r.avgGeneralizedLength) << ',' << dec4(r.avgItemLevel) << ','
      << r.runtimeMs << '\n';
  return row.str();
}

}  // namespace clump
