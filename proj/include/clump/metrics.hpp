#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "clump/clump.hpp"
#include "clump/rational.hpp"
#include "clump/taxonomy.hpp"
#include "clump/transaction.hpp"

namespace clump {

// Quality indicators of one anonymization run. Averages are reported on a
// per-record basis (every released copy counts); the per-group variants
// are included as secondary fields since both readings are defensible.
struct AnonymizationReport {
  std::string algorithm;
  std::uint32_t k = 0;
  std::uint32_t r = 0;
  bool dedupOutput = false;
  std::uint64_t transactionCount = 0;
  std::uint64_t taxonomySize = 0;
  std::uint64_t groupCount = 0;

  Rational totalDistortion;
  Rational generalizationPart;
  std::int64_t suppressionPart = 0;

  Rational densityValue;
  double avgGeneralizedLength = 0.0;
  double avgItemLevel = 0.0;
  double avgGeneralizedLengthPerGroup = 0.0;
  double avgItemLevelPerGroup = 0.0;

  std::uint64_t runtimeMs = 0;
  std::map<std::uint32_t, std::uint32_t> clusterSizeHistogram;
  std::string warning;  // non-empty for degenerate results
};

struct ReportParams {
  std::string algorithm = "clump";
  std::uint32_t k = 0;
  std::uint32_t r = 0;
  bool dedupOutput = false;
  std::uint64_t runtimeMs = 0;
};

// Sum of per-group distortions of the released output, computed from the
// emitted transactions and the member lengths the algorithm operated on.
Distortion totalDistortion(const AnonymizedDb& out, const Taxonomy& taxonomy);

AnonymizationReport buildReport(const AnonymizedDb& out, const TransactionDb& db,
                                const Taxonomy& taxonomy,
                                const ReportParams& params);

// Canonical JSON rendering: stable key order, exact rationals alongside
// 4-decimal renderings. Identical reports serialize to identical bytes.
std::string writeReportJson(const AnonymizationReport& report);

// CSV emission for sweep experiments.
std::string reportCsvHeader();
std::string reportCsvRow(const AnonymizationReport& report);

// 4-decimal rendering used by both writers.
double round4(double value);

}  // namespace clump
