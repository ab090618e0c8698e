#include "clump/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "clump/errors.hpp"
#include "clump/lcg.hpp"
#include "clump/metrics.hpp"
#include "clump/oracle.hpp"
#include "clump/partition.hpp"

namespace clump::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsedMs(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
          .count());
}

struct AnonymizeArgs {
  std::string input;
  std::string taxonomyPath;
  std::string output;
  std::string reportPath;
  std::string auditMapPath;
  std::string algorithm = "clump";
  std::string inputFormat = "transactions";
  std::uint32_t k = 5;
  std::uint32_t r = 10;
  bool dedupOutput = false;
  bool validate = false;
  unsigned threads = 1;
  std::uint64_t seed = 0;
};

struct IngestArgs {
  std::string input;
  std::string taxonomyPath;
  std::string output;
  std::string statsPath;
  bool noMerge = false;
  bool keepDuplicates = false;
};

struct BenchArgs {
  std::string taxonomyPath;
  std::string csvPath;
  std::vector<std::uint32_t> sizes;
  std::vector<std::uint32_t> kValues{5};
  std::vector<std::uint32_t> rValues{10};
  std::vector<std::string> algorithms{"clump"};
  std::uint32_t taxLeaves = 2000;
  std::uint32_t taxBranchMin = 2;
  std::uint32_t taxBranchMax = 4;
  std::uint32_t taxDepth = 8;
  std::uint64_t taxSeed = 1;
  std::uint32_t lengthMin = 4;
  std::uint32_t lengthMax = 8;
  std::uint32_t topicLevel = 3;
  std::uint32_t topicCount = 0;
  double noise = 0.05;
  std::uint64_t seed = 1;
};

struct ReportArgs {
  std::string input;
  std::string taxonomyPath;
  std::string publicPath;
  std::string auditMapPath;
  std::string reportPath;
  std::string algorithm = "clump";
  std::uint32_t k = 0;
  std::uint32_t r = 0;
};

TransactionDb loadTransactions(const std::string& path, const Taxonomy& taxonomy,
                               const std::string& format) {
  std::string text = readFile(path);
  if (format == "querylog") {
    IngestStats stats;
    return ingestQueryLog(text, taxonomy, IngestOptions{}, stats);
  }
  ParseStats stats;
  TransactionDb db = parseTransactions(text, taxonomy, ParseOptions{}, &stats);
  if (db.empty()) throw DataError("no transactions in input: " + path);
  return db;
}

// Post-run spot check against the matching-based reference: every sampled
// group's released transaction must be a common generalization of its
// members, and where exhaustive search is feasible it must be the least
// one.
void validateGroups(const AnonymizedDb& out, const TransactionDb& db,
                    const Taxonomy& taxonomy, const std::string& algorithm,
                    bool dedupOutput, std::uint64_t seed) {
  std::vector<std::size_t> groupIds(out.groups.size());
  for (std::size_t i = 0; i < groupIds.size(); ++i) groupIds[i] = i;
  if (groupIds.size() > 100) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < 100; ++i) {
      std::size_t j = i + rng() % (groupIds.size() - i);
      std::swap(groupIds[i], groupIds[j]);
    }
    groupIds.resize(100);
    std::sort(groupIds.begin(), groupIds.end());
  }

  for (std::size_t gi : groupIds) {
    const auto& g = out.groups[gi];
    std::vector<std::vector<ItemId>> setBags;
    std::vector<ItemBag> bags;
    if (algorithm == "partition") {
      for (std::uint32_t m : g.members) {
        auto items = db[m].items;
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        setBags.push_back(std::move(items));
      }
      for (const auto& b : setBags) bags.emplace_back(b);
    } else {
      for (std::uint32_t m : g.members) bags.emplace_back(db[m].items);
    }
    if (!oracle::isCommonGeneralization(g.generalized, bags, taxonomy)) {
      throw ValidationError("group " + std::to_string(gi) +
                            " is not a common generalization of its members");
    }
    if (algorithm == "clump" && !dedupOutput) {
      try {
        auto expected = oracle::bruteForceLcg(bags, taxonomy, 200000);
        if (!(expected == g.generalized)) {
          throw ValidationError("group " + std::to_string(gi) +
                                " differs from the reference least common "
                                "generalization");
        }
      } catch (const DataError&) {
        // instance too large to enumerate; the matching check above stands
      }
    }
  }
}

int runAnonymize(const AnonymizeArgs& args) {
  if (args.algorithm != "clump" && args.algorithm != "partition") {
    throw ConfigError("unknown algorithm: " + args.algorithm);
  }
  if (args.inputFormat != "transactions" && args.inputFormat != "querylog") {
    throw ConfigError("unknown input format: " + args.inputFormat);
  }
  if (args.k < 2) throw ConfigError("k must be >= 2");
  if (args.r < 1) throw ConfigError("r must be >= 1");

  Taxonomy taxonomy = Taxonomy::fromFile(args.taxonomyPath);
  TransactionDb db = loadTransactions(args.input, taxonomy, args.inputFormat);

  ClumpConfig cfg;
  cfg.k = args.k;
  cfg.r = args.r;
  cfg.dedupOutput = args.dedupOutput;
  cfg.threads = args.threads;

  AnonymizedDb out;
  auto start = Clock::now();
  if (args.algorithm == "clump") {
    auto clusters = cluster(db, taxonomy, cfg);
    out = anonymize(clusters, db, cfg);
  } else {
    out = partitionAnonymize(db, taxonomy, args.k);
  }
  const std::uint64_t runtimeMs = elapsedMs(start);

  auto check = verifyKAnonymity(out, args.k);
  if (!check.ok) {
    throw ValidationError("output violates k-anonymity for k=" +
                          std::to_string(args.k));
  }
  if (args.validate) {
    validateGroups(out, db, taxonomy, args.algorithm, args.dedupOutput,
                   args.seed);
  }

  writeFile(args.output, formatPublicOutput(out, taxonomy));
  if (!args.auditMapPath.empty()) {
    writeFile(args.auditMapPath, formatAuditMap(out, db));
  }

  ReportParams rp;
  rp.algorithm = args.algorithm;
  rp.k = args.k;
  rp.r = args.r;
  rp.dedupOutput = args.dedupOutput;
  rp.runtimeMs = runtimeMs;
  AnonymizationReport report = buildReport(out, db, taxonomy, rp);
  if (!args.reportPath.empty()) {
    writeFile(args.reportPath, writeReportJson(report));
  }

  std::cout << args.algorithm << ": " << db.size() << " transactions -> "
            << out.groups.size() << " groups, distortion "
            << report.totalDistortion.str() << " ("
            << round4(report.totalDistortion.toDouble()) << ")\n";
  return kExitOk;
}

int runIngest(const IngestArgs& args) {
  Taxonomy taxonomy = Taxonomy::fromFile(args.taxonomyPath);
  std::string text = readFile(args.input);
  IngestOptions opts;
  opts.mergeByUser = !args.noMerge;
  opts.dedupItems = !args.keepDuplicates;
  IngestStats stats;
  TransactionDb db = ingestQueryLog(text, taxonomy, opts, stats);

  writeFile(args.output, formatTransactions(db, taxonomy));
  if (!args.statsPath.empty()) {
    nlohmann::ordered_json j;
    j["rows_total"] = stats.rowsTotal;
    j["rows_skipped"] = stats.rowsSkipped;
    j["header_detected"] = stats.headerDetected;
    j["users"] = stats.usersSeen;
    j["tokens_total"] = stats.tokensTotal;
    j["tokens_dropped"] = stats.tokensDropped;
    j["transactions_out"] = stats.transactionsOut;
    j["transactions_dropped_empty"] = stats.transactionsDroppedEmpty;
    writeFile(args.statsPath, j.dump(2) + "\n");
  }
  std::cout << "ingested " << stats.transactionsOut << " transactions from "
            << stats.rowsTotal << " rows (" << stats.tokensDropped
            << " tokens dropped)\n";
  return kExitOk;
}

int runBench(const BenchArgs& args) {
  if (args.sizes.empty()) throw ConfigError("bench: no sweep sizes given");
  for (const auto& a : args.algorithms) {
    if (a != "clump" && a != "clump2" && a != "partition") {
      throw ConfigError("bench: unknown algorithm: " + a);
    }
  }

  Taxonomy taxonomy = [&] {
    if (!args.taxonomyPath.empty()) return Taxonomy::fromFile(args.taxonomyPath);
    SyntheticTaxonomyParams tp;
    tp.leafTarget = args.taxLeaves;
    tp.branchingMin = args.taxBranchMin;
    tp.branchingMax = args.taxBranchMax;
    tp.depthTarget = args.taxDepth;
    tp.seed = args.taxSeed;
    return Taxonomy::synthetic(tp);
  }();

  std::string csv = reportCsvHeader();
  std::uint64_t runIndex = 0;
  for (std::uint32_t size : args.sizes) {
    SyntheticLogParams lp;
    lp.count = size;
    lp.lengthMin = args.lengthMin;
    lp.lengthMax = args.lengthMax;
    lp.topicLevel = args.topicLevel;
    lp.topicCount = args.topicCount;
    lp.noiseProbability = args.noise;
    lp.seed = args.seed * 1000003 + runIndex;
    TransactionDb db = generateSyntheticLog(taxonomy, lp);
    ++runIndex;

    for (std::uint32_t k : args.kValues) {
      for (std::uint32_t r : args.rValues) {
        for (const auto& algorithm : args.algorithms) {
          ClumpConfig cfg;
          cfg.k = k;
          cfg.r = r;
          cfg.dedupOutput = algorithm == "clump2";

          AnonymizedDb out;
          auto start = Clock::now();
          if (algorithm == "partition") {
            out = partitionAnonymize(db, taxonomy, k);
          } else {
            auto clusters = cluster(db, taxonomy, cfg);
            out = anonymize(clusters, db, cfg);
          }
          const std::uint64_t runtimeMs = elapsedMs(start);

          ReportParams rp;
          rp.algorithm = algorithm == "partition" ? "partition" : "clump";
          rp.k = k;
          rp.r = r;
          rp.dedupOutput = cfg.dedupOutput;
          rp.runtimeMs = runtimeMs;
          csv += reportCsvRow(buildReport(out, db, taxonomy, rp));
        }
      }
    }
  }

  if (args.csvPath.empty()) {
    std::cout << csv;
  } else {
    writeFile(args.csvPath, csv);
  }
  return kExitOk;
}

int runReport(const ReportArgs& args) {
  Taxonomy taxonomy = Taxonomy::fromFile(args.taxonomyPath);
  TransactionDb db = loadTransactions(args.input, taxonomy, "transactions");
  std::string publicText = readFile(args.publicPath);
  std::string auditText = readFile(args.auditMapPath);

  // Rebuild the release structure: the audit map supplies membership, the
  // public file supplies each group's generalized transaction.
  std::unordered_map<std::string, std::uint32_t> tidToIdx;
  for (std::uint32_t i = 0; i < db.size(); ++i) tidToIdx[db[i].tid] = i;

  std::map<std::uint32_t, std::vector<std::uint32_t>> membersOf;
  std::istringstream audit(auditText);
  std::string line;
  while (std::getline(audit, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("malformed audit map line: " + line);
    std::string tid = line.substr(0, tab);
    auto it = tidToIdx.find(tid);
    if (it == tidToIdx.end()) throw DataError("audit map tid not in input: " + tid);
    membersOf[static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1)))]
        .push_back(it->second);
  }

  std::map<std::uint32_t, GeneralizedTransaction> groupItems;
  std::istringstream pub(publicText);
  while (std::getline(pub, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("malformed output line: " + line);
    std::uint32_t gid = static_cast<std::uint32_t>(std::stoul(line.substr(0, tab)));
    if (groupItems.count(gid)) continue;
    std::vector<ItemId> items;
    std::istringstream itemsIn(line.substr(tab + 1));
    std::string token;
    while (itemsIn >> token) {
      auto id = taxonomy.find(token);
      if (!id) throw DataError("output item not in taxonomy: " + token);
      items.push_back(*id);
    }
    groupItems.emplace(gid, GeneralizedTransaction(std::move(items), taxonomy));
  }

  AnonymizedDb out;
  out.groupOfMember.assign(db.size(), 0);
  for (auto& [gid, members] : membersOf) {
    auto itemsIt = groupItems.find(gid);
    if (itemsIt == groupItems.end()) {
      throw DataError("audit map references group " + std::to_string(gid) +
                      " missing from the public output");
    }
    AnonymizedGroup g;
    g.generalized = itemsIt->second;
    std::sort(members.begin(), members.end());
    g.members = std::move(members);
    for (std::uint32_t m : g.members) {
      std::uint32_t len;
      if (args.algorithm == "partition") {
        auto items = db[m].items;
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        len = static_cast<std::uint32_t>(items.size());
      } else {
        len = static_cast<std::uint32_t>(db[m].length());
      }
      g.memberEffectiveLen.push_back(len);
      out.groupOfMember[m] = static_cast<std::uint32_t>(out.groups.size());
    }
    out.groups.push_back(std::move(g));
  }

  ReportParams rp;
  rp.algorithm = args.algorithm;
  rp.k = args.k;
  rp.r = args.r;
  AnonymizationReport report = buildReport(out, db, taxonomy, rp);
  std::string json = writeReportJson(report);
  if (args.reportPath.empty()) {
    std::cout << json;
  } else {
    writeFile(args.reportPath, json);
  }
  return kExitOk;
}

}  // namespace

std::string formatPublicOutput(const AnonymizedDb& out, const Taxonomy& taxonomy) {
  std::string text;
  for (std::size_t gid = 0; gid < out.groups.size(); ++gid) {
    const auto& g = out.groups[gid];
    std::string line = std::to_string(gid) + "\t" +
                       g.generalized.toLabelString(taxonomy) + "\n";
    for (std::size_t i = 0; i < g.members.size(); ++i) text += line;
  }
  return text;
}

std::string formatAuditMap(const AnonymizedDb& out, const TransactionDb& db) {
  std::string text;
  for (std::uint32_t i = 0; i < db.size(); ++i) {
    text += db[i].tid;
    text += '\t';
    text += std::to_string(out.groupOfMember[i]);
    text += '\n';
  }
  return text;
}

std::string formatTransactions(const TransactionDb& db, const Taxonomy& taxonomy) {
  std::string text;
  for (const auto& t : db.transactions()) {
    text += t.tid;
    text += '\t';
    for (std::size_t i = 0; i < t.items.size(); ++i) {
      if (i > 0) text += ' ';
      text += taxonomy.label(t.items[i]);
    }
    text += '\n';
  }
  return text;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading file: " + path);
  return buf.str();
}

void writeFile(const std::string& path, const std::string& contents) {
  std::ofstream outStream(path, std::ios::binary | std::ios::trunc);
  if (!outStream) throw IoError("cannot open file for writing: " + path);
  outStream << contents;
  outStream.flush();
  if (!outStream) throw IoError("failed writing file: " + path);
}

int run(int argc, const char* const* argv) {
  CLI::App app{"k-anonymize set-valued transaction data over an item taxonomy"};
  app.require_subcommand(1);

  AnonymizeArgs an;
  auto* anonymizeCmd =
      app.add_subcommand("anonymize", "cluster and generalize a transaction file");
  anonymizeCmd->add_option("--input", an.input, "transaction file")->required();
  anonymizeCmd->add_option("--taxonomy", an.taxonomyPath, "taxonomy edge file")
      ->required();
  anonymizeCmd->add_option("--output", an.output, "public anonymized output")
      ->required();
  anonymizeCmd->add_option("--report", an.reportPath, "metrics report (JSON)");
  anonymizeCmd->add_option("--audit-map", an.auditMapPath,
                           "write the private record-to-group map here");
  anonymizeCmd->add_option("--algorithm", an.algorithm, "clump or partition");
  anonymizeCmd->add_option("--input-format", an.inputFormat,
                           "transactions or querylog");
  anonymizeCmd->add_option("--k", an.k, "anonymity parameter (>= 2)");
  anonymizeCmd->add_option("--r", an.r, "clusters examined per assignment");
  anonymizeCmd->add_flag("--dedup-output", an.dedupOutput,
                         "drop duplicate items from released groups");
  anonymizeCmd->add_flag("--validate", an.validate,
                         "cross-check sampled groups against the reference");
  anonymizeCmd->add_option("--threads", an.threads, "worker cap");
  anonymizeCmd->add_option("--seed", an.seed, "seed for validation sampling");

  IngestArgs ing;
  auto* ingestCmd =
      app.add_subcommand("ingest", "turn a query-log TSV into a transaction file");
  ingestCmd->add_option("--input", ing.input, "query log TSV")->required();
  ingestCmd->add_option("--taxonomy", ing.taxonomyPath, "taxonomy edge file")
      ->required();
  ingestCmd->add_option("--output", ing.output, "transaction file to write")
      ->required();
  ingestCmd->add_option("--stats", ing.statsPath, "ingestion stats (JSON)");
  ingestCmd->add_flag("--no-merge", ing.noMerge,
                      "one transaction per row instead of per user");
  ingestCmd->add_flag("--keep-duplicates", ing.keepDuplicates,
                      "keep repeated items within a transaction");

  BenchArgs bench;
  auto* benchCmd =
      app.add_subcommand("bench", "sweep synthetic workloads and emit CSV rows");
  benchCmd->add_option("--sizes", bench.sizes, "database sizes to sweep")
      ->required()
      ->delimiter(',');
  benchCmd->add_option("--k-values", bench.kValues, "k values")->delimiter(',');
  benchCmd->add_option("--r-values", bench.rValues, "r values")->delimiter(',');
  benchCmd->add_option("--algorithms", bench.algorithms,
                       "clump, clump2, partition")
      ->delimiter(',');
  benchCmd->add_option("--taxonomy", bench.taxonomyPath,
                       "taxonomy file (otherwise synthetic)");
  benchCmd->add_option("--tax-leaves", bench.taxLeaves, "synthetic leaf target");
  benchCmd->add_option("--tax-branching-min", bench.taxBranchMin, "");
  benchCmd->add_option("--tax-branching-max", bench.taxBranchMax, "");
  benchCmd->add_option("--tax-depth", bench.taxDepth, "");
  benchCmd->add_option("--tax-seed", bench.taxSeed, "");
  benchCmd->add_option("--length-min", bench.lengthMin, "");
  benchCmd->add_option("--length-max", bench.lengthMax, "");
  benchCmd->add_option("--topic-level", bench.topicLevel, "");
  benchCmd->add_option("--topics", bench.topicCount, "");
  benchCmd->add_option("--noise", bench.noise, "");
  benchCmd->add_option("--seed", bench.seed, "data seed");
  benchCmd->add_option("--csv", bench.csvPath, "CSV output path (default stdout)");

  ReportArgs rep;
  auto* reportCmd = app.add_subcommand(
      "report", "recompute metrics from a release and its audit map");
  reportCmd->add_option("--input", rep.input, "original transaction file")
      ->required();
  reportCmd->add_option("--taxonomy", rep.taxonomyPath, "taxonomy edge file")
      ->required();
  reportCmd->add_option("--public", rep.publicPath, "public anonymized output")
      ->required();
  reportCmd->add_option("--audit-map", rep.auditMapPath, "audit map file")
      ->required();
  reportCmd->add_option("--report", rep.reportPath, "report path (default stdout)");
  reportCmd->add_option("--algorithm", rep.algorithm,
                        "length accounting: clump or partition");
  reportCmd->add_option("--k", rep.k, "k to record in the report");
  reportCmd->add_option("--r", rep.r, "r to record in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (anonymizeCmd->parsed()) return runAnonymize(an);
    if (ingestCmd->parsed()) return runIngest(ing);
    if (benchCmd->parsed()) return runBench(bench);
    if (reportCmd->parsed()) return runReport(rep);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace clump::cli
