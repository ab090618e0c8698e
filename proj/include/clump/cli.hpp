#pragma once

#include <string>

#include "clump/clump.hpp"
#include "clump/taxonomy.hpp"
#include "clump/transaction.hpp"

namespace clump::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitIo = 4;
inline constexpr int kExitValidation = 5;

// Entry point behind the binary's main(); also called directly by tests.
int run(int argc, const char* const* argv);

// Release file: one line per record, `group_id<TAB>item item ...`. Contains
// no transaction ids.
std::string formatPublicOutput(const AnonymizedDb& out, const Taxonomy& taxonomy);

// Publisher-side mapping `tid<TAB>group_id`, one line per input record.
// Re-identifies records; only written on explicit request.
std::string formatAuditMap(const AnonymizedDb& out, const TransactionDb& db);

// Transaction file rendering (`tid<TAB>item item ...`) used by ingest.
std::string formatTransactions(const TransactionDb& db, const Taxonomy& taxonomy);

std::string readFile(const std::string& path);
void writeFile(const std::string& path, const std::string& contents);

}  // namespace clump::cli
