#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edl/claims.hpp"
#include "json.hpp"

namespace edltool {

struct RunConfig {
  std::uint64_t q = 3;
  std::vector<unsigned> ms{1};
  std::vector<unsigned> extra_ms;  // informational levels
  int r = 2;
  int e = 1;
  edl::GroupKind group = edl::GroupKind::SL;
  std::uint64_t budget = 1'000'000'000;
  int threads = 1;
  int samples = 20;
  std::uint64_t seed = 7;
  double time_limit_s = 0;  // 0: none

  // Throws edl::Error(InvalidArgument) for a q that is not a prime power, e divisible by p,
  // an empty level list or a zero budget.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

struct ClaimEntry {
  std::string id;
  int criterion = 0;
  std::string kind;  // exact -> verified, count -> consistent
  std::string title;
  std::vector<RunConfig> runs;
};

// Parsed from the embedded manifest, in criterion order.
const std::vector<ClaimEntry>& claims();
const ClaimEntry* find_claim(const std::string& id);
const ClaimEntry* find_criterion(int n);

enum class Status { Verified, Consistent, Failed, SkippedBudget };
const char* status_name(Status s);

struct Outcome {
  std::string claim;
  RunConfig config;
  Status status = Status::Failed;
  edl::ClaimReport report;
  std::string error;
  double seconds = 0;
  bool over_time() const { return config.time_limit_s > 0 && seconds > config.time_limit_s; }
};

// Runs the claim's driver; BudgetExceeded becomes SkippedBudget, other errors propagate.
Outcome execute(const ClaimEntry& claim, const RunConfig& cfg);

nlohmann::ordered_json to_json(const Outcome& o, bool timing);

// "1..3", "1,2" or "2"
std::vector<unsigned> parse_levels(const std::string& s);

}  // namespace edltool
