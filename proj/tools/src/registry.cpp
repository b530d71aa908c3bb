#include "edltool/registry.hpp"

#include <algorithm>
#include <chrono>

#include "edl/error.hpp"
#include "edl/field.hpp"

namespace edltool {

extern const char* const kClaimManifest;

using edl::Error;
using edl::ErrorCode;
using nlohmann::ordered_json;

void RunConfig::validate() const {
  auto pp = edl::prime_power(q);
  if (!pp) throw Error(ErrorCode::InvalidArgument, "q = " + std::to_string(q) + " is not a prime power");
  if (e < 1 || e % static_cast<int>(pp->first) == 0)
    throw Error(ErrorCode::InvalidArgument, "e = " + std::to_string(e) + " must be coprime to p");
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "r must be positive");
  if (ms.empty()) throw Error(ErrorCode::InvalidArgument, "empty level range");
  for (unsigned m : ms)
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "levels start at 1");
  if (budget == 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  if (threads < 1) throw Error(ErrorCode::InvalidArgument, "threads must be positive");
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["q"] = q;
  j["m"] = ms;
  if (!extra_ms.empty()) j["extra_m"] = extra_ms;
  j["r"] = r;
  j["e"] = e;
  j["group"] = std::string(edl::group_name(group)) + "2";
  j["budget"] = budget;
  j["samples"] = samples;
  j["seed"] = seed;
  return j;
}

namespace {

RunConfig run_from_json(const nlohmann::json& j, double limit) {
  RunConfig c;
  c.time_limit_s = limit;
  if (j.contains("q")) c.q = j["q"].get<std::uint64_t>();
  if (j.contains("m")) c.ms = j["m"].get<std::vector<unsigned>>();
  if (j.contains("extra_m")) c.extra_ms = j["extra_m"].get<std::vector<unsigned>>();
  if (j.contains("r")) c.r = j["r"].get<int>();
  if (j.contains("e")) c.e = j["e"].get<int>();
  if (j.contains("group")) c.group = edl::parse_group(j["group"].get<std::string>());
  if (j.contains("samples")) c.samples = j["samples"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("time_limit_s")) c.time_limit_s = j["time_limit_s"].get<double>();
  return c;
}

std::vector<ClaimEntry> load() {
  auto doc = nlohmann::json::parse(kClaimManifest);
  std::vector<ClaimEntry> out;
  for (const auto& c : doc["claims"]) {
    ClaimEntry e;
    e.id = c["id"];
    e.criterion = c["criterion"];
    e.kind = c["kind"];
    e.title = c["title"];
    double limit = c.value("time_limit_s", 0.0);
    for (const auto& r : c["runs"]) e.runs.push_back(run_from_json(r, limit));
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.criterion < b.criterion; });
  return out;
}

edl::VerifyOptions options(const RunConfig& c) {
  edl::VerifyOptions o;
  o.count.threads = c.threads;
  o.count.budget = c.budget;
  o.ms = c.ms;
  o.adapted_ms = c.extra_ms;
  o.samples = c.samples;
  o.seed = c.seed;
  return o;
}

void merge(edl::ClaimReport& into, const edl::ClaimReport& from, const std::string& prefix) {
  for (const auto& ch : from.checks) into.add(prefix + ch.name, ch.ok, ch.detail, ch.required);
}

edl::ClaimReport dispatch(const std::string& id, const RunConfig& c) {
  auto o = options(c);
  if (id == "group-orders") return edl::verify_group_orders(c.q);
  if (id == "census") return edl::verify_census(c.q, c.threads);
  if (id == "stabilizer") return edl::verify_stabilizer(c.q);
  if (id == "mackey") return edl::verify_mackey(c.q);
  if (id == "double-cosets") return edl::verify_double_cosets(c.q, o);
  if (id == "thm-3.4") return edl::verify_thm34(c.q, o);
  if (id == "prop-3.5") return edl::verify_prop35(c.q, o);
  if (id == "prop-3.6") return edl::verify_prop36(c.q, o);
  if (id == "cor-4.3") return edl::verify_galois_layer();
  if (id == "lemma-4.4") return edl::verify_triangularize(c.q, c.samples, c.seed);
  if (id == "lemma-4.5") return edl::verify_borel_normalizer(c.q, o);
  if (id == "quasi-cartan") return edl::verify_quasi_cartan(c.q);
  if (id == "thm-4.1") {
    edl::ClaimReport rep;
    rep.claim = id;
    for (unsigned m : c.ms) merge(rep, edl::verify_thm41(c.q, c.group, m, o), c.ms.size() > 1 ? "m=" + std::to_string(m) + ": " : "");
    return rep;
  }
  if (id == "unramified") return edl::verify_unramified(c.q, c.r, o);
  throw Error(ErrorCode::InvalidArgument, "no driver for claim '" + id + "'");
}

}  // namespace

const std::vector<ClaimEntry>& claims() {
  static const std::vector<ClaimEntry> all = load();
  return all;
}

const ClaimEntry* find_claim(const std::string& id) {
  for (const auto& c : claims())
    if (c.id == id) return &c;
  return nullptr;
}

const ClaimEntry* find_criterion(int n) {
  for (const auto& c : claims())
    if (c.criterion == n) return &c;
  return nullptr;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Verified: return "verified";
    case Status::Consistent: return "consistent";
    case Status::Failed: return "failed";
    case Status::SkippedBudget: return "skipped-budget";
  }
  return "?";
}

Outcome execute(const ClaimEntry& claim, const RunConfig& cfg) {
  cfg.validate();
  Outcome o;
  o.claim = claim.id;
  o.config = cfg;
  auto t0 = std::chrono::steady_clock::now();
  try {
    o.report = dispatch(claim.id, cfg);
    o.status = !o.report.ok() ? Status::Failed : claim.kind == "count" ? Status::Consistent : Status::Verified;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    o.status = Status::SkippedBudget;
    o.error = e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

ordered_json to_json(const Outcome& o, bool timing) {
  ordered_json j;
  j["schema"] = 1;
  j["claim"] = o.claim;
  j["status"] = status_name(o.status);
  j["config"] = o.config.to_json();
  ordered_json checks = ordered_json::array();
  for (const auto& c : o.report.checks)
    checks.push_back({{"name", c.name}, {"ok", c.ok}, {"required", c.required}, {"detail", c.detail}});
  j["evidence"] = checks;
  if (!o.error.empty()) j["error"] = o.error;
  if (timing) j["wall_time_s"] = o.seconds;
  return j;
}

std::vector<unsigned> parse_levels(const std::string& s) {
  std::vector<unsigned> out;
  auto bad = [&] { return Error(ErrorCode::InvalidArgument, "bad level range '" + s + "'"); };
  try {
    auto dots = s.find("..");
    if (dots != std::string::npos) {
      unsigned a = static_cast<unsigned>(std::stoul(s.substr(0, dots)));
      unsigned b = static_cast<unsigned>(std::stoul(s.substr(dots + 2)));
      if (a == 0 || b < a) throw bad();
      for (unsigned m = a; m <= b; ++m) out.push_back(m);
      return out;
    }
    std::size_t pos = 0;
    while (pos <= s.size()) {
      auto comma = s.find(',', pos);
      std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      std::size_t used = 0;
      unsigned long v = std::stoul(part, &used);
      if (used != part.size() || v == 0) throw bad();
      out.push_back(static_cast<unsigned>(v));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  return out;
}

}  // namespace edltool
