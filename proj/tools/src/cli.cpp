#include "edltool/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "edl/classfn.hpp"
#include "edl/clifford.hpp"
#include "edl/error.hpp"
#include "edl/galois.hpp"
#include "edltool/cache.hpp"
#include "edltool/registry.hpp"

namespace edltool {

namespace {

using edl::Error;
using edl::ErrorCode;
using nlohmann::ordered_json;

struct Flags {
  std::uint64_t q = 3;
  std::string m = "1";
  int r = 2;
  int e = 1;
  std::string group = "SL2";
  std::string claim;
  std::uint64_t budget = 50'000'000;
  std::string cache_dir;
  int threads = 1;
  std::string out;
  int samples = 20;
  std::uint64_t seed = 7;
  bool timing = false;
  bool list = false;
  std::string variety = "quotiented";
  std::string x = "1";
  std::string cache_action = "list";
};

void add_common(CLI::App* c, Flags& f) {
  c->add_option("--q", f.q, "residue field size (prime power)");
  c->add_option("--r", f.r, "truncation length");
  c->add_option("--e", f.e, "ramification index");
  c->add_option("--group", f.group, "SL2 or GL2");
  c->add_option("--budget", f.budget, "largest group enumerated");
  c->add_option("--threads", f.threads, "worker threads");
  c->add_option("--out", f.out, "write JSON here instead of stdout");
}

RunConfig config_from(const Flags& f) {
  RunConfig c;
  c.q = f.q;
  c.ms = parse_levels(f.m);
  c.r = f.r;
  c.e = f.e;
  c.group = edl::parse_group(f.group);
  c.budget = f.budget;
  c.threads = f.threads;
  c.samples = f.samples;
  c.seed = f.seed;
  c.validate();
  return c;
}

edl::Group make_group(const RunConfig& c) {
  auto pp = edl::prime_power(c.q);
  return edl::Group(c.group, edl::Ring::make(edl::Field::make(pp->first, pp->second, 1), c.r, c.e), 2);
}

void check_budget(const edl::Group& G, std::uint64_t budget) {
  if (G.order() > budget)
    throw Error(ErrorCode::BudgetExceeded, G.name() + " has " + std::to_string(G.order()) + " elements");
}

void emit(const ordered_json& j, const Flags& f, std::ostream& out) {
  if (f.out.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream file(f.out);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + f.out);
  file << j.dump(2) << '\n';
}

int cmd_chartable(const Flags& f, std::ostream& out) {
  auto c = config_from(f);
  auto G = make_group(c);
  check_budget(G, c.budget);
  auto t = edl::ClassTable::build(G, 0, c.budget);
  auto chars = edl::character_table(t);
  auto chk = edl::check_table(chars, c.threads);
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "chartable";
  j["group"] = G.name();
  j["order"] = t->order();
  j["exponent"] = t->exponent();
  ordered_json cls = ordered_json::array();
  for (const auto& k : t->classes()) cls.push_back({{"rep", G.str(k.rep)}, {"size", k.size}, {"order", k.order}});
  j["classes"] = cls;
  ordered_json rows = ordered_json::array();
  for (const auto& chi : chars) {
    ordered_json v = ordered_json::array();
    for (const auto& x : chi.values()) v.push_back(x.str());
    rows.push_back({{"degree", chi.degree()}, {"values", v}});
  }
  j["characters"] = rows;
  bool ok = chk.complete && chk.rows_orthonormal && chk.columns_orthogonal && chk.sum_dim2 == t->order();
  j["check"] = {{"complete", chk.complete},
                {"rows_orthonormal", chk.rows_orthonormal},
                {"columns_orthogonal", chk.columns_orthogonal},
                {"sum_dim2", chk.sum_dim2}};
  if (c.group == edl::GroupKind::SL && c.r == 2 && c.e == 1) {
    auto census = edl::build_census(G, c.threads);
    ordered_json fam = ordered_json::array();
    for (const auto& fm : census.families) {
      ordered_json dims = ordered_json::array();
      for (const auto& chi : fm.irreps) dims.push_back(chi.degree());
      fam.push_back({{"kind", edl::orbit_kind_name(fm.orbit.kind)},
                     {"beta", G.at_level(1).str(fm.orbit.rep.x)},
                     {"orbit_size", fm.orbit.size},
                     {"dimensions", dims}});
    }
    j["families"] = fam;
    j["nilpotent_count"] = census.count(edl::OrbitKind::Nilpotent);
  }
  j["status"] = ok ? "verified" : "failed";
  emit(j, f, out);
  return ok ? kOk : kCheckFailed;
}

int cmd_orbits(const Flags& f, std::ostream& out) {
  auto c = config_from(f);
  auto G = make_group(c);
  auto Gl = G.at_level(std::max(1, c.r / 2));
  check_budget(G, c.budget);
  auto mode = G.field().p() == 2 ? edl::LieMode::ModCenter : edl::LieMode::TraceZero;
  auto orbits = edl::classify_orbits(Gl, mode, c.budget);
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "orbits";
  j["group"] = Gl.name();
  j["mode"] = edl::lie_mode_name(mode);
  ordered_json rows = ordered_json::array();
  for (const auto& o : orbits)
    rows.push_back({{"kind", edl::orbit_kind_name(o.kind)}, {"rep", Gl.str(o.rep.x)}, {"size", o.size}});
  j["orbits"] = rows;
  j["status"] = "ok";
  emit(j, f, out);
  return kOk;
}

edl::Mat parse_x(const edl::Group& G, const std::string& s) {
  const auto& R = G.ring();
  if (s == "1") return G.identity();
  if (s == "w") return G.weyl();
  if (s == "e") return G.from_rows({{R.one(), R.zero()}, {R.z_pow(1), R.one()}});
  edl::Mat x = G.parse(s);
  if (!G.contains(x)) throw Error(ErrorCode::InvalidArgument, "x is not in " + G.name());
  return x;
}

int cmd_count(const Flags& f, std::ostream& out, std::ostream& err) {
  auto c = config_from(f);
  auto G = make_group(c);
  check_budget(G, c.budget);
  auto V = edl::build_classical(G, parse_x(G, f.x), edl::parse_flavor(f.variety));
  auto t = edl::ClassTable::build(G, 0, c.budget);
  std::optional<CountCache> cache;
  if (!f.cache_dir.empty()) cache.emplace(f.cache_dir);
  edl::LangCache lang;
  edl::CountOptions opt;
  opt.threads = c.threads;
  opt.budget = c.budget;
  opt.cache = &lang;

  ordered_json j;
  j["schema"] = 1;
  j["command"] = "count";
  j["descriptor"] = {{"hash", V.hash()}, {"label", V.label}, {"canonical", V.canonical()}};
  j["group"] = G.name();
  ordered_json rows = ordered_json::array();
  bool skipped = false;
  for (unsigned m : c.ms)
    for (std::size_t i = 0; i < t->size(); ++i) {
      const auto& rep = (*t)[i].rep;
      ordered_json key = {{"descriptor", V.hash()}, {"q", c.q}, {"m", m}, {"class", G.str(rep)}};
      ordered_json row = {{"m", m}, {"class", i}, {"rep", G.str(rep)}};
      std::uint64_t n = 0;
      auto hit = cache ? cache->get(key, n) : CountCache::Lookup::Miss;
      if (hit == CountCache::Lookup::Corrupt) err << "cache: corrupt entry for m=" << m << " class " << i << ", recomputing\n";
      if (hit != CountCache::Lookup::Hit) {
        try {
          n = edl::twisted_count(V, rep, m, opt);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::BudgetExceeded) throw;
          row["status"] = "skipped-budget";
          row["error"] = e.what();
          rows.push_back(row);
          skipped = true;
          continue;
        }
        if (cache) cache->put(key, n);
      }
      row["count"] = n;
      rows.push_back(row);
    }
  j["rows"] = rows;
  j["status"] = skipped ? "skipped-budget" : "ok";
  emit(j, f, out);
  return skipped ? kBudget : kOk;
}

int cmd_verify(const Flags& f, bool overridden, std::ostream& out) {
  if (f.list) {
    ordered_json j;
    j["schema"] = 1;
    ordered_json rows = ordered_json::array();
    for (const auto& c : claims())
      rows.push_back({{"id", c.id}, {"criterion", c.criterion}, {"kind", c.kind}, {"title", c.title}});
    j["claims"] = rows;
    emit(j, f, out);
    return kOk;
  }
  const ClaimEntry* entry = find_claim(f.claim);
  if (!entry) throw Error(ErrorCode::InvalidArgument, "unknown claim '" + f.claim + "'");
  std::vector<RunConfig> runs = entry->runs;
  if (overridden) runs = {config_from(f)};
  for (auto& r : runs) r.threads = f.threads;

  ordered_json j;
  j["schema"] = 1;
  j["claim"] = entry->id;
  j["criterion"] = entry->criterion;
  j["title"] = entry->title;
  ordered_json rs = ordered_json::array();
  bool failed = false, skipped = false;
  for (const auto& r : runs) {
    auto o = execute(*entry, r);
    failed = failed || o.status == Status::Failed;
    skipped = skipped || o.status == Status::SkippedBudget;
    rs.push_back(to_json(o, f.timing));
  }
  Status s = failed ? Status::Failed
             : skipped ? Status::SkippedBudget
             : entry->kind == "count" ? Status::Consistent
                                      : Status::Verified;
  j["status"] = status_name(s);
  j["runs"] = rs;
  emit(j, f, out);
  return failed ? kCheckFailed : skipped ? kBudget : kOk;
}

int cmd_cache(const Flags& f, std::ostream& out) {
  if (f.cache_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--cache-dir is required");
  CountCache cache(f.cache_dir);
  ordered_json j;
  j["schema"] = 1;
  j["command"] = "cache";
  j["action"] = f.cache_action;
  if (f.cache_action == "clear") {
    j["removed"] = cache.clear();
    emit(j, f, out);
    return kOk;
  }
  auto entries = cache.entries();
  std::size_t bad = 0;
  ordered_json rows = ordered_json::array();
  for (const auto& e : entries) {
    if (!e.valid) ++bad;
    ordered_json row = {{"file", e.file}, {"valid", e.valid}};
    if (e.valid) row["key"] = e.key, row["count"] = e.count;
    rows.push_back(row);
  }
  j["entries"] = rows;
  j["corrupt"] = bad;
  emit(j, f, out);
  return f.cache_action == "verify" && bad > 0 ? kCheckFailed : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"edltool: finite-level experiments on SL2/GL2 over truncated local rings"};
  app.require_subcommand(1);
  Flags f;

  auto* chart = app.add_subcommand("chartable", "character table of the group");
  add_common(chart, f);
  auto* orb = app.add_subcommand("orbits", "adjoint orbits on the Lie algebra quotient");
  add_common(orb, f);

  auto* cnt = app.add_subcommand("count", "twisted fixed-point counts over class representatives");
  add_common(cnt, f);
  cnt->add_option("--m", f.m, "levels, e.g. 1..2");
  cnt->add_option("--variety", f.variety, "X, lang-preimage or quotiented")
      ->check(CLI::IsMember({"X", "lang-preimage", "quotiented"}));
  cnt->add_option("--x", f.x, "1, w, e or a matrix");
  cnt->add_option("--cache-dir", f.cache_dir, "directory for cached counts");

  auto* ver = app.add_subcommand("verify", "run a registered claim");
  add_common(ver, f);
  ver->add_option("id", f.claim, "claim id");
  ver->add_option("--claim", f.claim, "claim id");
  ver->add_option("--m", f.m, "levels, e.g. 1..2");
  ver->add_option("--samples", f.samples, "sample size where the driver samples");
  ver->add_option("--seed", f.seed, "sampling seed");
  ver->add_flag("--timing", f.timing, "include wall time in the report");
  ver->add_flag("--list", f.list, "list registered claims");

  auto* cch = app.add_subcommand("cache", "inspect the count cache");
  cch->add_option("action", f.cache_action, "list, verify or clear")->check(CLI::IsMember({"list", "verify", "clear"}));
  cch->add_option("--cache-dir", f.cache_dir, "cache directory");
  cch->add_option("--out", f.out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*chart) return cmd_chartable(f, out);
    if (*orb) return cmd_orbits(f, out);
    if (*cnt) return cmd_count(f, out, err);
    if (*ver) {
      bool overridden = false;
      for (const char* opt : {"--q", "--m", "--r", "--e", "--group", "--budget", "--samples", "--seed"})
        overridden = overridden || ver->count(opt) > 0;
      if (!f.list && f.claim.empty()) throw Error(ErrorCode::InvalidArgument, "verify needs a claim id");
      return cmd_verify(f, overridden, out);
    }
    if (*cch) return cmd_cache(f, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::BudgetExceeded: return kBudget;
      case ErrorCode::CheckFailed: return kCheckFailed;
      default: return kUsage;
    }
  }
  return kUsage;
}

}  // namespace edltool
