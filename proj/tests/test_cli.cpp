#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edl/classfn.hpp"
#include "edl/error.hpp"
#include "edltool/cli.hpp"
#include "edltool/registry.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "edltool");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = edltool::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("edltool_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, edltool::kUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, edltool::kUsage);
  EXPECT_EQ(cli({"chartable", "--q", "6"}).code, edltool::kUsage);
  EXPECT_EQ(cli({"chartable", "--q", "9", "--e", "3"}).code, edltool::kUsage);
  EXPECT_EQ(cli({"count", "--m", "2..1"}).code, edltool::kUsage);
  EXPECT_EQ(cli({"count", "--variety", "Y"}).code, edltool::kUsage);
  EXPECT_EQ(cli({"verify", "no-such-claim"}).code, edltool::kUsage);
  EXPECT_EQ(cli({"verify"}).code, edltool::kUsage);
}

TEST(Cli, ChartableAtThree) {
  auto r = cli({"chartable", "--q", "3", "--r", "2", "--group", "SL2"});
  ASSERT_EQ(r.code, edltool::kOk) << r.err;
  auto d = r.doc();
  EXPECT_EQ(d["schema"], 1);
  EXPECT_EQ(d["order"], 648);
  EXPECT_EQ(d["check"]["sum_dim2"], 648);
  EXPECT_EQ(d["nilpotent_count"], 12);
  EXPECT_EQ(d["status"], "verified");
  EXPECT_EQ(d["characters"].size(), d["classes"].size());
  EXPECT_EQ(cli({"chartable", "--q", "3"}).out, r.out);
}

TEST(Cli, ChartableEvenCharacteristic) {
  auto d = cli({"chartable", "--q", "2", "--r", "2"}).doc();
  EXPECT_EQ(d["order"], 48);
  std::size_t nil = 0;
  for (const auto& f : d["families"])
    if (f["kind"] == "nilpotent")
      for (const auto& dim : f["dimensions"]) {
        EXPECT_EQ(dim, 3);
        ++nil;
      }
  EXPECT_EQ(nil, 2u);
}

TEST(Cli, Orbits) {
  auto d = cli({"orbits", "--q", "3"}).doc();
  std::uint64_t total = 0;
  for (const auto& o : d["orbits"]) total += o["size"].get<std::uint64_t>();
  EXPECT_EQ(total, 26u);  // non-zero trace-zero matrices over F_3
}

TEST(Cli, CountMatchesPermutationCharacter) {
  auto r = cli({"count", "--q", "3", "--m", "1", "--variety", "quotiented", "--x", "1"});
  ASSERT_EQ(r.code, edltool::kOk) << r.err;
  auto d = r.doc();
  edl::Group G(edl::GroupKind::SL, edl::Ring::make(edl::Field::make(3, 1, 1), 2), 2);
  auto t = edl::ClassTable::build(G);
  auto chi = edl::permutation_character(t, edl::Subgroup::pattern(edl::Shape::U)->elements(G));
  ASSERT_EQ(d["rows"].size(), t->size());
  for (const auto& row : d["rows"])
    EXPECT_EQ(row["count"].get<long long>(), chi[row["class"].get<std::size_t>()].to_integer());
}

TEST(Cli, CacheResumeAndRepair) {
  auto dir = fresh_dir("cache");
  std::vector<std::string> args{"count", "--q", "3", "--m", "1..2", "--x", "e", "--cache-dir", dir.string()};
  auto first = cli(args);
  ASSERT_EQ(first.code, edltool::kOk) << first.err;
  auto second = cli(args);
  EXPECT_EQ(second.out, first.out);

  auto listing = cli({"cache", "list", "--cache-dir", dir.string()}).doc();
  ASSERT_FALSE(listing["entries"].empty());
  EXPECT_EQ(listing["corrupt"], 0);

  auto victim = dir / listing["entries"][0]["file"].get<std::string>();
  {
    std::ifstream in(victim);
    std::stringstream ss;
    ss << in.rdbuf();
    auto doc = json::parse(ss.str());
    doc["count"] = doc["count"].get<std::uint64_t>() + 1;
    std::ofstream out(victim);
    out << doc.dump(2);
  }
  EXPECT_EQ(cli({"cache", "verify", "--cache-dir", dir.string()}).code, edltool::kCheckFailed);
  auto third = cli(args);
  EXPECT_NE(third.err.find("corrupt"), std::string::npos);
  EXPECT_EQ(third.out, first.out);
  EXPECT_EQ(cli({"cache", "verify", "--cache-dir", dir.string()}).code, edltool::kOk);

  std::ofstream(dir / listing["entries"][0]["file"].get<std::string>()) << "not json";
  EXPECT_EQ(cli(args).out, first.out);
  EXPECT_EQ(cli({"cache", "clear", "--cache-dir", dir.string()}).code, edltool::kOk);
  EXPECT_TRUE(cli({"cache", "list", "--cache-dir", dir.string()}).doc()["entries"].empty());
  fs::remove_all(dir);
}

TEST(Cli, CountOverBudget) {
  auto r = cli({"count", "--q", "3", "--budget", "100"});
  EXPECT_EQ(r.code, edltool::kBudget);
  auto big = cli({"count", "--q", "3", "--m", "1,3", "--x", "e", "--budget", "1000000"});
  EXPECT_EQ(big.code, edltool::kBudget);
  auto d = big.doc();
  EXPECT_EQ(d["status"], "skipped-budget");
  bool any = false;
  for (const auto& row : d["rows"]) any = any || row.value("status", "") == "skipped-budget";
  EXPECT_TRUE(any);
}

TEST(Cli, VerifyClaims) {
  auto t41 = cli({"verify", "thm-4.1", "--q", "3", "--e", "2", "--r", "3"});
  EXPECT_EQ(t41.code, edltool::kOk) << t41.out;
  EXPECT_EQ(t41.doc()["status"], "verified");

  auto cor = cli({"verify", "cor-4.3", "--q", "3", "--e", "2", "--r", "3"});
  EXPECT_EQ(cor.doc()["status"], "verified");

  auto unr = cli({"verify", "--claim", "unramified"});
  EXPECT_EQ(unr.code, edltool::kOk);
  EXPECT_EQ(unr.doc()["status"], "consistent");

  auto stab = cli({"verify", "stabilizer", "--q", "2"});
  EXPECT_EQ(stab.code, edltool::kCheckFailed);
  EXPECT_EQ(stab.doc()["status"], "failed");

  // reports carry no timing unless asked for, so reruns are byte-identical
  EXPECT_EQ(cli({"verify", "group-orders"}).out, cli({"verify", "group-orders"}).out);
  EXPECT_TRUE(cli({"verify", "group-orders", "--timing"}).doc()["runs"][0].contains("wall_time_s"));
}

TEST(Cli, OutFile) {
  auto dir = fresh_dir("out");
  fs::create_directories(dir);
  auto file = dir / "report.json";
  auto r = cli({"verify", "group-orders", "--q", "2", "--out", file.string()});
  EXPECT_EQ(r.code, edltool::kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(file);
  EXPECT_EQ(json::parse(in)["status"], "verified");
  fs::remove_all(dir);
}

TEST(Registry, ManifestCoversEveryCriterion) {
  EXPECT_EQ(edltool::claims().size(), 14u);
  for (int n = 1; n <= 14; ++n) {
    auto* c = edltool::find_criterion(n);
    ASSERT_NE(c, nullptr) << n;
    EXPECT_FALSE(c->runs.empty());
    EXPECT_TRUE(c->kind == "exact" || c->kind == "count");
    for (const auto& r : c->runs) EXPECT_NO_THROW(r.validate());
  }
  auto list = cli({"verify", "--list"}).doc();
  EXPECT_EQ(list["claims"].size(), 14u);
}

TEST(Registry, ParseLevels) {
  EXPECT_EQ(edltool::parse_levels("1..3"), (std::vector<unsigned>{1, 2, 3}));
  EXPECT_EQ(edltool::parse_levels("2"), (std::vector<unsigned>{2}));
  EXPECT_EQ(edltool::parse_levels("1,4"), (std::vector<unsigned>{1, 4}));
  EXPECT_THROW(edltool::parse_levels("0"), edl::Error);
  EXPECT_THROW(edltool::parse_levels("a"), edl::Error);
  EXPECT_THROW(edltool::parse_levels("1,"), edl::Error);
}
