#include "edltool/cache.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "edl/varieties.hpp"

namespace edltool {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

CountCache::CountCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path CountCache::file_for(const ordered_json& key) const { return dir_ / (edl::fnv1a_hex(key.dump()) + ".json"); }

std::string CountCache::content_hash(const ordered_json& key, std::uint64_t count) {
  return edl::fnv1a_hex(key.dump() + "|" + std::to_string(count));
}

std::optional<CountCache::Entry> CountCache::read(const fs::path& f) {
  std::ifstream in(f);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  Entry e;
  e.file = f.filename().string();
  auto doc = ordered_json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("key") || !doc.contains("count") ||
      !doc.contains("content_hash") || !doc["count"].is_number_unsigned() || !doc["content_hash"].is_string())
    return e;
  e.key = doc["key"];
  e.count = doc["count"].get<std::uint64_t>();
  e.valid = doc["content_hash"].get<std::string>() == content_hash(e.key, e.count) &&
            f.filename().string() == edl::fnv1a_hex(e.key.dump()) + ".json";
  return e;
}

CountCache::Lookup CountCache::get(const ordered_json& key, std::uint64_t& count) const {
  auto f = file_for(key);
  if (!fs::exists(f)) return Lookup::Miss;
  auto e = read(f);
  if (!e || !e->valid || e->key != key) return Lookup::Corrupt;
  count = e->count;
  return Lookup::Hit;
}

void CountCache::put(const ordered_json& key, std::uint64_t count) const {
  ordered_json doc;
  doc["schema"] = 1;
  doc["key"] = key;
  doc["count"] = count;
  doc["content_hash"] = content_hash(key, count);
  auto f = file_for(key);
  auto tmp = f;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump(2) << '\n';
  }
  fs::rename(tmp, f);
}

std::vector<CountCache::Entry> CountCache::entries() const {
  std::vector<Entry> out;
  for (const auto& d : fs::directory_iterator(dir_)) {
    if (d.path().extension() != ".json") continue;
    if (auto e = read(d.path())) out.push_back(std::move(*e));
  }
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.file < b.file; });
  return out;
}

std::size_t CountCache::clear() const {
  std::size_t n = 0;
  for (const auto& d : fs::directory_iterator(dir_))
    if (d.path().extension() == ".json" || d.path().extension() == ".tmp") n += fs::remove(d.path());
  return n;
}

}  // namespace edltool
