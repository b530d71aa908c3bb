#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace edltool {

// One JSON file per count, named by the hash of its key and carrying a content hash over key and value.
class CountCache {
 public:
  explicit CountCache(std::filesystem::path dir);

  enum class Lookup { Hit, Miss, Corrupt };
  Lookup get(const nlohmann::ordered_json& key, std::uint64_t& count) const;
  void put(const nlohmann::ordered_json& key, std::uint64_t count) const;

  struct Entry {
    std::string file;
    bool valid = false;
    nlohmann::ordered_json key;
    std::uint64_t count = 0;
  };
  std::vector<Entry> entries() const;  // sorted by file name
  std::size_t clear() const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path file_for(const nlohmann::ordered_json& key) const;
  static std::string content_hash(const nlohmann::ordered_json& key, std::uint64_t count);
  static std::optional<Entry> read(const std::filesystem::path& f);

  std::filesystem::path dir_;
};

}  // namespace edltool
