#pragma once

// On-disk cache of pipeline stages.  Each file name carries a prefix of the
// digest of the stage it was built from, so a changed diagram set never
// pairs with stale relations or bases.  Unreadable or inconsistent entries
// are rebuilt.

#include <filesystem>
#include <string>

#include "chordbasis/basis.hpp"

namespace chordbasis {

inline constexpr const char* kVersion = "chordbasis 1.0.0";

class Cache {
 public:
  /// Disabled cache: every request recomputes and nothing is written.
  Cache() = default;
  explicit Cache(std::filesystem::path dir);

  /// $CHORDBASIS_CACHE if set, else $XDG_CACHE_HOME/chordbasis, else
  /// $HOME/.cache/chordbasis, else ./.chordbasis-cache.
  static std::filesystem::path default_dir();

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }

  DiagramSet diagrams(std::size_t m, std::size_t n, bool connected, const EnumerationOptions& opts);
  std::vector<Relation> relations(const DiagramSet& ds, const RelationOptions& opts);
  BasisResult basis(std::size_t m, std::size_t n, const BasisOptions& opts);

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

  std::filesystem::path diagrams_path(std::size_t m, std::size_t n, bool connected) const;
  std::filesystem::path relations_path(const DiagramSet& ds) const;
  std::filesystem::path basis_path(const DiagramSet& ds, const std::string& relations_digest) const;

 private:
  std::filesystem::path dir_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace chordbasis
