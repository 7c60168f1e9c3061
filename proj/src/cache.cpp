#include "chordbasis/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chordbasis/digest.hpp"

namespace chordbasis {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ChordError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ChordError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ChordError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {}

fs::path Cache::default_dir() {
  if (const char* env = std::getenv("CHORDBASIS_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "chordbasis";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "chordbasis";
  return ".chordbasis-cache";
}

namespace {

std::string stem(std::size_t m, std::size_t n) { return "m" + std::to_string(m) + "-n" + std::to_string(n); }

std::string short_digest(const std::string& d) { return d.substr(0, 16); }

std::string relations_text(const DiagramSet& ds, const std::vector<Relation>& rows) {
  std::ostringstream os;
  write_relations(os, ds, rows);
  return os.str();
}

}  // namespace

fs::path Cache::diagrams_path(std::size_t m, std::size_t n, bool connected) const {
  return dir_ / ("diagrams-" + stem(m, n) + (connected ? "-connected" : "-all") + ".txt");
}

fs::path Cache::relations_path(const DiagramSet& ds) const {
  return dir_ / ("relations-" + stem(ds.m, ds.n) + "-" + short_digest(digest(ds)) + ".txt");
}

fs::path Cache::basis_path(const DiagramSet& ds, const std::string& relations_digest) const {
  return dir_ / ("basis-" + stem(ds.m, ds.n) + "-" + short_digest(relations_digest) + ".txt");
}

DiagramSet Cache::diagrams(std::size_t m, std::size_t n, bool connected, const EnumerationOptions& opts) {
  const fs::path path = diagrams_path(m, n, connected);
  if (enabled() && fs::exists(path)) {
    try {
      std::istringstream in(read_file(path));
      DiagramSet ds = read_diagram_set(in);
      if (ds.m == m && ds.n == n && ds.connected_only == connected) {
        ++hits_;
        return ds;
      }
    } catch (const std::exception&) {
      // rebuilt below
    }
  }
  ++misses_;
  DiagramSet ds = connected ? enumerate_connected(m, n, opts) : enumerate_all(m, n, opts);
  if (enabled()) {
    std::ostringstream out;
    write_diagram_set(out, ds);
    write_file_atomic(path, out.str());
  }
  return ds;
}

std::vector<Relation> Cache::relations(const DiagramSet& ds, const RelationOptions& opts) {
  const fs::path path = relations_path(ds);
  if (enabled() && fs::exists(path)) {
    try {
      std::istringstream in(read_file(path));
      auto rows = read_relations(in, ds);
      ++hits_;
      return rows;
    } catch (const std::exception&) {
    }
  }
  ++misses_;
  auto rows = generate_relations(ds, opts);
  if (enabled()) write_file_atomic(path, relations_text(ds, rows));
  return rows;
}

BasisResult Cache::basis(std::size_t m, std::size_t n, const BasisOptions& opts) {
  DiagramSet ds = diagrams(m, n, true, opts.enumeration);
  opts.rref.deadline.check("relation generation");
  const auto rows = relations(ds, opts.relations);
  const std::string rel_digest = sha256_hex(relations_text(ds, rows));
  const fs::path path = basis_path(ds, rel_digest);
  if (enabled() && fs::exists(path)) {
    try {
      std::istringstream in(read_file(path));
      BasisResult b = read_basis(in);
      if (b.diagrams == ds) {
        ++hits_;
        return b;
      }
    } catch (const std::exception&) {
    }
  }
  ++misses_;
  BasisResult b = basis_from_relations(std::move(ds), rows, opts);
  if (enabled()) {
    std::ostringstream out;
    write_basis(out, b);
    write_file_atomic(path, out.str());
  }
  return b;
}

}  // namespace chordbasis
