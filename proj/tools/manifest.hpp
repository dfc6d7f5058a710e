#ifndef GSLAB_TOOLS_MANIFEST_HPP
#define GSLAB_TOOLS_MANIFEST_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gslab/version.hpp"

namespace gslab::cli {

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Everything needed to reproduce a run byte for byte. Embedded in every
/// JSON report; hashed into every CSV header.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> params;  // resolved values, sorted by key
  std::uint64_t seed = 0;
  std::string out;

  void set(const std::string& key, const std::string& value) { params[key] = value; }
  void set(const std::string& key, double value) { params[key] = fmt_double(value); }
  void set(const std::string& key, int value) { params[key] = std::to_string(value); }

  std::string canonical() const {
    std::string s = "gslab/";
    s += version;
    s += ' ';
    s += subcommand;
    for (const auto& [k, v] : params) {
      s += ' ';
      s += k;
      s += '=';
      s += v;
    }
    s += " seed=" + std::to_string(seed);
    return s;
  }

  std::uint64_t hash() const {  // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string hash_hex() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = std::string("gslab/") + version;
    j["subcommand"] = subcommand;
    j["params"] = params;
    j["seed"] = seed;
    j["hash"] = hash_hex();
    return j;
  }
};

/// CSV sink: a manifest-hash comment line, a header row naming units, then
/// rows. All numbers are printed with %.17g so reruns are byte-identical.
class CsvWriter {
 public:
  CsvWriter(const RunManifest& manifest, const std::string& header) {
    body_ = "# manifest_hash=" + manifest.hash_hex() + " tool=gslab/" + version + "\n";
    body_ += header + "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  void flush(const std::string& path) const {
    if (path.empty()) {
      std::cout << body_;
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << body_;
  }

 private:
  std::string body_;
};

inline void write_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  os << j.dump(2) << "\n";
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open input file: " + path);
  return nlohmann::json::parse(is);  // throws with byte-position diagnostics
}

} // namespace gslab::cli

#endif
