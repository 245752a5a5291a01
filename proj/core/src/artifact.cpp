#include "omegasum/artifact.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace omegasum {

std::string Artifact::get(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  return "";
}

Artifact new_artifact() {
  Artifact a;
  a.add("tool", std::string(kToolName) + " " + kToolVersion);
  return a;
}

void save_artifact(const std::filesystem::path& p, const Artifact& a) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  for (const auto& [k, v] : a.meta) out << "# " << k << ": " << v << "\n";
  for (const auto& r : a.rows) out << r << "\n";
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

Artifact load_artifact(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  Artifact a;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      size_t start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      size_t colon = body.find(':', start);
      if (colon == std::string::npos) continue;
      std::string key = body.substr(start, colon - start);
      size_t vstart = body.find_first_not_of(' ', colon + 1);
      a.add(key, vstart == std::string::npos ? "" : body.substr(vstart));
    } else {
      a.rows.push_back(line);
    }
  }
  return a;
}

uint64_t fnv1a64(const void* data, size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string hex64(uint64_t v) {
  static const char* d = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = d[v & 0xf];
    v >>= 4;
  }
  return s;
}

std::string file_digest(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const unsigned char* q = reinterpret_cast<const unsigned char*>(buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= q[i];
      h *= 1099511628211ull;
    }
  }
  return hex64(h);
}

std::vector<int> load_index_list(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::vector<int> out;
  std::string line;
  while (std::getline(in, line)) {
    if (size_t hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    long v;
    while (ls >> v) {
      if (v < 1) throw std::runtime_error("index list entry below 1");
      out.push_back(static_cast<int>(v));
    }
    if (!ls.eof())
      throw std::runtime_error("malformed index list line '" + line + "'");
  }
  return out;
}

}  // namespace omegasum
