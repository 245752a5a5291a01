#pragma once

// Persisted outputs share one shape: a block of '# key: value' comment lines
// followed by data rows. Headers carry the tool version, the parameters that
// produced the file, and a digest of the inputs, never a timestamp, so equal
// inputs give byte-identical files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace omegasum {

inline constexpr const char* kToolName = "omegasum";
inline constexpr const char* kToolVersion = "0.1.0";

struct Artifact {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> rows;

  void add(const std::string& key, const std::string& value) {
    meta.emplace_back(key, value);
  }
  // Returns empty string when absent.
  std::string get(const std::string& key) const;
};

// Prepends the standard "tool" header entry.
Artifact new_artifact();

void save_artifact(const std::filesystem::path& p, const Artifact& a);
Artifact load_artifact(const std::filesystem::path& p);

uint64_t fnv1a64(const void* data, size_t n);
uint64_t fnv1a64(const std::string& s);
std::string hex64(uint64_t v);

// Digest of a file's bytes, for input provenance headers.
std::string file_digest(const std::filesystem::path& p);

// Positive integers separated by whitespace or commas; '#' starts a comment.
std::vector<int> load_index_list(const std::filesystem::path& p);

}  // namespace omegasum
