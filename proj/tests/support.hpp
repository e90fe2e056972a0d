#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "a11yrev/corpus.hpp"
#include "a11yrev/featurize.hpp"

namespace a11yrev::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("a11yrev-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Review review(std::string id, std::string text, Label label) {
  return Review{std::move(id), "App", "Tools", std::move(text), label};
}

/// Two-cluster toy data: positives carry features {0..4}, negatives {5..9}.
/// Every row has its class marker (0 or 5) plus a random subset of the rest.
inline DesignMatrix separable_toy(std::size_t per_class, std::uint64_t seed,
                                  std::uint32_t dimension = 256) {
  std::mt19937_64 rng(seed);
  DesignMatrix m;
  m.dimension = dimension;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool pos = i % 2 == 0;
    std::vector<SparseEntry> entries;
    const std::uint32_t base = pos ? 0 : 5;
    entries.push_back({base, 1.0});
    for (std::uint32_t f = 1; f < 5; ++f) {
      if (rng() % 2 == 0) entries.push_back({base + f, static_cast<double>(1 + rng() % 3)});
    }
    // shared noise feature present in both classes
    if (rng() % 3 == 0) entries.push_back({20, 1.0});
    m.rows.emplace_back(dimension, std::move(entries));
    m.labels.push_back(pos ? Label::accessibility : Label::other);
    m.ids.push_back("r" + std::to_string(i));
  }
  return m;
}

}  // namespace a11yrev::test
