// SPDX-License-Identifier: Apache-2.0
#include "temp_dir.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace testsupport {

namespace fs = std::filesystem;

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  for (int attempt = 0; attempt < 100; ++attempt) {
    const fs::path candidate = fs::temp_directory_path() / ("codecarta-test-" + std::to_string(rd()) + "-" +
                                                            std::to_string(counter++));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void TempDir::write(const fs::path& rel, std::string_view text) const {
  const fs::path full = path_ / rel;
  fs::create_directories(full.parent_path());
  std::ofstream out(full, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("cannot write " + full.string());
}

}  // namespace testsupport
