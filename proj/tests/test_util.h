#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>


namespace testutil {

inline std::filesystem::path source_dir() { return KGFORGE_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path fixture(const std::string &name) {
  return source_dir() / "tests" / "fixtures" / name;
}

// Fresh directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> n{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("kgforge-test-" + std::to_string(rd()) + "-" + std::to_string(n++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &p) const { return path_ / p; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
