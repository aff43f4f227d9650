#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace kgforge::fs {

// Writes to a sibling temporary file and renames it over `path`, creating
// parent directories as needed. Throws IoError.
void write_atomic(const std::filesystem::path &path, std::string_view data);

// Throws IoError when the file cannot be read.
std::string read_file(const std::filesystem::path &path);

// nullopt when the file does not exist.
std::optional<std::string> try_read_file(const std::filesystem::path &path);

}  // namespace kgforge::fs
