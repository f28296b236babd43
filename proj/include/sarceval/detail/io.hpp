#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace sarceval::detail {

/// Writes to a uniquely named sibling temp file, then renames over `path`.
/// Readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Throws DataError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace sarceval::detail
