// io.hpp — deterministic number formatting and file output

#pragma once

#include <filesystem>
#include <string>

namespace mqme::io {

// Shortest decimal string that round-trips to the same double ("nan"/"inf" for non-finite).
std::string format_double(double v);

// Writes `text` to `path` (binary mode, LF preserved), creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

std::string read_text(const std::filesystem::path& path);

} // namespace mqme::io
