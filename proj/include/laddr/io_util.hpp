#pragma once

#include <filesystem>
#include <string>

namespace laddr {

// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

// Parses a finite double from a whole, trimmed field. Throws ValidationError
// (with `context` in the message) on garbage, partial parses, or non-finite
// values.
double parse_double(const std::string& field, const std::string& context);

// Write-then-rename so readers never observe a half-written artifact.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

} // namespace laddr
