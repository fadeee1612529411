#pragma once

#include <chrono>
#include <filesystem>
#include <string>

namespace jobrunner {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
void write_executable(const std::filesystem::path& path, std::string_view content);

/// ISO-8601 UTC timestamp with second resolution, e.g. 2024-05-01T12:00:00Z.
std::string iso8601_utc(std::chrono::system_clock::time_point tp);
std::string iso8601_now();

/// Archive date directory name, zero-padded mm-dd-yyyy from local time.
std::string archive_date_today();
bool is_valid_archive_date(const std::string& s);

/// Random 128-bit id in canonical 8-4-4-4-12 hex form.
std::string generate_run_id();

/// Lexically normalizes a relative path; throws PathEscapeError if the result
/// would climb above its starting point, Usage error if absolute.
std::filesystem::path normalize_relative(const std::filesystem::path& target);

} // namespace jobrunner
