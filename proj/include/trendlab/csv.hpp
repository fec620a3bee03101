#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace trendlab::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a named header column; throws if absent.
    std::size_t column(const std::string& name) const;
};

/// Parse a comma-delimited file with a header row. Handles quoted fields,
/// doubled-quote escapes, embedded newlines, and CRLF line endings.
Table read_file(const std::filesystem::path& path);

/// Same parser over an in-memory buffer (used by tests).
Table parse(const std::string& text);

/// Quote a field if it contains a comma, quote, or newline.
std::string escape(const std::string& field);

/// Locale-independent float formatting used for every emitted number, so
/// artifact bytes are stable across runs.
std::string format_double(double value);

}  // namespace trendlab::csv
