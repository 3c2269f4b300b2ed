#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace laddr {

// Numeric CSV with one header row of column names. Blank lines and lines
// starting with '#' are skipped everywhere; '#' lines at the top of our own
// artifacts carry provenance.

struct CsvRow {
    size_t number = 0; // 0-based data-row index (header and comments excluded)
    size_t line = 0;   // 1-based physical line in the source
    std::vector<double> values;
    std::string error; // empty = well-formed row
    bool ok() const { return error.empty(); }
};

class CsvReader {
public:
    CsvReader(std::istream& in, std::string source_name);

    const std::vector<std::string>& header() const { return header_; }
    const std::string& source() const { return source_; }

    // Next data row, or nullopt at end of stream. Malformed rows come back
    // with `error` set so callers can decide whether to throw or continue.
    std::optional<CsvRow> next();

private:
    std::istream& in_;
    std::string source_;
    std::vector<std::string> header_;
    size_t line_ = 0;
    size_t row_ = 0;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    size_t column_index(const std::string& name) const; // throws if absent
};

// Strict read: throws ValidationError on the first malformed row.
Table read_csv_table(std::istream& in, const std::string& source_name);
Table read_csv_file(const std::string& path);

// `comment_lines` are emitted verbatim, each prefixed with "# ".
std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& comment_lines = {});

std::vector<std::string> split_fields(const std::string& line);

} // namespace laddr
