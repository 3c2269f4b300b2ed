#include "laddr/csv.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "laddr/errors.hpp"
#include "laddr/io_util.hpp"

namespace laddr {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r") + 1;
    return s.substr(b, e - b);
}

bool skippable(const std::string& line) {
    std::string t = trim(line);
    return t.empty() || t[0] == '#';
}

} // namespace

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (skippable(line)) continue;
        header_ = split_fields(line);
        break;
    }
    if (header_.empty())
        throw ValidationError(source_ + ": empty input (no header row)");
    for (const auto& name : header_)
        if (name.empty())
            throw ValidationError(source_ + ": empty column name in header");
}

std::optional<CsvRow> CsvReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (skippable(line)) continue;
        CsvRow row;
        row.number = row_++;
        row.line = line_;
        auto fields = split_fields(line);
        if (fields.size() != header_.size()) {
            std::ostringstream msg;
            msg << source_ << ":" << line_ << ": expected " << header_.size()
                << " fields, got " << fields.size();
            row.error = msg.str();
            return row;
        }
        row.values.reserve(fields.size());
        for (size_t c = 0; c < fields.size(); ++c) {
            try {
                std::ostringstream ctx;
                ctx << source_ << ":" << line_ << " column '" << header_[c] << "'";
                row.values.push_back(parse_double(fields[c], ctx.str()));
            } catch (const ValidationError& e) {
                row.error = e.what();
                return row;
            }
        }
        return row;
    }
    return std::nullopt;
}

size_t Table::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw ValidationError("no such column: '" + name + "'");
}

Table read_csv_table(std::istream& in, const std::string& source_name) {
    CsvReader reader(in, source_name);
    Table t;
    t.columns = reader.header();
    while (auto row = reader.next()) {
        if (!row->ok()) throw ValidationError(row->error);
        t.rows.push_back(std::move(row->values));
    }
    return t;
}

Table read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    return read_csv_table(in, path);
}

std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows,
                   const std::vector<std::string>& comment_lines) {
    std::ostringstream out;
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    return out.str();
}

} // namespace laddr
