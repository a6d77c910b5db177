#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hsd {

// RFC 4180 reader: quoted fields, doubled-quote escapes, embedded commas and
// line breaks, CRLF or LF records. Malformed input throws DataError with the
// 1-based line number where the record started.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads one record. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // Line where the last record returned by next() started.
    std::size_t record_line() const { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 1;
};

// Minimal quoting: fields containing comma, quote, CR, or LF are quoted with
// doubled quotes. Terminates the record with '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace hsd
