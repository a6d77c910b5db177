#include "hsd/csv.hpp"

#include <istream>
#include <ostream>

#include "hsd/common.hpp"

namespace hsd {

namespace {
enum class FieldState { kStart, kUnquoted, kQuoted, kClosed };
}

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;
    record_line_ = line_;

    std::string field;
    FieldState state = FieldState::kStart;
    const auto malformed = [this](const char* what) {
        throw DataError(std::string(what) + " in CSV record starting at line " +
                        std::to_string(record_line_));
    };

    for (;;) {
        if (c == EOF) {
            if (state == FieldState::kQuoted) malformed("unterminated quoted field");
            fields.push_back(std::move(field));
            return true;
        }
        const char ch = static_cast<char>(c);
        switch (state) {
            case FieldState::kQuoted:
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        state = FieldState::kClosed;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
                break;
            case FieldState::kStart:
            case FieldState::kUnquoted:
            case FieldState::kClosed:
                if (ch == ',') {
                    fields.push_back(std::move(field));
                    field.clear();
                    state = FieldState::kStart;
                } else if (ch == '\n' || ch == '\r') {
                    if (ch == '\r' && in_.peek() == '\n') in_.get();
                    ++line_;
                    fields.push_back(std::move(field));
                    return true;
                } else if (state == FieldState::kClosed) {
                    malformed("text after closing quote");
                } else if (ch == '"') {
                    if (state == FieldState::kUnquoted) malformed("stray quote");
                    state = FieldState::kQuoted;
                } else {
                    field.push_back(ch);
                    state = FieldState::kUnquoted;
                }
                break;
        }
        c = in_.get();
    }
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.put(',');
        const std::string& f = fields[i];
        const bool needs_quotes = f.find_first_of(",\"\r\n") != std::string::npos;
        if (needs_quotes) {
            out.put('"');
            for (const char ch : f) {
                if (ch == '"') out.put('"');
                out.put(ch);
            }
            out.put('"');
        } else {
            out << f;
        }
    }
    out.put('\n');
}

}  // namespace hsd
