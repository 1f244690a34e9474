#pragma once

#include <istream>
#include <string>
#include <vector>

namespace textclust {

// Streaming reader for comma-separated, double-quote-quoted, UTF-8 CSV
// (the dialect the public headline dumps ship in). Quoted fields may
// contain commas, doubled quotes and newlines. Accepts LF and CRLF line
// ends and a leading UTF-8 BOM.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads one record into fields. Returns false at end of input.
    bool next(std::vector<std::string>& fields) {
        fields.clear();
        std::string cell;
        bool in_quotes = false;
        bool saw_any = false;
        int c;
        while ((c = in_.get()) != std::char_traits<char>::eof()) {
            if (first_byte_) {
                first_byte_ = false;
                if (c == 0xEF && in_.peek() == 0xBB) {  // UTF-8 BOM
                    in_.get();
                    if (in_.peek() == 0xBF) {
                        in_.get();
                        continue;
                    }
                    cell.push_back(static_cast<char>(0xEF));
                    cell.push_back(static_cast<char>(0xBB));
                    saw_any = true;
                    continue;
                }
            }
            saw_any = true;
            const char ch = static_cast<char>(c);
            if (in_quotes) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        cell.push_back('"');
                    } else {
                        in_quotes = false;
                    }
                } else {
                    cell.push_back(ch);
                }
                continue;
            }
            switch (ch) {
                case '"':
                    in_quotes = true;
                    break;
                case ',':
                    fields.push_back(std::move(cell));
                    cell.clear();
                    break;
                case '\r':
                    if (in_.peek() == '\n') in_.get();
                    [[fallthrough]];
                case '\n':
                    fields.push_back(std::move(cell));
                    return true;
                default:
                    cell.push_back(ch);
            }
        }
        if (!saw_any) return false;
        fields.push_back(std::move(cell));  // final record without trailing newline
        return true;
    }

private:
    std::istream& in_;
    bool first_byte_ = true;
};

}  // namespace textclust
