#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textclust/csv.hpp"
#include "textclust/error.hpp"

namespace textclust {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;
};

// One headline. id is the document's 0-based position in ingestion order
// and is unique within its corpus.
struct Document {
    std::int64_t id = 0;
    std::optional<Date> date;
    std::string text;
};

struct Corpus {
    std::vector<Document> documents;
    std::string source;  // file path or "inline"
    std::size_t skipped_rows = 0;     // rows dropped for empty text
    std::size_t malformed_dates = 0;  // rows kept with their date cleared

    std::size_t size() const { return documents.size(); }
    bool empty() const { return documents.empty(); }
};

namespace detail {

inline bool is_blank(const std::string& s) {
    for (const char ch : s) {
        if (ch != ' ' && ch != '\t' && ch != '\r' && ch != '\n' && ch != '\f' && ch != '\v')
            return false;
    }
    return true;
}

// Dates ship as 8-digit YYYYMMDD integers; anything else is malformed.
inline std::optional<Date> parse_yyyymmdd(const std::string& s) {
    if (s.size() != 8) return std::nullopt;
    for (const char ch : s) {
        if (ch < '0' || ch > '9') return std::nullopt;
    }
    const int year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    const int month = (s[4] - '0') * 10 + (s[5] - '0');
    const int day = (s[6] - '0') * 10 + (s[7] - '0');
    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    return Date{year, month, day};
}

}  // namespace detail

// Loads a headline corpus from CSV. The header row is required and must
// contain text_column (and date_column when given). Rows whose text cell
// is empty after trimming are skipped and counted; rows with a malformed
// date are kept with the date absent.
inline Corpus load_csv(const std::string& path, const std::string& text_column,
                       const std::optional<std::string>& date_column = std::nullopt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open CSV file: " + path);

    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw data_error(path + ": missing header row");

    std::size_t text_idx = fields.size();
    std::size_t date_idx = fields.size();
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == text_column) text_idx = i;
        if (date_column && fields[i] == *date_column) date_idx = i;
    }
    if (text_idx == fields.size())
        throw data_error(path + ": no column named '" + text_column + "' in header");
    if (date_column && date_idx == fields.size())
        throw data_error(path + ": no column named '" + *date_column + "' in header");

    Corpus corpus;
    corpus.source = path;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (text_idx >= fields.size() || detail::is_blank(fields[text_idx])) {
            ++corpus.skipped_rows;
            continue;
        }
        Document doc;
        doc.id = static_cast<std::int64_t>(corpus.documents.size());
        doc.text = fields[text_idx];
        if (date_column) {
            if (date_idx < fields.size()) {
                doc.date = detail::parse_yyyymmdd(fields[date_idx]);
            }
            if (!doc.date) ++corpus.malformed_dates;
        }
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

// A per-year slice: documents re-numbered 0-based in original relative
// order, plus the mapping back to the ids they had in the full corpus.
struct YearSlice {
    Corpus corpus;
    std::vector<std::int64_t> original_ids;
};

// Partitions a fully dated corpus by publication year. Any undated
// document is a fatal error naming its id.
inline std::map<int, YearSlice> split_by_year(const Corpus& corpus) {
    for (const Document& doc : corpus.documents) {
        if (!doc.date)
            throw data_error("document " + std::to_string(doc.id) +
                             " has no date; cannot split by year");
    }
    std::map<int, YearSlice> slices;
    for (const Document& doc : corpus.documents) {
        YearSlice& slice = slices[doc.date->year];
        Document copy = doc;
        copy.id = static_cast<std::int64_t>(slice.corpus.documents.size());
        slice.corpus.documents.push_back(std::move(copy));
        slice.original_ids.push_back(doc.id);
    }
    for (auto& [year, slice] : slices) {
        slice.corpus.source = corpus.source + "#" + std::to_string(year);
    }
    return slices;
}

}  // namespace textclust
