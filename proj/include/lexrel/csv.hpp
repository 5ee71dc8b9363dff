#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace lexrel {

/// Dialect of a delimited text file. Defaults match plain CSV; set
/// delimiter='\t' for TSV, ';' for ETHOS-style files.
struct CsvFormat {
    char delimiter = ',';
    char quote = '"';
    bool has_header = true;
};

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0; // 1-based line number where the record starts
};

/// Incremental RFC-4180-style record reader. Quoted fields may contain the
/// delimiter, doubled quotes, and embedded newlines; CRLF line ends are
/// accepted. The parser never throws on malformed content: next() reports a
/// reason string and the caller decides whether to skip or abort.
class CsvParser {
public:
    CsvParser(std::istream& in, CsvFormat format);

    /// Reads one record. Returns false at end of input. On a malformed
    /// record (unterminated quote at EOF) the record is still returned
    /// best-effort and *error is set to a short reason.
    bool next(CsvRecord& record, std::string* error);

private:
    std::istream& in_;
    CsvFormat fmt_;
    std::size_t line_ = 1;
};

/// Replaces every invalid UTF-8 sequence in s with U+FFFD and returns the
/// number of replacements made. Valid input is left untouched.
std::size_t sanitize_utf8(std::string& s);

} // namespace lexrel
