#include "lexrel/csv.hpp"

namespace lexrel {

CsvParser::CsvParser(std::istream& in, CsvFormat format) : in_(in), fmt_(format) {}

bool CsvParser::next(CsvRecord& record, std::string* error) {
    record.fields.clear();
    record.line = line_;
    if (error) error->clear();

    int first = in_.peek();
    if (first == std::char_traits<char>::eof()) return false;

    std::string field;
    bool in_quotes = false;
    bool any_char = false;

    for (;;) {
        int ic = in_.get();
        if (ic == std::char_traits<char>::eof()) {
            if (in_quotes && error) *error = "unterminated_quote";
            if (!any_char && record.fields.empty()) return false;
            record.fields.push_back(std::move(field));
            return true;
        }
        const char c = static_cast<char>(ic);
        if (c == '\n') ++line_;

        if (in_quotes) {
            any_char = true;
            if (c == fmt_.quote) {
                if (in_.peek() == fmt_.quote) {
                    field.push_back(fmt_.quote);
                    in_.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }

        if (c == fmt_.quote && field.empty()) {
            in_quotes = true;
            any_char = true;
        } else if (c == fmt_.delimiter) {
            record.fields.push_back(std::move(field));
            field.clear();
            any_char = true;
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            record.fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
            any_char = true;
        }
    }
}

std::size_t sanitize_utf8(std::string& s) {
    // Single pass; rebuilds the string only if a bad sequence shows up.
    static const char kReplacement[] = "\xEF\xBF\xBD"; // U+FFFD
    std::string out;
    std::size_t replacements = 0;
    bool copying = false;
    std::size_t i = 0;
    const std::size_t n = s.size();

    auto bad = [&](std::size_t from, std::size_t skip) {
        if (!copying) {
            out.assign(s, 0, from);
            copying = true;
        }
        out.append(kReplacement, 3);
        ++replacements;
        i = from + skip;
    };

    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        std::size_t len;
        unsigned cp_min;
        if (c < 0x80) {
            len = 1;
            cp_min = 0;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp_min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp_min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp_min = 0x10000;
        } else {
            bad(i, 1);
            continue;
        }
        if (i + len > n) {
            bad(i, 1);
            continue;
        }
        unsigned cp = (len == 1) ? c : (c & (0x7F >> len));
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok || cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            bad(i, 1);
            continue;
        }
        if (copying) out.append(s, i, len);
        i += len;
    }
    if (copying) s = std::move(out);
    return replacements;
}

} // namespace lexrel
