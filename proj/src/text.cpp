#include "lexrel/text.hpp"

#include <algorithm>
#include <fstream>

#include "lexrel/errors.hpp"

namespace lexrel {

namespace {

constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes the codepoint starting at s[i]; advances i. Invalid sequences
// decode to U+FFFD one byte at a time, which keeps tokenize total.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    if (c < 0x80) {
        ++i;
        return c;
    } else if ((c & 0xE0) == 0xC0) {
        len = 2;
    } else if ((c & 0xF0) == 0xE0) {
        len = 3;
    } else if ((c & 0xF8) == 0xF0) {
        len = 4;
    } else {
        ++i;
        return kReplacementChar;
    }
    if (i + len > s.size()) {
        ++i;
        return kReplacementChar;
    }
    char32_t cp = c & (0x7F >> len);
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char cc = static_cast<unsigned char>(s[i + k]);
        if ((cc & 0xC0) != 0x80) {
            ++i;
            return kReplacementChar;
        }
        cp = (cp << 6) | (cc & 0x3F);
    }
    const char32_t cp_min = len == 2 ? 0x80 : len == 3 ? 0x800 : 0x10000;
    if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kReplacementChar;
    }
    i += len;
    return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

char32_t lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    // Latin-1 uppercase letters except the multiplication sign.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    return cp;
}

// Punctuation stripped from token edges. Apostrophes and hyphens are listed
// too: edge stripping removes them at boundaries while interior ones stay.
bool is_edge_punct(char32_t cp) {
    if (cp < 0x80) {
        // Locale-independent ASCII punctuation.
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    switch (cp) {
        case 0xA1: case 0xAB: case 0xBB: case 0xBF: // ¡ « » ¿
        case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
        case 0x2018: case 0x2019: case 0x201A: case 0x201C: case 0x201D: case 0x201E:
        case 0x2026: case 0x2032: case 0x2033: // … ′ ″
            return true;
        default:
            return false;
    }
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::vector<char32_t> current;

    auto flush = [&]() {
        if (current.empty()) return;
        std::size_t b = 0, e = current.size();
        while (b < e && is_edge_punct(current[b])) ++b;
        while (e > b && is_edge_punct(current[e - 1])) --e;
        if (b < e) {
            std::string tok;
            for (std::size_t k = b; k < e; ++k) encode_utf8(current[k], tok);
            tokens.push_back(std::move(tok));
        }
        current.clear();
    };

    std::size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = decode_utf8(text, i);
        if (is_space(cp)) {
            flush();
        } else {
            current.push_back(lower(cp));
        }
    }
    flush();
    return tokens;
}

void NgramTable::add_tokens(std::span<const std::string> tokens, const NgramOrders& orders) {
    if (orders.unigrams) {
        for (const std::string& t : tokens) add(t);
    }
    if (orders.bigrams && tokens.size() >= 2) {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            std::string bigram;
            bigram.reserve(tokens[i].size() + tokens[i + 1].size() + 1);
            bigram.append(tokens[i]);
            bigram.push_back(' ');
            bigram.append(tokens[i + 1]);
            add(std::move(bigram));
        }
    }
}

NgramTable extract_ngrams(std::span<const std::string> tokens, const NgramOrders& orders) {
    if (!orders.unigrams && !orders.bigrams)
        throw PreconditionError("extract_ngrams: at least one n-gram order must be requested");
    NgramTable table;
    table.add_tokens(tokens, orders);
    return table;
}

std::vector<std::string> top_k(const NgramTable& table, std::size_t k) {
    std::vector<std::pair<std::string_view, std::uint64_t>> entries;
    entries.reserve(table.counts.size());
    for (const auto& [ngram, count] : table.counts) entries.emplace_back(ngram, count);
    const std::size_t take = std::min(k, entries.size());
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(take),
                      entries.end(), [](const auto& a, const auto& b) {
                          if (a.second != b.second) return a.second > b.second;
                          return a.first < b.first;
                      });
    std::vector<std::string> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.emplace_back(entries[i].first);
    return out;
}

UnigramDistribution unigram_distribution(std::span<const Document> docs) {
    std::vector<std::vector<std::string>> toks;
    toks.reserve(docs.size());
    for (const Document& d : docs) toks.push_back(tokenize(d.text));
    return unigram_distribution_from_tokens(toks);
}

void write_ngram_csv(const std::filesystem::path& path, const NgramTable& table, std::size_t k) {
    const auto ranked = top_k(table, k == 0 ? table.counts.size() : k);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "ngram,count\n";
    for (const std::string& ngram : ranked) {
        out << '"';
        for (char c : ngram) {
            if (c == '"') out << "\"\"";
            else out << c;
        }
        out << "\"," << table.counts.at(ngram) << '\n';
    }
}

UnigramDistribution unigram_distribution_from_tokens(
    std::span<const std::vector<std::string>> docs_tokens) {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& tokens : docs_tokens) {
        for (const std::string& t : tokens) {
            ++counts[t];
            ++total;
        }
    }
    if (total == 0) throw PreconditionError("unigram_distribution: sample yields zero tokens");
    UnigramDistribution dist;
    dist.probs.reserve(counts.size());
    const double denom = static_cast<double>(total);
    for (auto& [token, count] : counts)
        dist.probs.emplace(token, static_cast<double>(count) / denom);
    return dist;
}

} // namespace lexrel
