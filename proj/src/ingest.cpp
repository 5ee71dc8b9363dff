#include "lexrel/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>

#include <nlohmann/json.hpp>

#include "lexrel/errors.hpp"

namespace lexrel {

nlohmann::json IngestReport::to_json() const {
    nlohmann::json reasons = nlohmann::json::object();
    for (const auto& [reason, count] : skip_reasons) reasons[reason] = count;
    return {{"rows_read", rows_read},
            {"rows_kept", rows_kept},
            {"rows_skipped", rows_skipped},
            {"skip_reasons", reasons},
            {"utf8_replacements", utf8_replacements}};
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    const std::string t = trim(s);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_double(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    try {
        std::size_t pos = 0;
        const double value = std::stod(t, &pos);
        if (pos != t.size()) return std::nullopt;
        return value;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Resolves a configured column name (or decimal index when the file has no
// header) to a field index. Missing columns are adapter errors.
std::size_t resolve_column(const std::vector<std::string>& header, bool has_header,
                           const std::string& column, const char* adapter) {
    if (!has_header) {
        const auto idx = parse_int(column);
        if (!idx || *idx < 0)
            throw IngestError(std::string(adapter) + " adapter: with has_header=false, column '" +
                              column + "' must be a 0-based index");
        return static_cast<std::size_t>(*idx);
    }
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end())
        throw IngestError(std::string(adapter) + " adapter: column '" + column +
                          "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

struct RowReader {
    std::ifstream file;
    CsvParser parser;
    std::vector<std::string> header;
    std::size_t width = 0;

    RowReader(const std::filesystem::path& path, const CsvFormat& format)
        : file(path, std::ios::binary), parser(file, format) {
        if (!file) throw IngestError("cannot open " + path.string());
        if (format.has_header) {
            CsvRecord rec;
            std::string err;
            if (!parser.next(rec, &err) || !err.empty())
                throw IngestError("cannot read header of " + path.string());
            for (std::string& f : rec.fields) sanitize_utf8(f);
            header = std::move(rec.fields);
            width = header.size();
        }
    }
};

// Shared row loop: parses records, applies per-adapter row conversion, and
// maintains the ingest report. The converter returns a document or a skip
// reason.
using RowFn = std::function<std::optional<std::string>(const std::vector<std::string>&, Document&)>;

Corpus load_rows(const std::filesystem::path& path, const CsvFormat& format, IngestReport& report,
                 CorpusSource source, const std::string& name, std::size_t min_width,
                 const RowFn& convert) {
    RowReader reader(path, format);
    Corpus corpus{{}, source, "1", name};

    CsvRecord rec;
    std::string err;
    while (reader.parser.next(rec, &err)) {
        if (rec.fields.size() == 1 && rec.fields[0].empty()) {
            ++report.rows_read;
            report.skip("blank_line");
            continue;
        }
        ++report.rows_read;
        if (!err.empty()) {
            report.skip(err);
            continue;
        }
        if (reader.width == 0) reader.width = std::max(rec.fields.size(), min_width);
        if (rec.fields.size() != reader.width) {
            report.skip("column_count_mismatch");
            continue;
        }
        for (std::string& f : rec.fields) report.utf8_replacements += sanitize_utf8(f);

        Document doc;
        doc.id = name + ":" + std::to_string(report.rows_read);
        if (auto reason = convert(rec.fields, doc)) {
            report.skip(*reason);
            continue;
        }
        ++report.rows_kept;
        corpus.documents.push_back(std::move(doc));
    }
    corpus.validate();
    return corpus;
}

} // namespace

Corpus load_sarc(const std::filesystem::path& path, const SarcColumns& columns,
                 const CsvFormat& format, IngestReport& report) {
    RowReader probe(path, format);
    const std::size_t c_text = resolve_column(probe.header, format.has_header, columns.text, "sarc");
    const std::size_t c_parent =
        resolve_column(probe.header, format.has_header, columns.parent, "sarc");
    const std::size_t c_label =
        resolve_column(probe.header, format.has_header, columns.label, "sarc");
    const std::size_t c_ups = resolve_column(probe.header, format.has_header, columns.ups, "sarc");
    const std::size_t c_downs =
        resolve_column(probe.header, format.has_header, columns.downs, "sarc");
    const std::size_t min_width =
        1 + std::max({c_text, c_parent, c_label, c_ups, c_downs});

    return load_rows(path, format, report, CorpusSource::Sarc, "sarc", min_width,
                     [&](const std::vector<std::string>& f, Document& d) -> std::optional<std::string> {
                         const std::string label = trim(f[c_label]);
                         if (label == "1")
                             d.canonical_class = CanonicalClass::Sarcasm;
                         else if (label == "0")
                             d.canonical_class = CanonicalClass::Neutral;
                         else
                             return "bad_label";
                         d.raw_label = label;

                         d.text = trim(f[c_text]);
                         if (d.text.empty()) return "empty_text";

                         const std::string parent = trim(f[c_parent]);
                         if (!parent.empty()) d.parent_text = parent;

                         const auto ups = parse_int(f[c_ups]);
                         const auto downs = parse_int(f[c_downs]);
                         if (!ups || !downs) return "bad_votes";
                         d.ups = *ups;
                         d.downs = *downs;
                         return std::nullopt;
                     });
}

Corpus load_implicit_hate(const std::filesystem::path& path, const ImplicitHateColumns& columns,
                          const CsvFormat& format, IngestReport& report) {
    RowReader probe(path, format);
    const std::size_t c_text =
        resolve_column(probe.header, format.has_header, columns.text, "implicit_hate");
    const std::size_t c_class =
        resolve_column(probe.header, format.has_header, columns.klass, "implicit_hate");
    const std::size_t min_width = 1 + std::max(c_text, c_class);

    return load_rows(path, format, report, CorpusSource::ImplicitHateCorpus, "implicit_hate",
                     min_width,
                     [&](const std::vector<std::string>& f, Document& d) -> std::optional<std::string> {
                         const std::string klass = trim(f[c_class]);
                         if (klass == columns.not_hate_value)
                             d.canonical_class = CanonicalClass::Neutral;
                         else if (klass == columns.implicit_value)
                             d.canonical_class = CanonicalClass::ImplicitHate;
                         else if (klass == columns.explicit_value)
                             d.canonical_class = CanonicalClass::ExplicitHate;
                         else
                             return "unknown_class";
                         d.raw_label = klass;

                         d.text = trim(f[c_text]);
                         if (d.text.empty()) return "empty_text";
                         return std::nullopt;
                     });
}

Corpus load_ethos(const std::filesystem::path& path, const EthosColumns& columns,
                  const CsvFormat& format, IngestReport& report, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("ethos threshold must lie in (0,1)");

    RowReader probe(path, format);
    const std::size_t c_text =
        resolve_column(probe.header, format.has_header, columns.text, "ethos");
    const std::size_t c_score =
        resolve_column(probe.header, format.has_header, columns.score, "ethos");
    const std::size_t min_width = 1 + std::max(c_text, c_score);

    return load_rows(path, format, report, CorpusSource::Ethos, "ethos", min_width,
                     [&](const std::vector<std::string>& f, Document& d) -> std::optional<std::string> {
                         const auto score = parse_double(f[c_score]);
                         if (!score) return "bad_score";
                         if (*score < 0.0 || *score > 1.0) return "score_out_of_range";
                         if (*score >= threshold) {
                             d.canonical_class = CanonicalClass::ExplicitHate;
                             d.mixed_hate = true;
                         } else {
                             d.canonical_class = CanonicalClass::Neutral;
                         }
                         d.raw_label = trim(f[c_score]);

                         d.text = trim(f[c_text]);
                         if (d.text.empty()) return "empty_text";
                         return std::nullopt;
                     });
}

Corpus load_text_corpus(const std::filesystem::path& path, const TextOnlyColumns& columns,
                        const CsvFormat& format, IngestReport& report, CorpusSource source,
                        const std::string& name) {
    RowReader probe(path, format);
    const std::size_t c_text = resolve_column(probe.header, format.has_header, columns.text, "text");

    return load_rows(path, format, report, source, name, c_text + 1,
                     [&](const std::vector<std::string>& f, Document& d) -> std::optional<std::string> {
                         d.text = trim(f[c_text]);
                         if (d.text.empty()) return "empty_text";
                         return std::nullopt;
                     });
}

nlohmann::json document_to_json(const Document& d) {
    nlohmann::json j{{"id", d.id},
                     {"text", d.text},
                     {"raw_label", d.raw_label},
                     {"canonical_class", to_string(d.canonical_class)}};
    if (d.parent_text) j["parent_text"] = *d.parent_text;
    if (d.mixed_hate) j["mixed_hate"] = true;
    if (d.ups) j["ups"] = *d.ups;
    if (d.downs) j["downs"] = *d.downs;
    return j;
}

Document document_from_json(const nlohmann::json& j) {
    Document d;
    d.id = j.at("id").get<std::string>();
    d.text = j.at("text").get<std::string>();
    d.raw_label = j.value("raw_label", std::string());
    d.canonical_class = canonical_class_from_string(j.at("canonical_class").get<std::string>());
    if (j.contains("parent_text")) d.parent_text = j["parent_text"].get<std::string>();
    d.mixed_hate = j.value("mixed_hate", false);
    if (j.contains("ups")) d.ups = j["ups"].get<std::int64_t>();
    if (j.contains("downs")) d.downs = j["downs"].get<std::int64_t>();
    return d;
}

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write " + path.string());
    for (const Document& d : corpus.documents) out << document_to_json(d).dump() << '\n';
}

Corpus read_corpus_jsonl(const std::filesystem::path& path, CorpusSource source,
                         const std::string& name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    Corpus corpus{{}, source, "1", name};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        corpus.documents.push_back(document_from_json(nlohmann::json::parse(line)));
    }
    corpus.validate();
    return corpus;
}

} // namespace lexrel
