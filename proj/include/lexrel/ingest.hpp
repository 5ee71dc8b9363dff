#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "lexrel/corpus.hpp"
#include "lexrel/csv.hpp"

#include <nlohmann/json_fwd.hpp>

namespace lexrel {

/// Per-file ingestion audit. Malformed rows are skipped and counted here
/// instead of aborting the load; invalid UTF-8 is replaced with U+FFFD and
/// counted the same way.
struct IngestReport {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_kept = 0;
    std::uint64_t rows_skipped = 0;
    std::map<std::string, std::uint64_t> skip_reasons;
    std::uint64_t utf8_replacements = 0;

    void skip(const std::string& reason) {
        ++rows_skipped;
        ++skip_reasons[reason];
    }

    nlohmann::json to_json() const;
};

/// Explicit column-name maps; no header sniffing. With has_header=false the
/// values must be 0-based column indices written as decimal strings.
struct SarcColumns {
    std::string text = "comment";
    std::string parent = "parent_comment";
    std::string label = "label";
    std::string ups = "ups";
    std::string downs = "downs";
};

struct ImplicitHateColumns {
    std::string text = "post";
    std::string klass = "class";
    // Exact class strings of the source file, configurable per version.
    std::string not_hate_value = "not_hate";
    std::string implicit_value = "implicit_hate";
    std::string explicit_value = "explicit_hate";
};

struct EthosColumns {
    std::string text = "comment";
    std::string score = "isHate";
};

struct TextOnlyColumns {
    std::string text = "text";
};

/// Sarcasm on Reddit: label 1 -> Sarcasm, 0 -> Neutral; vote counts are kept
/// as side-band metadata for filter_sarcasm_votes.
Corpus load_sarc(const std::filesystem::path& path, const SarcColumns& columns,
                 const CsvFormat& format, IngestReport& report);

/// Implicit Hate Corpus: not_hate -> Neutral, implicit_hate -> ImplicitHate,
/// explicit_hate -> ExplicitHate. Unknown class strings are row-level skips.
Corpus load_implicit_hate(const std::filesystem::path& path, const ImplicitHateColumns& columns,
                          const CsvFormat& format, IngestReport& report);

/// ETHOS: continuous score in [0,1], binarized at threshold (inclusive).
/// ETHOS hate is an unseparated implicit/explicit mix, so hate rows carry
/// canonical_class=ExplicitHate with mixed_hate=true and the corpus is only
/// meaningful under the hate task projection.
Corpus load_ethos(const std::filesystem::path& path, const EthosColumns& columns,
                  const CsvFormat& format, IngestReport& report, double threshold = 0.33);

/// Generic text-only corpus (used for the Sarcasm V2 baseline pair). Every
/// row becomes a Neutral document; labels are never used for these corpora.
Corpus load_text_corpus(const std::filesystem::path& path, const TextOnlyColumns& columns,
                        const CsvFormat& format, IngestReport& report, CorpusSource source,
                        const std::string& name);

/// Canonical corpus cache: JSON-lines, one document per line.
void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus_jsonl(const std::filesystem::path& path, CorpusSource source,
                         const std::string& name);

nlohmann::json document_to_json(const Document& d);
Document document_from_json(const nlohmann::json& j);

} // namespace lexrel
