#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexrel {

enum class CanonicalClass { Neutral, Sarcasm, ImplicitHate, ExplicitHate };

std::string_view to_string(CanonicalClass c);
CanonicalClass canonical_class_from_string(std::string_view s);

/// One text sample. canonical_class is assigned once at ingestion and never
/// mutated; task projections are separate views (project_labels).
struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> parent_text;
    std::string raw_label;
    CanonicalClass canonical_class = CanonicalClass::Neutral;

    // ETHOS hate rows are an unseparated implicit/explicit mix; they are
    // stored as ExplicitHate with this flag set (see load_ethos).
    bool mixed_hate = false;

    // SARC side-band vote metadata, consumed by filter_sarcasm_votes.
    std::optional<std::int64_t> ups;
    std::optional<std::int64_t> downs;
};

enum class CorpusSource { Sarc, ImplicitHateCorpus, Ethos, Combined };

std::string_view to_string(CorpusSource s);

/// Immutable after construction; ids are unique and iteration order is the
/// order rows appeared in the source file.
struct Corpus {
    std::vector<Document> documents;
    CorpusSource source = CorpusSource::Combined;
    std::string schema_version = "1";
    std::string name; // display name for reports, defaults to the source

    std::size_t size() const { return documents.size(); }

    /// Throws PreconditionError on duplicate ids or whitespace-only texts.
    void validate() const;
};

enum class TaskKind { Sarcasm, Hate };

std::string_view to_string(TaskKind t);

/// The two binary label projections of the canonical 4-way class:
///                sarcasm  hate
///   Neutral         0      0
///   Sarcasm         1      0
///   ImplicitHate    1      1
///   ExplicitHate    0      1
int project_label(CanonicalClass c, TaskKind task);

/// Labeled view over a corpus, aligned with corpus.documents. The corpus is
/// not modified, so the same test set can be re-projected under another task.
std::vector<int> project_labels(const Corpus& corpus, TaskKind task);

struct SplitSpec {
    double train_fraction = 0.6;
    std::uint64_t seed = 0;
    bool stratified = true;
};

/// Disjoint, exhaustive, seed-deterministic train/test partition. Both
/// halves keep the original document order. Stratified mode partitions each
/// canonical class separately (per-class proportions within one document).
std::pair<Corpus, Corpus> split(const Corpus& corpus, const SplitSpec& spec);

/// Balanced class weights: weight(c) = N / (2 * count(c)), so the weighted
/// counts of the two classes are equal. Throws on single-class input.
std::array<double, 2> class_weights(const std::vector<int>& labels);

/// Keeps SARC documents with ups > min_ups and downs <= max_downs ("over 10
/// upvotes and no downvotes" is read strictly). Order preserved; idempotent.
Corpus filter_sarcasm_votes(const Corpus& corpus, std::int64_t min_ups = 10,
                            std::int64_t max_downs = 0);

} // namespace lexrel
