#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/ingest.hpp"
#include "lexrel/metrics.hpp"
#include "lexrel/model.hpp"
#include "lexrel/similarity.hpp"

#include <nlohmann/json.hpp>

namespace lexrel {

enum class ExperimentKind { Similarity, SingleStep, Sequential, Ablation };

std::string_view to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(std::string_view s);

struct SarcConfig {
    std::filesystem::path path;
    CsvFormat format;
    SarcColumns columns;
    std::int64_t min_ups = 10;
    std::int64_t max_downs = 0;
    SplitSpec split;
};

struct ImplicitHateConfig {
    std::filesystem::path path;
    CsvFormat format;
    ImplicitHateColumns columns;
    SplitSpec split;
};

struct EthosConfig {
    std::filesystem::path path;
    CsvFormat format;
    EthosColumns columns;
    double threshold = 0.33;
    SplitSpec split;
};

struct BaselineConfig {
    std::filesystem::path path;
    CsvFormat format;
    TextOnlyColumns columns;
    std::string name = "baseline";
};

struct BootstrapJob {
    std::string corpus_a;
    std::string corpus_b;
    BootstrapSpec spec;
    bool keep_per_iteration = false;
    std::optional<std::uint64_t> venn_iteration; // jaccard jobs only
};

/// One self-contained run description. Defaults and derived seeds are
/// materialized at parse time, so snapshot() alone reproduces the run.
struct RunConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    std::filesystem::path output_dir = "out";
    ExperimentKind experiment = ExperimentKind::Similarity;

    std::optional<SarcConfig> sarc;
    std::optional<ImplicitHateConfig> implicit_hate;
    std::optional<EthosConfig> ethos;
    std::optional<BaselineConfig> baseline;

    FeatureSpec features;
    std::map<std::string, TrainConfig> stage_train; // sarcasm, implicit_hate, ethos, single_step
    double eval_threshold = 0.5;
    bool implicit_only_eval = true;
    bool include_sarcasm_stage = true;
    SplitSpec single_step_split;
    std::map<std::string, std::optional<std::uint64_t>> single_step_caps;
    std::vector<BootstrapJob> bootstrap;
    std::optional<double> subsample_fraction;

    /// Relative dataset paths are resolved against the config file's parent
    /// directory. seed_override replaces the global seed before derived
    /// seeds are materialized.
    static RunConfig from_file(const std::filesystem::path& path,
                               std::optional<std::uint64_t> seed_override = std::nullopt);
    static RunConfig from_json(nlohmann::json j, const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override = std::nullopt);

    /// Fully resolved config snapshot; feeding it back through from_json
    /// reproduces this config exactly.
    nlohmann::ordered_json snapshot() const;

    /// Structural checks plus (optionally) existence of referenced paths.
    void validate(bool check_paths = true) const;

    TrainConfig train_for(const std::string& stage) const;
};

struct LoadedData {
    std::optional<Corpus> sarc;          // vote-filtered
    std::optional<Corpus> implicit_hate;
    std::optional<Corpus> ethos;
    std::optional<Corpus> baseline;
    std::map<std::string, IngestReport> ingest;

    const Corpus& by_name(const std::string& name) const;
};

/// Loads whichever datasets the experiment needs, applies the SARC vote
/// filter and the optional deterministic subsample.
LoadedData load_datasets(const RunConfig& config);

/// First-n-by-seeded-draw subset; the surviving documents keep their
/// original relative order.
Corpus deterministic_subset(const Corpus& corpus, std::uint64_t n, std::uint64_t seed);

struct StageResult {
    std::string stage;
    std::string dataset;
    TaskKind task = TaskKind::Hate;
    LinearModel init;  // initialization actually used (zero or transferred)
    LinearModel model; // trained weights
    EvalReport eval;
    std::optional<EvalReport> eval_implicit_only;
    std::vector<std::string> test_ids;
    std::uint64_t train_size = 0;
    std::uint64_t test_size = 0;
};

struct SequentialResult {
    bool include_sarcasm = true;
    std::vector<StageResult> stages;

    const StageResult& for_dataset(const std::string& dataset) const;
};

struct SingleStepResult {
    LinearModel model;
    EvalReport eval_sarcasm;
    EvalReport eval_hate;
    std::vector<std::string> test_ids;
    std::uint64_t train_size = 0;
    std::uint64_t test_size = 0;
};

struct AblationResult {
    SequentialResult with_pretraining;
    SequentialResult without_pretraining;
    DeltaReport implicit_all;               // IHC all-hate, without -> with
    DeltaReport ethos;                      // ETHOS, without -> with
    DeltaReport implicit_only;              // IHC implicit-only, without -> with
    DeltaReport pretrained_implicit_vs_all; // with pre-training, implicit-only -> all-hate
};

/// Train once on the sarcasm projection of the shuffled combined corpus,
/// then score the single test split under both task projections.
SingleStepResult run_single_step(const Corpus& sarc, const Corpus& implicit_hate,
                                 const Corpus& ethos, const RunConfig& config);

/// Staged pipeline sarcasm -> implicit hate -> ETHOS with weight transfer
/// between stages. Without the sarcasm stage the first hate stage trains
/// from zero weights (the no-pre-training baseline).
SequentialResult run_sequential(const Corpus* sarc, const Corpus& implicit_hate,
                                const Corpus& ethos, const RunConfig& config,
                                bool include_sarcasm);

/// Both sequential arms under identical splits/seeds plus the four-way
/// delta grid.
AblationResult run_ablation(const Corpus& sarc, const Corpus& implicit_hate, const Corpus& ethos,
                            const RunConfig& config);

struct SimilarityRunResult {
    std::vector<SimilarityReport> reports;
    // One entry per requested venn export: (job index, counts, csv path).
    struct Venn {
        std::size_t job_index;
        OverlapCount counts;
        std::filesystem::path csv_path;
    };
    std::vector<Venn> venns;
};

std::vector<BootstrapJob> effective_bootstrap_jobs(const RunConfig& config,
                                                   const LoadedData& data);

SimilarityRunResult run_similarity(const LoadedData& data, const RunConfig& config,
                                   const std::filesystem::path* venn_dir = nullptr);

/// Runs the configured experiment end to end: load, execute, and write
/// reports/, models/ and ingest/ under config.output_dir. Returns the main
/// report (also written to disk).
struct ExecuteOutcome {
    nlohmann::ordered_json report;
    std::filesystem::path report_path;
};

ExecuteOutcome execute(const RunConfig& config);

} // namespace lexrel
