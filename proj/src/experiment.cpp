#include <algorithm>
#include <chrono>
#include <fstream>

#include "lexrel/errors.hpp"
#include "lexrel/experiment.hpp"
#include "lexrel/hash.hpp"
#include "lexrel/rng.hpp"

namespace lexrel {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t derived_seed(std::uint64_t global, std::string_view tag) {
    return global ^ stable_hash64(tag, 0x9E3779B97F4A7C15ull);
}

} // namespace

const Corpus& LoadedData::by_name(const std::string& name) const {
    if (name == "sarc" && sarc) return *sarc;
    if (name == "implicit_hate" && implicit_hate) return *implicit_hate;
    if (name == "ethos" && ethos) return *ethos;
    if (baseline && name == baseline->name) return *baseline;
    throw ConfigError("dataset '" + name + "' is not loaded");
}

Corpus deterministic_subset(const Corpus& corpus, std::uint64_t n, std::uint64_t seed) {
    if (n >= corpus.documents.size()) return corpus;
    Rng rng(seed);
    auto picked = rng.sample_without_replacement(corpus.documents.size(),
                                                 static_cast<std::size_t>(n));
    std::sort(picked.begin(), picked.end());
    Corpus out{{}, corpus.source, corpus.schema_version, corpus.name};
    out.documents.reserve(picked.size());
    for (std::size_t i : picked) out.documents.push_back(corpus.documents[i]);
    return out;
}

namespace {

Corpus maybe_subsample(Corpus corpus, const RunConfig& config) {
    if (!config.subsample_fraction || *config.subsample_fraction >= 1.0) return corpus;
    const auto n = static_cast<std::uint64_t>(std::llround(
        *config.subsample_fraction * static_cast<double>(corpus.documents.size())));
    return deterministic_subset(corpus, std::max<std::uint64_t>(n, 1),
                                derived_seed(config.seed, "subsample:" + corpus.name));
}

} // namespace

LoadedData load_datasets(const RunConfig& config) {
    LoadedData data;

    bool want_sarc = config.sarc.has_value();
    bool want_ihc = config.implicit_hate.has_value();
    bool want_ethos = config.ethos.has_value();
    if (config.experiment == ExperimentKind::Similarity) {
        // Only load what the bootstrap pairs touch.
        want_sarc = want_ihc = want_ethos = false;
        for (const BootstrapJob& job : config.bootstrap) {
            for (const std::string* name : {&job.corpus_a, &job.corpus_b}) {
                if (*name == "sarc") want_sarc = true;
                if (*name == "implicit_hate") want_ihc = true;
                if (*name == "ethos") want_ethos = true;
            }
        }
        if (config.baseline) want_sarc = true; // baseline is always paired against sarc
    }

    if (want_sarc) {
        if (!config.sarc) throw ConfigError("sarc dataset required but not configured");
        IngestReport report;
        Corpus raw = load_sarc(config.sarc->path, config.sarc->columns, config.sarc->format, report);
        Corpus filtered = filter_sarcasm_votes(raw, config.sarc->min_ups, config.sarc->max_downs);
        data.ingest["sarc"] = report;
        data.sarc = maybe_subsample(std::move(filtered), config);
    }
    if (want_ihc) {
        if (!config.implicit_hate)
            throw ConfigError("implicit_hate dataset required but not configured");
        IngestReport report;
        Corpus corpus = load_implicit_hate(config.implicit_hate->path,
                                           config.implicit_hate->columns,
                                           config.implicit_hate->format, report);
        data.ingest["implicit_hate"] = report;
        data.implicit_hate = maybe_subsample(std::move(corpus), config);
    }
    if (want_ethos) {
        if (!config.ethos) throw ConfigError("ethos dataset required but not configured");
        IngestReport report;
        Corpus corpus = load_ethos(config.ethos->path, config.ethos->columns, config.ethos->format,
                                   report, config.ethos->threshold);
        data.ingest["ethos"] = report;
        data.ethos = maybe_subsample(std::move(corpus), config);
    }
    if (config.baseline) {
        IngestReport report;
        Corpus corpus = load_text_corpus(config.baseline->path, config.baseline->columns,
                                         config.baseline->format, report, CorpusSource::Combined,
                                         config.baseline->name);
        data.ingest[config.baseline->name] = report;
        data.baseline = maybe_subsample(std::move(corpus), config);
    }
    return data;
}

namespace {

std::vector<std::string> ids_of(const Corpus& corpus) {
    std::vector<std::string> ids;
    ids.reserve(corpus.documents.size());
    for (const Document& d : corpus.documents) ids.push_back(d.id);
    return ids;
}

EvalReport evaluate_corpus(const LinearModel& model, const Corpus& test, TaskKind task,
                           double threshold, const std::vector<double>* cached_scores = nullptr) {
    const std::vector<double> scores =
        cached_scores ? *cached_scores : predict_scores(model, test.documents);
    const std::vector<int> labels = project_labels(test, task);
    return evaluate(scores, labels, threshold, std::string(to_string(task)));
}

} // namespace

SingleStepResult run_single_step(const Corpus& sarc, const Corpus& implicit_hate,
                                 const Corpus& ethos, const RunConfig& config) {
    // Combined corpus: fixed concatenation order, then a seeded shuffle.
    Corpus combined{{}, CorpusSource::Combined, "1", "combined"};
    auto append_capped = [&](const Corpus& src, const char* key) {
        const auto it = config.single_step_caps.find(key);
        const Corpus capped =
            (it != config.single_step_caps.end() && it->second)
                ? deterministic_subset(src, *it->second,
                                       derived_seed(config.seed, std::string("cap:") + key))
                : src;
        combined.documents.insert(combined.documents.end(), capped.documents.begin(),
                                  capped.documents.end());
    };
    append_capped(sarc, "sarc");
    append_capped(implicit_hate, "implicit_hate");
    append_capped(ethos, "ethos");
    Rng shuffle_rng(derived_seed(config.seed, "shuffle:combined"));
    shuffle_rng.shuffle(combined.documents);

    auto [train_set, test_set] = split(combined, config.single_step_split);

    const std::vector<int> train_labels = project_labels(train_set, TaskKind::Sarcasm);
    LinearModel model = [&] {
        try {
            return train(train_set.documents, train_labels, config.train_for("single_step"),
                         config.features, "single_step_sarcasm");
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string("stage 'single_step': ") + e.what());
        }
    }();

    // One scoring pass; only the labels change between the two evaluations.
    const std::vector<double> scores = predict_scores(model, test_set.documents);

    SingleStepResult result;
    result.eval_sarcasm =
        evaluate_corpus(model, test_set, TaskKind::Sarcasm, config.eval_threshold, &scores);
    result.eval_hate =
        evaluate_corpus(model, test_set, TaskKind::Hate, config.eval_threshold, &scores);
    result.test_ids = ids_of(test_set);
    result.train_size = train_set.documents.size();
    result.test_size = test_set.documents.size();
    result.model = std::move(model);
    return result;
}

const StageResult& SequentialResult::for_dataset(const std::string& dataset) const {
    for (const StageResult& s : stages)
        if (s.dataset == dataset) return s;
    throw Error("no stage for dataset " + dataset);
}

SequentialResult run_sequential(const Corpus* sarc, const Corpus& implicit_hate,
                                const Corpus& ethos, const RunConfig& config,
                                bool include_sarcasm) {
    if (include_sarcasm && sarc == nullptr)
        throw ConfigError("sequential: sarcasm stage requested but sarc corpus missing");

    struct StageDef {
        std::string stage;
        std::string dataset;
        const Corpus* corpus;
        TaskKind task;
        SplitSpec split_spec;
    };
    std::vector<StageDef> defs;
    if (include_sarcasm)
        defs.push_back({"sarcasm", "sarc", sarc, TaskKind::Sarcasm, config.sarc->split});
    defs.push_back({"implicit_hate", "implicit_hate", &implicit_hate, TaskKind::Hate,
                    config.implicit_hate->split});
    defs.push_back({"ethos", "ethos", &ethos, TaskKind::Hate, config.ethos->split});

    SequentialResult result;
    result.include_sarcasm = include_sarcasm;

    const LinearModel* prev = nullptr;
    for (const StageDef& def : defs) {
        // A stage failure must name the stage it happened in.
        try {
            auto [train_set, test_set] = split(*def.corpus, def.split_spec);
            const std::vector<int> train_labels = project_labels(train_set, def.task);

            StageResult stage;
            stage.stage = def.stage;
            stage.dataset = def.dataset;
            stage.task = def.task;
            stage.init = prev ? transfer(*prev, def.stage) : LinearModel::zero(config.features);
            stage.model = train(train_set.documents, train_labels, config.train_for(def.stage),
                                config.features, def.stage, prev ? &stage.init : nullptr);
            stage.eval = evaluate_corpus(stage.model, test_set, def.task, config.eval_threshold);

            if (def.dataset == "implicit_hate" && config.implicit_only_eval) {
                // Implicit-only subset: drop explicit-hate documents, keeping
                // implicit positives vs non-hate negatives under the hate task.
                Corpus subset{{}, test_set.source, test_set.schema_version, test_set.name};
                for (const Document& d : test_set.documents)
                    if (d.canonical_class != CanonicalClass::ExplicitHate)
                        subset.documents.push_back(d);
                if (!subset.documents.empty())
                    stage.eval_implicit_only =
                        evaluate_corpus(stage.model, subset, def.task, config.eval_threshold);
            }

            stage.test_ids = ids_of(test_set);
            stage.train_size = train_set.documents.size();
            stage.test_size = test_set.documents.size();
            result.stages.push_back(std::move(stage));
            prev = &result.stages.back().model;
        } catch (const ConfigError& e) {
            throw ConfigError("stage '" + def.stage + "': " + e.what());
        } catch (const PreconditionError& e) {
            throw PreconditionError("stage '" + def.stage + "': " + e.what());
        } catch (const std::exception& e) {
            throw Error("stage '" + def.stage + "': " + e.what());
        }
    }
    return result;
}

AblationResult run_ablation(const Corpus& sarc, const Corpus& implicit_hate, const Corpus& ethos,
                            const RunConfig& config) {
    if (!config.implicit_only_eval)
        throw ConfigError("ablation requires evaluation.implicit_only=true");

    AblationResult out;
    // Both arms share every split and seed; only the sarcasm stage differs.
    out.with_pretraining = run_sequential(&sarc, implicit_hate, ethos, config, true);
    out.without_pretraining = run_sequential(&sarc, implicit_hate, ethos, config, false);

    const StageResult& w_ihc = out.with_pretraining.for_dataset("implicit_hate");
    const StageResult& wo_ihc = out.without_pretraining.for_dataset("implicit_hate");
    const StageResult& w_ethos = out.with_pretraining.for_dataset("ethos");
    const StageResult& wo_ethos = out.without_pretraining.for_dataset("ethos");

    if (!w_ihc.eval_implicit_only || !wo_ihc.eval_implicit_only)
        throw PreconditionError("ablation: implicit-only test subset is empty");

    out.implicit_all = compare(wo_ihc.eval, w_ihc.eval);
    out.ethos = compare(wo_ethos.eval, w_ethos.eval);
    out.implicit_only = compare(*wo_ihc.eval_implicit_only, *w_ihc.eval_implicit_only);
    out.pretrained_implicit_vs_all = compare(*w_ihc.eval_implicit_only, w_ihc.eval);
    return out;
}

std::vector<BootstrapJob> effective_bootstrap_jobs(const RunConfig& config,
                                                   const LoadedData& data) {
    std::vector<BootstrapJob> jobs = config.bootstrap;
    if (!config.baseline || !data.baseline) return jobs;
    const std::string& bname = config.baseline->name;

    const bool already_paired = std::any_of(jobs.begin(), jobs.end(), [&](const BootstrapJob& j) {
        return j.corpus_a == bname || j.corpus_b == bname;
    });
    if (already_paired) return jobs;

    // A configured baseline corpus implies the sarc-vs-baseline comparison
    // for every metric in the job list, with the sample size clamped to fit.
    std::vector<BootstrapJob> extra;
    for (const BootstrapJob& j : jobs) {
        const bool seen = std::any_of(extra.begin(), extra.end(), [&](const BootstrapJob& e) {
            return e.spec.metric == j.spec.metric;
        });
        if (seen) continue;
        BootstrapJob b = j;
        b.corpus_a = "sarc";
        b.corpus_b = bname;
        b.venn_iteration.reset();
        if (!b.spec.with_replacement) {
            const std::uint64_t limit = std::min<std::uint64_t>(
                data.by_name("sarc").documents.size(), data.baseline->documents.size());
            b.spec.sample_size = std::min(b.spec.sample_size, limit);
        }
        extra.push_back(std::move(b));
    }
    jobs.insert(jobs.end(), extra.begin(), extra.end());
    return jobs;
}

SimilarityRunResult run_similarity(const LoadedData& data, const RunConfig& config,
                                   const std::filesystem::path* venn_dir) {
    SimilarityRunResult out;
    const auto jobs = effective_bootstrap_jobs(config, data);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const BootstrapJob& job = jobs[i];
        const Corpus& a = data.by_name(job.corpus_a);
        const Corpus& b = data.by_name(job.corpus_b);
        out.reports.push_back(
            bootstrap_similarity(a, b, job.spec, config.threads, job.keep_per_iteration));

        if (job.venn_iteration) {
            const auto [ta, tb] = bootstrap_topk_sets(a, b, job.spec, *job.venn_iteration);
            const NgramSet sa(ta.begin(), ta.end());
            const NgramSet sb(tb.begin(), tb.end());
            SimilarityRunResult::Venn venn;
            venn.job_index = i;
            venn.counts = overlap_counts(sa, sb);
            if (venn_dir) {
                venn.csv_path = *venn_dir / ("venn_" + job.corpus_a + "_vs_" + job.corpus_b +
                                             "_iter" + std::to_string(*job.venn_iteration) +
                                             ".csv");
                write_overlap_csv(venn.csv_path, sa, sb);
            }
            out.venns.push_back(std::move(venn));
        }
    }
    return out;
}

namespace {

nlohmann::ordered_json stage_to_json(const StageResult& stage, const std::string& model_file) {
    nlohmann::ordered_json j;
    j["stage"] = stage.stage;
    j["dataset"] = stage.dataset;
    j["task"] = std::string(to_string(stage.task));
    j["train_size"] = stage.train_size;
    j["test_size"] = stage.test_size;
    j["lineage"] = stage.model.lineage;
    j["eval"] = stage.eval.to_json();
    j["eval_implicit_only"] =
        stage.eval_implicit_only ? nlohmann::ordered_json(stage.eval_implicit_only->to_json())
                                 : nlohmann::ordered_json(nullptr);
    j["test_ids"] = stage.test_ids;
    j["model_file"] = model_file;
    return j;
}

nlohmann::ordered_json sequential_to_json(const SequentialResult& result,
                                          const std::string& file_prefix,
                                          const std::filesystem::path& models_dir,
                                          bool save_models) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const StageResult& stage : result.stages) {
        const std::string model_file = file_prefix + "_" + stage.stage + ".json";
        if (save_models) stage.model.save(models_dir / model_file);
        arr.push_back(stage_to_json(stage, model_file));
    }
    return arr;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

// Labeled eval rows accumulated per run and written as one CSV.
struct EvalCsv {
    std::string body = "label," + EvalReport::csv_header() + "\n";

    void add(const std::string& label, const EvalReport& report) {
        body += label + "," + report.to_csv_row() + "\n";
    }
    void add_stages(const std::string& prefix, const SequentialResult& result) {
        for (const StageResult& stage : result.stages) {
            add(prefix + stage.stage, stage.eval);
            if (stage.eval_implicit_only)
                add(prefix + stage.stage + "_implicit_only", *stage.eval_implicit_only);
        }
    }
};

struct OutputDirs {
    std::filesystem::path reports;
    std::filesystem::path models;
    std::filesystem::path ingest;

    explicit OutputDirs(const std::filesystem::path& root)
        : reports(root / "reports"), models(root / "models"), ingest(root / "ingest") {
        std::filesystem::create_directories(reports);
        std::filesystem::create_directories(models);
        std::filesystem::create_directories(ingest);
    }
};

nlohmann::ordered_json ingest_to_json(const LoadedData& data, const OutputDirs& dirs) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [name, report] : data.ingest) {
        j[name] = report.to_json();
        write_text(dirs.ingest / (name + "_ingest.json"), report.to_json().dump(2) + "\n");
    }
    return j;
}

nlohmann::ordered_json corpora_summary(const LoadedData& data) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    auto add = [&](const char* key, const std::optional<Corpus>& c) {
        if (c) j[key] = c->documents.size();
    };
    add("sarc", data.sarc);
    add("implicit_hate", data.implicit_hate);
    add("ethos", data.ethos);
    if (data.baseline) j[data.baseline->name] = data.baseline->documents.size();
    return j;
}

} // namespace

ExecuteOutcome execute(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    config.validate(true);
    const OutputDirs dirs(config.output_dir);

    const LoadedData data = load_datasets(config);
    const double load_s = seconds_since(t0);

    const std::string tag =
        std::string(to_string(config.experiment)) + "_seed" + std::to_string(config.seed);

    nlohmann::ordered_json report;
    report["experiment"] = std::string(to_string(config.experiment));
    report["seed"] = config.seed;
    report["model"] = "hashed_linear"; // the desk-scale stand-in, not the paper's networks
    report["config"] = config.snapshot();
    report["ingest"] = ingest_to_json(data, dirs);
    report["corpora"] = corpora_summary(data);

    switch (config.experiment) {
        case ExperimentKind::Similarity: {
            const SimilarityRunResult result = run_similarity(data, config, &dirs.reports);
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            std::string csv = SimilarityReport::csv_header() + "\n";
            for (const SimilarityReport& r : result.reports) {
                arr.push_back(nlohmann::ordered_json(r.to_json()));
                csv += r.to_csv_row() + "\n";
            }
            report["similarity"] = arr;
            nlohmann::ordered_json venns = nlohmann::ordered_json::array();
            for (const auto& v : result.venns) {
                venns.push_back({{"job_index", v.job_index},
                                 {"shared", v.counts.shared},
                                 {"unique_a", v.counts.unique_a},
                                 {"unique_b", v.counts.unique_b},
                                 {"csv", v.csv_path.filename().string()}});
            }
            report["venn"] = venns;
            write_text(dirs.reports / (tag + ".csv"), csv);
            break;
        }
        case ExperimentKind::SingleStep: {
            const SingleStepResult result =
                run_single_step(*data.sarc, *data.implicit_hate, *data.ethos, config);
            const std::string model_file = tag + "_model.json";
            result.model.save(dirs.models / model_file);
            EvalCsv csv;
            csv.add("sarcasm", result.eval_sarcasm);
            csv.add("hate", result.eval_hate);
            write_text(dirs.reports / (tag + "_evals.csv"), csv.body);
            report["train_size"] = result.train_size;
            report["test_size"] = result.test_size;
            report["model_file"] = model_file;
            report["lineage"] = result.model.lineage;
            // Two evaluations of the same scores over the same test ids;
            // only the label projection differs.
            report["evaluations"] = {
                {{"label", "sarcasm"},
                 {"eval", result.eval_sarcasm.to_json()},
                 {"test_ids", result.test_ids}},
                {{"label", "hate"},
                 {"eval", result.eval_hate.to_json()},
                 {"test_ids", result.test_ids}}};
            break;
        }
        case ExperimentKind::Sequential: {
            const SequentialResult result =
                run_sequential(config.include_sarcasm_stage ? &*data.sarc : nullptr,
                               *data.implicit_hate, *data.ethos, config,
                               config.include_sarcasm_stage);
            report["stages"] = sequential_to_json(result, tag, dirs.models, true);
            EvalCsv csv;
            csv.add_stages("", result);
            write_text(dirs.reports / (tag + "_evals.csv"), csv.body);
            break;
        }
        case ExperimentKind::Ablation: {
            const AblationResult result =
                run_ablation(*data.sarc, *data.implicit_hate, *data.ethos, config);
            report["arms"] = {
                {"with_pretraining",
                 sequential_to_json(result.with_pretraining, tag + "_with", dirs.models, true)},
                {"without_pretraining",
                 sequential_to_json(result.without_pretraining, tag + "_without", dirs.models,
                                    true)}};
            const std::pair<const char*, const DeltaReport*> deltas[] = {
                {"implicit_hate_all", &result.implicit_all},
                {"ethos", &result.ethos},
                {"implicit_hate_implicit_only", &result.implicit_only},
                {"pretrained_implicit_only_vs_all", &result.pretrained_implicit_vs_all},
            };
            nlohmann::ordered_json dj = nlohmann::ordered_json::object();
            for (const auto& [key, delta] : deltas) {
                dj[key] = delta->to_json();
                write_text(dirs.reports / (tag + "_delta_" + key + ".csv"), delta->to_csv());
            }
            report["deltas"] = dj;
            EvalCsv csv;
            csv.add_stages("with_", result.with_pretraining);
            csv.add_stages("without_", result.without_pretraining);
            write_text(dirs.reports / (tag + "_evals.csv"), csv.body);
            break;
        }
    }

    report["timings"] = {{"load_s", load_s}, {"total_s", seconds_since(t0)}};

    ExecuteOutcome outcome;
    outcome.report_path = dirs.reports / (tag + ".json");
    write_text(outcome.report_path, report.dump(2) + "\n");
    outcome.report = std::move(report);
    return outcome;
}

} // namespace lexrel
