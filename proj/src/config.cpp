#include <algorithm>
#include <fstream>
#include <set>

#include "lexrel/errors.hpp"
#include "lexrel/experiment.hpp"
#include "lexrel/hash.hpp"

namespace lexrel {

std::string_view to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Similarity: return "similarity";
        case ExperimentKind::SingleStep: return "single_step";
        case ExperimentKind::Sequential: return "sequential";
        case ExperimentKind::Ablation: return "ablation";
    }
    return "similarity";
}

ExperimentKind experiment_kind_from_string(std::string_view s) {
    if (s == "similarity") return ExperimentKind::Similarity;
    if (s == "single_step" || s == "single-step") return ExperimentKind::SingleStep;
    if (s == "sequential") return ExperimentKind::Sequential;
    if (s == "ablation") return ExperimentKind::Ablation;
    throw ConfigError("unknown experiment kind: " + std::string(s));
}

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

char parse_delim(const json& j, const char* key, char fallback) {
    if (!j.contains(key)) return fallback;
    const auto s = j.at(key).get<std::string>();
    if (s == "\\t" || s == "tab") return '\t';
    if (s.size() != 1) throw ConfigError(std::string("format.") + key + " must be one character");
    return s[0];
}

CsvFormat parse_format(const json& j) {
    CsvFormat fmt;
    if (j.is_null()) return fmt;
    require_keys(j, {"delimiter", "quote", "has_header"}, "format");
    fmt.delimiter = parse_delim(j, "delimiter", ',');
    fmt.quote = parse_delim(j, "quote", '"');
    fmt.has_header = j.value("has_header", true);
    return fmt;
}

json format_json(const CsvFormat& fmt) {
    return {{"delimiter", fmt.delimiter == '\t' ? std::string("\\t") : std::string(1, fmt.delimiter)},
            {"quote", std::string(1, fmt.quote)},
            {"has_header", fmt.has_header}};
}

SplitSpec parse_split(const json& j, std::uint64_t default_seed, double default_fraction) {
    SplitSpec spec;
    spec.train_fraction = default_fraction;
    spec.seed = default_seed;
    if (!j.is_null()) {
        require_keys(j, {"train_fraction", "seed", "stratified"}, "split");
        spec.train_fraction = j.value("train_fraction", default_fraction);
        if (j.contains("seed") && !j.at("seed").is_null())
            spec.seed = j.at("seed").get<std::uint64_t>();
        spec.stratified = j.value("stratified", true);
    }
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("split.train_fraction must lie in (0,1)");
    return spec;
}

json split_json(const SplitSpec& spec) {
    return {{"train_fraction", spec.train_fraction},
            {"seed", spec.seed},
            {"stratified", spec.stratified}};
}

std::filesystem::path resolve_path(const std::string& p, const std::filesystem::path& base) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return path;
}

// Derived seed for a named sub-stream of the run (splits, stages, shuffles).
std::uint64_t derived_seed(std::uint64_t global, std::string_view tag) {
    return global ^ stable_hash64(tag, 0x9E3779B97F4A7C15ull);
}

TrainConfig parse_train(const json& defaults, const json& overrides, std::uint64_t stage_seed) {
    TrainConfig cfg;
    cfg.seed = stage_seed;
    auto apply = [&](const json& j) {
        if (j.is_null()) return;
        require_keys(j, {"learning_rate", "epochs", "l1_lambda", "seed", "class_weighted"},
                     "train config");
        cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
        cfg.epochs = j.value("epochs", cfg.epochs);
        cfg.l1_lambda = j.value("l1_lambda", cfg.l1_lambda);
        if (j.contains("seed") && !j.at("seed").is_null())
            cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.class_weighted = j.value("class_weighted", cfg.class_weighted);
    };
    apply(defaults);
    apply(overrides);
    cfg.validate();
    return cfg;
}

} // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path,
                               std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(std::move(j), path.parent_path(), seed_override);
}

RunConfig RunConfig::from_json(json j, const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override) {
    require_keys(j,
                 {"seed", "threads", "output_dir", "experiment", "datasets", "features", "train",
                  "evaluation", "sequential", "single_step", "bootstrap", "subsample_fraction"},
                 "config");

    RunConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (seed_override) cfg.seed = *seed_override;
    cfg.threads = j.value("threads", 1);
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    cfg.output_dir = resolve_path(j.value("output_dir", std::string("out")), base_dir);
    if (j.contains("experiment"))
        cfg.experiment = experiment_kind_from_string(j.at("experiment").get<std::string>());

    const json datasets = j.value("datasets", json::object());
    require_keys(datasets, {"sarc", "implicit_hate", "ethos", "baseline"}, "datasets");

    if (datasets.contains("sarc")) {
        const json& d = datasets.at("sarc");
        require_keys(d, {"path", "format", "columns", "min_ups", "max_downs", "split"},
                     "datasets.sarc");
        SarcConfig sc;
        sc.path = resolve_path(d.at("path").get<std::string>(), base_dir);
        sc.format = parse_format(d.value("format", json()));
        const json cols = d.value("columns", json::object());
        require_keys(cols, {"text", "parent", "label", "ups", "downs"}, "datasets.sarc.columns");
        sc.columns.text = cols.value("text", sc.columns.text);
        sc.columns.parent = cols.value("parent", sc.columns.parent);
        sc.columns.label = cols.value("label", sc.columns.label);
        sc.columns.ups = cols.value("ups", sc.columns.ups);
        sc.columns.downs = cols.value("downs", sc.columns.downs);
        sc.min_ups = d.value("min_ups", sc.min_ups);
        sc.max_downs = d.value("max_downs", sc.max_downs);
        sc.split = parse_split(d.value("split", json()), derived_seed(cfg.seed, "split:sarc"), 0.6);
        cfg.sarc = std::move(sc);
    }

    if (datasets.contains("implicit_hate")) {
        const json& d = datasets.at("implicit_hate");
        require_keys(d, {"path", "format", "columns", "class_values", "split"},
                     "datasets.implicit_hate");
        ImplicitHateConfig ic;
        ic.path = resolve_path(d.at("path").get<std::string>(), base_dir);
        ic.format = parse_format(d.value("format", json()));
        const json cols = d.value("columns", json::object());
        require_keys(cols, {"text", "class"}, "datasets.implicit_hate.columns");
        ic.columns.text = cols.value("text", ic.columns.text);
        ic.columns.klass = cols.value("class", ic.columns.klass);
        const json cv = d.value("class_values", json::object());
        require_keys(cv, {"not_hate", "implicit_hate", "explicit_hate"},
                     "datasets.implicit_hate.class_values");
        ic.columns.not_hate_value = cv.value("not_hate", ic.columns.not_hate_value);
        ic.columns.implicit_value = cv.value("implicit_hate", ic.columns.implicit_value);
        ic.columns.explicit_value = cv.value("explicit_hate", ic.columns.explicit_value);
        ic.split = parse_split(d.value("split", json()),
                               derived_seed(cfg.seed, "split:implicit_hate"), 0.6);
        cfg.implicit_hate = std::move(ic);
    }

    if (datasets.contains("ethos")) {
        const json& d = datasets.at("ethos");
        require_keys(d, {"path", "format", "columns", "threshold", "split"}, "datasets.ethos");
        EthosConfig ec;
        ec.path = resolve_path(d.at("path").get<std::string>(), base_dir);
        ec.format = parse_format(d.value("format", json()));
        const json cols = d.value("columns", json::object());
        require_keys(cols, {"text", "score"}, "datasets.ethos.columns");
        ec.columns.text = cols.value("text", ec.columns.text);
        ec.columns.score = cols.value("score", ec.columns.score);
        ec.threshold = d.value("threshold", 0.33);
        if (!(ec.threshold > 0.0 && ec.threshold < 1.0))
            throw ConfigError("ethos threshold must lie in (0,1)");
        // The paper's ETHOS protocol: 40% train / 60% test.
        ec.split = parse_split(d.value("split", json()), derived_seed(cfg.seed, "split:ethos"), 0.4);
        cfg.ethos = std::move(ec);
    }

    if (datasets.contains("baseline")) {
        const json& d = datasets.at("baseline");
        require_keys(d, {"path", "format", "columns", "name"}, "datasets.baseline");
        BaselineConfig bc;
        bc.path = resolve_path(d.at("path").get<std::string>(), base_dir);
        bc.format = parse_format(d.value("format", json()));
        const json cols = d.value("columns", json::object());
        require_keys(cols, {"text"}, "datasets.baseline.columns");
        bc.columns.text = cols.value("text", bc.columns.text);
        bc.name = d.value("name", std::string("baseline"));
        cfg.baseline = std::move(bc);
    }

    const json features = j.value("features", json::object());
    require_keys(features, {"hash_bits", "orders", "streams", "signed_hashing"}, "features");
    {
        const int bits = features.value("hash_bits", 18);
        if (bits < 10 || bits > 30) throw ConfigError("features.hash_bits must lie in [10,30]");
        cfg.features.hash_dims = 1u << bits;
        if (features.contains("orders")) {
            cfg.features.orders = {false, false};
            for (int o : features.at("orders").get<std::vector<int>>()) {
                if (o == 1) cfg.features.orders.unigrams = true;
                else if (o == 2) cfg.features.orders.bigrams = true;
                else throw ConfigError("features.orders must be a subset of {1,2}");
            }
        }
        if (features.contains("streams"))
            cfg.features.streams =
                feature_streams_from_string(features.at("streams").get<std::string>());
        cfg.features.signed_hashing = features.value("signed_hashing", true);
        cfg.features.validate();
    }

    const json train = j.value("train", json::object());
    require_keys(train, {"defaults", "stages"}, "train");
    const json train_defaults = train.value("defaults", json());
    const json stages = train.value("stages", json::object());
    require_keys(stages, {"sarcasm", "implicit_hate", "ethos", "single_step"}, "train.stages");
    for (const char* stage : {"sarcasm", "implicit_hate", "ethos", "single_step"}) {
        cfg.stage_train[stage] =
            parse_train(train_defaults, stages.value(stage, json()),
                        derived_seed(cfg.seed, std::string("train:") + stage));
    }

    const json evaluation = j.value("evaluation", json::object());
    require_keys(evaluation, {"threshold", "implicit_only"}, "evaluation");
    cfg.eval_threshold = evaluation.value("threshold", 0.5);
    if (!(cfg.eval_threshold > 0.0 && cfg.eval_threshold < 1.0))
        throw ConfigError("evaluation.threshold must lie in (0,1)");
    cfg.implicit_only_eval = evaluation.value("implicit_only", true);

    const json sequential = j.value("sequential", json::object());
    require_keys(sequential, {"include_sarcasm_stage"}, "sequential");
    cfg.include_sarcasm_stage = sequential.value("include_sarcasm_stage", true);

    const json single_step = j.value("single_step", json::object());
    require_keys(single_step, {"split", "caps"}, "single_step");
    cfg.single_step_split = parse_split(single_step.value("split", json()),
                                        derived_seed(cfg.seed, "split:single_step"), 0.6);
    const json caps = single_step.value("caps", json::object());
    require_keys(caps, {"sarc", "implicit_hate", "ethos"}, "single_step.caps");
    for (const char* key : {"sarc", "implicit_hate", "ethos"}) {
        if (caps.contains(key) && !caps.at(key).is_null())
            cfg.single_step_caps[key] = caps.at(key).get<std::uint64_t>();
        else
            cfg.single_step_caps[key] = std::nullopt;
    }

    if (j.contains("bootstrap")) {
        for (const json& job_json : j.at("bootstrap")) {
            require_keys(job_json,
                         {"pair", "metric", "iterations", "sample_size", "top_k", "seed",
                          "with_replacement", "jsd_variant", "keep_per_iteration",
                          "venn_iteration"},
                         "bootstrap job");
            BootstrapJob job;
            const auto pair = job_json.at("pair").get<std::vector<std::string>>();
            if (pair.size() != 2) throw ConfigError("bootstrap pair must list two corpus names");
            job.corpus_a = pair[0];
            job.corpus_b = pair[1];
            job.spec.metric =
                similarity_metric_from_string(job_json.value("metric", std::string("jaccard")));
            job.spec.iterations = job_json.value("iterations", std::uint64_t{1000});
            job.spec.sample_size = job_json.value("sample_size", std::uint64_t{1000});
            job.spec.top_k = job_json.value("top_k", std::uint64_t{1000});
            job.spec.seed = cfg.seed;
            if (job_json.contains("seed") && !job_json.at("seed").is_null())
                job.spec.seed = job_json.at("seed").get<std::uint64_t>();
            job.spec.with_replacement = job_json.value("with_replacement", false);
            const std::string variant =
                job_json.value("jsd_variant", std::string("divergence_base2"));
            if (variant == "divergence_base2")
                job.spec.jsd_variant = JsdVariant::DivergenceBase2;
            else if (variant == "distance_base_e")
                job.spec.jsd_variant = JsdVariant::DistanceBaseE;
            else
                throw ConfigError("unknown jsd_variant: " + variant);
            job.keep_per_iteration = job_json.value("keep_per_iteration", false);
            if (job_json.contains("venn_iteration") && !job_json.at("venn_iteration").is_null()) {
                if (job.spec.metric != SimilarityMetric::Jaccard)
                    throw ConfigError("venn_iteration is only valid on jaccard jobs");
                job.venn_iteration = job_json.at("venn_iteration").get<std::uint64_t>();
            }
            cfg.bootstrap.push_back(std::move(job));
        }
    }

    if (j.contains("subsample_fraction") && !j.at("subsample_fraction").is_null()) {
        cfg.subsample_fraction = j.at("subsample_fraction").get<double>();
        if (!(*cfg.subsample_fraction > 0.0 && *cfg.subsample_fraction <= 1.0))
            throw ConfigError("subsample_fraction must lie in (0,1]");
    }
    return cfg;
}

TrainConfig RunConfig::train_for(const std::string& stage) const {
    const auto it = stage_train.find(stage);
    if (it == stage_train.end()) throw ConfigError("no train config for stage " + stage);
    return it->second;
}

void RunConfig::validate(bool check_paths) const {
    const bool needs_all = experiment != ExperimentKind::Similarity;
    if (needs_all && (!sarc || !implicit_hate || !ethos))
        throw ConfigError(std::string(to_string(experiment)) +
                          " requires sarc, implicit_hate and ethos datasets");
    if (experiment == ExperimentKind::Similarity) {
        int configured = int(sarc.has_value()) + int(implicit_hate.has_value()) +
                         int(ethos.has_value()) + int(baseline.has_value());
        if (configured < 2) throw ConfigError("similarity requires at least 2 datasets");
        if (bootstrap.empty()) throw ConfigError("similarity requires a non-empty bootstrap list");
    }
    if (experiment == ExperimentKind::Ablation && !implicit_only_eval)
        throw ConfigError("ablation requires evaluation.implicit_only=true (the delta grid "
                          "includes the implicit-only subset)");

    const std::set<std::string> known = {"sarc", "implicit_hate", "ethos",
                                         baseline ? baseline->name : "baseline"};
    for (const BootstrapJob& job : bootstrap) {
        for (const std::string* name : {&job.corpus_a, &job.corpus_b}) {
            if (!known.count(*name))
                throw ConfigError("bootstrap pair references unknown dataset '" + *name + "'");
        }
    }

    if (check_paths) {
        auto must_exist = [](const std::filesystem::path& p, const char* what) {
            if (!std::filesystem::exists(p))
                throw ConfigError(std::string(what) + " path does not exist: " + p.string());
        };
        if (sarc) must_exist(sarc->path, "sarc");
        if (implicit_hate) must_exist(implicit_hate->path, "implicit_hate");
        if (ethos) must_exist(ethos->path, "ethos");
        if (baseline) must_exist(baseline->path, "baseline");
    }
}

nlohmann::ordered_json RunConfig::snapshot() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["threads"] = threads;
    j["output_dir"] = output_dir.string();
    j["experiment"] = std::string(to_string(experiment));

    nlohmann::ordered_json datasets = nlohmann::ordered_json::object();
    if (sarc) {
        datasets["sarc"] = {{"path", sarc->path.string()},
                            {"format", format_json(sarc->format)},
                            {"columns",
                             {{"text", sarc->columns.text},
                              {"parent", sarc->columns.parent},
                              {"label", sarc->columns.label},
                              {"ups", sarc->columns.ups},
                              {"downs", sarc->columns.downs}}},
                            {"min_ups", sarc->min_ups},
                            {"max_downs", sarc->max_downs},
                            {"split", split_json(sarc->split)}};
    }
    if (implicit_hate) {
        datasets["implicit_hate"] = {{"path", implicit_hate->path.string()},
                                     {"format", format_json(implicit_hate->format)},
                                     {"columns",
                                      {{"text", implicit_hate->columns.text},
                                       {"class", implicit_hate->columns.klass}}},
                                     {"class_values",
                                      {{"not_hate", implicit_hate->columns.not_hate_value},
                                       {"implicit_hate", implicit_hate->columns.implicit_value},
                                       {"explicit_hate", implicit_hate->columns.explicit_value}}},
                                     {"split", split_json(implicit_hate->split)}};
    }
    if (ethos) {
        datasets["ethos"] = {{"path", ethos->path.string()},
                             {"format", format_json(ethos->format)},
                             {"columns",
                              {{"text", ethos->columns.text}, {"score", ethos->columns.score}}},
                             {"threshold", ethos->threshold},
                             {"split", split_json(ethos->split)}};
    }
    if (baseline) {
        datasets["baseline"] = {{"path", baseline->path.string()},
                                {"format", format_json(baseline->format)},
                                {"columns", {{"text", baseline->columns.text}}},
                                {"name", baseline->name}};
    }
    j["datasets"] = datasets;

    int bits = 0;
    for (std::uint32_t d = features.hash_dims; d > 1; d >>= 1) ++bits;
    std::vector<int> orders;
    if (features.orders.unigrams) orders.push_back(1);
    if (features.orders.bigrams) orders.push_back(2);
    j["features"] = {{"hash_bits", bits},
                     {"orders", orders},
                     {"streams", std::string(to_string(features.streams))},
                     {"signed_hashing", features.signed_hashing}};

    nlohmann::ordered_json stages = nlohmann::ordered_json::object();
    for (const char* stage : {"sarcasm", "implicit_hate", "ethos", "single_step"}) {
        const auto it = stage_train.find(stage);
        if (it != stage_train.end()) stages[stage] = it->second.to_json();
    }
    j["train"] = {{"stages", stages}};

    j["evaluation"] = {{"threshold", eval_threshold}, {"implicit_only", implicit_only_eval}};
    j["sequential"] = {{"include_sarcasm_stage", include_sarcasm_stage}};

    nlohmann::ordered_json caps = nlohmann::ordered_json::object();
    for (const char* key : {"sarc", "implicit_hate", "ethos"}) {
        const auto it = single_step_caps.find(key);
        if (it != single_step_caps.end() && it->second)
            caps[key] = *it->second;
        else
            caps[key] = nullptr;
    }
    j["single_step"] = {{"split", split_json(single_step_split)}, {"caps", caps}};

    nlohmann::ordered_json jobs = nlohmann::ordered_json::array();
    for (const BootstrapJob& job : bootstrap) {
        nlohmann::ordered_json jj = {
            {"pair", {job.corpus_a, job.corpus_b}},
            {"metric", std::string(to_string(job.spec.metric))},
            {"iterations", job.spec.iterations},
            {"sample_size", job.spec.sample_size},
            {"top_k", job.spec.top_k},
            {"seed", job.spec.seed},
            {"with_replacement", job.spec.with_replacement},
            {"jsd_variant", job.spec.jsd_variant == JsdVariant::DivergenceBase2
                                ? "divergence_base2"
                                : "distance_base_e"},
            {"keep_per_iteration", job.keep_per_iteration}};
        jj["venn_iteration"] = job.venn_iteration ? nlohmann::ordered_json(*job.venn_iteration)
                                                  : nlohmann::ordered_json(nullptr);
        jobs.push_back(std::move(jj));
    }
    j["bootstrap"] = jobs;
    j["subsample_fraction"] =
        subsample_fraction ? nlohmann::ordered_json(*subsample_fraction)
                           : nlohmann::ordered_json(nullptr);
    return j;
}

} // namespace lexrel
