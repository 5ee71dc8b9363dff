// lexrel command-line front end.
//
// Exit codes: 0 success, 1 config/validation error, 2 ingest failure,
// 3 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lexrel/errors.hpp"
#include "lexrel/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run config JSON file")->required();
    cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
    auto* seed_opt = cmd->add_option("--seed", "Global seed (overrides config)");
    seed_opt->each([&args](const std::string& v) { args.seed = std::stoull(v); });
    cmd->add_option("--threads", args.threads, "Bootstrap parallelism (overrides config)");
}

int run(const CommonArgs& args, lexrel::ExperimentKind kind) {
    lexrel::RunConfig config = lexrel::RunConfig::from_file(args.config_path, args.seed);
    config.experiment = kind;
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    if (args.threads > 0) config.threads = args.threads;

    const lexrel::ExecuteOutcome outcome = lexrel::execute(config);
    std::cout << "report written to " << outcome.report_path.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Corpus relatedness and sarcasm-to-hate transfer experiments"};
    app.require_subcommand(1);

    CommonArgs args;
    struct Verb {
        const char* name;
        const char* help;
        lexrel::ExperimentKind kind;
        bool validate_only;
    };
    const Verb verbs[] = {
        {"similarity", "Bootstrapped Jaccard/JSD corpus comparisons",
         lexrel::ExperimentKind::Similarity, false},
        {"single-step", "Train once on combined sarcasm labels, evaluate both projections",
         lexrel::ExperimentKind::SingleStep, false},
        {"sequential", "Sequential transfer pipeline: sarcasm -> implicit hate -> ETHOS",
         lexrel::ExperimentKind::Sequential, false},
        {"ablation", "Sequential pipeline with and without the sarcasm stage, with deltas",
         lexrel::ExperimentKind::Ablation, false},
        {"validate", "Parse and validate a config, print the resolved snapshot",
         lexrel::ExperimentKind::Similarity, true},
    };

    CLI::App* chosen = nullptr;
    const Verb* chosen_verb = nullptr;
    for (const Verb& verb : verbs) {
        CLI::App* cmd = app.add_subcommand(verb.name, verb.help);
        add_common(cmd, args);
        cmd->callback([&chosen, &chosen_verb, cmd, &verb]() {
            chosen = cmd;
            chosen_verb = &verb;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        // The validate verb keeps the experiment kind from the config file.
        if (chosen_verb->validate_only) {
            lexrel::RunConfig config = lexrel::RunConfig::from_file(args.config_path, args.seed);
            if (!args.out_dir.empty()) config.output_dir = args.out_dir;
            config.validate(true);
            std::cout << "config ok\n" << config.snapshot().dump(2) << '\n';
            return 0;
        }
        return run(args, chosen_verb->kind);
    } catch (const lexrel::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const lexrel::IngestError& e) {
        std::cerr << "ingest error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
