// Generates the bundled synthetic fixture datasets (500 rows each, fixed
// seed) used by the smoke configs and the acceptance suite. The texts are
// nonsense sentences drawn from per-class vocabulary pools with a large
// shared pool, so classifiers have signal to learn and the corpora have
// non-trivial n-gram overlap. No real dataset content is reproduced.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lexrel/rng.hpp"

namespace {

using lexrel::Rng;

const std::vector<std::string> kShared = {
    "the",    "a",      "to",     "and",   "of",     "in",    "it",     "is",    "that",
    "you",    "for",    "on",     "this",  "with",   "they",  "be",     "have",  "not",
    "are",    "was",    "people", "think", "know",   "time",  "really", "right", "about",
    "just",   "like",   "what",   "when",  "because", "never", "always", "country", "world",
    "online", "everyone", "nobody", "thing", "say",   "said",  "make",   "way",   "well"};

const std::vector<std::string> kNeutral = {
    "weather", "coffee",  "garden", "music",  "movie",   "recipe", "bicycle", "weekend",
    "library", "project", "soccer", "puzzle", "morning", "dinner", "travel",  "photo",
    "guitar",  "novel",   "museum", "picnic"};

const std::vector<std::string> kSarcasm = {
    "oh",      "sure",     "totally",  "obviously", "genius",    "brilliant", "wow",
    "shocking", "clearly",  "amazing",  "definitely", "groundbreaking", "stunning",
    "congrats", "perfect",  "classic",  "riveting",  "subtle"};

const std::vector<std::string> kImplicit = {
    "those",   "them",     "outsiders", "unwelcome", "agenda",  "culture", "belong",
    "values",  "tradition", "invade",   "replace",   "flood",   "take",    "our",
    "borders", "homeland"};

const std::vector<std::string> kExplicit = {
    "trash",  "vermin", "scum",   "filth",  "worthless", "disgusting", "parasites",
    "idiots", "losers", "morons", "awful",  "horrible"};

std::string pick(Rng& rng, const std::vector<std::string>& pool) {
    return pool[rng.below(pool.size())];
}

// A sentence is mostly shared/neutral words with marker words mixed in at
// marker_rate, which keeps the classes separable but overlapping.
std::string sentence(Rng& rng, const std::vector<std::string>& markers, double marker_rate) {
    const std::size_t len = 8 + rng.below(11);
    std::string out;
    for (std::size_t i = 0; i < len; ++i) {
        if (!out.empty()) out.push_back(' ');
        if (!markers.empty() && rng.unit() < marker_rate) {
            out += pick(rng, markers);
        } else {
            out += rng.unit() < 0.75 ? pick(rng, kShared) : pick(rng, kNeutral);
        }
    }
    return out;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_sarc(const std::filesystem::path& path, Rng& rng, int rows) {
    std::ofstream out(path, std::ios::binary);
    out << "label,comment,parent_comment,ups,downs\n";
    for (int i = 0; i < rows; ++i) {
        const bool sarcastic = rng.below(2) == 0;
        const std::string comment = sentence(rng, sarcastic ? kSarcasm : std::vector<std::string>{}, 0.35);
        const std::string parent = sentence(rng, {}, 0.0);
        // Most rows pass the >10 ups / 0 downs filter; some do not.
        long ups = 11 + static_cast<long>(rng.below(60));
        long downs = 0;
        const auto roll = rng.below(10);
        if (roll == 0) ups = static_cast<long>(rng.below(11)); // fails ups > 10
        else if (roll == 1) downs = 1 + static_cast<long>(rng.below(3));
        out << (sarcastic ? 1 : 0) << ',' << quoted(comment) << ',' << quoted(parent) << ','
            << ups << ',' << downs << '\n';
    }
    // Two malformed rows so smoke-run ingest reports exercise the skip path.
    out << "1,\"only three fields\",x\n";
    out << "not_a_label,\"bad label row\",\"parent\",12,0\n";
}

void write_implicit_hate(const std::filesystem::path& path, Rng& rng, int rows) {
    std::ofstream out(path, std::ios::binary);
    out << "post\tclass\n";
    for (int i = 0; i < rows; ++i) {
        const auto roll = rng.below(100);
        std::string klass;
        std::string text;
        if (roll < 62) {
            klass = "not_hate";
            text = sentence(rng, {}, 0.0);
        } else if (roll < 84) {
            klass = "implicit_hate";
            text = sentence(rng, kImplicit, 0.4);
        } else {
            klass = "explicit_hate";
            text = sentence(rng, kExplicit, 0.4);
        }
        out << text << '\t' << klass << '\n';
    }
    out << "row with a bogus class\tsomething_else\n";
}

void write_ethos(const std::filesystem::path& path, Rng& rng, int rows) {
    std::ofstream out(path, std::ios::binary);
    out << "comment;isHate\n";
    for (int i = 0; i < rows; ++i) {
        const bool hateful = rng.below(100) < 45;
        std::string text;
        double score;
        if (hateful) {
            text = sentence(rng, rng.below(2) == 0 ? kImplicit : kExplicit, 0.4);
            score = 0.33 + rng.unit() * 0.67;
        } else {
            text = sentence(rng, {}, 0.0);
            score = rng.unit() * 0.32;
        }
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.3f", score);
        out << quoted(text) << ';' << buf << '\n';
    }
    out << "\"score out of range\";1.7\n";
}

void write_sarcasm_v2(const std::filesystem::path& path, Rng& rng, int rows) {
    std::ofstream out(path, std::ios::binary);
    out << "text\n";
    for (int i = 0; i < rows; ++i) {
        const bool sarcastic = rng.below(2) == 0;
        out << quoted(sentence(rng, sarcastic ? kSarcasm : std::vector<std::string>{}, 0.3))
            << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Write the synthetic fixture datasets"};
    std::string out_dir = "tests/fixtures";
    std::uint64_t seed = 1337;
    int rows = 500;
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Generator seed");
    app.add_option("--rows", rows, "Rows per dataset");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    // Independent streams per file so row counts can change independently.
    Rng r1(seed ^ 1), r2(seed ^ 2), r3(seed ^ 3), r4(seed ^ 4);
    write_sarc(dir / "sarc.csv", r1, rows);
    write_implicit_hate(dir / "implicit_hate.tsv", r2, rows);
    write_ethos(dir / "ethos.csv", r3, rows);
    write_sarcasm_v2(dir / "sarcasm_v2.csv", r4, rows);
    std::cout << "fixtures written to " << out_dir << '\n';
    return 0;
}
