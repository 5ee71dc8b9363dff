#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "lexrel/corpus.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("lexrel_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::filesystem::path file(const std::string& name, const std::string& content) const {
        const auto p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
};

inline lexrel::Document doc(std::string id, std::string text,
                            lexrel::CanonicalClass cls = lexrel::CanonicalClass::Neutral) {
    lexrel::Document d;
    d.id = std::move(id);
    d.text = std::move(text);
    d.canonical_class = cls;
    return d;
}

inline lexrel::Corpus corpus_of(std::vector<lexrel::Document> docs,
                                lexrel::CorpusSource source = lexrel::CorpusSource::Combined,
                                std::string name = "test") {
    return lexrel::Corpus{std::move(docs), source, "1", std::move(name)};
}

} // namespace testutil
