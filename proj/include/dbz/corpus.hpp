#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dbz/series.hpp"

namespace dbz {

struct CorpusRow {
    std::string id;
    std::string expr;
    std::string var;
    std::string anchor;  // evaluated after binding, so "2*a" works
    std::vector<std::pair<std::string, std::string>> bindings;
    std::string expected_c0;
    std::string paper_section;
    std::string sense;  // "good" | "nonsense"
};

/// Reads the versioned corpus JSON ({"version":1,"rows":[...]}).
std::vector<CorpusRow> load_corpus(std::string_view json);

/// The corpus table compiled into the library (data/corpus.json).
std::string_view builtin_corpus_json();
std::vector<CorpusRow> builtin_corpus();

struct RowResult {
    CorpusRow row;
    std::string actual;  // empty when evaluation failed
    std::string error;   // error name and message when evaluation failed
    bool pass = false;
};

struct CorpusReport {
    std::vector<RowResult> rows;

    bool all_passed() const;
    std::size_t passed() const;
    std::string to_text() const;
    std::string to_json() const;
};

/// Evaluates every row in table order. Rows never throw; failures are
/// reported. Float-mode rows pass within 2^-(precision - 16) of expected.
CorpusReport corpus_run(const std::vector<CorpusRow>& rows, const ExpandOptions& options = {});

}  // namespace dbz
