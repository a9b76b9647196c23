#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dbz/scalar.hpp"

namespace dbz::cli {

enum class Output { Text, Json };

struct CliConfig {
    Mode mode = Mode::Exact;
    long precision = kDefaultPrecision;
    long order = 16;
    Output output = Output::Text;
    unsigned long seed = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitEval = 2;
inline constexpr int kExitCorpus = 3;

/// Applies "key = value" lines (mode, precision, order, output, seed) on top
/// of `base`. Blank lines and lines starting with '#' are skipped.
CliConfig apply_config_text(CliConfig base, const std::string& text);

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dbz::cli
