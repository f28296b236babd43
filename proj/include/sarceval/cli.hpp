#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sarceval/parse.hpp"

namespace sarceval::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitBackendError = 2;

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the real process environment.
std::optional<std::string> process_env(const std::string& name);

/// Entry point shared by the executable and the tests. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

struct PredictionRow {
    std::string id;
    FinalPrediction prediction;
};

/// Reads a predictions file: a header naming an `id` column and either a
/// `final` column (runner output) or a `label` column (corpus format).
/// `excluded` is accepted in the `final` column only.
std::vector<PredictionRow> load_predictions(const std::string& path);

}  // namespace sarceval::cli
