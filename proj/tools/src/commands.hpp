/// @file commands.hpp
/// @brief The kld command-line program as a callable library.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kld/detector.hpp"
#include "kld/generator.hpp"

namespace kld::cli {

/// Where a stream comes from, plus metadata for header-less CSV input.
struct StreamInput {
    std::string path = "-";
    std::optional<std::size_t> features;
    std::optional<std::size_t> classes;
    std::optional<std::size_t> chunk_size;
    std::optional<std::string> truth;  ///< overrides the header drift list
};

struct GenerateOptions {
    GeneratorConfig generator;
    std::string output = "-";
};

struct DetectOptions {
    StreamInput input;
    DetectorConfig detector;
    std::string mode = "auto";  ///< auto, online or batch
    std::string report = "-";
    std::string distances;  ///< optional per-pair CSV
    std::string plot_data;  ///< optional series CSV
};

struct EvaluateOptions {
    std::string report = "-";
    std::optional<std::string> truth;
    std::size_t tolerance = 30;
    std::vector<std::string> baselines;
    std::string output = "-";
    std::string json;
};

struct SweepOptions {
    StreamInput input;
    DetectorConfig detector;
    std::string alphas = "1.0:3.0:0.25";
    std::size_t tolerance = 30;
    std::string output = "-";
    std::string json;
};

/// Runs one invocation. `args` excludes the program name. "-" paths refer to
/// `in` and `out`. Returns the process exit code: 0 success, 1 usage error,
/// 2 data error, 3 internal error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace kld::cli
