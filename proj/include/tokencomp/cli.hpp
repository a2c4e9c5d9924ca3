#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace tokencomp {

/// Process exit codes; stable across releases.
enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 1,    // validation, parse, config or asset failure
    kExitBackend = 2,  // backend or contract failure
};

struct ComposeArgs {
    std::filesystem::path design;
    std::filesystem::path config;  // optional
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    bool debug_intermediates = false;
};

struct ProbeArgs {
    std::filesystem::path design;
    std::filesystem::path config;
    std::filesystem::path out_dir;
    std::string element_id;
    std::optional<std::uint64_t> seed;
};

struct EvalArgs {
    std::filesystem::path pairs;
    std::filesystem::path config;
    std::filesystem::path out;  // report JSON; the text table goes next to it as .txt
};

/// Writes backing.png and manifest.json into out_dir.
int cmd_compose(const ComposeArgs& args);

/// Writes relevance.csv, selection.json, fg_mask.png and heatmaps/token_NN.png
/// for one element at the canvas state it would be composed onto.
int cmd_probe(const ProbeArgs& args);

/// Reads a pairs manifest and writes the identity report.
int cmd_eval(const EvalArgs& args);

/// Subcommand dispatch: compose | probe | eval.
int run_cli(int argc, char** argv);

}  // namespace tokencomp
