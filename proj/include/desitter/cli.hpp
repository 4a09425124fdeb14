#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "desitter/io.hpp"

namespace desitter::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;     // unexpected error (I/O, internal)
inline constexpr int kValidation = 2;  // bad parameters or setup
inline constexpr int kAccuracy = 3;    // tolerance or coverage not met

struct ParamSpec {
    std::string key;
    std::string default_value;
    std::string help;
};

// Subcommand names in help order, and the parameters each accepts.
const std::vector<std::string>& subcommands();
const std::vector<ParamSpec>& subcommand_params(const std::string& subcommand);  // throws ValidationError

struct ExperimentSpec {
    std::string subcommand;
    std::map<std::string, std::string> params;  // missing keys take their defaults
    std::filesystem::path out_dir = "out";

    // {"subcommand": ..., "params": {...}, "out_dir": ...}; numbers and arrays
    // in params are converted to their flag spelling. Unknown keys are rejected.
    static ExperimentSpec from_json(const std::string& text);  // throws ValidationError

    // Fails on unknown subcommand or parameter; returns the params with defaults filled in.
    [[nodiscard]] std::map<std::string, std::string> resolved() const;
};

struct RunResult {
    int status = kOk;
    std::string message;
    std::vector<io::WrittenFile> files;  // manifest.json last
};

// Validates, computes, writes the result files and manifest.json into out_dir.
RunResult run(const ExperimentSpec& spec);

// Command line front end; returns the exit status.
int main_entry(int argc, char** argv);

}  // namespace desitter::cli
