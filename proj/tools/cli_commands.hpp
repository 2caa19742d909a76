#pragma once

#include "isq/io.hpp"

#include <string>
#include <vector>

namespace isq::cli {

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalError = 2, kVerifyFailed = 3 };

struct Options {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 1;
    std::string builtin;
};

// Parses argv (CLI11) and executes; returns the process exit code.
int run(int argc, const char* const* argv);
int execute(const Options& opt);

// Config helpers, exposed for tests.
json load_config(const Options& opt);
Coupling coupling_from(const json& j);
FieldProfile builtin_profile(const std::string& spec, const json& grid);
FieldProfile profile_from_config(const json& cfg);
KGrid kgrid_from_config(const json& cfg, const Coupling& c, const Asymptotics& asym);

std::string csv_number(double v);

}  // namespace isq::cli
