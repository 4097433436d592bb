#pragma once

#include "pdfuse/error.h"
#include "pdfuse/json_io.h"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pdfuse::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kParse = 3,
    kDegenerate = 4,
    kTotalConflict = 5,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutEnv = "PDFUSE_OUT";

int exit_code_for(Errc code) noexcept;

std::string sha256_hex(std::string_view bytes);

/// Provenance record written next to every command's outputs.
struct RunManifest {
    std::string command;
    Json config;  // canonicalized inputs, including input file digests
    Json seeds = Json::object();
    std::vector<std::string> outputs;

    std::string config_digest() const;
    Json to_json() const;
};

std::string version_string();

/// Runs one command line; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace pdfuse::cli
