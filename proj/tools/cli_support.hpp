// Shared plumbing for the szego command line tool: config file merging,
// state input and artifact writing.
#ifndef SZEGO_TOOLS_CLI_SUPPORT_HPP
#define SZEGO_TOOLS_CLI_SUPPORT_HPP

#include "szego/hardy.hpp"
#include "szego/v3_reduced.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace szego::cli {

/// Bad flags, unreadable files, malformed config: exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config;
    std::uint64_t seed = 42;
    unsigned jobs = 1;
    bool quiet = false;
};

/// What a subcommand hands back to main.
struct Report {
    nlohmann::json body = nlohmann::json::object();
    std::vector<std::string> failures;
};

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

///
/// Fills options that were not given on the command line from the config
/// document: top-level keys for `app`, the object under the subcommand name
/// for `sub`. Keys may use '-' or '_'. Unknown keys are a usage error.
///
void apply_config(const nlohmann::json& config, CLI::App& app, CLI::App& sub);

/// State input shared by several subcommands: --in FILE, or the V(3)
/// triple b + c z / (1 - p z) given by --b, --c, --p.
struct StateInput {
    std::string in;
    std::vector<double> b{0.3, 0.1};
    std::vector<double> c{1.0, 0.0};
    std::vector<double> p{0.4, 0.0};
    std::size_t trunc = 256;

    void add_options(CLI::App& sub, std::size_t default_trunc);

    /// A Hardy coefficients document ({"trunc","re","im"}) is used as is,
    /// zero-padded to --trunc; a V(3) document (b_re, ...) is embedded.
    HardyCoefficients load() const;
    V3State v3() const;
};

/// {"tool","command","seed",...} block put at the top of every artifact.
nlohmann::json artifact_header(const std::string& command, const Globals& g);

void log(const Globals& g, const std::string& line);

} // namespace szego::cli

#endif
