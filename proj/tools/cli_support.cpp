#include "cli_support.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace szego::cli {

namespace {

std::string scalar_text(const nlohmann::json& v)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_number()) {
        return v.dump();
    }
    throw UsageError("config values must be strings, numbers, booleans or arrays of those");
}

std::string normalize(std::string key)
{
    for (auto& ch : key) {
        if (ch == '_') {
            ch = '-';
        }
    }
    return key;
}

void fill(const nlohmann::json& values, CLI::App& app, const std::string& where)
{
    if (!values.is_object()) {
        throw UsageError("config section '" + where + "' must be an object");
    }
    for (const auto& [key, value] : values.items()) {
        if (value.is_object()) {
            continue; // subcommand section, handled separately
        }
        CLI::Option* opt = nullptr;
        try {
            opt = app.get_option("--" + normalize(key));
        } catch (const CLI::OptionNotFound&) {
            throw UsageError("unknown config key '" + key + "' in " + where);
        }
        if (opt->count() > 0) {
            continue; // flag given on the command line wins
        }
        opt->clear();
        if (value.is_array()) {
            for (const auto& item : value) {
                opt->add_result(scalar_text(item));
            }
        } else {
            opt->add_result(scalar_text(value));
        }
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

cplx as_complex(const std::vector<double>& v, const char* name)
{
    if (v.empty() || v.size() > 2) {
        throw UsageError(std::string("--") + name + " takes 're' or 're,im'");
    }
    return {v[0], v.size() > 1 ? v[1] : 0.0};
}

} // namespace

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot write " + path);
    }
    out << text;
}

void apply_config(const nlohmann::json& config, CLI::App& app, CLI::App& sub)
{
    if (!config.is_object()) {
        throw UsageError("config must be a JSON object");
    }
    fill(config, app, "top level");
    for (const auto& [key, value] : config.items()) {
        if (value.is_object() && key != sub.get_name()) {
            const auto subs = app.get_subcommands([&](const CLI::App* s) { return s->get_name() == key; });
            if (subs.empty()) {
                throw UsageError("unknown config section '" + key + "'");
            }
        }
    }
    if (config.contains(sub.get_name())) {
        fill(config.at(sub.get_name()), sub, sub.get_name());
    }
}

void StateInput::add_options(CLI::App& sub, std::size_t default_trunc)
{
    trunc = default_trunc;
    sub.add_option("--in", in, "state JSON (Hardy coefficients or V(3) triple)");
    sub.add_option("--b", b, "V(3) constant term, re[,im]")->delimiter(',')->expected(1, 2);
    sub.add_option("--c", c, "V(3) numerator, re[,im]")->delimiter(',')->expected(1, 2);
    sub.add_option("--p", p, "V(3) pole, re[,im]")->delimiter(',')->expected(1, 2);
    sub.add_option("--trunc", trunc, "mode count")->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
}

V3State StateInput::v3() const
{
    return {as_complex(b, "b"), as_complex(c, "c"), as_complex(p, "p")};
}

HardyCoefficients StateInput::load() const
{
    if (in.empty()) {
        return embed(v3(), trunc);
    }
    const auto doc = read_json_file(in);
    try {
        if (doc.contains("b_re")) {
            return embed(doc.get<V3State>(), trunc);
        }
        const auto u = doc.get<HardyCoefficients>();
        return u.trunc() < trunc ? u.resized(trunc) : u;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(in + ": " + e.what());
    }
}

nlohmann::json artifact_header(const std::string& command, const Globals& g)
{
    return {{"tool", "szego"}, {"command", command}, {"seed", g.seed}};
}

void log(const Globals& g, const std::string& line)
{
    if (!g.quiet) {
        std::cerr << "[szego] " << line << '\n';
    }
}

} // namespace szego::cli
