#include "cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cpulse/errors.hpp"

namespace cpulse::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigEntries parse_config(const std::string& text) {
    ConfigEntries out;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw PreconditionError("config line " + std::to_string(lineno) + ": empty key");
        if (!seen.insert(key).second) throw PreconditionError("config key '" + key + "' given twice");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

ConfigEntries load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    if (args.empty()) return args;
    std::vector<std::string> rest;
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw PreconditionError("--config needs a file argument");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    std::vector<std::string> out{args.front()};
    if (!path.empty()) {
        for (const auto& [key, value] : load_config(path)) {
            out.push_back("--" + key + "=" + value);
        }
    }
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

}  // namespace cpulse::cli
