// Parameter file parsing: flat key=value lines with '#' comments.

#include "lgk/config_io.hpp"
#include "lgk/error.hpp"
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace lgk {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(value, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad integer for " + key + ": " + value);
    }
    if (pos != value.size()) throw ParseError("bad integer for " + key + ": " + value);
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ParseError("bad number for " + key + ": " + value);
    }
    if (pos != value.size()) throw ParseError("bad number for " + key + ": " + value);
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError("bad bool for " + key + ": " + value);
}

} // namespace

ModelParams parse_params_text(const std::string& text) {
    ModelParams p;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(lineno) + ": expected key=value");
        if (!seen.insert(key).second)
            throw ParseError("duplicate key: " + key);
        if (key == "u1") p.u1 = parse_rat(value);
        else if (key == "u2") p.u2 = parse_rat(value);
        else if (key == "delta") p.delta = parse_rat(value);
        else if (key == "beta") p.beta = parse_double(key, value);
        else if (key == "l0") p.l0 = parse_int(key, value);
        else if (key == "strict") p.strict = parse_bool(key, value);
        else throw ParseError("unknown key: " + key);
    }
    for (const char* req : {"u1", "u2", "delta", "l0"})
        if (!seen.count(req)) throw ParseError(std::string("missing key: ") + req);
    if (p.beta <= 0) throw ParseError("beta must be positive");
    if (p.l0 < 1) throw ParseError("l0 must be at least 1");
    return p;
}

ModelParams parse_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open parameter file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_params_text(buf.str());
}

} // namespace lgk
