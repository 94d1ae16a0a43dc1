#include <groth/config.hpp>
#include <groth/error.hpp>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace groth {
namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw invalid_input("empty item in list '" + text + "'");
        out.push_back(item);
    }
    if (out.empty()) throw invalid_input("empty list");
    return out;
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& is)
{
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw invalid_input("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw invalid_input("config line " + std::to_string(lineno) + ": empty key or value");
        }
        if (cfg.has(key)) throw invalid_input("config key '" + key + "' repeated");
        cfg.entries_.emplace_back(key, value);
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open config '" + path + "'");
    return parse(in);
}

bool KeyValueConfig::has(const std::string& key) const
{
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == key; });
}

const std::string& KeyValueConfig::get(const std::string& key) const
{
    for (const auto& e : entries_) {
        if (e.first == key) return e.second;
    }
    throw invalid_input("config key '" + key + "' missing");
}

void KeyValueConfig::set(const std::string& key, const std::string& value)
{
    for (auto& e : entries_) {
        if (e.first == key) {
            e.second = value;
            return;
        }
    }
    entries_.emplace_back(key, value);
}

std::int64_t parse_int(const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0' || errno == ERANGE) {
        throw invalid_input("not an integer: '" + text + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t[0] == '-' || *end != '\0' || errno == ERANGE) {
        throw invalid_input("not a non-negative integer: '" + text + "'");
    }
    return v;
}

double parse_real(const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || errno == ERANGE) {
        throw invalid_input("not a number: '" + text + "'");
    }
    return v;
}

std::vector<std::int64_t> parse_int_list(const std::string& text)
{
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(text)) out.push_back(parse_int(item));
    return out;
}

std::vector<double> parse_real_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_real(item));
    return out;
}

} // namespace groth
