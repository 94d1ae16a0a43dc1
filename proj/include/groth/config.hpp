#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace groth {

/**
 * Flat "key = value" text: one entry per line, '#' starts a comment, blank
 * lines are ignored, list values are comma-separated. Keys keep file order;
 * a repeated key is an error.
 */
class KeyValueConfig
{
public:
    static KeyValueConfig parse(std::istream& is);
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    void set(const std::string& key, const std::string& value);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::int64_t parse_int(const std::string& text);
std::uint64_t parse_uint(const std::string& text);
double parse_real(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

} // namespace groth
