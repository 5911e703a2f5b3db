#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sbpctl {

const KeySpec* CommandSpec::find(const std::string& key) const
{
    for (const auto& k : keys)
        if (k.name == key)
            return &k;
    return nullptr;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_int(const std::string& s, long& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_real(const std::string& s, double& out)
{
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

std::string range_text(const KeySpec& k)
{
    std::ostringstream os;
    os << "[" << k.lo << ", " << k.hi << "]";
    return os.str();
}

void check_number(const KeySpec& k, const std::string& item, bool integral)
{
    double v = 0.0;
    if (integral) {
        long i = 0;
        if (!parse_int(item, i))
            throw ConfigError(k.name + ": '" + item + "' is not an integer");
        v = static_cast<double>(i);
    } else if (!parse_real(item, v)) {
        throw ConfigError(k.name + ": '" + item + "' is not a number");
    }
    if (v < k.lo || v > k.hi)
        throw ConfigError(k.name + ": " + item + " outside " + range_text(k));
}

void check_source(const KeySpec& k, const std::string& item)
{
    if (item.rfind("derive:", 0) == 0) {
        long p = 0;
        if (!parse_int(item.substr(7), p) || p < 2 || p > 9)
            throw ConfigError(k.name + ": '" + item + "' needs an order 2..9");
        return;
    }
    if (item.rfind("file:", 0) == 0) {
        const std::string path = item.substr(5);
        if (path.empty() || !std::filesystem::is_regular_file(path))
            throw ConfigError(k.name + ": operator file '" + path + "' does not exist");
        return;
    }
    throw ConfigError(k.name + ": '" + item + "' is neither derive:<p> nor file:<path>");
}

void validate(const KeySpec& k, const std::string& v)
{
    switch (k.kind) {
    case KeyKind::integer:
        check_number(k, v, true);
        break;
    case KeyKind::real:
        check_number(k, v, false);
        break;
    case KeyKind::text:
        break;
    case KeyKind::choice:
        if (std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
            std::string all;
            for (const auto& c : k.choices)
                all += (all.empty() ? "" : "|") + c;
            throw ConfigError(k.name + ": '" + v + "' is not one of " + all);
        }
        break;
    case KeyKind::flag:
        if (v != "true" && v != "false")
            throw ConfigError(k.name + ": expected true or false, got '" + v + "'");
        break;
    case KeyKind::int_list:
    case KeyKind::real_list:
    case KeyKind::source_list: {
        const auto items = split_list(v);
        if (items.empty())
            throw ConfigError(k.name + ": empty list");
        for (const auto& item : items) {
            if (k.kind == KeyKind::source_list)
                check_source(k, item);
            else
                check_number(k, item, k.kind == KeyKind::int_list);
        }
        break;
    }
    }
}

} // namespace

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty())
            out.push_back(cur);
    }
    return out;
}

ConfigFile parse_config_text(const std::string& text, const std::string& source)
{
    ConfigFile out;
    std::string section;
    out[section];
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = source + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError(where + "empty key");
        if (out[section].count(key))
            throw ConfigError(where + "duplicate key '" + key + "'");
        out[section][key] = trim(line.substr(eq + 1));
    }
    return out;
}

ConfigFile read_config_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str(), path);
}

Settings resolve(const CommandSpec& spec, const ConfigFile& file, const std::map<std::string, std::string>& overrides,
                 const std::vector<std::string>& known_sections)
{
    std::map<std::string, std::string> values;
    for (const auto& k : spec.keys)
        values[k.name] = k.fallback;
    for (const auto& [section, kv] : file) {
        const bool known = section.empty() ||
                           std::find(known_sections.begin(), known_sections.end(), section) != known_sections.end();
        if (!known)
            throw ConfigError("unknown config section [" + section + "]");
        if (!section.empty() && section != spec.name)
            continue;
        for (const auto& [key, value] : kv) {
            if (!spec.find(key))
                throw ConfigError("unknown key '" + key + "'" +
                                  (section.empty() ? "" : " in section [" + section + "]") + " for " + spec.name);
        }
    }
    // Global first, then the command's own section.
    for (const std::string& sec : {std::string(), spec.name})
        if (auto it = file.find(sec); it != file.end())
            for (const auto& [key, value] : it->second)
                values[key] = value;
    for (const auto& [key, value] : overrides) {
        if (!spec.find(key))
            throw ConfigError("unknown key '" + key + "' for " + spec.name);
        values[key] = value;
    }
    for (const auto& k : spec.keys)
        validate(k, values[k.name]);
    return Settings(&spec, std::move(values));
}

const std::string& Settings::raw(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("internal: no setting '" + key + "'");
    return it->second;
}

int Settings::integer(const std::string& key) const
{
    long v = 0;
    parse_int(raw(key), v);
    return static_cast<int>(v);
}

double Settings::real(const std::string& key) const
{
    double v = 0.0;
    parse_real(raw(key), v);
    return v;
}

bool Settings::flag(const std::string& key) const { return raw(key) == "true"; }

std::vector<int> Settings::ints(const std::string& key) const
{
    std::vector<int> out;
    for (const auto& s : split_list(raw(key))) {
        long v = 0;
        parse_int(s, v);
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> Settings::reals(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& s : split_list(raw(key))) {
        double v = 0.0;
        parse_real(s, v);
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> Settings::list(const std::string& key) const { return split_list(raw(key)); }

std::string Settings::to_text() const
{
    std::ostringstream os;
    os << "[" << (spec_ ? spec_->name : "") << "]\n";
    for (const auto& [k, v] : values_)
        os << k << " = " << v << "\n";
    return os.str();
}

} // namespace sbpctl
