#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbpctl {

// Anything wrong with the configuration; maps to exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KeyKind { integer, real, text, choice, flag, int_list, real_list, source_list };

struct KeySpec {
    std::string name;
    KeyKind kind = KeyKind::text;
    std::string fallback;   // default value in config syntax
    double lo = 0.0;        // numeric range, inclusive (also for list entries)
    double hi = 0.0;
    std::vector<std::string> choices;
    std::string help;
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<KeySpec> keys;

    const KeySpec* find(const std::string& key) const;
};

// Flat "key = value" lines; "[name]" starts a section, keys before any
// section go to "". '#' starts a comment.
using ConfigFile = std::map<std::string, std::map<std::string, std::string>>;
ConfigFile parse_config_text(const std::string& text, const std::string& source);
ConfigFile read_config_file(const std::string& path);

class Settings {
public:
    Settings() = default;
    Settings(const CommandSpec* spec, std::map<std::string, std::string> values)
        : spec_(spec), values_(std::move(values))
    {
    }

    const std::string& raw(const std::string& key) const;
    int integer(const std::string& key) const;
    double real(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::vector<int> ints(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::string> list(const std::string& key) const;

    // Canonical config text for this command (sorted keys).
    std::string to_text() const;

private:
    const CommandSpec* spec_ = nullptr;
    std::map<std::string, std::string> values_;
};

// Defaults, then the file's global and command sections, then overrides.
// Every value is validated before anything runs.
Settings resolve(const CommandSpec& spec, const ConfigFile& file, const std::map<std::string, std::string>& overrides,
                 const std::vector<std::string>& known_sections);

std::vector<std::string> split_list(const std::string& s);

} // namespace sbpctl
