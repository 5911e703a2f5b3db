#pragma once

#include "config.hpp"

#include <map>
#include <string>
#include <vector>

namespace sbpctl {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kExperimentFailed = 1;
inline constexpr int kConfigError = 2;

const std::vector<CommandSpec>& command_specs();
const CommandSpec& command_spec(const std::string& name);
std::vector<std::string> command_names();

// Runs a validated command; returns kOk or kExperimentFailed.
int run_command(const std::string& name, const Settings& settings);

struct Preset {
    std::string name;
    std::string command;
    std::map<std::string, std::string> values;
    std::string help;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

} // namespace sbpctl
