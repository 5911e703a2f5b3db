// sbpctl: derive, certify and run experiments with upwind SBP operators.
#include "commands.hpp"
#include "config.hpp"

#include "sbp/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <memory>

using namespace sbpctl;

namespace {

struct Bound {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::string config;
};

void bind_keys(Bound& b, const CommandSpec& spec)
{
    for (const auto& k : spec.keys) {
        std::string help = k.help + " [default " + k.fallback + "]";
        b.app->add_option("--" + k.name, b.values[k.name], help);
    }
    b.app->add_option("--config", b.config, "config file (flags override its values)");
}

std::map<std::string, std::string> given(const Bound& b)
{
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : b.values)
        if (b.app->count("--" + k) > 0)
            out[k] = v;
    return out;
}

int execute(const std::string& command, const std::string& config_path, std::map<std::string, std::string> overrides,
            bool dry_run)
{
    Settings settings;
    try {
        ConfigFile file;
        if (!config_path.empty())
            file = read_config_file(config_path);
        std::vector<std::string> sections = command_names();
        settings = resolve(command_spec(command), file, overrides, sections);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    if (dry_run) {
        std::cout << settings.to_text();
        return kOk;
    }
    try {
        return run_command(command, settings);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const sbp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExperimentFailed;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sbpctl: boundary-optimized upwind SBP operators and experiments"};
    app.require_subcommand(1);
    std::vector<std::unique_ptr<Bound>> bound;
    for (const auto& spec : command_specs()) {
        auto b = std::make_unique<Bound>();
        b->app = app.add_subcommand(spec.name, spec.help);
        bind_keys(*b, spec);
        bound.push_back(std::move(b));
    }

    std::string preset_name, preset_config;
    bool dry_run = false;
    std::map<std::string, std::string> preset_values;
    std::string preset_help = "run a named experiment preset:";
    for (const auto& p : presets())
        preset_help += "\n  " + p.name + " (" + p.command + "): " + p.help;
    CLI::App* preset = app.add_subcommand("preset", preset_help);
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--config", preset_config, "config file");
    preset->add_flag("--dry-run", dry_run, "print the resolved settings and exit");
    for (const char* key : {"output", "restarts", "seed", "threads", "format"})
        preset->add_option(std::string("--") + key, preset_values[key], "override " + std::string(key));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (preset->parsed()) {
        const Preset* p = find_preset(preset_name);
        if (!p) {
            std::cerr << "config error: unknown preset '" << preset_name << "'\n";
            return kConfigError;
        }
        auto overrides = p->values;
        for (const auto& [k, v] : preset_values)
            if (preset->count("--" + k) > 0)
                overrides[k] = v;
        return execute(p->command, preset_config, overrides, dry_run);
    }
    for (const auto& b : bound)
        if (b->app->parsed())
            return execute(b->app->get_name(), b->config, given(*b), false);
    return kConfigError;
}
