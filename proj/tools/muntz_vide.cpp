// Command-line driver: muntz_vide solve|sweep|compare [--config FILE] [--set key=value ...]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "muntz/run.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Jacobi collocation for weakly singular delay VIDEs"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    const std::pair<const char*, const char*> modes[] = {
        {"solve", "one solve at a single N; also writes the nodal dump"},
        {"sweep", "one solve per N against the exact solution (or ref_N)"},
        {"compare", "one solve per N against a reference solve at ref_N"},
    };
    for (const auto& [name, help] : modes) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config,-c", config_path, "key = value config file");
        sub->add_option("--set,-s", sets, "override a config key (key=value)")->allow_extra_args(false);
    }

    CLI11_PARSE(app, argc, argv);
    const std::string mode = app.get_subcommands().front()->get_name();

    try {
        const std::string text = config_path.empty() ? std::string{} : read_file(config_path);
        std::vector<muntz::KeyValue> overrides;
        for (const auto& s : sets) overrides.push_back(muntz::parse_override(s));
        overrides.emplace_back("mode", mode);
        const muntz::RunSpec spec = muntz::parse_config(text, overrides);
        return muntz::run(spec, std::cout);
    } catch (const muntz::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const muntz::ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
