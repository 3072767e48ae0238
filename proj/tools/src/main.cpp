#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "bvqlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bvqlab: nonlocal functionals, oscillation and jump diagnostics on sampled fields"};
    app.require_subcommand(1);
    bvqlab::RunOptions opts;
    std::uint64_t seed = 0;
    const std::map<std::string, std::string> about = {
        {"constants", "dimensional constants C_N, gamma(N), alpha(N)"},
        {"besov", "Besov q-constants over an epsilon schedule"},
        {"oscillation", "oscillation profiles and S/S'/S'' classification at points"},
        {"jumps", "jump detection, interface reconstruction, q-jump variation"},
        {"verify", "q-jump inequality verdict, optional sandwich check"},
        {"lusin", "good-set filtration, compact selection, Hoelder extension"},
        {"gallery-list", "list the analytic field gallery"},
        {"import", "load and summarise a .bvqf field"},
        {"export", "write a gallery field as .bvqf"}};
    for (const auto& name : bvqlab::subcommands()) {
        const auto it = about.find(name);
        auto* sub = app.add_subcommand(name, it == about.end() ? std::string{} : it->second);
        sub->add_option("--config,-c", opts.config, "experiment config (dotted text or JSON)");
        sub->add_option("--out,-o", opts.out, "output directory");
        sub->add_option("--threads,-j", opts.threads, "worker threads (0: hardware)")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", seed, "overrides the config seed");
        sub->add_option("--tolerance-profile", opts.tolerance_profile, "strict or default")
            ->check(CLI::IsMember({"strict", "default"}));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bvqlab::config_error;
    }
    const auto* chosen = app.get_subcommands().front();
    if (chosen->count("--seed") > 0) opts.seed = seed;
    return bvqlab::run(chosen->get_name(), opts, std::cout, std::cerr);
}
