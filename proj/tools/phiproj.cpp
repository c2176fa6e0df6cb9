#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "phiproj/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"phi-divergence projections on parametric models and their asymptotics"};
    app.require_subcommand(1);

    std::string config;
    std::uint64_t seed = 0;
    long n = 0;
    long big_n = 0;
    std::string out;
    std::string format;

    struct Flags
    {
        CLI::Option* seed;
        CLI::Option* n;
        CLI::Option* big_n;
        CLI::Option* out;
        CLI::Option* format;
    };
    std::vector<std::pair<CLI::App*, Flags>> subs;
    const std::pair<const char*, const char*> commands[] = {
        {"project", "project the target onto the model"},
        {"asymptotics", "Jacobians and the delta-method covariance at the target"},
        {"montecarlo", "compare the delta-method covariance with simulated replicates"},
        {"check", "run every diagnostic on the instance"},
        {"sweep", "multistart uniqueness sweep around the target"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON run configuration")
            ->required()
            ->check(CLI::ExistingFile);
        Flags f;
        f.seed = sub->add_option("--seed", seed, "seed for every random stream");
        f.n = sub->add_option("--n", n, "Monte Carlo sample size")->check(CLI::PositiveNumber);
        f.big_n = sub->add_option("--N", big_n, "Monte Carlo replicate count")
                      ->check(CLI::PositiveNumber);
        f.out = sub->add_option("--out", out, "output directory");
        f.format = sub->add_option("--format", format, "matrix output format")
                       ->check(CLI::IsMember({"csv", "json"}));
        subs.emplace_back(sub, f);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : phiproj::cli::exit_validation;
    }

    for (const auto& [sub, f] : subs) {
        if (!sub->parsed())
            continue;
        phiproj::cli::Overrides ov;
        if (f.seed->count())
            ov.seed = seed;
        if (f.n->count())
            ov.n = n;
        if (f.big_n->count())
            ov.N = big_n;
        if (f.out->count())
            ov.out = out;
        if (f.format->count())
            ov.format = format;
        return phiproj::cli::run(sub->get_name(), config, ov, std::cout, std::cerr);
    }
    return phiproj::cli::exit_validation;
}
