#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crossq/app/commands.hpp"
#include "crossq/error.hpp"
#include "crossq/util/log.hpp"

namespace crossq::app {

namespace {

std::vector<int> parse_sizes(const std::string &text) {
    std::vector<int> sizes;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            sizes.push_back(std::stoi(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw UsageError("--sizes expects comma-separated integers, got '" + text + "'");
        }
    }
    return sizes;
}

struct Options {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool force = false;
    int fold = 0;
    std::string model;
    std::string sizes;
    int fixtures = 10;
    std::string log_level = "warn";
};

RunConfig default_config() {
    RunConfig c;
    c.synthetic = data::SyntheticSpec{};
    return c;
}

int dispatch(CLI::App &app, const Options &opt, std::ostream &out) {
    const auto *synth = app.get_subcommand("synth");
    const auto *backtest = app.get_subcommand("backtest");
    const auto *train = app.get_subcommand("train");
    const auto *gradcheck = app.get_subcommand("gradcheck");

    auto given = [](const CLI::App *sub, const char *name) { return sub->get_option(name)->count() > 0; };

    if (gradcheck->parsed()) {
        const std::uint64_t seed = given(gradcheck, "--seed") ? opt.seed : 0;
        return cmd_gradcheck(opt.model, opt.sizes.empty() ? std::vector<int>{} : parse_sizes(opt.sizes),
                             opt.fixtures, seed, out)
                   ? kExitOk
                   : kExitGradcheck;
    }

    const CLI::App *sub = synth->parsed() ? synth : backtest->parsed() ? backtest : train;
    RunConfig config = opt.config.empty() ? default_config() : load_run_config(opt.config);
    if (given(sub, "--seed")) {
        if (sub == synth) {
            if (config.synthetic) {
                config.synthetic->seed = opt.seed;
            }
        } else {
            config.seed = opt.seed;
        }
    }
    if (given(sub, "--threads")) {
        if (opt.threads < 1) {
            throw UsageError("--threads must be at least 1");
        }
        config.threads = opt.threads;
    }
    std::filesystem::path out_dir = config.output_dir;
    if (const char *env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        out_dir = env;
    }
    if (given(sub, "--out")) {
        out_dir = opt.out;
    }

    if (sub == synth) {
        cmd_synth(config, out_dir, opt.force, out);
    } else if (sub == backtest) {
        cmd_backtest(config, out_dir, opt.force, out);
    } else {
        cmd_train(config, opt.fold, out_dir, opt.force, out);
    }
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Walk-forward backtests of cross-sectional return predictors"};
    app.name(args.empty() ? "crossq" : args.front());
    app.require_subcommand(1);

    Options opt;
    app.add_option("--log-level", opt.log_level, "debug, info, warn, error or off")
        ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));

    auto add_run_options = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config, "JSON run configuration");
        sub->add_option("--out", opt.out, "output directory (overrides $CROSSQ_OUT_DIR and the config)");
        sub->add_option("--seed", opt.seed, "override the seed");
        sub->add_option("--threads", opt.threads, "worker threads");
        sub->add_flag("--force", opt.force, "overwrite existing outputs");
    };
    add_run_options(app.add_subcommand("synth", "write a synthetic panel and benchmark"));
    add_run_options(app.add_subcommand("backtest", "run the walk-forward backtest"));
    CLI::App *train = app.add_subcommand("train", "fit a single fold and write its loss trace");
    add_run_options(train);
    train->add_option("--fold", opt.fold, "fold index");
    CLI::App *gradcheck = app.add_subcommand("gradcheck", "compare analytic and finite-difference gradients");
    gradcheck->add_option("--model", opt.model, "qcl, tn or nn")->required();
    gradcheck->add_option("--sizes", opt.sizes, "qcl: n,d  tn: n,m  nn: layer sizes");
    gradcheck->add_option("--fixtures", opt.fixtures, "random fixtures");
    gradcheck->add_option("--seed", opt.seed, "fixture seed");

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        const std::string &l = opt.log_level;
        log::set_level(l == "debug"  ? log::Level::debug
                       : l == "info" ? log::Level::info
                       : l == "warn" ? log::Level::warn
                       : l == "error" ? log::Level::error
                                      : log::Level::off);
        return dispatch(app, opt, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DataError &e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

int run(int argc, const char *const *argv) {
    return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

} // namespace crossq::app
