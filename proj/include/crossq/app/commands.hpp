#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crossq/app/config.hpp"
#include "crossq/data/synthetic.hpp"

namespace crossq::app {

/// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitConfig = 3,
    kExitData = 4,
    kExitNumerical = 5,
    kExitGradcheck = 6,
};

/// Environment variable that overrides the configured output directory.
inline constexpr const char *kOutDirEnv = "CROSSQ_OUT_DIR";

/// Writes `content` to a sibling temp file and renames it into place.
/// UsageError when `path` exists and `force` is false.
void write_atomic(const std::filesystem::path &path, const std::string &content, bool force);

/// Panel and benchmark from CSV paths or the synthetic generator.
data::SyntheticMarket load_market(const RunConfig &config);

/// File names written by each command inside the output directory.
inline constexpr const char *kPanelFile = "panel.csv";
inline constexpr const char *kBenchmarkFile = "benchmark.csv";
inline constexpr const char *kReportFile = "report.json";
inline constexpr const char *kMonthlyFile = "monthly.csv";
inline constexpr const char *kCumulativeFile = "cumulative.csv";
std::string train_file(int fold);

/// The report's config echo: every field that influences results.
Json result_echo(const RunConfig &config);

void cmd_synth(const RunConfig &config, const std::filesystem::path &out_dir, bool force, std::ostream &out);
void cmd_backtest(const RunConfig &config, const std::filesystem::path &out_dir, bool force, std::ostream &out);
void cmd_train(const RunConfig &config, int fold, const std::filesystem::path &out_dir, bool force,
               std::ostream &out);
/// Returns true when the check passes.
bool cmd_gradcheck(const std::string &model, const std::vector<int> &sizes, int fixtures, std::uint64_t seed,
                   std::ostream &out);

/// Full command line (argv[0] first). Never throws; maps failures to exit codes.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv);

} // namespace crossq::app
