#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textlier/checkpoint.hpp"
#include "textlier/cli/run_config.hpp"
#include "textlier/eval.hpp"

namespace textlier::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2, kFormat = 3, kNumerical = 4 };

/// Maps an exception onto the documented exit codes.
int exit_code_for(const std::exception& e) noexcept;

/// Parses `args` (args[0] is the program name), runs one subcommand and
/// returns its exit code. Diagnostics go to `err`, progress to `out`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// A trained bundle together with the run settings needed to re-derive its split.
struct LoadedBundle {
  eval::ModelBundle bundle;
  std::uint64_t run_seed = 0;
  std::array<double, 3> fractions{};
};

Checkpoint make_checkpoint(const eval::ModelBundle& bundle, const RunConfig& config);
LoadedBundle load_bundle(const fs::path& checkpoint_path);

// Command bodies with an already-resolved config. Each validates all inputs
// before writing anything and writes its resolved config as
// "<command>.config.json" beside its primary output.
void cmd_embed(const RunConfig& config, std::span<const fs::path> inputs,
               const std::optional<fs::path>& vectors, const fs::path& out, std::ostream& log);
void cmd_inject(const RunConfig& config, const fs::path& normal, const fs::path& outliers,
                const fs::path& out, std::ostream& log);
void cmd_split(const RunConfig& config, const fs::path& embeddings, const fs::path& out,
               std::ostream& log);
void cmd_train(const RunConfig& config, const fs::path& embeddings, const fs::path& out,
               std::ostream& log);
void cmd_score(const RunConfig& config, const fs::path& checkpoint, const fs::path& embeddings,
               const fs::path& out, std::ostream& log);
/// Writes `out` (JSON) and the same name with a .txt extension (table).
eval::EvalReport cmd_eval(const RunConfig& config, const fs::path& checkpoint,
                          const fs::path& embeddings, const fs::path& out, std::ostream& log);
/// Writes per-document scores to `scores_out` and the thresholded report to
/// `report_out` (JSON) plus its .txt table.
eval::EvalReport cmd_baseline(const RunConfig& config, const fs::path& embeddings,
                              const fs::path& scores_out, const fs::path& report_out,
                              std::ostream& log);

}  // namespace textlier::cli
