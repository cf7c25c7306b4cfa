#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "terralens/io.hpp"
#include "terralens/render.hpp"

namespace terralens {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitMalformedInput = 2,
    kExitUnwritable = 3,
    kExitExhausted = 4,
};

/// "λ,φ,γ" (γ optional) in degrees.
SphericalRotation parse_rotation(const std::string& text);

/// Spacing accepted by the graticule and indicatrix grids: positive and
/// dividing 360 (0 is allowed where `allow_zero` turns the feature off).
void check_spacing(double spacing, const char* what, bool allow_zero);

/// Batch of `count` tasks from independent streams of `seed`. For direction
/// tasks `difficulty` is "close" or "far" and Hit/Miss is drawn per task.
Json generate_tasks(TaskFamily family, const std::string& difficulty, int count, std::uint64_t seed,
                    const Coastlines* land = nullptr);

struct AnalysisReport {
    Json summary;
    std::string table;
};

/// Per-condition accuracy and timing with 95% intervals, aggregate
/// interaction from the pose logs in `logs_dir` (if any), and a Friedman test
/// per task across visualisations.
AnalysisReport analyze(const std::vector<ResponseRecord>& records,
                       const std::optional<std::filesystem::path>& logs_dir);

/// Writes frame_000.svg ... into `dir`; frame i has t = i / (steps - 1).
std::vector<std::filesystem::path> write_morph_frames(int steps, const SphericalRotation& rotation,
                                                      double graticule_spacing, int size_px,
                                                      const Coastlines* coast, const std::filesystem::path& dir);

/// Entry point of the `terralens` executable.
int run_cli(int argc, char** argv);

}  // namespace terralens
