// Copyright 2026 The Gantangan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GANTANGAN_CLI_IO_H_
#define GANTANGAN_CLI_IO_H_

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gantangan/dynamics.h"
#include "gantangan/equilibria.h"
#include "gantangan/game.h"

namespace gantangan {

enum class Command { kSimulate, kEquilibria, kSweep, kPortrait };
enum class Format { kCsv, kJson };

std::string_view CommandName(Command command);
std::string_view FormatName(Format format);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitIo = 4;

inline constexpr int kDefaultSeeds = 9;

// Everything one invocation needs. Layered as built-in defaults, then a JSON
// config file, then explicit flags.
struct RunConfig {
  Command command = Command::kSimulate;
  std::optional<double> p_es;
  std::optional<double> m_ss;
  double n = kDefaultScale;
  double mu = 0.0;
  double dt = kDefaultStep;
  double t_end = kDefaultHorizon;
  Vec3 x0 = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::optional<GridRange> p_grid;
  std::optional<GridRange> m_grid;
  int seeds = kDefaultSeeds;
  std::string output_path = "-";  // "-" is standard output
  Format format = Format::kCsv;
  bool dump_config = false;  // print the resolved config instead of running

  bool operator==(const RunConfig&) const = default;
};

// Thrown by ParseArgs for --help; carries the usage text.
class HelpRequested : public std::runtime_error {
 public:
  explicit HelpRequested(const std::string& text) : std::runtime_error(text) {}
};

// `args` excludes the program name. Throws UsageError for malformed input and
// DomainError (naming the flag) when a value breaks a model precondition.
RunConfig ParseArgs(const std::vector<std::string>& args);

// Throws DomainError naming the offending flag.
void ValidateConfig(const RunConfig& config);

// JSON form read by --config and written by --dump-config. dump_config itself
// is not serialized.
std::string DumpConfig(const RunConfig& config);
RunConfig ApplyConfigJson(const std::string& text, RunConfig base);

// Nine significant digits, shortest form, '.' decimal separator.
std::string FormatNumber(double value);

std::string RenderTrajectory(const Trajectory& trajectory, Format format);
std::string RenderPortrait(const std::vector<PortraitTrajectory>& runs,
                           Format format);
std::string RenderEquilibria(const std::vector<FixedPointReport>& reports,
                             Format format);
std::string RenderSweep(const std::vector<SweepCell>& cells, Format format);

// Writes `text` to `path` in one go ("-" writes to `stdout_stream`).
// Throws IoError when the file cannot be written.
void WriteOutput(const std::string& path, const std::string& text,
                 std::ostream& stdout_stream);

void EmitTrajectory(const Trajectory& trajectory, Format format,
                    const std::string& path);
void EmitEquilibria(const std::vector<FixedPointReport>& reports,
                    Format format, const std::string& path);
void EmitSweep(const std::vector<SweepCell>& cells, Format format,
               const std::string& path);

// Renders the output of a validated config.
std::string Execute(const RunConfig& config);

// Full command-line entry point; returns one of the kExit* codes.
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace gantangan

#endif  // GANTANGAN_CLI_IO_H_
