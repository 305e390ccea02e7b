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

#include "gantangan/cli_io.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "json.hpp"

#include "gantangan/errors.h"

namespace gantangan {
namespace {

using json = nlohmann::json;

constexpr std::array<Command, 4> kCommands = {
    Command::kSimulate, Command::kEquilibria, Command::kSweep,
    Command::kPortrait};

Command CommandFromName(const std::string& name) {
  for (Command c : kCommands) {
    if (CommandName(c) == name) return c;
  }
  throw UsageError("unknown command '" + name +
                   "' (expected simulate, equilibria, sweep or portrait)");
}

Format FormatFromName(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw UsageError("--format must be csv or json (got '" + name + "')");
}

double ParseDouble(std::string_view text, const std::string& flag) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(flag + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Vec3 ParseX0(const std::string& text) {
  const auto parts = Split(text, ',');
  if (parts.size() != 3) {
    throw UsageError("--x0 expects three comma-separated numbers (got '" +
                     text + "')");
  }
  return {ParseDouble(parts[0], "--x0"), ParseDouble(parts[1], "--x0"),
          ParseDouble(parts[2], "--x0")};
}

GridRange ParseGrid(const std::string& text) {
  const auto parts = Split(text, ':');
  if (parts.size() != 3) {
    throw UsageError("--grid expects lo:hi:steps (got '" + text + "')");
  }
  GridRange range{ParseDouble(parts[0], "--grid"),
                  ParseDouble(parts[1], "--grid"), 0};
  const char* end = parts[2].data() + parts[2].size();
  auto [ptr, ec] = std::from_chars(parts[2].data(), end, range.steps);
  if (ec != std::errc() || ptr != end) {
    throw UsageError("--grid: steps must be an integer (got '" +
                     std::string(parts[2]) + "')");
  }
  return range;
}

// Rounds through the nine-digit text form so JSON and CSV carry the same
// values.
json Number(double value) { return std::stod(FormatNumber(value)); }

json GridToJson(const std::optional<GridRange>& range) {
  if (!range) return nullptr;
  return {{"lo", range->lo}, {"hi", range->hi}, {"steps", range->steps}};
}

std::optional<GridRange> GridFromJson(const json& value) {
  if (value.is_null()) return std::nullopt;
  return GridRange{value.at("lo").get<double>(), value.at("hi").get<double>(),
                   value.at("steps").get<int>()};
}

json ParamsToJson(const GantanganParams& params) {
  return {{"p_es", Number(params.p_es())},
          {"m_ss", Number(params.m_ss())},
          {"n", Number(params.n())}};
}

json PointsToJson(const Trajectory& trajectory) {
  const std::vector<double> phi = TrajectoryPhi(trajectory);
  json points = json::array();
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const PopulationState& x = trajectory.states()[k];
    const TernaryPoint uv = TernaryProject(x);
    points.push_back({{"t", Number(trajectory.times()[k])},
                      {"x_alpha", Number(x[0])},
                      {"x_beta", Number(x[1])},
                      {"x_gamma", Number(x[2])},
                      {"u", Number(uv.u)},
                      {"v", Number(uv.v)},
                      {"phi", Number(phi[k])}});
  }
  return points;
}

void AppendCsvRow(std::string& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const std::string& field : fields) {
    if (!first) out += ',';
    out += field;
    first = false;
  }
  out += '\n';
}

void AppendTrajectoryRows(std::string& out, const Trajectory& trajectory,
                          const std::string* seed) {
  const std::vector<double> phi = TrajectoryPhi(trajectory);
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const PopulationState& x = trajectory.states()[k];
    const TernaryPoint uv = TernaryProject(x);
    if (seed) {
      out += *seed;
      out += ',';
    }
    AppendCsvRow(out, {FormatNumber(trajectory.times()[k]), FormatNumber(x[0]),
                       FormatNumber(x[1]), FormatNumber(x[2]),
                       FormatNumber(uv.u), FormatNumber(uv.v),
                       FormatNumber(phi[k])});
  }
}

std::vector<FixedPointReport> SortedReports(
    std::vector<FixedPointReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const FixedPointReport& l, const FixedPointReport& r) {
                     if (l.state[0] != r.state[0]) return l.state[0] > r.state[0];
                     return l.state[1] > r.state[1];
                   });
  return reports;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void RequireFinitePositive(double value, const char* flag, const char* what) {
  if (!(std::isfinite(value) && value > 0.0)) {
    std::ostringstream msg;
    msg << flag << ": " << what << " must be > 0 (got " << value << ")";
    throw DomainError(msg.str());
  }
}

void ValidateGrid(const GridRange& range, const char* which) {
  if (!(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo > 0.0 &&
        range.lo < range.hi && range.steps >= 2)) {
    std::ostringstream msg;
    msg << "--grid (" << which << "): need 0 < lo < hi and steps >= 2 (got "
        << range.lo << ":" << range.hi << ":" << range.steps << ")";
    throw DomainError(msg.str());
  }
}

GantanganParams ParamsOf(const RunConfig& config) {
  return GantanganParams(*config.p_es, *config.m_ss, config.n);
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kSimulate:
      return "simulate";
    case Command::kEquilibria:
      return "equilibria";
    case Command::kSweep:
      return "sweep";
    case Command::kPortrait:
      return "portrait";
  }
  return "simulate";
}

std::string_view FormatName(Format format) {
  return format == Format::kJson ? "json" : "csv";
}

std::string FormatNumber(double value) {
  if (value == 0.0) return "0";  // also folds -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 9);
  return std::string(buf.data(), ptr);
}

std::string DumpConfig(const RunConfig& config) {
  json j = {
      {"command", CommandName(config.command)},
      {"p_es", config.p_es ? json(*config.p_es) : json(nullptr)},
      {"m_ss", config.m_ss ? json(*config.m_ss) : json(nullptr)},
      {"n", config.n},
      {"mu", config.mu},
      {"dt", config.dt},
      {"t_end", config.t_end},
      {"x0", config.x0},
      {"p_grid", GridToJson(config.p_grid)},
      {"m_grid", GridToJson(config.m_grid)},
      {"seeds", config.seeds},
      {"output_path", config.output_path},
      {"format", FormatName(config.format)},
  };
  return j.dump(2) + "\n";
}

RunConfig ApplyConfigJson(const std::string& text, RunConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("--config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("--config: top level must be an object");

  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") {
        base.command = CommandFromName(value.get<std::string>());
      } else if (key == "p_es") {
        base.p_es = value.is_null() ? std::nullopt
                                    : std::optional<double>(value.get<double>());
      } else if (key == "m_ss") {
        base.m_ss = value.is_null() ? std::nullopt
                                    : std::optional<double>(value.get<double>());
      } else if (key == "n") {
        base.n = value.get<double>();
      } else if (key == "mu") {
        base.mu = value.get<double>();
      } else if (key == "dt") {
        base.dt = value.get<double>();
      } else if (key == "t_end") {
        base.t_end = value.get<double>();
      } else if (key == "x0") {
        base.x0 = value.get<Vec3>();
      } else if (key == "p_grid") {
        base.p_grid = GridFromJson(value);
      } else if (key == "m_grid") {
        base.m_grid = GridFromJson(value);
      } else if (key == "seeds") {
        base.seeds = value.get<int>();
      } else if (key == "output_path") {
        base.output_path = value.get<std::string>();
      } else if (key == "format") {
        base.format = FormatFromName(value.get<std::string>());
      } else {
        throw UsageError("--config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  return base;
}

void ValidateConfig(const RunConfig& config) {
  if (config.p_es) RequireFinitePositive(*config.p_es, "--p-es", "p_ES");
  if (config.m_ss) RequireFinitePositive(*config.m_ss, "--m-ss", "m_SS");
  RequireFinitePositive(config.n, "--n", "N");
  if (!(config.mu >= 0.0 && config.mu < 1.0)) {
    std::ostringstream msg;
    msg << "--mu: mutation rate must satisfy 0 <= mu < 1 (got " << config.mu
        << ")";
    throw DomainError(msg.str());
  }
  RequireFinitePositive(config.dt, "--dt", "dt");
  if (!(std::isfinite(config.t_end) && config.t_end >= config.dt)) {
    std::ostringstream msg;
    msg << "--t-end: t_end must be finite and >= dt (got " << config.t_end
        << ")";
    throw DomainError(msg.str());
  }
  try {
    PopulationState{config.x0};
  } catch (const DomainError& e) {
    throw DomainError(std::string("--x0: ") + e.what());
  }
  if (config.p_grid) ValidateGrid(*config.p_grid, "p_ES");
  if (config.m_grid) ValidateGrid(*config.m_grid, "m_SS");
  if (config.seeds < 1) {
    throw DomainError("--seeds: must be >= 1 (got " +
                      std::to_string(config.seeds) + ")");
  }
}

RunConfig ParseArgs(const std::vector<std::string>& args) {
  CLI::App app{"Replicator-mutator dynamics of the gantangan game", "gantangan"};
  std::string command_name;
  double p_es = 0, m_ss = 0, n = 0, mu = 0, dt = 0, t_end = 0;
  int seeds = 0;
  std::string x0, out, format, config_path;
  std::vector<std::string> grids;
  bool dump = false;

  app.add_option("command", command_name,
                 "simulate | equilibria | sweep | portrait");
  app.add_option("--p-es", p_es, "economic expectation p_ES > 0");
  app.add_option("--m-ss", m_ss, "social gain m_SS > 0");
  app.add_option("--n", n, "payoff scale N > 0 (default 1)");
  app.add_option("--mu", mu, "mutation rate, 0 <= mu < 1 (default 0)");
  app.add_option("--dt", dt, "RK4 step (default 0.01)");
  app.add_option("--t-end", t_end, "integration horizon (default 500)");
  app.add_option("--x0", x0, "initial state a,b,c (default uniform)");
  app.add_option("--grid", grids, "lo:hi:steps; give twice, p_ES then m_SS")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--seeds", seeds, "portrait starting points (default 9)");
  app.add_option("--out", out, "output file, '-' for stdout (default)");
  app.add_option("--format", format, "csv | json (default csv)");
  app.add_option("--config", config_path, "JSON config; flags override it");
  app.add_flag("--dump-config", dump, "print the resolved config as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  bool have_command = false;
  if (!config_path.empty()) {
    const std::string text = ReadFile(config_path);
    config = ApplyConfigJson(text, config);
    have_command = json::parse(text).contains("command");
  }
  if (!command_name.empty()) {
    config.command = CommandFromName(command_name);
    have_command = true;
  }
  if (!have_command) {
    throw UsageError("missing command (simulate, equilibria, sweep, portrait)");
  }

  if (app.count("--p-es")) config.p_es = p_es;
  if (app.count("--m-ss")) config.m_ss = m_ss;
  if (app.count("--n")) config.n = n;
  if (app.count("--mu")) config.mu = mu;
  if (app.count("--dt")) config.dt = dt;
  if (app.count("--t-end")) config.t_end = t_end;
  if (app.count("--x0")) config.x0 = ParseX0(x0);
  if (!grids.empty()) {
    if (grids.size() != 2) {
      throw UsageError("--grid must be given exactly twice (p_ES, then m_SS)");
    }
    config.p_grid = ParseGrid(grids[0]);
    config.m_grid = ParseGrid(grids[1]);
  }
  if (app.count("--seeds")) config.seeds = seeds;
  if (app.count("--out")) config.output_path = out;
  if (app.count("--format")) config.format = FormatFromName(format);
  config.dump_config = dump;

  if (config.command == Command::kSweep) {
    if (!config.p_grid || !config.m_grid) {
      throw UsageError("sweep needs --grid lo:hi:steps twice (p_ES, m_SS)");
    }
  } else {
    if (!config.p_es) throw UsageError("--p-es is required");
    if (!config.m_ss) throw UsageError("--m-ss is required");
  }

  ValidateConfig(config);
  return config;
}

std::string RenderTrajectory(const Trajectory& trajectory, Format format) {
  if (format == Format::kJson) {
    json j = {{"params", ParamsToJson(trajectory.params())},
              {"mu", Number(trajectory.mu())},
              {"dt", Number(trajectory.dt())},
              {"points", PointsToJson(trajectory)}};
    return j.dump() + "\n";
  }
  std::string out = "t,x_alpha,x_beta,x_gamma,u,v,phi\n";
  AppendTrajectoryRows(out, trajectory, nullptr);
  return out;
}

std::string RenderPortrait(const std::vector<PortraitTrajectory>& runs,
                           Format format) {
  if (format == Format::kJson) {
    json trajectories = json::array();
    for (std::size_t s = 0; s < runs.size(); ++s) {
      trajectories.push_back(
          {{"seed", s}, {"points", PointsToJson(runs[s].trajectory)}});
    }
    json j = json::object();
    if (!runs.empty()) {
      const Trajectory& first = runs.front().trajectory;
      j["params"] = ParamsToJson(first.params());
      j["mu"] = Number(first.mu());
      j["dt"] = Number(first.dt());
    }
    j["trajectories"] = std::move(trajectories);
    return j.dump() + "\n";
  }
  std::string out = "seed,t,x_alpha,x_beta,x_gamma,u,v,phi\n";
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const std::string seed = std::to_string(s);
    AppendTrajectoryRows(out, runs[s].trajectory, &seed);
  }
  return out;
}

std::string RenderEquilibria(const std::vector<FixedPointReport>& reports,
                             Format format) {
  const std::vector<FixedPointReport> sorted = SortedReports(reports);
  if (format == Format::kJson) {
    json points = json::array();
    for (const FixedPointReport& r : sorted) {
      points.push_back({{"x_alpha", Number(r.state[0])},
                        {"x_beta", Number(r.state[1])},
                        {"x_gamma", Number(r.state[2])},
                        {"residual", Number(r.residual)},
                        {"eig1_re", Number(r.eigenvalues[0].real())},
                        {"eig1_im", Number(r.eigenvalues[0].imag())},
                        {"eig2_re", Number(r.eigenvalues[1].real())},
                        {"eig2_im", Number(r.eigenvalues[1].imag())},
                        {"stability", StabilityName(r.stability)},
                        {"location", LocationName(r.location)}});
    }
    return json{{"fixed_points", std::move(points)}}.dump() + "\n";
  }
  std::string out =
      "x_alpha,x_beta,x_gamma,residual,eig1_re,eig1_im,eig2_re,eig2_im,"
      "stability,location\n";
  for (const FixedPointReport& r : sorted) {
    AppendCsvRow(out, {FormatNumber(r.state[0]), FormatNumber(r.state[1]),
                       FormatNumber(r.state[2]), FormatNumber(r.residual),
                       FormatNumber(r.eigenvalues[0].real()),
                       FormatNumber(r.eigenvalues[0].imag()),
                       FormatNumber(r.eigenvalues[1].real()),
                       FormatNumber(r.eigenvalues[1].imag()),
                       std::string(StabilityName(r.stability)),
                       std::string(LocationName(r.location))});
  }
  return out;
}

std::string RenderSweep(const std::vector<SweepCell>& cells, Format format) {
  if (format == Format::kJson) {
    json rows = json::array();
    for (const SweepCell& c : cells) {
      rows.push_back({{"p_es", Number(c.p_es)},
                      {"m_ss", Number(c.m_ss)},
                      {"attractor", AttractorLabelName(c.label)},
                      {"fixed_point_count", c.fixed_point_count},
                      {"end_x_alpha", Number(c.endpoint[0])},
                      {"end_x_beta", Number(c.endpoint[1])},
                      {"end_x_gamma", Number(c.endpoint[2])}});
    }
    return json{{"cells", std::move(rows)}}.dump() + "\n";
  }
  std::string out =
      "p_es,m_ss,attractor,fixed_point_count,end_x_alpha,end_x_beta,"
      "end_x_gamma\n";
  for (const SweepCell& c : cells) {
    AppendCsvRow(out, {FormatNumber(c.p_es), FormatNumber(c.m_ss),
                       std::string(AttractorLabelName(c.label)),
                       std::to_string(c.fixed_point_count),
                       FormatNumber(c.endpoint[0]), FormatNumber(c.endpoint[1]),
                       FormatNumber(c.endpoint[2])});
  }
  return out;
}

void WriteOutput(const std::string& path, const std::string& text,
                 std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << text;
    stdout_stream.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

void EmitTrajectory(const Trajectory& trajectory, Format format,
                    const std::string& path) {
  WriteOutput(path, RenderTrajectory(trajectory, format), std::cout);
}

void EmitEquilibria(const std::vector<FixedPointReport>& reports,
                    Format format, const std::string& path) {
  WriteOutput(path, RenderEquilibria(reports, format), std::cout);
}

void EmitSweep(const std::vector<SweepCell>& cells, Format format,
               const std::string& path) {
  WriteOutput(path, RenderSweep(cells, format), std::cout);
}

std::string Execute(const RunConfig& config) {
  const PopulationState x0(config.x0);
  switch (config.command) {
    case Command::kSimulate:
      return RenderTrajectory(
          Integrate(x0, ParamsOf(config), config.mu, config.dt, config.t_end),
          config.format);
    case Command::kEquilibria:
      return RenderEquilibria(FindFixedPoints(ParamsOf(config), config.mu),
                              config.format);
    case Command::kSweep:
      return RenderSweep(Sweep(*config.p_grid, *config.m_grid, config.n,
                               config.mu, x0, SweepOptions{config.dt}),
                         config.format);
    case Command::kPortrait:
      return RenderPortrait(Portrait(ParamsOf(config), config.mu, config.seeds,
                                     config.dt, config.t_end),
                            config.format);
  }
  return {};
}

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  try {
    const RunConfig config = ParseArgs(args);
    if (config.dump_config) {
      WriteOutput("-", DumpConfig(config), out);
      return kExitOk;
    }
    WriteOutput(config.output_path, Execute(config), out);
    return kExitOk;
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const StepError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace gantangan
