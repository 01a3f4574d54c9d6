#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "leadwalk/pipeline.hpp"
#include "leadwalk/svg.hpp"

namespace fs = std::filesystem;
using namespace leadwalk;

namespace {

std::set<Emit> parse_emit(const std::vector<std::string>& tokens) {
  std::set<Emit> out;
  for (const auto& token : tokens) {
    std::string item;
    std::stringstream ss(token);
    while (std::getline(ss, item, ',')) {
      if (item == "json") out.insert(Emit::json);
      else if (item == "csv") out.insert(Emit::csv);
      else if (item == "svg") out.insert(Emit::svg);
      else if (item == "dot") out.insert(Emit::dot);
      else throw CLI::ValidationError("--emit", "unknown artifact '" + item + "'");
    }
  }
  return out;
}

int cmd_analyze(const std::vector<std::string>& inputs, RunParams params,
                const std::string& mode, const fs::path& out_dir,
                const std::vector<std::string>& emit) {
  if (mode == "heading") params.modes = {Mode::heading};
  else if (mode == "speed") params.modes = {Mode::speed};
  else params.modes = {Mode::heading, Mode::speed};
  if (!emit.empty()) params.emit = parse_emit(emit);

  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  const RunSummary summary = run_analyze(paths, params, out_dir);
  int failed = 0;
  for (const auto& trial : summary.trials) {
    if (trial.ok) {
      std::cout << "ok    " << trial.input << " (" << trial.outputs.size()
                << " artifacts)\n";
    } else {
      ++failed;
      std::cerr << "error " << trial.input << ": " << trial.error << "\n";
    }
  }
  std::cout << "summary: " << summary.trials.size() - failed << "/"
            << summary.trials.size() << " trials ok, see "
            << (out_dir / "analysis_summary.json").string() << "\n";
  return summary.all_ok() && !summary.trials.empty() ? 0 : 1;
}

int cmd_simulate(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config '" << config_path.string() << "'\n";
    return 1;
  }
  const Json doc = Json::parse(in);
  auto configs = sim_configs_from_json(doc);
  if (seed)
    for (auto& config : configs) config.seed = *seed;
  const auto files = write_corpus(configs, out_dir);
  std::cout << "wrote " << files.size() << " trial(s) and manifest.json to "
            << out_dir.string() << "\n";
  return 0;
}

int cmd_summarize(const fs::path& in_dir, const fs::path& out_dir,
                  const std::string& condition) {
  SummarizeOptions options;
  if (!condition.empty() && condition != "any") {
    options.condition = condition_from_string(condition);
    if (!options.condition) {
      std::cerr << "error: unknown condition '" << condition << "'\n";
      return 1;
    }
  }
  const auto written = summarize_dir(in_dir, out_dir, options);
  for (const auto& file : written) std::cout << "wrote " << file.string() << "\n";
  return written.empty() ? 1 : 0;
}

int cmd_render(const std::vector<std::string>& inputs, const std::string& mode,
               const fs::path& out_dir) {
  int failed = 0;
  for (const auto& input : inputs) {
    try {
      const fs::path path(input);
      Mode m;
      if (mode == "heading") m = Mode::heading;
      else if (mode == "speed") m = Mode::speed;
      else {
        // Infer from the filename suffix written by analyze.
        const std::string stem = path.stem().string();
        m = stem.ends_with("_speed") ? Mode::speed : Mode::heading;
      }
      std::ifstream in(path);
      if (!in) throw Error(Error::Kind::io, "cannot open '" + input + "'");
      HeatmapGrid grid = parse_heatmap_csv(in, m);
      grid.from = path.stem().string();
      const fs::path out =
          (out_dir.empty() ? path.parent_path() : out_dir) /
          (path.stem().string() + ".svg");
      if (!out_dir.empty()) fs::create_directories(out_dir);
      write_file_atomic(out, render_heatmap_svg(grid));
      std::cout << "wrote " << out.string() << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error " << input << ": " << e.what() << "\n";
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader-follower inference from 2D group trajectories"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Run the full pipeline over trial CSVs or directories");
  std::vector<std::string> inputs;
  RunParams params;
  std::string mode = "both";
  std::string out_dir = "leadwalk_out";
  std::vector<std::string> emit;
  analyze->add_option("inputs", inputs, "trial CSV files or directories")
      ->required();
  analyze->add_option("--mode", mode, "heading, speed or both")
      ->check(CLI::IsMember({"heading", "speed", "both"}));
  analyze->add_option("--omega", params.omega_override,
                      "window half-width in samples (0 = per-mode default)");
  analyze->add_option("--tau-max", params.tau_max_s, "delay search bound (s)");
  analyze->add_option("--windows", params.n_windows,
                      "number of network windows");
  analyze->add_option("--theta", params.theta, "network weight threshold");
  analyze->add_option("--heading-cutoff", params.heading_cutoff_hz,
                      "heading low-pass cutoff (Hz)");
  analyze->add_option("--speed-cutoff", params.speed_cutoff_hz,
                      "speed low-pass cutoff (Hz)");
  analyze->add_option("--truncate-head", params.truncate_head_s,
                      "seconds to drop at the start");
  analyze->add_option("--truncate-tail", params.truncate_tail_s,
                      "seconds to drop at the end");
  analyze->add_option("--emit", emit,
                      "artifacts: json,csv,svg,dot (default json,csv)");
  analyze->add_option("--jobs", params.jobs, "concurrent trials");
  analyze->add_option("--out", out_dir, "output directory");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "Generate a synthetic ground-truth corpus");
  std::string sim_config;
  std::string sim_out = "corpus";
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  simulate->add_option("--config", sim_config, "SimConfig JSON (one or a list)")
      ->required();
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_option("--seed", sim_seed, "override the seed of every config")
      ->each([&](const std::string&) { sim_seed_set = true; });

  // summarize
  auto* summarize = app.add_subcommand(
      "summarize", "Aggregate leadership JSONs into group mean/SEM tables");
  std::string sum_in, sum_out = ".", sum_condition = "any";
  summarize->add_option("--in", sum_in, "directory of analyze outputs")
      ->required();
  summarize->add_option("--out", sum_out, "output directory");
  summarize->add_option("--condition", sum_condition,
                        "keep only trials of this condition")
      ->check(CLI::IsMember({"any", "heading", "speed", "control"}));

  // render
  auto* render =
      app.add_subcommand("render", "Render heatmap CSVs to standalone SVG");
  std::vector<std::string> render_inputs;
  std::string render_mode = "auto", render_out;
  render->add_option("inputs", render_inputs, "heatmap CSV files")->required();
  render->add_option("--mode", render_mode, "heading, speed or auto")
      ->check(CLI::IsMember({"auto", "heading", "speed"}));
  render->add_option("--out", render_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(inputs, params, mode, out_dir, emit);
    if (*simulate)
      return cmd_simulate(sim_config, sim_out,
                          sim_seed_set ? std::optional(sim_seed) : std::nullopt);
    if (*summarize) return cmd_summarize(sum_in, sum_out, sum_condition);
    if (*render) return cmd_render(render_inputs, render_mode, render_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
