#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcs/lcs.hpp"

namespace fs = std::filesystem;
using namespace lcs;
using namespace lcs::harness;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDiverged = 2;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError({"$: cannot open '" + path + "'"});
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& path, const std::string& out, std::optional<std::uint64_t> seed,
            int threads) {
  ExperimentConfig c = parse_config_text(read_file(path));
  if (seed) c.base_seed = *seed;
  const ExperimentResult res = run_experiment(c, threads);
  const auto files = write_experiment(out, c, res);
  std::cout << rows_to_csv(res.rows);
  std::cerr << "diverged runs: " << res.diverged
            << ", monotonicity violations: " << res.monotonicity_violations << "\n";
  for (const auto& f : files) std::cerr << "wrote " << f.string() << "\n";
  return kExitOk;
}

int cmd_timing(const std::vector<Index>& sizes, int repeats, const std::string& out) {
  TimingConfig cfg;
  if (!sizes.empty()) cfg.sizes = sizes;
  cfg.repeats = repeats;
  const auto rows = bench_timing(cfg);
  std::string csv = "n,m,per_iteration_s,total_s,mean_iterations,ratio\n";
  for (const auto& r : rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%lld,%lld,%.9f,%.6f,%.2f,%.4f\n",
                  static_cast<long long>(r.n), static_cast<long long>(r.m), r.per_iteration,
                  r.total, r.mean_iterations, r.ratio);
    csv += line;
  }
  std::cout << csv;
  if (!out.empty()) {
    fs::create_directories(out);
    write_text(fs::path(out) / "timing.csv", csv);
  }
  return kExitOk;
}

int cmd_bounds(const BoundSuiteConfig& cfg, bool verbose) {
  const BoundSuiteResult r = verify_bounds(cfg);
  if (verbose) {
    for (const auto& d : r.details)
      std::cout << "instance " << d.index << " k=" << d.k << " delta_high=" << d.delta_high
                << (d.certified ? " certified" : " skipped")
                << (d.certified ? " worst_ratio=" + std::to_string(d.worst_ratio) : "")
                << "\n";
  }
  std::cout << nlohmann::json(r).dump(2) << "\n";
  return r.violations == 0 ? kExitOk : kExitDiverged;
}

int cmd_image(ImageConfig cfg, const std::string& noise, const std::string& out) {
  cfg.noise = parse_noise_law(noise);
  const ImageResult r = image_experiment(cfg);
  std::cout << kCsvHeader << "\n";
  std::cout << rows_to_csv(r.rows).substr(std::string(kCsvHeader).size() + 1);
  std::cout << "best-s-term rsnr: " << fmt_num(r.baseline_rsnr.front()) << "\n";
  if (!out.empty()) {
    fs::create_directories(out);
    write_text(fs::path(out) / "image.csv", rows_to_csv(r.rows));
    write_pgm(fs::path(out) / "original.pgm", r.image, cfg.side);
    write_pgm(fs::path(out) / "best-s-term.pgm", r.best_term, cfg.side);
    for (const auto& [id, img] : r.reconstructions)
      write_pgm(fs::path(out) / (id + ".pgm"), img, cfg.side);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lcs: robust sparse recovery with Lorentzian iterative hard thresholding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("lcs ") + kVersion);

  std::string config, out = "out";
  std::optional<std::uint64_t> seed;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* run = app.add_subcommand("run", "Run a Monte-Carlo experiment from a JSON config");
  run->add_option("config", config, "Experiment config file")->required();
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_option("--seed", seed, "Override base_seed");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<Index> sizes;
  int repeats = 7;
  std::string timing_out;
  auto* timing = app.add_subcommand("bench-timing", "Per-iteration LIHT timing versus n");
  timing->add_option("--sizes", sizes, "Signal lengths (m = n/2)")->delimiter(',');
  timing->add_option("--repeats", repeats, "Repeats per size")->check(CLI::PositiveNumber);
  timing->add_option("--out", timing_out, "Directory for timing.csv");

  BoundSuiteConfig bcfg;
  bool verbose = false;
  std::string ensemble = "gaussian";
  auto* bounds = app.add_subcommand("verify-bounds", "Check the recovery error bound on tiny instances");
  bounds->add_option("--instances", bcfg.instances, "Instances")->check(CLI::PositiveNumber);
  bounds->add_option("--n", bcfg.n, "Signal length");
  bounds->add_option("--m", bcfg.m, "Measurements");
  bounds->add_option("--s", bcfg.s, "Sparsity");
  bounds->add_option("--seed", bcfg.base_seed, "Base seed");
  bounds->add_option("--ensemble", ensemble, "gaussian or hadamard")
      ->check(CLI::IsMember({"gaussian", "hadamard"}));
  bounds->add_flag("--verbose", verbose, "Print every instance");

  ImageConfig icfg;
  std::string noise = "cauchy:1.0";
  std::string image_out;
  auto* image = app.add_subcommand("image", "Wavelet-domain image recovery experiment");
  image->add_option("--side", icfg.side, "Image side (power of two)")->capture_default_str();
  image->add_option("--m", icfg.m, "Measurements")->capture_default_str();
  image->add_option("--s", icfg.s, "Sparsity")->capture_default_str();
  image->add_option("--levels", icfg.levels, "Haar levels")->capture_default_str();
  image->add_option("--seeds", icfg.seeds, "Seeds (median reported)")->capture_default_str();
  image->add_option("--noise", noise, "none | cauchy:S | stable:A:S | pgauss:S2:P:D")
      ->capture_default_str();
  image->add_flag("--pks", icfg.pks, "Also run LIHT with the approximation band known");
  image->add_option("--out", image_out, "Directory for CSV and PGM output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out, seed, threads);
    if (*timing) return cmd_timing(sizes, repeats, timing_out);
    if (*bounds) {
      if (ensemble == "hadamard") bcfg.kind = OperatorKind::partial_hadamard;
      return cmd_bounds(bcfg, verbose);
    }
    if (*image) return cmd_image(icfg, noise, image_out);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FatalDivergence& e) {
    std::cerr << "fatal divergence: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
