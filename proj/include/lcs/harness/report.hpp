#ifndef LCS_HARNESS_REPORT_HPP
#define LCS_HARNESS_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcs/harness/config.hpp"
#include "lcs/harness/experiment.hpp"
#include "lcs/types.hpp"

namespace lcs::harness {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeader =
    "sweep_value,solver_id,mean_rsnr,median_rsnr,success_rate,mean_iterations,trials";

inline std::string fmt_num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

/// Deterministic columns of every ReportRow. Wall time lives in the timing
/// sidecar so this file is a pure function of the config.
inline std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt_num(r.sweep_value, 9) + "," + r.solver_id + "," + fmt_num(r.mean_rsnr) + "," +
           fmt_num(r.median_rsnr) + "," + fmt_num(r.success_rate) + "," +
           fmt_num(r.mean_iterations, 3) + "," + std::to_string(r.trials) + "\n";
  }
  return out;
}

inline std::string timing_to_csv(const std::vector<ReportRow>& rows) {
  std::string out = "sweep_value,solver_id,mean_wall_time\n";
  for (const auto& r : rows)
    out += fmt_num(r.sweep_value, 9) + "," + r.solver_id + "," + fmt_num(r.mean_wall_time, 9) + "\n";
  return out;
}

inline nlohmann::json manifest(const ExperimentConfig& c, const ExperimentResult& res) {
  nlohmann::json solvers = nlohmann::json::array();
  for (const auto& s : c.solvers) solvers.push_back(s.id);
  return {{"tool", "lcs"},
          {"version", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"config", c.source},
          {"base_seed", c.base_seed},
          {"trials", c.trials},
          {"sweep_axis", to_string(c.sweep.axis)},
          {"sweep_values", c.sweep.values},
          {"solvers", solvers},
          {"seed_scheme", "derive_seed(base_seed, {trial, role}); roles signal=1 operator=2 "
                          "noise=3 known-support=4; pinned operator uses {0xfeed}"},
          {"diverged_runs", res.diverged},
          {"monotonicity_violations", res.monotonicity_violations}};
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

/// CSV, timing sidecar, manifest and two-column plot-data files per solver.
inline std::vector<std::filesystem::path> write_experiment(const std::filesystem::path& dir,
                                                           const ExperimentConfig& c,
                                                           const ExperimentResult& res) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    write_text(dir / name, text);
    written.push_back(dir / name);
  };
  put(c.name + ".csv", rows_to_csv(res.rows));
  put(c.name + ".timing.csv", timing_to_csv(res.rows));
  put(c.name + ".manifest.json", manifest(c, res).dump(2) + "\n");
  for (const auto& s : c.solvers) {
    std::string rs = "# " + std::string(to_string(c.sweep.axis)) + " mean_rsnr\n";
    std::string sr = "# " + std::string(to_string(c.sweep.axis)) + " success_rate\n";
    for (const auto& r : res.rows) {
      if (r.solver_id != s.id) continue;
      rs += fmt_num(r.sweep_value, 9) + " " + fmt_num(r.mean_rsnr) + "\n";
      sr += fmt_num(r.sweep_value, 9) + " " + fmt_num(r.success_rate) + "\n";
    }
    put(c.name + "." + s.id + ".rsnr.dat", rs);
    put(c.name + "." + s.id + ".success.dat", sr);
  }
  return written;
}

/// Binary 8-bit PGM; values are clamped to [lo, hi] and scaled to 0..255.
inline void write_pgm(const std::filesystem::path& p, const Vector& image, Index side,
                      double lo = 0.0, double hi = 255.0) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << "P5\n" << side << " " << side << "\n255\n";
  for (Index i = 0; i < side * side; ++i) {
    const double v = std::clamp((image[i] - lo) / (hi - lo), 0.0, 1.0);
    f.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_REPORT_HPP
