#ifndef LCS_HARNESS_IMAGE_HPP
#define LCS_HARNESS_IMAGE_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lcs/analysis.hpp"
#include "lcs/error.hpp"
#include "lcs/haar.hpp"
#include "lcs/harness/experiment.hpp"
#include "lcs/model.hpp"
#include "lcs/noise.hpp"
#include "lcs/rng.hpp"
#include "lcs/solvers.hpp"
#include "lcs/thresholding.hpp"

namespace lcs::harness {

/// Piecewise-smooth test image in [0, 255]: shaded background, a bright
/// disc, a flat rectangle and a smooth bump. Row-major.
inline Vector synthetic_image(Index side) {
  lcs::detail::require(side >= 2, "synthetic_image: side must be >= 2");
  Vector img(side * side);
  const double d = static_cast<double>(side);
  for (Index r = 0; r < side; ++r) {
    for (Index c = 0; c < side; ++c) {
      const double u = (static_cast<double>(c) + 0.5) / d;
      const double v = (static_cast<double>(r) + 0.5) / d;
      double p = 40.0 + 60.0 * (0.6 * u + 0.4 * v);
      if (u > 0.55 && u < 0.85 && v > 0.2 && v < 0.6) p = 90.0;
      if ((u - 0.35) * (u - 0.35) + (v - 0.4) * (v - 0.4) < 0.04) p = 200.0;
      p += 50.0 * std::exp(-((u - 0.7) * (u - 0.7) + (v - 0.78) * (v - 0.78)) / 0.01);
      img[r * side + c] = std::min(255.0, p);
    }
  }
  return img;
}

struct ImageConfig {
  Index side = 64;
  int levels = 2;
  Index s = 512;
  Index m = 2048;
  NoiseLaw noise = Cauchy{1.0};
  int seeds = 5;
  std::uint64_t base_seed = 1;
  bool pks = false;
  double clip_lambda = 1.0;    // times the clean peak
  double reject_lambda = 0.5;  // times the clean peak
  int max_iters = 300;
};

struct ImageResult {
  std::vector<ReportRow> rows;  // sweep_value = m; median over seeds in median_rsnr
  std::map<std::string, std::vector<double>> rsnr;  // per solver, per seed
  std::vector<double> baseline_rsnr;                // best s-term, per seed (seed-independent)
  Vector image;                                     // original
  Vector best_term;                                 // best s-term approximation
  std::map<std::string, Vector> reconstructions;    // seed 0, image domain
};

/// Wavelet-domain recovery of the synthetic image from partial Hadamard
/// measurements, for LIHT, raw LS-IHT, LS-IHT on clipped data, LS-IHT on
/// data with large measurements rejected and (optionally) LIHT with the
/// approximation band as known support. R-SNR is measured against the
/// original image.
inline ImageResult image_experiment(const ImageConfig& cfg) {
  lcs::detail::require(is_power_of_two(cfg.side), "image: side must be a power of two");
  const Index n = cfg.side * cfg.side;
  lcs::detail::require(cfg.m >= 1 && cfg.m <= n, "image: m must be in [1, side^2]");
  lcs::detail::require(cfg.s >= 1 && cfg.s <= n, "image: s must be in [1, side^2]");
  lcs::detail::require(cfg.seeds >= 1, "image: seeds must be >= 1");
  const Haar2D haar(cfg.side, cfg.levels);
  const SupportSet band = haar.approximation_band();
  if (cfg.pks)
    lcs::detail::require(static_cast<Index>(band.size()) <= cfg.s,
                    "image: approximation band larger than s");

  ImageResult res;
  res.image = synthetic_image(cfg.side);
  const Vector coeffs = haar.forward(res.image);
  const Vector best = hard_threshold(coeffs, cfg.s);
  res.best_term = haar.inverse(best);
  const double base = rsnr(coeffs, best);

  std::vector<std::string> ids = {"liht", "reject", "clip", "ls-iht"};
  if (cfg.pks) ids.push_back("liht-pks");

  SolverParams p;
  p.s = cfg.s;
  p.max_iters = cfg.max_iters;

  std::map<std::string, std::vector<int>> iters;
  for (int seed = 0; seed < cfg.seeds; ++seed) {
    res.baseline_rsnr.push_back(base);
    const auto op_seed = derive_seed(cfg.base_seed, {static_cast<std::uint64_t>(seed), 2});
    const auto noise_seed = derive_seed(cfg.base_seed, {static_cast<std::uint64_t>(seed), 3});
    const SensingOperator phi = partial_hadamard(cfg.m, n, op_seed);
    const WaveletSensing a{phi, haar};
    const Vector clean = phi.apply(res.image);
    const Vector y = corrupt(clean, NoiseSpec{cfg.noise, noise_seed}).y;
    const double peak = clean.cwiseAbs().maxCoeff();

    auto score = [&](const std::string& id, const SolveReport& rep) {
      res.rsnr[id].push_back(rsnr(coeffs, rep.estimate));
      iters[id].push_back(rep.iterations);
      if (seed == 0) res.reconstructions[id] = haar.inverse(rep.estimate);
    };
    score("liht", liht(y, a, p));
    score("ls-iht", ls_iht(y, a, p));
    score("clip", ls_iht(clip_measurements(y, cfg.clip_lambda * peak), a, p));
    {
      const auto rej = reject_measurements(y, phi, cfg.reject_lambda * peak);
      score("reject", ls_iht(rej.y, WaveletSensing{rej.op, haar}, p));
    }
    if (cfg.pks) score("liht-pks", liht_pks(y, a, p, band));
  }

  for (const auto& id : ids) {
    const auto& r = res.rsnr[id];
    ReportRow row;
    row.sweep_value = static_cast<double>(cfg.m);
    row.solver_id = id;
    row.trials = cfg.seeds;
    double sum = 0, it = 0;
    for (double v : r) sum += v;
    for (int v : iters[id]) it += v;
    row.mean_rsnr = sum / cfg.seeds;
    row.median_rsnr = median(r);
    row.mean_iterations = it / cfg.seeds;
    res.rows.push_back(row);
  }
  return res;
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_IMAGE_HPP
