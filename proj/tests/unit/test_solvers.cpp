#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lcs/analysis.hpp"
#include "lcs/harness/signal.hpp"
#include "lcs/noise.hpp"
#include "lcs/rng.hpp"
#include "lcs/solvers.hpp"

using namespace lcs;
using lcs::harness::draw_sparse_signal;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Least squares on the columns in `support`, scattered back to length n.
Vector support_least_squares(const Matrix& a, const Vector& y, const std::vector<Index>& support) {
  Matrix sub(a.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Index>(j)) = a.col(support[j]);
  const Vector coef = sub.colPivHouseholderQr().solve(y);
  Vector x = Vector::Zero(a.cols());
  for (std::size_t j = 0; j < support.size(); ++j) x[support[j]] = coef[static_cast<Index>(j)];
  return x;
}

SolverParams params_for(Index s) {
  SolverParams p;
  p.s = s;
  return p;
}

}  // namespace

TEST(Liht, ZeroMeasurementsConvergeImmediately) {
  const auto op = gaussian_ensemble(6, 10, 1);
  const SolveReport r = liht(Vector::Zero(6), op, params_for(2));
  EXPECT_EQ(r.estimate, Vector::Zero(10));
  EXPECT_EQ(r.stop_reason, StopReason::converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.objective_trace.size(), 2u);
  const SolveReport m = model_liht(Vector::Zero(6), op, params_for(2), BlockSparsityModel{2, 1});
  EXPECT_EQ(m.estimate, Vector::Zero(10));
}

TEST(Liht, ZeroSparsityReturnsZero) {
  const auto op = gaussian_ensemble(6, 10, 1);
  const SolveReport r = liht(Vector::Ones(6), op, params_for(0));
  EXPECT_EQ(r.estimate, Vector::Zero(10));
  EXPECT_EQ(r.iterations, 0);
}

TEST(Liht, TinyInstanceMatchesExhaustiveOracle) {
  // Greedy thresholding can lock onto a wrong column of a coherent 6 x 8
  // operator; such runs must still end at a stationary point on their support.
  int matched = 0, runs = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto op = gaussian_ensemble(6, 8, 50 + seed, Normalization::spectral);
    const Matrix a = op.materialize();
    const auto sig = draw_sparse_signal(8, 1, 1.0, 900 + seed);
    const Vector y = op.apply(sig.x);
    Vector oracle;
    double best = INFINITY;
    for (Index j = 0; j < 8; ++j) {
      const Vector x = support_least_squares(a, y, {j});
      const double res = (y - a * x).norm();
      if (res < best) {
        best = res;
        oracle = x;
      }
    }
    SolverParams p = params_for(1);
    p.tol = 1e-12;
    p.max_iters = 5000;
    for (const SolveReport& r : {liht(y, op, p), ls_iht(y, op, p)}) {
      ++runs;
      if ((r.estimate - oracle).norm() <= 1e-6 * oracle.norm()) {
        ++matched;
        continue;
      }
      const Vector res = y - a * r.estimate;
      const Vector g = r.gamma > 0.0 ? negative_gradient(op, y, r.estimate, r.gamma)
                                     : Vector(a.transpose() * res);
      EXPECT_LE(restrict_to(g, SupportSet::of(r.estimate)).norm(),
                1e-6 * (a.transpose() * y).norm())
          << "seed " << seed;
    }
  }
  EXPECT_EQ(runs, 80);
  EXPECT_GE(matched, 72);
}

TEST(Liht, NoiselessRecoveryAtModerateSize) {
  int exact = 0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto op = gaussian_ensemble(128, 512, 10 + t);
    const auto sig = draw_sparse_signal(512, 6, 1.0, 20 + t);
    const SolveReport r = liht(op.apply(sig.x), op, params_for(6));
    exact += rsnr(sig.x, r.estimate) >= 100.0;
  }
  EXPECT_GE(exact, 9);
}

TEST(LsIht, EqualsLihtWithIdentityWeights) {
  const auto op = gaussian_ensemble(40, 100, 3);
  const auto sig = draw_sparse_signal(100, 4, 1.0, 4);
  NoiseSpec ns{Cauchy{0.05}, 5};
  const Vector y = corrupt(op.apply(sig.x), ns).y;
  SolverParams p = params_for(4);
  const SolveReport a = ls_iht(y, op, p);
  p.weight_mode = WeightMode::identity;
  const SolveReport b = liht(y, op, p);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
  EXPECT_EQ(a.support_trace_hash, b.support_trace_hash);
  EXPECT_EQ(a.gamma, 0.0);
}

TEST(LsIht, IsTheLargeGammaLimitOfLiht) {
  const auto op = gaussian_ensemble(40, 100, 6);
  const auto sig = draw_sparse_signal(100, 4, 1.0, 7);
  const Vector y = op.apply(sig.x);
  SolverParams p = params_for(4);
  p.max_iters = 20;
  p.tol = 0.0;
  const SolveReport ls = ls_iht(y, op, p);
  p.gamma = LorentzianScale::user(1e8);
  const SolveReport lz = liht(y, op, p);
  EXPECT_EQ(ls.support_trace_hash, lz.support_trace_hash);
  EXPECT_LE((ls.estimate - lz.estimate).norm(), 1e-10 * ls.estimate.norm());
}

TEST(LihtPks, EmptyKnownSupportReproducesLihtBitForBit) {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto op = gaussian_ensemble(50, 120, 100 + t);
    const auto sig = draw_sparse_signal(120, 6, 1.0, 200 + t);
    NoiseSpec ns{AlphaStable{1.2, 0.05}, 300 + t};
    const Vector y = corrupt(op.apply(sig.x), ns).y;
    SolverParams p = params_for(6);
    p.record_iterates = true;
    const SolveReport a = liht(y, op, p);
    const SolveReport b = liht_pks(y, op, p, SupportSet{});
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(a.support_trace_hash, b.support_trace_hash);
    ASSERT_EQ(a.iterates.size(), b.iterates.size());
    for (std::size_t i = 0; i < a.iterates.size(); ++i) EXPECT_EQ(a.iterates[i], b.iterates[i]);
  }
}

TEST(LihtPks, FullKnownSupportGivesRestrictedLeastSquares) {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto op = gaussian_ensemble(30, 80, 400 + t);
    const auto sig = draw_sparse_signal(80, 5, 1.0, 500 + t);
    const Vector y = op.apply(sig.x);
    SolverParams p = params_for(5);
    p.tol = 1e-14;
    p.max_iters = 3000;
    const SolveReport r = liht_pks(y, op, p, sig.support);
    const Vector oracle = support_least_squares(op.materialize(), y, sig.support.indices());
    EXPECT_LE((r.estimate - oracle).norm(), 1e-6 * oracle.norm());
    EXPECT_EQ(SupportSet::of(r.estimate), sig.support);
  }
}

TEST(LihtPks, KnownEntriesStayInEveryIterate) {
  const auto op = gaussian_ensemble(40, 100, 8);
  const auto sig = draw_sparse_signal(100, 6, 1.0, 9);
  const Vector y = corrupt(op.apply(sig.x), NoiseSpec{Cauchy{0.1}, 10}).y;
  const SupportSet t0{sig.support.indices()[0], sig.support.indices()[3]};
  SolverParams p = params_for(6);
  p.record_iterates = true;
  const SolveReport r = liht_pks(y, op, p, t0);
  for (std::size_t i = 1; i < r.iterates.size(); ++i) {
    const SupportSet s = SupportSet::of(r.iterates[i]);
    EXPECT_LE(s.size(), 6u);
    for (Index k : t0) EXPECT_TRUE(s.contains(k)) << "iterate " << i;
  }
}

TEST(LihtPks, RejectsInvalidKnownSupport) {
  const auto op = gaussian_ensemble(6, 10, 1);
  EXPECT_THROW(liht_pks(Vector::Ones(6), op, params_for(1), SupportSet({0, 1})), InvalidArgument);
  EXPECT_THROW(liht_pks(Vector::Ones(6), op, params_for(2), SupportSet{10}), InvalidArgument);
}

TEST(LihtPks, KnownSupportLowersTheRequiredMeasurements) {
  // Below the plain success threshold: half the support known must help.
  int plain = 0, half = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto op = gaussian_ensemble(40, 256, 600 + t);
    const auto sig = draw_sparse_signal(256, 12, 1.0, 700 + t);
    const Vector y = op.apply(sig.x);
    plain += exact_recovery(sig.x, liht(y, op, params_for(12)).estimate);
    const auto& idx = sig.support.indices();
    const SupportSet t0(std::vector<Index>(idx.begin(), idx.begin() + 6));
    half += exact_recovery(sig.x, liht_pks(y, op, params_for(12), t0).estimate);
  }
  EXPECT_LT(plain, 25);
  EXPECT_GT(half, plain);
}

TEST(AdaptiveStep, OrthonormalColumnsGiveUnitStep) {
  const auto op = SensingOperator::dense(Matrix::Identity(5, 5));
  const WeightVector w{Vector::Ones(5)};
  EXPECT_DOUBLE_EQ(*adaptive_step(vec({1, -2, 0, 3, 0.5}), op, w, SupportSet{0, 1, 3}), 1.0);
  const auto had = partial_hadamard(16, 16, 3);
  const Vector g = Vector::LinSpaced(16, -1.0, 2.0);
  EXPECT_NEAR(*adaptive_step(g, had, WeightVector{Vector::Ones(16)}, SupportSet{2, 7, 11}), 1.0,
              1e-14);
}

TEST(AdaptiveStep, ScaledIdentity) {
  const double c = 3.0;
  const auto op = SensingOperator::dense(c * Matrix::Identity(4, 4));
  const Vector g = vec({1, 2, 3, 4});
  EXPECT_NEAR(*adaptive_step(g, op, WeightVector{Vector::Ones(4)}, SupportSet{1, 2}),
              1.0 / (c * c), 1e-15);
}

TEST(AdaptiveStep, MinimizesTheWeightedQuadratic) {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto op = gaussian_ensemble(20, 40, 800 + t);
    const auto sig = draw_sparse_signal(40, 4, 1.0, 900 + t);
    const Vector y = corrupt(op.apply(sig.x), NoiseSpec{Cauchy{0.1}, 1000 + t}).y;
    const auto x = draw_sparse_signal(40, 4, 0.3, 1100 + t).x;
    const Vector r = y - op.apply(x);
    const double gamma = estimate_gamma(y).gamma;
    const WeightVector w = weights(r, gamma);
    const Vector g = negative_gradient(op, y, x, gamma);
    const SupportSet s = SupportSet::of(x);
    const double mu = *adaptive_step(g, op, w, s);
    const Vector gs = restrict_to(g, s);
    const auto q = [&](double m) {
      const Vector e = y - op.apply(x + m * gs);
      return e.cwiseProduct(e).dot(w.w);
    };
    EXPECT_LE(q(mu), q(mu * (1 + 1e-3)));
    EXPECT_LE(q(mu), q(mu * (1 - 1e-3)));
  }
}

TEST(AdaptiveStep, DegenerateCases) {
  Matrix a = Matrix::Identity(3, 3);
  a.col(0).setZero();
  const auto op = SensingOperator::dense(a);
  const WeightVector w{Vector::Ones(3)};
  EXPECT_THROW(adaptive_step(vec({1, 0, 0}), op, w, SupportSet{0}), StallError);
  EXPECT_FALSE(adaptive_step(vec({0, 0, 5}), op, w, SupportSet{0, 1}).has_value());
  EXPECT_THROW(adaptive_step(vec({1, 0, 0}), op, w, SupportSet{}), InvalidArgument);
  EXPECT_THROW(adaptive_step(vec({1, 0}), op, w, SupportSet{0}), InvalidArgument);
}

TEST(LineSearchGuard, AcceptsCandidatesThatDoNotRaiseTheObjective) {
  SolverState st;
  st.x = vec({1, 0, 0});
  st.support = SupportSet{0};
  st.objective = 2.0;
  st.mu = 0.8;
  SolverParams p = params_for(1);
  int calls = 0;
  auto make = [&](double) {
    ++calls;
    return Candidate{};
  };
  // Decreased objective on a new support.
  GuardOutcome a = line_search_guard(st, Candidate{vec({0, 1, 0}), Vector(), 1.5}, p, make);
  EXPECT_EQ(a.backtracks, 0);
  EXPECT_EQ(a.mu, 0.8);
  EXPECT_EQ(a.accepted.objective, 1.5);
  // Raised objective on the same support: no backtracking.
  GuardOutcome b = line_search_guard(st, Candidate{vec({3, 0, 0}), Vector(), 5.0}, p, make);
  EXPECT_EQ(b.backtracks, 0);
  EXPECT_FALSE(b.stalled);
  EXPECT_EQ(calls, 0);
}

TEST(LineSearchGuard, HalvesUntilAcceptedOrFlagsStall) {
  SolverState st;
  st.x = vec({1, 0});
  st.support = SupportSet{0};
  st.objective = 1.0;
  st.mu = 1.0;
  SolverParams p = params_for(1);
  std::vector<double> tried;
  auto shrink = [&](double mu) {
    tried.push_back(mu);
    return Candidate{vec({0, 1}), Vector(), mu > 0.1 ? 2.0 : 0.5};
  };
  GuardOutcome a = line_search_guard(st, Candidate{vec({0, 1}), Vector(), 3.0}, p, shrink);
  EXPECT_EQ(tried, (std::vector<double>{0.5, 0.25, 0.125, 0.0625}));
  EXPECT_EQ(a.backtracks, 4);
  EXPECT_EQ(a.mu, 0.0625);
  EXPECT_FALSE(a.stalled);

  p.backtrack_max = 3;
  auto never = [&](double mu) { return Candidate{vec({0, 1}), Vector(), 2.0 + mu}; };
  GuardOutcome b = line_search_guard(st, Candidate{vec({0, 1}), Vector(), 3.0}, p, never);
  EXPECT_TRUE(b.stalled);
  EXPECT_EQ(b.backtracks, 3);
  EXPECT_EQ(b.mu, 0.125);
  EXPECT_EQ(b.accepted.objective, 2.125);
}

TEST(Backtracking, OvershootingStepIsCorrected) {
  int triggered = 0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const auto op = gaussian_ensemble(40, 100, 1200 + t);
    const auto sig = draw_sparse_signal(100, 4, 1.0, 1300 + t);
    const Vector y = corrupt(op.apply(sig.x), NoiseSpec{Cauchy{0.01}, 1400 + t}).y;
    SolverParams p = params_for(4);
    p.step_scale = 100.0;
    p.max_iters = 50;
    const SolveReport r = liht(y, op, p);
    triggered += r.backtracks >= 1;
    ASSERT_FALSE(r.steps.empty());
    EXPECT_GE(r.steps.front().backtracks, 1);
    EXPECT_LE(r.objective_trace[1], r.objective_trace[0]);
  }
  EXPECT_EQ(triggered, 10);
}

TEST(Backtracking, NeverRunsInFixedStepMode) {
  const auto op = gaussian_ensemble(40, 100, 15);
  const auto sig = draw_sparse_signal(100, 4, 1.0, 16);
  SolverParams p = params_for(4);
  p.step_mode = StepMode::fixed;
  p.mu = 1.0;
  const SolveReport r = liht(op.apply(sig.x), op, p);
  EXPECT_EQ(r.backtracks, 0);
  EXPECT_FALSE(r.adaptive);
  for (const auto& st : r.steps) EXPECT_EQ(st.mu, 1.0);
}

TEST(Invariants, MonotoneTraceAndSupportSize) {
  int pairs = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto op = gaussian_ensemble(64, 256, 1500 + t);
    const auto sig = draw_sparse_signal(256, 8, 1.0, 1600 + t);
    const NoiseLaw law = t % 2 ? NoiseLaw{Cauchy{0.1}} : NoiseLaw{ContaminatedGaussian{0.01, 0.1, 100}};
    const Vector y = corrupt(op.apply(sig.x), NoiseSpec{law, 1700 + t}).y;
    SolverParams p = params_for(8);
    p.record_iterates = true;
    const SupportSet t0{sig.support.indices()[0]};
    for (const SolveReport& r : {liht(y, op, p), ls_iht(y, op, p), liht_pks(y, op, p, t0),
                                 model_liht(y, op, p, BlockSparsityModel{4, 2})}) {
      EXPECT_EQ(monotonicity_violations(r), 0);
      EXPECT_EQ(r.objective_trace.size(), static_cast<std::size_t>(r.iterations) + 1);
      EXPECT_EQ(r.iterates.size(), static_cast<std::size_t>(r.iterations) + 1);
      EXPECT_EQ(r.iterates[0], Vector::Zero(256));
      for (const Vector& x : r.iterates) EXPECT_LE(SupportSet::of(x).size(), 8u);
      for (const auto& st : r.steps) pairs += !st.support_changed;
    }
  }
  EXPECT_GT(pairs, 100);
}

TEST(ModelLiht, PlainSparsityModelEqualsLiht) {
  const auto op = gaussian_ensemble(50, 120, 17);
  const auto sig = draw_sparse_signal(120, 5, 1.0, 18);
  const Vector y = corrupt(op.apply(sig.x), NoiseSpec{Cauchy{0.05}, 19}).y;
  const SolveReport a = liht(y, op, params_for(5));
  const SolveReport b = model_liht(y, op, params_for(5), SparsityModel{5});
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.objective_trace, b.objective_trace);
}

TEST(ModelLiht, BlockModelNeedsFewerMeasurements) {
  const Index n = 256, bs = 4, blocks = 4, s = bs * blocks, m = 48;
  int plain = 0, block = 0;
  for (std::uint64_t t = 0; t < 30; ++t) {
    Rng rng(1800 + t);
    std::vector<Index> order(static_cast<std::size_t>(n / bs));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    Vector x0 = Vector::Zero(n);
    std::normal_distribution<double> nd;
    for (Index b = 0; b < blocks; ++b)
      for (Index i = 0; i < bs; ++i) x0[order[static_cast<std::size_t>(b)] * bs + i] = nd(rng);
    const auto op = gaussian_ensemble(m, n, 1900 + t);
    const Vector y = op.apply(x0);
    plain += exact_recovery(x0, liht(y, op, params_for(s)).estimate);
    block += exact_recovery(x0, model_liht(y, op, params_for(s), BlockSparsityModel{bs, blocks}).estimate);
  }
  EXPECT_GT(block, plain);
  EXPECT_GE(block, 20);
}

TEST(Robustness, SingleGrossOutlierHurtsLeastSquaresByTenDecibels) {
  std::vector<double> gap;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto op = gaussian_ensemble(100, 256, 2000 + t);
    const auto sig = draw_sparse_signal(256, 5, 1.0, 2100 + t);
    Vector y = op.apply(sig.x);
    Rng rng(2200 + t);
    std::bernoulli_distribution coin(0.5);
    y[std::uniform_int_distribution<Index>(0, 99)(rng)] += coin(rng) ? 1e3 : -1e3;
    gap.push_back(rsnr(sig.x, liht(y, op, params_for(5)).estimate) -
                  rsnr(sig.x, ls_iht(y, op, params_for(5)).estimate));
  }
  EXPECT_GE(median(gap), 10.0);
}

TEST(Rejection, BeatsRawLeastSquaresUnderCauchyNoise) {
  std::vector<double> raw, rejected;
  for (std::uint64_t t = 0; t < 25; ++t) {
    const auto op = gaussian_ensemble(128, 256, 2300 + t);
    const auto sig = draw_sparse_signal(256, 8, 1.0, 2400 + t);
    const Vector clean = op.apply(sig.x);
    const Vector y = corrupt(clean, NoiseSpec{Cauchy{0.05}, 2500 + t}).y;
    const auto rej = reject_measurements(y, op, 0.5 * clean.cwiseAbs().maxCoeff());
    raw.push_back(rsnr(sig.x, ls_iht(y, op, params_for(8)).estimate));
    rejected.push_back(rsnr(sig.x, ls_iht(rej.y, rej.op, params_for(8)).estimate));
  }
  EXPECT_GT(median(rejected), median(raw));
}

TEST(Clip, Examples) {
  EXPECT_EQ(clip_measurements(vec({3, -1, -5}), 2.0), vec({2, -1, -2}));
  EXPECT_EQ(clip_measurements(vec({0.5, -1.5}), 2.0), vec({0.5, -1.5}));
  EXPECT_EQ(clip_measurements(vec({2, -2}), 2.0), vec({2, -2}));
  EXPECT_THROW(clip_measurements(vec({1}), 0.0), InvalidArgument);
  EXPECT_THROW(clip_measurements(vec({1}), -1.0), InvalidArgument);
}

TEST(Reject, Examples) {
  const auto op = gaussian_ensemble(3, 5, 1);
  const auto r = reject_measurements(vec({3, -1, -5}), op, 2.0);
  EXPECT_EQ(r.kept, (std::vector<Index>{1}));
  EXPECT_EQ(r.y, vec({-1}));
  EXPECT_EQ(r.op.materialize(), op.materialize().row(1));
  const auto all = reject_measurements(vec({3, -1, -5}), op, 6.0);
  EXPECT_EQ(all.kept, (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(all.op.materialize(), op.materialize());
  // The boundary |y_i| = lambda is rejected.
  EXPECT_EQ(reject_measurements(vec({2, 1, 0}), op, 2.0).kept, (std::vector<Index>{1, 2}));
  EXPECT_THROW(reject_measurements(vec({3, -3, 5}), op, 2.0), DegenerateError);
  EXPECT_THROW(reject_measurements(vec({1, 1, 1}), op, 0.0), InvalidArgument);
  EXPECT_THROW(reject_measurements(vec({1, 1}), op, 2.0), InvalidArgument);
}

TEST(Errors, InvalidParametersRejected) {
  const auto op = gaussian_ensemble(6, 10, 1);
  const Vector y = Vector::Ones(6);
  SolverParams p = params_for(11);
  EXPECT_THROW(liht(y, op, p), InvalidArgument);
  p = params_for(2);
  p.max_iters = 0;
  EXPECT_THROW(liht(y, op, p), InvalidArgument);
  p = params_for(2);
  p.tol = -1.0;
  EXPECT_THROW(liht(y, op, p), InvalidArgument);
  p = params_for(2);
  p.step_mode = StepMode::fixed;
  p.mu = 0.0;
  EXPECT_THROW(liht(y, op, p), InvalidArgument);
  p = params_for(2);
  EXPECT_THROW(liht(Vector::Ones(5), op, p), InvalidArgument);
  Vector bad = y;
  bad[2] = NAN;
  EXPECT_THROW(liht(bad, op, p), InvalidArgument);
}

TEST(Errors, RunawayFixedStepDiverges) {
  const auto op = gaussian_ensemble(16, 32, 3, Normalization::none);
  const auto sig = draw_sparse_signal(32, 3, 1.0, 4);
  SolverParams p = params_for(3);
  p.step_mode = StepMode::fixed;
  p.mu = 50.0;
  p.max_iters = 5000;
  try {
    ls_iht(op.apply(sig.x), op, p);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.iteration(), 1);
  }
}

TEST(Cost, PerIterationTimeIsLinearInN) {
  const Index m = 512;
  const auto per_iteration = [&](Index n) {
    const auto op = gaussian_ensemble(m, n, static_cast<std::uint64_t>(n));
    const auto sig = draw_sparse_signal(n, 8, 1.0, 1);
    const Vector y = corrupt(op.apply(sig.x), NoiseSpec{Cauchy{0.1}, 2}).y;
    SolverParams p = params_for(8);
    p.tol = 0.0;
    p.max_iters = 40;
    liht(y, op, p);
    std::vector<double> times;
    for (int r = 0; r < 7; ++r) {
      const SolveReport rep = liht(y, op, p);
      times.push_back(rep.wall_time / rep.iterations);
    }
    return median(times);
  };
  const double ratio = per_iteration(4096) / per_iteration(2048);
  EXPECT_GE(ratio, 1.0);
  EXPECT_LE(ratio, 3.0);
}
