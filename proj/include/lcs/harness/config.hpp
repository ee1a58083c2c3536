#ifndef LCS_HARNESS_CONFIG_HPP
#define LCS_HARNESS_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcs/harness/signal.hpp"
#include "lcs/model.hpp"
#include "lcs/noise.hpp"
#include "lcs/solvers.hpp"

namespace lcs::harness {

/// Every validation failure, each prefixed with its JSON path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string s = "invalid experiment config:";
    for (const auto& m : e) s += "\n  " + m;
    return s;
  }
  std::vector<std::string> errors_;
};

struct SignalConfig {
  Index n = 1024;
  Index s = 8;
  double amplitude = 1.0;
  std::optional<double> measurement_power;  // overrides amplitude when set
};

struct OperatorConfig {
  OperatorKind kind = OperatorKind::dense;
  Index m = 128;
  Normalization normalization = Normalization::unit_columns;
  bool random_signs = true;
  bool pin_operator = false;
};

enum class Variant { liht, ls_iht, liht_pks, model_liht };
enum class GammaMode { automatic, fixed, clean_range };
enum class Preprocess { none, clip, reject };
enum class SweepAxis { none, p, alpha, m, known_support_fraction };

struct SolverConfig {
  std::string id;
  Variant variant = Variant::liht;
  GammaMode gamma_mode = GammaMode::automatic;
  double gamma = 1.0;
  SolverParams params;  // params.s defaults to the signal sparsity
  bool s_overridden = false;
  Preprocess preprocess = Preprocess::none;
  double lambda_b = 1.0;  // lambda as a multiple of max |clean measurement|
  double known_fraction = 0.0;
  PksPolicy policy = PksPolicy::largest;
  Index block_size = 1;
  Index blocks = 0;
  bool fatal = false;
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::none;
  std::vector<double> values{0.0};
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string description;  // free text, echoed in the manifest
  SignalConfig signal;
  OperatorConfig op;
  NoiseLaw noise = NoNoise{};
  std::vector<SolverConfig> solvers;
  SweepConfig sweep;
  int trials = 100;
  std::uint64_t base_seed = 1;
  double success_tol = 1e-4;
  nlohmann::json source;  // the parsed document, echoed into the manifest
};

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::none: return "none";
    case SweepAxis::p: return "p";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::m: return "m";
    case SweepAxis::known_support_fraction: return "known-support-fraction";
  }
  return "?";
}

namespace detail {

class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  }

  bool object(const nlohmann::json& j, const std::string& path,
              std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!ok.count(it.key())) fail(path + "." + it.key(), "unknown key");
    return true;
  }

  template <class T>
  void read(const nlohmann::json& j, const char* key, const std::string& path, T& out,
            bool required = false) {
    if (!j.contains(key)) {
      if (required) fail(path + "." + key, "required key missing");
      return;
    }
    const auto& v = j.at(key);
    const std::string p = path + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) return fail(p, "expected a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) return fail(p, "expected an integer");
      if constexpr (std::is_unsigned_v<T>)
        if (v.get<std::int64_t>() < 0) return fail(p, "expected a nonnegative integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return fail(p, "expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) return fail(p, "expected a string");
    }
    out = v.get<T>();
  }

  void check(bool cond, const std::string& path, const std::string& msg) {
    if (!cond) fail(path, msg);
  }
};

inline NoiseLaw read_noise(Reader& r, const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) {
    r.fail(path, "expected an object");
    return NoNoise{};
  }
  std::string law;
  r.read(j, "law", path, law, true);
  if (law == "none") {
    r.object(j, path, {"law"});
    return NoNoise{};
  }
  if (law == "alpha-stable") {
    r.object(j, path, {"law", "alpha", "sigma"});
    AlphaStable a;
    r.read(j, "alpha", path, a.alpha, true);
    r.read(j, "sigma", path, a.sigma, true);
    r.check(a.alpha > 0.0 && a.alpha <= 2.0, path + ".alpha", "must be in (0, 2]");
    r.check(a.sigma > 0.0, path + ".sigma", "must be > 0");
    return a;
  }
  if (law == "p-gaussian") {
    r.object(j, path, {"law", "sigma2", "p", "delta"});
    ContaminatedGaussian c;
    r.read(j, "sigma2", path, c.sigma2, true);
    r.read(j, "p", path, c.p, true);
    r.read(j, "delta", path, c.delta, true);
    r.check(c.sigma2 > 0.0, path + ".sigma2", "must be > 0");
    r.check(c.p >= 0.0 && c.p <= 1.0, path + ".p", "must be in [0, 1]");
    r.check(c.delta > 0.0, path + ".delta", "must be > 0");
    return c;
  }
  if (law == "cauchy") {
    r.object(j, path, {"law", "sigma"});
    Cauchy c;
    r.read(j, "sigma", path, c.sigma, true);
    r.check(c.sigma > 0.0, path + ".sigma", "must be > 0");
    return c;
  }
  if (!law.empty()) r.fail(path + ".law", "unknown noise law '" + law + "'");
  return NoNoise{};
}

inline SolverConfig read_solver(Reader& r, const nlohmann::json& j, const std::string& path) {
  SolverConfig sc;
  if (!r.object(j, path,
                {"id", "variant", "gamma", "step", "mu", "max_iters", "tol", "backtrack_max",
                 "s", "preprocess", "known_support", "model", "fatal"}))
    return sc;
  std::string variant = "liht";
  r.read(j, "variant", path, variant);
  if (variant == "liht") sc.variant = Variant::liht;
  else if (variant == "ls-iht") sc.variant = Variant::ls_iht;
  else if (variant == "liht-pks") sc.variant = Variant::liht_pks;
  else if (variant == "model-liht") sc.variant = Variant::model_liht;
  else r.fail(path + ".variant", "unknown solver variant '" + variant + "'");
  sc.id = variant;
  r.read(j, "id", path, sc.id);
  r.check(!sc.id.empty() && sc.id.find_first_of(",\n\"/") == std::string::npos,
          path + ".id", "must be nonempty without , \" / or newlines");

  if (j.contains("gamma")) {
    const auto& g = j.at("gamma");
    if (g.is_string() && g == "auto") sc.gamma_mode = GammaMode::automatic;
    else if (g.is_string() && g == "clean-range") sc.gamma_mode = GammaMode::clean_range;
    else if (g.is_number() && g.get<double>() > 0.0) {
      sc.gamma_mode = GammaMode::fixed;
      sc.gamma = g.get<double>();
    } else {
      r.fail(path + ".gamma", "expected \"auto\", \"clean-range\" or a positive number");
    }
  }
  std::string step = "adaptive";
  r.read(j, "step", path, step);
  if (step == "adaptive") sc.params.step_mode = StepMode::adaptive;
  else if (step == "fixed") sc.params.step_mode = StepMode::fixed;
  else r.fail(path + ".step", "expected \"adaptive\" or \"fixed\"");
  r.read(j, "mu", path, sc.params.mu);
  r.read(j, "max_iters", path, sc.params.max_iters);
  r.read(j, "tol", path, sc.params.tol);
  r.read(j, "backtrack_max", path, sc.params.backtrack_max);
  r.read(j, "fatal", path, sc.fatal);
  if (j.contains("s")) {
    r.read(j, "s", path, sc.params.s);
    sc.s_overridden = true;
  }
  r.check(sc.params.mu > 0.0, path + ".mu", "must be > 0");
  r.check(sc.params.max_iters >= 1, path + ".max_iters", "must be >= 1");
  r.check(sc.params.tol >= 0.0, path + ".tol", "must be >= 0");
  r.check(sc.params.backtrack_max >= 0, path + ".backtrack_max", "must be >= 0");

  if (j.contains("preprocess")) {
    const auto& p = j.at("preprocess");
    const std::string pp = path + ".preprocess";
    if (r.object(p, pp, {"kind", "lambda_B"})) {
      std::string kind;
      r.read(p, "kind", pp, kind, true);
      if (kind == "none") sc.preprocess = Preprocess::none;
      else if (kind == "clip") sc.preprocess = Preprocess::clip;
      else if (kind == "reject") sc.preprocess = Preprocess::reject;
      else if (!kind.empty()) r.fail(pp + ".kind", "expected none, clip or reject");
      r.read(p, "lambda_B", pp, sc.lambda_b, sc.preprocess != Preprocess::none);
      r.check(sc.lambda_b > 0.0, pp + ".lambda_B", "must be > 0");
    }
  }
  if (j.contains("known_support")) {
    const auto& k = j.at("known_support");
    const std::string kp = path + ".known_support";
    if (r.object(k, kp, {"fraction", "policy"})) {
      r.read(k, "fraction", kp, sc.known_fraction);
      r.check(sc.known_fraction >= 0.0 && sc.known_fraction <= 1.0, kp + ".fraction",
              "must be in [0, 1]");
      std::string pol = "largest";
      r.read(k, "policy", kp, pol);
      try {
        sc.policy = parse_pks_policy(pol);
      } catch (const InvalidArgument&) {
        r.fail(kp + ".policy", "expected largest, smallest or first-band");
      }
    }
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    const std::string mp = path + ".model";
    if (r.object(m, mp, {"block_size", "blocks"})) {
      r.read(m, "block_size", mp, sc.block_size, true);
      r.read(m, "blocks", mp, sc.blocks, true);
      r.check(sc.block_size >= 1, mp + ".block_size", "must be >= 1");
      r.check(sc.blocks >= 0, mp + ".blocks", "must be >= 0");
    }
  }
  if (sc.variant == Variant::model_liht)
    r.check(j.contains("model"), path + ".model", "required for model-liht");
  return sc;
}

}  // namespace detail

/// Parses and validates an experiment description; unknown keys are errors.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  detail::Reader r;
  ExperimentConfig c;
  c.source = j;
  if (!r.object(j, "$", {"name", "signal", "operator", "noise", "solvers", "sweep",
                         "trials", "base_seed", "success_tol", "description"}))
    throw ConfigError(r.errors);
  r.read(j, "name", "$", c.name);
  r.read(j, "description", "$", c.description);
  r.check(!c.name.empty() && c.name.find_first_of("/\\") == std::string::npos, "$.name",
          "must be a nonempty file-name-safe string");
  r.read(j, "trials", "$", c.trials);
  r.check(c.trials >= 1, "$.trials", "must be >= 1");
  r.read(j, "base_seed", "$", c.base_seed);
  r.read(j, "success_tol", "$", c.success_tol);
  r.check(c.success_tol > 0.0, "$.success_tol", "must be > 0");

  if (j.contains("signal")) {
    const auto& s = j.at("signal");
    if (r.object(s, "$.signal", {"n", "s", "amplitude", "measurement_power"})) {
      r.read(s, "n", "$.signal", c.signal.n, true);
      r.read(s, "s", "$.signal", c.signal.s, true);
      r.read(s, "amplitude", "$.signal", c.signal.amplitude);
      if (s.contains("measurement_power")) {
        double p = 0.0;
        r.read(s, "measurement_power", "$.signal", p);
        r.check(p > 0.0, "$.signal.measurement_power", "must be > 0");
        c.signal.measurement_power = p;
      }
      r.check(c.signal.n >= 1, "$.signal.n", "must be >= 1");
      r.check(c.signal.s >= 0 && c.signal.s <= c.signal.n, "$.signal.s",
              "must be in [0, n]");
      r.check(c.signal.amplitude > 0.0, "$.signal.amplitude", "must be > 0");
    }
  } else {
    r.fail("$.signal", "required key missing");
  }

  if (j.contains("operator")) {
    const auto& o = j.at("operator");
    if (r.object(o, "$.operator",
                 {"ensemble", "m", "normalization", "random_signs", "pin_operator"})) {
      std::string ens = "gaussian";
      r.read(o, "ensemble", "$.operator", ens);
      if (ens == "gaussian") c.op.kind = OperatorKind::dense;
      else if (ens == "partial-hadamard") c.op.kind = OperatorKind::partial_hadamard;
      else r.fail("$.operator.ensemble", "expected gaussian or partial-hadamard");
      r.read(o, "m", "$.operator", c.op.m, true);
      std::string norm = "unit-columns";
      r.read(o, "normalization", "$.operator", norm);
      if (norm == "unit-columns") c.op.normalization = Normalization::unit_columns;
      else if (norm == "spectral") c.op.normalization = Normalization::spectral;
      else if (norm == "none") c.op.normalization = Normalization::none;
      else r.fail("$.operator.normalization", "expected unit-columns, spectral or none");
      r.read(o, "random_signs", "$.operator", c.op.random_signs);
      r.read(o, "pin_operator", "$.operator", c.op.pin_operator);
      r.check(c.op.m >= 1, "$.operator.m", "must be >= 1");
      if (c.op.kind == OperatorKind::partial_hadamard)
        r.check(is_power_of_two(c.signal.n), "$.signal.n",
                "must be a power of two for partial-hadamard");
    }
  } else {
    r.fail("$.operator", "required key missing");
  }

  if (j.contains("noise")) c.noise = detail::read_noise(r, j.at("noise"), "$.noise");

  if (j.contains("solvers") && j.at("solvers").is_array() && !j.at("solvers").empty()) {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < j.at("solvers").size(); ++i) {
      const std::string p = "$.solvers[" + std::to_string(i) + "]";
      SolverConfig sc = detail::read_solver(r, j.at("solvers")[i], p);
      if (!sc.s_overridden) sc.params.s = c.signal.s;
      if (!ids.insert(sc.id).second) r.fail(p + ".id", "duplicate solver id '" + sc.id + "'");
      if (sc.variant == Variant::model_liht && sc.block_size >= 1)
        r.check(c.signal.n % sc.block_size == 0, p + ".model.block_size",
                "must divide signal n");
      c.solvers.push_back(std::move(sc));
    }
  } else {
    r.fail("$.solvers", "expected a nonempty array");
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (r.object(s, "$.sweep", {"axis", "values"})) {
      std::string axis;
      r.read(s, "axis", "$.sweep", axis, true);
      if (axis == "p") c.sweep.axis = SweepAxis::p;
      else if (axis == "alpha") c.sweep.axis = SweepAxis::alpha;
      else if (axis == "m") c.sweep.axis = SweepAxis::m;
      else if (axis == "known-support-fraction") c.sweep.axis = SweepAxis::known_support_fraction;
      else if (axis == "none") c.sweep.axis = SweepAxis::none;
      else if (!axis.empty()) r.fail("$.sweep.axis", "expected p, alpha, m or known-support-fraction");
      if (s.contains("values") && s.at("values").is_array() && !s.at("values").empty()) {
        c.sweep.values.clear();
        for (std::size_t i = 0; i < s.at("values").size(); ++i) {
          const auto& v = s.at("values")[i];
          const std::string p = "$.sweep.values[" + std::to_string(i) + "]";
          if (!v.is_number()) {
            r.fail(p, "expected a number");
            continue;
          }
          const double x = v.get<double>();
          switch (c.sweep.axis) {
            case SweepAxis::p: r.check(x >= 0.0 && x <= 1.0, p, "p must be in [0, 1]"); break;
            case SweepAxis::alpha: r.check(x > 0.0 && x <= 2.0, p, "alpha must be in (0, 2]"); break;
            case SweepAxis::m:
              r.check(x >= 1.0 && x == std::floor(x), p, "m must be a positive integer");
              if (c.op.kind == OperatorKind::partial_hadamard)
                r.check(x <= static_cast<double>(c.signal.n), p, "m must be <= n");
              break;
            case SweepAxis::known_support_fraction:
              r.check(x >= 0.0 && x <= 1.0, p, "fraction must be in [0, 1]");
              break;
            case SweepAxis::none: break;
          }
          c.sweep.values.push_back(x);
        }
      } else {
        r.fail("$.sweep.values", "expected a nonempty array of numbers");
      }
      if (c.sweep.axis == SweepAxis::p)
        r.check(std::holds_alternative<ContaminatedGaussian>(c.noise), "$.sweep.axis",
                "sweeping p needs p-gaussian noise");
      if (c.sweep.axis == SweepAxis::alpha)
        r.check(std::holds_alternative<AlphaStable>(c.noise), "$.sweep.axis",
                "sweeping alpha needs alpha-stable noise");
    }
  }
  if (c.op.kind == OperatorKind::partial_hadamard && c.sweep.axis != SweepAxis::m)
    r.check(c.op.m <= c.signal.n, "$.operator.m", "must be <= n for partial-hadamard");
  if (!r.errors.empty()) throw ConfigError(r.errors);
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("$: malformed JSON: ") + e.what()});
  }
  return parse_config(j);
}

}  // namespace lcs::harness

#endif  // LCS_HARNESS_CONFIG_HPP
