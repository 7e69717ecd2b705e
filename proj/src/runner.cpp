// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbent/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>

#include "orbent/entropy.hpp"
#include "orbent/errors.hpp"
#include "orbent/matrixlab.hpp"
#include "orbent/measures.hpp"
#include "orbent/microstates.hpp"
#include "orbent/oracles.hpp"
#include "orbent/theorem1.hpp"

namespace orbent {

namespace {

const std::set<std::string> kScenarios = {
    "gammaR",   "orbvolume", "chiu",     "sigma", "concentration",
    "remark2",  "theorem1",  "prop1",    "remark1"};

SpectralMeasure build_measure(const nlohmann::json& j, int grid_override = 0) {
  const std::string type = j.at("type").get<std::string>();
  const int cells = grid_override > 0 ? grid_override
                                      : j.value("cells", kDefaultCells);
  if (type == "haar") return SpectralMeasure::haar(cells);
  if (type == "roots") return SpectralMeasure::roots_of_unity(j.at("m").get<int>());
  if (type == "point") return SpectralMeasure::point_mass(j.value("angle", 0.0));
  if (type == "atoms") {
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    return SpectralMeasure::from_atoms(std::move(atoms));
  }
  if (type == "bump") {
    // Smooth atomless test density (1 + cos t) / 2 pi.
    return SpectralMeasure::from_density(
        [](double t) { return (1.0 + std::cos(t)) / kTwoPi; }, cells);
  }
  throw ConfigError("unknown measure type '" + type + "'");
}

std::string measure_label(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "roots") return "roots" + std::to_string(j.at("m").get<int>());
  return type;
}

std::vector<int> sweep_ints(const nlohmann::json& cfg, const char* key,
                            std::vector<int> fallback) {
  if (!cfg.contains("sweep") || !cfg.at("sweep").contains(key)) return fallback;
  return cfg.at("sweep").at(key).get<std::vector<int>>();
}

std::vector<double> sweep_doubles(const nlohmann::json& cfg, const char* key,
                                  std::vector<double> fallback) {
  if (!cfg.contains("sweep") || !cfg.at("sweep").contains(key)) return fallback;
  return cfg.at("sweep").at(key).get<std::vector<double>>();
}

MatrixTuple semicircle_representative(int dim, int arity, double norm_cap) {
  const RealLineMeasure law = semicircle_law();
  std::vector<Matrix> mats;
  mats.reserve(static_cast<size_t>(arity));
  for (int j = 0; j < arity; ++j) mats.push_back(quantile_diagonal(law, dim));
  return MatrixTuple::selfadjoint(std::move(mats), norm_cap);
}

nlohmann::json params_json(const MicrostateParams& p) {
  nlohmann::json j{{"N", p.dim}, {"m", p.degree}, {"delta", p.delta}};
  j["R"] = std::isfinite(p.norm_cap) ? nlohmann::json(p.norm_cap)
                                     : nlohmann::json("inf");
  return j;
}

// CI-aware trend check: non-decreasing unless an interval falls entirely
// below its predecessor's.
bool trend_non_decreasing(const std::vector<VolumeEstimate>& points) {
  for (size_t i = 1; i < points.size(); ++i)
    if (points[i].ci_hi < points[i - 1].ci_lo) return false;
  return true;
}

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

std::vector<RunRecord> run_sigma(const RunInputs& in, const std::string& hash) {
  std::vector<RunRecord> records;
  const auto grids = in.config.value("grids", std::vector<int>{kDefaultCells});
  const auto& measures = in.config.at("measures");
  for (size_t mi = 0; mi < measures.size(); ++mi) {
    for (int g : grids) {
      const SpectralMeasure mu = build_measure(measures[mi], g);
      const ExtendedReal value = sigma(mu);
      RunRecord r;
      r.scenario = "sigma";
      r.cell = {{"measure", measure_label(measures[mi])}, {"G", g}};
      r.payload = {{"value", value.to_json()},
                   {"negInf", value.is_neg_inf()},
                   {"hasAtoms", mu.has_atoms()}};
      r.seed = in.seed;
      r.config_hash = hash;
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::vector<RunRecord> run_chiu(const RunInputs& in, const std::string& hash) {
  std::vector<RunRecord> records;
  const auto& measures = in.config.at("measures");
  ExtendedReal total = ExtendedReal::finite(0.0);
  std::vector<SpectralMeasure> mus;
  for (size_t mi = 0; mi < measures.size(); ++mi) {
    mus.push_back(build_measure(measures[mi]));
    const ExtendedReal value = chi_u_single(mus.back());
    total += value;
    RunRecord r;
    r.scenario = "chiu";
    r.cell = {{"measure", measure_label(measures[mi])}, {"index", mi}};
    r.payload = {{"value", value.to_json()}};
    r.seed = in.seed;
    r.config_hash = hash;
    records.push_back(std::move(r));
  }
  RunRecord sum;
  sum.scenario = "chiu";
  sum.cell = {{"measure", "free-tuple"}};
  sum.payload = {{"value", chi_u_free_tuple(mus).to_json()},
                 {"sumOfParts", total.to_json()}};
  sum.seed = in.seed;
  sum.config_hash = hash;
  records.push_back(std::move(sum));
  return records;
}

std::vector<RunRecord> run_gammaR(const RunInputs& in, const std::string& hash) {
  std::vector<RunRecord> records;
  const int arity = in.config.value("x", nlohmann::json::object()).value("arity", 1);
  const auto oracle = make_semicircular_oracle(arity);
  for (int dim : sweep_ints(in.config, "N", {64}))
    for (int degree : sweep_ints(in.config, "m", {3}))
      for (double delta : sweep_doubles(in.config, "delta", {0.1})) {
        MicrostateParams p{dim, degree, delta, 2.0 + delta};
        const MatrixTuple xi = semicircle_representative(dim, arity, p.norm_cap);
        const auto res = in_gamma_R(xi, *oracle, p, ScanPolicy::Full);
        RunRecord r;
        r.scenario = "gammaR";
        r.cell = {{"N", dim}, {"m", degree}, {"delta", delta}};
        r.payload = {{"member", res.member},
                     {"maxDeviation", res.max_deviation},
                     {"worstWord", format_word(oracle->signature(), res.worst_word)},
                     {"boundary", res.boundary},
                     {"params", params_json(p)}};
        r.seed = in.seed;
        r.config_hash = hash;
        records.push_back(std::move(r));
      }
  return records;
}

std::vector<RunRecord> run_orbvolume(const RunInputs& in, const std::string& hash) {
  std::vector<RunRecord> records;
  const int n = in.config.value("n", 1);
  const std::int64_t trials = in.config.value("trials", 200);
  const std::string mode = in.config.value("mode", "fixed");

  std::vector<OraclePtr> factors;
  for (int i = 0; i < n; ++i)
    factors.push_back(make_semicircular_oracle(1, "x" + std::to_string(i + 1)));
  const auto target = make_free_product_oracle(factors);

  nlohmann::json pool = nlohmann::json::array();
  if (mode == "pool" && in.config.contains("pool"))
    pool = in.config.at("pool");
  else
    pool.push_back({{"type", "semicircleQuantile"}});

  std::uint64_t lane = 0;
  for (int dim : sweep_ints(in.config, "N", {32}))
    for (int degree : sweep_ints(in.config, "m", {2}))
      for (double delta : sweep_doubles(in.config, "delta", {0.15})) {
        MicrostateParams p{dim, degree, delta, 2.0 + delta};
        VolumeEstimate best;
        int best_candidate = -1;
        for (size_t ci = 0; ci < pool.size(); ++ci) {
          const RngStream cell_stream = substream({in.seed, 0}, lane++);
          const std::string ctype = pool[ci].value("type", "semicircleQuantile");
          std::vector<MatrixTuple> tuples;
          for (int i = 0; i < n; ++i) {
            if (ctype == "gue") {
              Rng rng(substream(cell_stream, 1000 + static_cast<std::uint64_t>(i)));
              tuples.push_back(
                  MatrixTuple::selfadjoint({sample_gue(dim, rng)}, p.norm_cap));
            } else {
              tuples.push_back(semicircle_representative(dim, 1, p.norm_cap));
            }
          }
          const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
            const auto res =
                in_gamma_orb(us, tuples, *target, p, ScanPolicy::EarlyExit);
            return {res.member, res.boundary};
          };
          const VolumeEstimate est = estimate_volume(
              pred, n, p, trials, substream(cell_stream, 0), in.threads);
          RunRecord r;
          r.scenario = "orbvolume";
          r.cell = {{"N", dim}, {"m", degree}, {"delta", delta}, {"n", n},
                    {"candidate", ctype}, {"candidateIndex", ci}};
          r.payload = {{"predicate", "inGammaOrb"},
                       {"params", params_json(p)},
                       {"volume", est.to_json()},
                       {"mode", mode}};
          r.seed = in.seed;
          r.config_hash = hash;
          records.push_back(std::move(r));
          if (best_candidate < 0 || est.p_hat > best.p_hat) {
            best = est;
            best_candidate = static_cast<int>(ci);
          }
        }
        if (mode == "pool") {
          RunRecord r;
          r.scenario = "orbvolume";
          r.cell = {{"N", dim}, {"m", degree}, {"delta", delta}, {"n", n},
                    {"candidate", "best-of-pool"}};
          r.payload = {{"predicate", "inGammaOrb"},
                       {"params", params_json(p)},
                       {"volume", best.to_json()},
                       {"mode", mode},
                       {"bestCandidateIndex", best_candidate}};
          r.seed = in.seed;
          r.config_hash = hash;
          records.push_back(std::move(r));
        }
      }
  return records;
}

std::vector<RunRecord> run_concentration(const RunInputs& in,
                                         const std::string& hash) {
  std::vector<RunRecord> records;
  const int degree = in.config.value("m", 4);
  const double eps = in.config.value("eps", 0.15);
  const std::int64_t trials = in.config.value("trials", 200);

  std::vector<VolumeEstimate> points;
  std::uint64_t lane = 0;
  for (int dim : sweep_ints(in.config, "N", {32, 64, 128})) {
    const MatrixTuple a = semicircle_representative(dim, 1, 2.0);
    MicrostateParams p{dim, degree, eps, std::numeric_limits<double>::infinity()};
    const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
      MatrixTuple conjugated;
      conjugated.dim = dim;
      conjugated.slots.push_back(
          {us[0] * a.mat(0) * us[0].adjoint(), SlotKind::SelfAdjoint});
      const MatrixTuple sets[2] = {a, std::move(conjugated)};
      const auto res = is_m_eps_free(sets, degree, eps, kDefaultDegreeCap,
                                     ScanPolicy::EarlyExit);
      return {res.free, false};
    };
    const VolumeEstimate est =
        estimate_volume(pred, 1, p, trials, substream({in.seed, 0}, lane++),
                        in.threads);
    points.push_back(est);
    RunRecord r;
    r.scenario = "concentration";
    r.cell = {{"N", dim}, {"m", degree}, {"eps", eps}};
    r.payload = {{"predicate", "mEpsFree"},
                 {"params", params_json(p)},
                 {"volume", est.to_json()}};
    r.seed = in.seed;
    r.config_hash = hash;
    records.push_back(std::move(r));
  }
  RunRecord trend;
  trend.scenario = "concentration";
  trend.cell = {{"summary", "trend"}};
  trend.payload = {{"nonDecreasing", trend_non_decreasing(points)},
                   {"verdict", trend_non_decreasing(points) ? "non-decreasing"
                                                            : "decreasing"}};
  trend.seed = in.seed;
  trend.config_hash = hash;
  records.push_back(std::move(trend));
  return records;
}

std::vector<RunRecord> run_remark2(const RunInputs& in, const std::string& hash) {
  const int instances = in.config.value("instances", 200);
  const int dim = in.config.value("N", 32);
  const auto ns = in.config.value("nList", std::vector<int>{2, 3});
  const int m_max = in.config.value("mMax", 4);

  int agreements = 0, disagreements = 0, excluded = 0;
  for (int k = 0; k < instances; ++k) {
    Rng rng(substream({in.seed, 1}, static_cast<std::uint64_t>(k)));
    const int n = ns[static_cast<size_t>(k) % ns.size()];
    const int degree = 1 + static_cast<int>(rng.uniform() * m_max);
    const double delta = 0.05 + 0.45 * rng.uniform();

    std::vector<OraclePtr> factors;
    for (int i = 0; i < n; ++i)
      factors.push_back(make_semicircular_oracle(1, "x" + std::to_string(i + 1)));
    const auto target = make_free_product_oracle(factors);

    std::vector<MatrixTuple> tuples;
    std::vector<Matrix> us;
    for (int i = 0; i < n; ++i) {
      tuples.push_back(semicircle_representative(dim, 1, 2.0 + delta));
      us.push_back(sample_haar_unitary(dim, rng));
    }
    MicrostateParams p{dim, std::min(degree, m_max), delta, 2.0 + delta};
    const auto direct = in_gamma_orb(us, tuples, *target, p, ScanPolicy::Full);
    const auto reduced_us = reduce_last_to_identity(us);
    const auto reduced =
        in_gamma_orb(reduced_us, tuples, *target, p, ScanPolicy::Full);
    if (direct.boundary || reduced.boundary) {
      ++excluded;
    } else if (direct.member == reduced.member) {
      ++agreements;
    } else {
      ++disagreements;
    }
  }
  RunRecord r;
  r.scenario = "remark2";
  r.cell = {{"N", dim}, {"instances", instances}};
  r.payload = {{"agreements", agreements},
               {"disagreements", disagreements},
               {"excludedBoundary", excluded}};
  r.seed = in.seed;
  r.config_hash = hash;
  return {r};
}

Theorem1Config theorem1_config_from(const RunInputs& in) {
  Theorem1Config cfg;
  if (in.config.contains("measures"))
    for (const auto& m : in.config.at("measures"))
      cfg.v_measures.push_back(build_measure(m));
  cfg.x_arity = in.config.value("x", nlohmann::json::object()).value("arity", 1);
  cfg.dims = sweep_ints(in.config, "N", {32});
  cfg.degrees = sweep_ints(in.config, "m", {2});
  cfg.deltas = sweep_doubles(in.config, "delta", {0.15});
  cfg.trials = in.config.value("trials", 200);
  cfg.calibration_trials = in.config.value("calibrationTrials", 8);
  cfg.witness_count = in.config.value("witnesses", 8);
  cfg.prop1_mode = in.config.value("mode", "fixed") == "prop1";
  cfg.stream = RngStream{in.seed, 7};
  cfg.threads = in.threads;
  return cfg;
}

std::vector<RunRecord> run_theorem1(const RunInputs& in, const std::string& hash) {
  const Theorem1Config cfg = theorem1_config_from(in);
  const Theorem1Report report = run_theorem1_experiment(cfg);
  if (!in.out_dir.empty()) {
    std::ofstream os(in.out_dir / "theorem1_report.json");
    if (os) os << report.to_json().dump(2) << '\n';
  }
  std::vector<RunRecord> records;
  for (const auto& cell : report.cells) {
    RunRecord r;
    r.scenario = "theorem1";
    r.cell = {{"N", cell.dim}, {"m", cell.degree}, {"delta", cell.delta}};
    r.payload = cell.to_json();
    r.payload["volume"] = cell.gamma_orb.to_json();  // CSV projection
    r.payload["verdict"] = to_string(cell.verdict);
    r.seed = in.seed;
    r.config_hash = hash;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> run_prop1(const RunInputs& in, const std::string& hash) {
  std::vector<RunRecord> records;
  const int dim = in.config.value("N", 128);
  const int count = in.config.value("count", 3);
  const int check_degree = in.config.value("checkDegree", 4);

  // Free-copy microstates: joint crossing moments against the free-product
  // target of the copies' common empirical state.
  const MatrixTuple xi = semicircle_representative(dim, 1, 2.0);
  Rng rng(substream({in.seed, 3}, 0));
  const auto copies = build_free_copy_microstates(xi, count, rng);
  std::vector<OraclePtr> factors;
  for (int i = 0; i < count; ++i)
    factors.push_back(make_empirical_oracle(xi, "c" + std::to_string(i + 1)));
  const auto target = make_free_product_oracle(factors);

  VariableSignature joint = target->signature();
  WordEvaluator ev(joint, dim);
  for (int i = 0; i < count; ++i) ev.set_slot(i, &copies[static_cast<size_t>(i)].mat(0));
  double max_dev = 0.0, max_crossing_dev = 0.0;
  ev.for_each_word(check_degree, [&](const StarWord& w, Complex tr) {
    const double dev = std::abs(tr - target->eval(w));
    max_dev = std::max(max_dev, dev);
    bool crossing = false;  // touches at least two copies
    for (size_t i = 1; i < w.letters.size(); ++i)
      if (w.letters[i].slot != w.letters[0].slot) crossing = true;
    if (crossing) max_crossing_dev = std::max(max_crossing_dev, dev);
    return true;
  });
  RunRecord m;
  m.scenario = "prop1";
  m.cell = {{"N", dim}, {"count", count}, {"checkDegree", check_degree}};
  m.payload = {{"maxDeviation", max_dev},
               {"maxCrossingDeviation", max_crossing_dev},
               {"value", max_crossing_dev}};
  m.seed = in.seed;
  m.config_hash = hash;
  records.push_back(std::move(m));

  // Chain verdicts in fixed vs Eq (8) mode must agree.
  RunInputs fixed_in = in;
  fixed_in.config["mode"] = "fixed";
  RunInputs prop_in = in;
  prop_in.config["mode"] = "prop1";
  const Theorem1Report fixed_report =
      run_theorem1_experiment(theorem1_config_from(fixed_in));
  const Theorem1Report prop_report =
      run_theorem1_experiment(theorem1_config_from(prop_in));
  bool verdicts_match = fixed_report.cells.size() == prop_report.cells.size();
  for (size_t i = 0; verdicts_match && i < fixed_report.cells.size(); ++i)
    verdicts_match = fixed_report.cells[i].verdict == prop_report.cells[i].verdict;
  for (const auto* rep : {&fixed_report, &prop_report}) {
    for (const auto& cell : rep->cells) {
      RunRecord r;
      r.scenario = "prop1";
      r.cell = {{"N", cell.dim}, {"m", cell.degree}, {"delta", cell.delta},
                {"mode", cell.mode}};
      r.payload = cell.to_json();
      r.payload["verdict"] = to_string(cell.verdict);
      r.seed = in.seed;
      r.config_hash = hash;
      records.push_back(std::move(r));
    }
  }
  RunRecord cmp;
  cmp.scenario = "prop1";
  cmp.cell = {{"summary", "mode-comparison"}};
  cmp.payload = {{"verdictsMatch", verdicts_match}};
  cmp.seed = in.seed;
  cmp.config_hash = hash;
  records.push_back(std::move(cmp));
  return records;
}

std::vector<RunRecord> run_remark1(const RunInputs& in, const std::string& hash) {
  std::vector<RunRecord> records;
  const int roots = in.config.value("rootOrder", 3);
  const int check_degree = in.config.value("checkDegree", 4);
  // default delta in the regime where small N misses and large N hits
  const double delta = in.config.value("delta", 0.045);
  const int degree = in.config.value("m", 3);
  const std::int64_t trials = in.config.value("trials", 200);
  const SpectralMeasure mu = SpectralMeasure::roots_of_unity(roots);

  // Joint moments of (v X v*, X) against the two-free-copies target, with
  // X a GUE draw and v the deterministic root-of-unity quantile diagonal.
  const auto x_oracle = make_semicircular_oracle(1);
  const auto full = make_conjugated_family_oracle(x_oracle, {mu});
  const auto family_target = restrict_to_prefix_groups(full, 2);

  std::vector<VolumeEstimate> points;
  std::uint64_t lane = 0;
  for (int dim : sweep_ints(in.config, "N", {32, 64, 128})) {
    Rng rng(substream({in.seed, 2}, lane));
    const Matrix x = sample_gue(dim, rng);
    const Matrix v = quantile_diagonal(mu, dim);
    const Matrix y = v * x * v.adjoint();
    WordEvaluator ev(family_target->signature(), dim);
    ev.set_slot(0, &y);
    ev.set_slot(1, &x);
    double max_dev = 0.0;
    ev.for_each_word(check_degree, [&](const StarWord& w, Complex tr) {
      max_dev = std::max(max_dev, std::abs(tr - family_target->eval(w)));
      return true;
    });
    RunRecord mrec;
    mrec.scenario = "remark1";
    mrec.cell = {{"N", dim}, {"part", "moments"}};
    mrec.payload = {{"maxDeviation", max_dev}, {"value", max_dev},
                    {"checkDegree", check_degree}};
    mrec.seed = in.seed;
    mrec.config_hash = hash;
    records.push_back(std::move(mrec));

    // Orbital membership frequency of the pair against the same target.
    MicrostateParams p{dim, degree, delta, 2.0 + delta};
    const std::vector<MatrixTuple> tuples(
        2, semicircle_representative(dim, 1, p.norm_cap));
    const auto pred = [&](std::span<const Matrix> us) -> TrialOutcome {
      const auto res =
          in_gamma_orb(us, tuples, *family_target, p, ScanPolicy::EarlyExit);
      return {res.member, res.boundary};
    };
    const VolumeEstimate est = estimate_volume(
        pred, 2, p, trials, substream({in.seed, 4}, lane), in.threads);
    points.push_back(est);
    RunRecord vrec;
    vrec.scenario = "remark1";
    vrec.cell = {{"N", dim}, {"part", "orbital"}, {"m", degree}, {"delta", delta}};
    vrec.payload = {{"predicate", "inGammaOrb"},
                    {"params", params_json(p)},
                    {"volume", est.to_json()}};
    vrec.seed = in.seed;
    vrec.config_hash = hash;
    records.push_back(std::move(vrec));
    ++lane;
  }
  RunRecord trend;
  trend.scenario = "remark1";
  trend.cell = {{"summary", "trend"}};
  trend.payload = {{"nonDecreasing", trend_non_decreasing(points)},
                   {"verdict", trend_non_decreasing(points) ? "non-decreasing"
                                                            : "decreasing"}};
  trend.seed = in.seed;
  trend.config_hash = hash;
  records.push_back(std::move(trend));
  return records;
}

void write_plots(const RunInputs& in, const std::vector<RunRecord>& records) {
  // Generic projection: any scenario with numeric N cells and a volume payload
  // gets pHat-vs-N and logProxy-vs-N plots; sigma gets value-vs-G.
  PlotSeries volume_series;
  volume_series.label = "pHat";
  PlotSeries proxy_series;
  proxy_series.label = "logProxy";
  PlotSeries sigma_series;
  sigma_series.label = "Sigma";
  for (const auto& r : records) {
    if (r.payload.contains("volume") && r.cell.contains("N")) {
      const auto& v = r.payload.at("volume");
      const double n = r.cell.at("N").get<double>();
      volume_series.x.push_back(n);
      volume_series.y.push_back(v.at("pHat").get<double>());
      volume_series.y_lo.push_back(v.at("ci").at(0).get<double>());
      volume_series.y_hi.push_back(v.at("ci").at(1).get<double>());
      if (v.at("logProxy").is_number()) {
        proxy_series.x.push_back(n);
        proxy_series.y.push_back(v.at("logProxy").get<double>());
      }
    }
    if (r.scenario == "sigma" && r.cell.contains("G") &&
        r.payload.at("value").is_number()) {
      sigma_series.x.push_back(r.cell.at("G").get<double>());
      sigma_series.y.push_back(r.payload.at("value").get<double>());
    }
  }
  const std::string scenario = in.config.at("scenario").get<std::string>();
  if (!volume_series.x.empty())
    write_svg_line_plot(in.out_dir / (scenario + "_phat_vs_N.svg"),
                        scenario + ": hit rate vs N", "N", "pHat",
                        {volume_series});
  if (!proxy_series.x.empty())
    write_svg_line_plot(in.out_dir / (scenario + "_logproxy_vs_N.svg"),
                        scenario + ": volume log proxy vs N", "N",
                        "(1/N^2) ln pHat", {proxy_series});
  if (!sigma_series.x.empty())
    write_svg_line_plot(in.out_dir / "sigma_vs_G.svg", "log-energy vs grid",
                        "G", "Sigma", {sigma_series});
}

}  // namespace

bool is_known_scenario(const std::string& id) { return kScenarios.count(id) > 0; }

std::vector<std::string> validate_config(const nlohmann::json& config) {
  std::vector<std::string> errors;
  if (!config.is_object()) {
    errors.push_back("config: must be a JSON object");
    return errors;
  }
  if (!config.contains("scenario") || !config.at("scenario").is_string()) {
    errors.push_back("scenario: required string field");
    return errors;
  }
  const std::string scenario = config.at("scenario").get<std::string>();
  if (!is_known_scenario(scenario))
    errors.push_back("scenario: unknown id '" + scenario + "'");

  if (config.contains("seed") && !config.at("seed").is_number_unsigned())
    errors.push_back("seed: must be a nonnegative integer");
  if (config.contains("trials") &&
      (!config.at("trials").is_number_integer() ||
       config.at("trials").get<std::int64_t>() < 1))
    errors.push_back("trials: must be a positive integer");
  if (config.contains("sweep")) {
    const auto& sweep = config.at("sweep");
    for (const char* key : {"N", "m"}) {
      if (!sweep.contains(key)) continue;
      if (!sweep.at(key).is_array() || sweep.at(key).empty())
        errors.push_back(std::string("sweep.") + key + ": must be a nonempty array");
      else
        for (const auto& v : sweep.at(key))
          if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
            errors.push_back(std::string("sweep.") + key +
                             ": entries must be positive integers");
    }
    if (sweep.contains("delta"))
      for (const auto& v : sweep.at("delta"))
        if (!v.is_number() || !(v.get<double>() > 0))
          errors.push_back("sweep.delta: entries must be positive");
  }
  const bool needs_measures =
      scenario == "sigma" || scenario == "chiu" || scenario == "theorem1";
  if (needs_measures) {
    if (!config.contains("measures") || !config.at("measures").is_array() ||
        config.at("measures").empty()) {
      errors.push_back("measures: required nonempty array for scenario '" +
                       scenario + "'");
    } else {
      for (size_t i = 0; i < config.at("measures").size(); ++i) {
        const auto& m = config.at("measures")[i];
        if (!m.is_object() || !m.contains("type"))
          errors.push_back("measures[" + std::to_string(i) +
                           "]: needs a 'type' field");
        else {
          try {
            build_measure(m);
          } catch (const std::exception& e) {
            errors.push_back("measures[" + std::to_string(i) + "]: " + e.what());
          }
        }
      }
    }
  }
  if (scenario == "orbvolume" && config.contains("n") &&
      (!config.at("n").is_number_integer() || config.at("n").get<int>() < 1))
    errors.push_back("n: must be a positive integer");
  if (config.contains("mode")) {
    const std::string mode = config.at("mode").get<std::string>();
    if (mode != "fixed" && mode != "pool" && mode != "prop1")
      errors.push_back("mode: must be one of fixed|pool|prop1");
  }
  return errors;
}

std::vector<RunRecord> run_scenario(const RunInputs& in) {
  nlohmann::json canonical = in.config;
  canonical["seed"] = in.seed;
  canonical.erase("threads");
  const std::string hash = config_hash_hex(canonical);
  const std::string scenario = in.config.at("scenario").get<std::string>();

  const auto started = std::chrono::steady_clock::now();
  std::vector<RunRecord> records;
  try {
    if (scenario == "sigma") records = run_sigma(in, hash);
    else if (scenario == "chiu") records = run_chiu(in, hash);
    else if (scenario == "gammaR") records = run_gammaR(in, hash);
    else if (scenario == "orbvolume") records = run_orbvolume(in, hash);
    else if (scenario == "concentration") records = run_concentration(in, hash);
    else if (scenario == "remark2") records = run_remark2(in, hash);
    else if (scenario == "theorem1") records = run_theorem1(in, hash);
    else if (scenario == "prop1") records = run_prop1(in, hash);
    else if (scenario == "remark1") records = run_remark1(in, hash);
    else throw ConfigError("unknown scenario '" + scenario + "'");
  } catch (const std::exception& e) {
    RunRecord err;
    err.scenario = scenario;
    err.cell = {{"summary", "error"}};
    err.payload = {{"error", e.what()}};
    err.seed = in.seed;
    err.config_hash = hash;
    records.push_back(std::move(err));
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - started);
  if (!records.empty()) records.front().wall_ms = elapsed.count();
  return records;
}

int run_experiment(const RunOptions& opts, std::ostream& log) {
  nlohmann::json config;
  {
    std::ifstream is(opts.config_path);
    if (!is) {
      log << "error: cannot open config '" << opts.config_path.string() << "'\n";
      return 2;
    }
    try {
      is >> config;
    } catch (const std::exception& e) {
      log << "error: config parse failure: " << e.what() << '\n';
      return 2;
    }
  }
  const auto errors = validate_config(config);
  if (!errors.empty()) {
    log << "invalid config:\n";
    for (const auto& e : errors) log << "  - " << e << '\n';
    return 2;
  }

  RunInputs in;
  in.config = config;
  in.seed = opts.seed_override.value_or(config.value("seed", 42ULL));
  int threads = config.value("threads", 1);
  if (const char* env = std::getenv("ORBENT_THREADS")) threads = std::atoi(env);
  if (opts.threads_override) threads = *opts.threads_override;
  in.threads = std::max(1, threads);
  in.out_dir = opts.out_dir;
  in.plots = config.value("plots", false);

  std::filesystem::create_directories(in.out_dir);
  const auto records = run_scenario(in);
  write_jsonl(in.out_dir / "records.jsonl", records);
  write_csv_summary(in.out_dir / "summary.csv", records);
  if (in.plots) write_plots(in, records);
  log << "wrote " << records.size() << " record(s) to "
      << (in.out_dir / "records.jsonl").string() << '\n';
  for (const auto& r : records)
    if (r.payload.contains("error"))
      log << "  cell error: " << r.payload.at("error").get<std::string>() << '\n';
  return 0;
}

namespace {

bool json_close(const nlohmann::json& a, const nlohmann::json& b,
                const std::string& path, std::vector<std::string>& diffs) {
  if (a.is_number() && b.is_number()) {
    if (a.is_number_float() || b.is_number_float()) {
      const double x = a.get<double>(), y = b.get<double>();
      if (std::abs(x - y) > 1e-9 * std::max({1.0, std::abs(x), std::abs(y)})) {
        diffs.push_back(path + ": " + a.dump() + " != " + b.dump());
        return false;
      }
      return true;
    }
    // integers compare exactly; signedness of the parsed representation is
    // irrelevant
    if (a.get<std::int64_t>() != b.get<std::int64_t>()) {
      diffs.push_back(path + ": " + a.dump() + " != " + b.dump());
      return false;
    }
    return true;
  }
  if (a.type() != b.type()) {
    diffs.push_back(path + ": type mismatch");
    return false;
  }
  if (a.is_object()) {
    bool ok = true;
    for (const auto& [k, v] : a.items()) {
      if (k == "wallMs") continue;
      if (!b.contains(k)) {
        diffs.push_back(path + "/" + k + ": missing in golden");
        ok = false;
        continue;
      }
      ok = json_close(v, b.at(k), path + "/" + k, diffs) && ok;
    }
    for (const auto& [k, v] : b.items())
      if (k != "wallMs" && !a.contains(k)) {
        diffs.push_back(path + "/" + k + ": missing in rerun");
        ok = false;
      }
    return ok;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      diffs.push_back(path + ": length " + std::to_string(a.size()) + " != " +
                      std::to_string(b.size()));
      return false;
    }
    bool ok = true;
    for (size_t i = 0; i < a.size(); ++i)
      ok = json_close(a[i], b[i], path + "/" + std::to_string(i), diffs) && ok;
    return ok;
  }
  if (a != b) {
    diffs.push_back(path + ": " + a.dump() + " != " + b.dump());
    return false;
  }
  return true;
}

}  // namespace

bool records_equivalent(const RunRecord& fresh, const RunRecord& golden,
                        std::vector<std::string>& diffs) {
  return json_close(fresh.to_json(), golden.to_json(), "", diffs);
}

int verify_goldens(const std::filesystem::path& golden_dir, int threads,
                   std::ostream& log) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(golden_dir)) {
    log << "error: missing golden directory '" << golden_dir.string() << "'\n";
    return 2;
  }
  std::vector<fs::path> cases;
  for (const auto& entry : fs::directory_iterator(golden_dir))
    if (entry.is_directory()) cases.push_back(entry.path());
  std::sort(cases.begin(), cases.end());
  if (cases.empty()) {
    log << "error: no golden cases under '" << golden_dir.string() << "'\n";
    return 2;
  }

  int failures = 0;
  for (const auto& dir : cases) {
    const fs::path config_path = dir / "config.json";
    const fs::path records_path = dir / "records.jsonl";
    if (!fs::exists(config_path) || !fs::exists(records_path)) {
      log << "[MISSING] " << dir.filename().string()
          << ": needs config.json and records.jsonl\n";
      ++failures;
      continue;
    }
    nlohmann::json config;
    {
      std::ifstream is(config_path);
      is >> config;
    }
    RunInputs in;
    in.config = config;
    in.seed = config.value("seed", 42ULL);
    in.threads = std::max(1, threads);
    in.out_dir = fs::temp_directory_path();
    const auto fresh = run_scenario(in);
    const auto golden = read_jsonl(records_path);
    std::vector<std::string> diffs;
    if (fresh.size() != golden.size()) {
      diffs.push_back("record count " + std::to_string(fresh.size()) + " != " +
                      std::to_string(golden.size()));
    } else {
      for (size_t i = 0; i < fresh.size(); ++i)
        records_equivalent(fresh[i], golden[i], diffs);
    }
    if (diffs.empty()) {
      log << "[OK]   " << dir.filename().string() << '\n';
    } else {
      log << "[FAIL] " << dir.filename().string() << '\n';
      for (const auto& d : diffs) log << "    " << d << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace orbent
