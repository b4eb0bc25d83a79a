// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits with status 1 if any criterion fails.
//
// Criteria 6 to 9 share one 20,000-step training run followed by a
// deterministic evaluation over 20 held-out seeds. `--criteria 1,2,5` runs a
// subset; the training is skipped unless one of 6 to 9 is requested.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "CLI11.hpp"
#include "bandit.h"
#include "srgov/control.h"
#include "srgov/error.h"
#include "srgov/governor.h"
#include "srgov/harness/config.h"
#include "srgov/harness/episode.h"
#include "srgov/harness/export.h"
#include "srgov/harness/mdp.h"
#include "srgov/harness/trainer.h"
#include "srgov/numkit.h"
#include "srgov/plant.h"
#include "srgov/random.h"
#include "srgov/sac/agent.h"
#include "srgov/sac/mlp.h"
#include "srgov/sac/model_io.h"
#include "srgov/srsm.h"

namespace {

using namespace srgov;
using numkit::Mat;
using numkit::Vec;
namespace fs = std::filesystem;

// Criterion 1.
constexpr double kLyapunovRel = 1e-8;
constexpr double kRiccatiRel = 1e-6;
constexpr double kRk4MinRatio = 16.0;
constexpr double kGradRel = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr int kFullSizeGradSamples = 2000;
constexpr double kNumericsSeconds = 60.0;
// Criterion 3.
constexpr double kErrorDynamicsTol = 1e-6;
constexpr int kErrorDynamicsSteps = 1000;  // 1 s at dt = 1 ms
constexpr double kRollbackJumpFactor = 2.0;
constexpr std::int64_t kMinCycleSteps = 1910;
constexpr double kMinCycleSeconds = 1.910;
// Criterion 4.
constexpr double kBaselineTimeLo = 90.0;
constexpr double kBaselineTimeHi = 140.0;
constexpr double kEpisodeSeconds = 60.0;
// Criterion 5.
constexpr double kConservativeAlpha = 0.065359;
constexpr double kConservativeAlphaTol = 5e-7;
constexpr double kBaselineAlphaLo = 0.0654;
constexpr double kBaselineAlphaHi = 0.1;
// Criteria 6 to 8.
constexpr int kEvalEpisodes = 20;
constexpr std::uint64_t kEvalSeed0 = 1000;
constexpr double kTrueBound = 10.0;
constexpr std::int64_t kTrainSteps = 20000;
constexpr double kMinReduction = 0.03;
constexpr double kTrainHours = 4.0;
// Criterion 9.
constexpr double kBanditTarget = 0.7;
constexpr double kBanditBand = 0.05;
constexpr int kBanditSteps = 5000;
constexpr std::uint64_t kBanditSeed = 11;
constexpr double kBanditEntropyBand = 0.5;
// Criterion 10.
constexpr std::uint64_t kTraceSeed = 7;

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void Check(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back((ok ? "" : "!") + note);
  }
};

void Print(int id, const std::string& name, const Verdict& v) {
  std::cout << (v.pass ? "PASS" : "FAIL") << "  " << id << "  " << name;
  const char* sep = ": ";
  for (const std::string& note : v.notes) {
    std::cout << sep << note;
    sep = "; ";
  }
  std::cout << std::endl;
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

Mat RandomMatrix(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.Uniform(-1.0, 1.0);
  }
  return m;
}

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

harness::RunConfig DefaultConfig() {
  harness::RunConfig cfg;
  cfg.Validate();
  return cfg;
}

// Worst relative error between the analytic gradients of sum(c .* net(x))
// and central differences, over `samples` random parameters (all of them
// when samples <= 0) and every input entry.
double WorstGradientError(sac::Mlp& net, int batch, int samples, Rng& rng) {
  const Mat x0 = RandomMatrix(net.input_dim(), batch, rng);
  const Mat c = RandomMatrix(net.output_dim(), batch, rng);
  auto probe = [&](const Mat& x) { return net.Forward(x).cwiseProduct(c).sum(); };
  sac::Mlp::Cache cache;
  net.Forward(x0, &cache);
  const sac::Mlp::Gradients g = net.Backward(cache, c);

  double worst = 0.0;
  const Eigen::Index n = net.params().size();
  const Eigen::Index count = samples > 0 ? std::min<Eigen::Index>(samples, n) : n;
  for (Eigen::Index k = 0; k < count; ++k) {
    const Eigen::Index p =
        samples > 0 ? static_cast<Eigen::Index>(rng.Index(n)) : k;
    const double keep = net.params()(p);
    net.params()(p) = keep + kGradStep;
    const double up = probe(x0);
    net.params()(p) = keep - kGradStep;
    const double down = probe(x0);
    net.params()(p) = keep;
    worst = std::max(worst, RelErr(g.params(p), (up - down) / (2.0 * kGradStep)));
  }
  Mat x = x0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double keep = x(i, j);
      x(i, j) = keep + kGradStep;
      const double up = probe(x);
      x(i, j) = keep - kGradStep;
      const double down = probe(x);
      x(i, j) = keep;
      worst = std::max(worst,
                       RelErr(g.input(i, j), (up - down) / (2.0 * kGradStep)));
    }
  }
  return worst;
}

Verdict Numerics() {
  const auto start = Clock::now();
  Verdict v;
  const harness::RunConfig cfg = DefaultConfig();
  const plant::LinearModel model = plant::HoverLinearization(cfg.quad);
  const control::DesignWeights w = control::QuadrotorWeights(cfg.weights);
  const control::GainSet gains = control::DesignGains(model, w);

  const Mat eye = Mat::Identity(plant::kStateDim, plant::kStateDim);
  double lyap = 0.0;
  for (const Mat& a_cl : {Mat(model.a - model.b * gains.k()),
                          Mat(model.a - gains.l() * model.c)}) {
    const numkit::SymPosDef p =
        numkit::SolveLyapunov(a_cl, numkit::SymPosDef::Identity(plant::kStateDim));
    lyap = std::max(lyap, numkit::LyapunovResidual(a_cl, p.matrix(), eye) / eye.norm());
  }
  v.Check(lyap <= kLyapunovRel, "lyapunov residual/|Q| " + Fmt(lyap));

  const numkit::RiccatiResult k_care =
      numkit::SolveRiccatiOde(model.a, model.b, w.q_k, w.r_k);
  const numkit::RiccatiResult l_care = numkit::SolveRiccatiOde(
      model.a.transpose(), model.c.transpose(), w.q_l, w.r_l);
  const double ric = std::max(
      numkit::RiccatiResidual(model.a, model.b, w.q_k.matrix(), w.r_k.matrix(),
                              k_care.p_care.matrix()) /
          w.q_k.matrix().norm(),
      numkit::RiccatiResidual(model.a.transpose(), model.c.transpose(),
                              w.q_l.matrix(), w.r_l.matrix(),
                              l_care.p_care.matrix()) /
          w.q_l.matrix().norm());
  v.Check(ric <= kRiccatiRel, "riccati residual/|Q| " + Fmt(ric));

  // y' = -y from y(0) = 1: one step and the integral over [0, 1].
  auto decay = [](const Vec& y, const Vec&) { return Vec(-y); };
  auto global_error = [&](double h) {
    Vec y = Vec::Ones(1);
    const int n = static_cast<int>(std::lround(1.0 / h));
    for (int i = 0; i < n; ++i) y = numkit::Rk4Step(decay, y, Vec(), h);
    return std::abs(y(0) - std::exp(-1.0));
  };
  auto local_error = [&](double h) {
    const Vec y0 = Vec::Ones(1);
    return std::abs(numkit::Rk4Step(decay, y0, Vec(), h)(0) - std::exp(-h));
  };
  const double global_ratio = global_error(0.1) / global_error(0.05);
  const double local_ratio = local_error(0.1) / local_error(0.05);
  v.Check(global_ratio >= kRk4MinRatio, "rk4 global ratio " + Fmt(global_ratio));
  v.Check(local_ratio >= kRk4MinRatio, "rk4 local ratio " + Fmt(local_ratio));

  Rng rng(101);
  double grad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int in = 1 + static_cast<int>(rng.Index(13));
    const int hidden = 2 + static_cast<int>(rng.Index(15));
    const int out = 1 + static_cast<int>(rng.Index(2));
    sac::Mlp net = sac::Mlp::Random({in, hidden, hidden, out}, rng);
    grad = std::max(grad, WorstGradientError(net, 5, 0, rng));
  }
  const int h = cfg.sac.hidden;
  sac::Mlp policy = sac::Mlp::Random({plant::kStateDim, h, h, 2}, rng);
  sac::Mlp critic = sac::Mlp::Random({plant::kStateDim + 1, h, h, 1}, rng);
  grad = std::max(grad, WorstGradientError(policy, 4, kFullSizeGradSamples, rng));
  grad = std::max(grad, WorstGradientError(critic, 4, kFullSizeGradSamples, rng));
  v.Check(grad <= kGradRel, "mlp gradient rel err " + Fmt(grad));

  const double elapsed = Seconds(start);
  v.Check(elapsed < kNumericsSeconds, "runtime " + Fmt(elapsed) + " s");
  return v;
}

Verdict Certificates() {
  Verdict v;
  const harness::RunConfig cfg = DefaultConfig();
  const srsm::LoopSetup setup = harness::BuildLoop(cfg);
  const plant::LinearModel& m = setup.model;
  const bool bk = numkit::HurwitzCertificate(m.a - m.b * setup.gains.k());
  const bool lc = numkit::HurwitzCertificate(m.a - setup.gains.l() * m.c);
  const bool raw = numkit::HurwitzCertificate(m.a);
  v.Check(bk, std::string("A-BK ") + (bk ? "certified" : "rejected"));
  v.Check(lc, std::string("A-LC ") + (lc ? "certified" : "rejected"));
  v.Check(!raw, std::string("A ") + (raw ? "certified" : "rejected"));
  return v;
}

srsm::LoopSetup QuietLoop() {
  srsm::LoopSetup setup = harness::BuildLoop(DefaultConfig());
  setup.noise_std.setZero();
  return setup;
}

// Hover state offset along (1,1,1) so that ||x - sp||_P^2 = norm_sq.
plant::VehicleState Displaced(const srsm::LoopSetup& setup,
                              const governor::Setpoint& sp, double norm_sq) {
  plant::VehicleState d = plant::VehicleState::Zero();
  d.head<3>() = Eigen::Vector3d::Ones() / std::sqrt(3.0);
  const double unit = setup.metric.NormSq(d, plant::VehicleState::Zero());
  return sp.state() - std::sqrt(norm_sq / unit) * d;
}

Verdict Mechanics() {
  Verdict v;
  const srsm::LoopSetup quiet = QuietLoop();
  const plant::LinearModel& m = quiet.model;
  const Mat& l = quiet.gains.l();

  {
    const control::Observer observer(m, l);
    const Mat a_err = m.a - l * m.c;
    auto plant_f = [&](const plant::VehicleState& s, const plant::ControlInput& u) {
      return plant::VehicleState(m.a * s + m.b * u);
    };
    auto err_f = [&](const plant::VehicleState& e, const plant::ControlInput&) {
      return plant::VehicleState(a_err * e);
    };
    Rng rng(31);
    plant::VehicleState x = 0.1 * RandomMatrix(plant::kStateDim, 1, rng);
    plant::VehicleState xhat = plant::VehicleState::Zero();
    plant::VehicleState e = x - xhat;
    double worst = 0.0;
    for (int k = 0; k < kErrorDynamicsSteps; ++k) {
      const plant::ControlInput u = RandomMatrix(plant::kInputDim, 1, rng);
      std::tie(x, xhat) = observer.StepCoupled(plant_f, x, xhat, u,
                                               plant::Measurement::Zero(),
                                               quiet.sr.dt);
      e = numkit::Rk4Step(err_f, e, u, quiet.sr.dt);
      worst = std::max(worst, ((x - xhat) - e).norm());
    }
    v.Check(worst <= kErrorDynamicsTol, "error dynamics deviation " + Fmt(worst));
  }

  const governor::Setpoint sp =
      governor::Setpoint::AtPosition(Eigen::Vector3d(1.0, 1.0, 1.0));
  const std::size_t mc_end = static_cast<std::size_t>(quiet.sr.mc_steps());
  const std::size_t rb_end = mc_end + static_cast<std::size_t>(quiet.sr.rb_steps());
  {
    const srsm::LoopSetup noisy = harness::BuildLoop(DefaultConfig());
    const plant::VehicleState x =
        Displaced(noisy, sp, 0.5 * noisy.metric.rho_s());
    Rng rng(32);
    const srsm::CycleResult r = srsm::RunCycle(noisy, x, x, sp, rng);
    const auto& rows = r.trace.rows;
    const bool restored = rows[rb_end].xhat == rows[0].xhat &&
                          rows[rb_end].est_norm_sq == rows[0].est_norm_sq;
    const double jump =
        std::abs(rows[rb_end].est_norm_sq - rows[rb_end - 1].est_norm_sq);
    double step = 0.0;
    for (std::size_t i = 1; i < mc_end; ++i) {
      step = std::max(step, std::abs(rows[i].est_norm_sq - rows[i - 1].est_norm_sq));
    }
    v.Check(restored, std::string("rollback restores checkpoint ") +
                          (restored ? "yes" : "no"));
    v.Check(jump > kRollbackJumpFactor * step,
            "est jump " + Fmt(jump) + " vs largest MC step " + Fmt(step));

    bool frozen = true;
    for (std::size_t i = mc_end; i < rb_end; ++i) {
      frozen = frozen && rows[i].mode == srsm::Mode::kRB &&
               rows[i].u == rows[mc_end - 1].u &&
               rows[i].xhat == rows[mc_end].xhat;
    }
    v.Check(frozen, std::string("u and xhat frozen in RB ") + (frozen ? "yes" : "no"));
  }
  {
    Rng rng(33);
    const srsm::CycleResult r = srsm::RunCycle(quiet, sp.state(), sp.state(), sp, rng);
    const bool exact = r.trace.status == srsm::CycleStatus::kOk &&
                       r.trace.duration_steps == kMinCycleSteps &&
                       std::abs(r.trace.duration - kMinCycleSeconds) <= 1e-12;
    v.Check(exact, "equilibrium cycle " + std::to_string(r.trace.duration_steps) +
                       " steps, " + Fmt(r.trace.duration) + " s");
  }
  return v;
}

Verdict BaselineMission(const harness::EpisodeResult& noisy, double noisy_seconds) {
  Verdict v;
  harness::RunConfig cfg = DefaultConfig();
  cfg.noise.position = 0.0;
  cfg.noise.angle = 0.0;
  const auto start = Clock::now();
  const harness::EpisodeResult quiet = harness::RunEpisode(cfg);
  const double quiet_seconds = Seconds(start);

  auto in_band = [](const harness::EpisodeResult& r) {
    return r.success && r.mission_time >= kBaselineTimeLo &&
           r.mission_time <= kBaselineTimeHi;
  };
  v.Check(in_band(noisy), "default noise " + Fmt(noisy.mission_time) + " s (" +
                              std::string(harness::ToString(noisy.outcome)) + ")");
  v.Check(in_band(quiet), "zero noise " + Fmt(quiet.mission_time) + " s (" +
                              std::string(harness::ToString(quiet.outcome)) + ")");
  std::int64_t shortest = noisy.records.empty() ? 0 : noisy.records[0].duration_steps;
  for (const harness::CycleRecord& rec : noisy.records) {
    shortest = std::min(shortest, rec.duration_steps);
  }
  v.Check(shortest >= kMinCycleSteps,
          "shortest cycle " + std::to_string(shortest) + " steps");
  const double slowest = std::max(noisy_seconds, quiet_seconds);
  v.Check(slowest < kEpisodeSeconds, "runtime " + Fmt(slowest) + " s per episode");
  return v;
}

Verdict GovernorOrdering(const harness::EpisodeResult& baseline) {
  Verdict v;
  harness::RunConfig cfg = DefaultConfig();
  const srsm::LoopSetup setup = harness::BuildLoop(cfg);
  const double cons = governor::ConservativeAlpha(setup.metric);
  v.Check(std::abs(cons - kConservativeAlpha) <= kConservativeAlphaTol,
          "conservative alpha " + Fmt(cons));

  double lo = 1.0;
  double hi = 0.0;
  for (const harness::CycleRecord& rec : baseline.records) {
    lo = std::min(lo, rec.alpha);
    hi = std::max(hi, rec.alpha);
  }
  v.Check(!baseline.records.empty() && lo >= kBaselineAlphaLo &&
              hi <= kBaselineAlphaHi,
          "baseline alpha in [" + Fmt(lo) + ", " + Fmt(hi) + "] over " +
              std::to_string(baseline.records.size()) + " updates");

  cfg.policy = governor::PolicyKind::kConservative;
  const harness::EpisodeResult conservative = harness::RunEpisode(cfg);
  v.Check(conservative.success && conservative.mission_time >= baseline.mission_time,
          "conservative " + Fmt(conservative.mission_time) + " s vs baseline " +
              Fmt(baseline.mission_time) + " s");
  return v;
}

struct Trained {
  harness::TrainResult train;
  double train_seconds = 0.0;
  harness::EvalSummary eval;
  harness::EpisodeStats rl;
  harness::EpisodeStats baseline;
};

Trained TrainAndEvaluate(const fs::path& work) {
  harness::RunConfig cfg = DefaultConfig();
  cfg.sac.total_steps = kTrainSteps;
  Trained t;
  const auto start = Clock::now();
  t.train = harness::Train(cfg, [](const harness::TrainLogRow& row) {
    if (row.episode % 20 == 0) {
      std::cerr << "train episode " << row.episode << " steps " << row.steps
                << " return " << row.episode_return << " time "
                << row.mission_time << "\n";
    }
  });
  t.train_seconds = Seconds(start);
  sac::SaveModel(*t.train.agent, cfg.alpha_max, (work / "model.srgov").string());
  harness::WriteTrainLog(t.train.log, (work / "train_log.csv").string());
  t.eval = harness::Evaluate(cfg, t.train.agent, cfg.alpha_max, kEvalEpisodes,
                             kEvalSeed0);
  t.rl = harness::Summarize(t.eval.rl, cfg.rho_m);
  t.baseline = harness::Summarize(t.eval.baseline, cfg.rho_m);
  harness::WriteEvalSummary(cfg, t.eval, (work / "model.srgov").string(),
                            (work / "eval_summary.json").string());
  return t;
}

bool AnyUnstable(const std::vector<harness::EpisodeResult>& episodes) {
  return std::any_of(episodes.begin(), episodes.end(), [](const auto& e) {
    return e.outcome == harness::Outcome::kUnstable;
  });
}

Verdict SafetyAudit(const Trained& t) {
  Verdict v;
  const double rho_m = DefaultConfig().rho_m;
  for (const auto& [label, stats, episodes] :
       {std::tuple{"baseline", &t.baseline, &t.eval.baseline},
        std::tuple{"rl", &t.rl, &t.eval.rl}}) {
    v.Check(stats->mc_violations == 0 && stats->max_mc_peak_est <= rho_m,
            std::string(label) + " MC violations " +
                std::to_string(stats->mc_violations) + " (peak est " +
                Fmt(stats->max_mc_peak_est) + ")");
    v.Check(stats->max_true <= kTrueBound && !AnyUnstable(*episodes),
            std::string(label) + " max true " + Fmt(stats->max_true));
  }
  return v;
}

Verdict Improvement(const Trained& t) {
  Verdict v;
  const double reduction = 1.0 - t.rl.mean_mission_time / t.baseline.mean_mission_time;
  v.Check(t.rl.mean_mission_time <= t.baseline.mean_mission_time,
          "rl " + Fmt(t.rl.mean_mission_time) + " s vs baseline " +
              Fmt(t.baseline.mean_mission_time) + " s");
  v.Check(reduction >= kMinReduction, "reduction " + Fmt(100.0 * reduction) + "%");
  v.Check(t.rl.success_rate == 1.0, "rl success " + Fmt(100.0 * t.rl.success_rate) + "%");
  v.Check(t.train.env_steps >= kTrainSteps,
          "trained " + std::to_string(t.train.env_steps) + " env steps");
  v.Check(t.train_seconds < kTrainHours * 3600.0,
          "training " + Fmt(t.train_seconds / 60.0) + " min");
  return v;
}

Verdict PeakPushing(const Trained& t, bool safety_pass) {
  Verdict v;
  v.Check(t.rl.mean_mc_peak_est > t.baseline.mean_mc_peak_est,
          "mean MC peak est rl " + Fmt(t.rl.mean_mc_peak_est) + " vs baseline " +
              Fmt(t.baseline.mean_mc_peak_est));
  v.Check(safety_pass, std::string("safety audit ") + (safety_pass ? "holds" : "fails"));
  return v;
}

Verdict SacSanity(const Trained* t) {
  Verdict v;
  const sac::SacConfig cfg;  // library defaults
  const test::BanditResult b =
      test::RunBandit(cfg, kBanditSteps, kBanditTarget, kBanditBand, kBanditSeed);
  v.Check(std::abs(b.entropy - cfg.target_entropy) <= kBanditEntropyBand,
          "bandit entropy " + Fmt(b.entropy) + " vs target " + Fmt(cfg.target_entropy));
  v.Check(std::abs(b.alpha - kBanditTarget) <= kBanditBand,
          "bandit action " + Fmt(b.alpha) + " after " + std::to_string(b.steps) +
              " steps (first in band at " + std::to_string(b.first_hit) + ")");
  if (t == nullptr) {
    v.Check(false, "decile check needs the training run");
    return v;
  }
  const auto& log = t->train.log;
  const std::size_t decile = std::max<std::size_t>(1, log.size() / 10);
  auto mean_return = [&](std::size_t begin) {
    double sum = 0.0;
    for (std::size_t i = begin; i < begin + decile; ++i) sum += log[i].episode_return;
    return sum / static_cast<double>(decile);
  };
  const bool enough = log.size() >= 2 * decile;
  const double first = enough ? mean_return(0) : 0.0;
  const double last = enough ? mean_return(log.size() - decile) : 0.0;
  v.Check(enough && last > first, "training return first decile " + Fmt(first) +
                                      ", last decile " + Fmt(last));
  return v;
}

harness::RunConfig ShortTrainingConfig() {
  harness::RunConfig cfg = DefaultConfig();
  cfg.seed = 3;
  cfg.sac.total_steps = 300;
  cfg.sac.warmup = 100;
  cfg.sac.batch = 32;
  cfg.sac.hidden = 32;
  return cfg;
}

Verdict Reproducibility(const fs::path& work) {
  Verdict v;
  const harness::RunConfig train_cfg = ShortTrainingConfig();
  std::shared_ptr<const sac::Agent> agent;
  for (int run = 0; run < 2; ++run) {
    const harness::TrainResult r = harness::Train(train_cfg);
    const std::string tag = std::to_string(run);
    sac::SaveModel(*r.agent, train_cfg.alpha_max,
                   (work / ("repro_model_" + tag + ".srgov")).string());
    harness::WriteTrainLog(r.log, (work / ("repro_log_" + tag + ".csv")).string());
    agent = r.agent;
  }
  auto same = [&](const std::string& a, const std::string& b) {
    const std::string x = ReadBytes(work / a);
    return !x.empty() && x == ReadBytes(work / b);
  };
  const bool model = same("repro_model_0.srgov", "repro_model_1.srgov");
  const bool log = same("repro_log_0.csv", "repro_log_1.csv");
  v.Check(model, std::string("model files ") + (model ? "identical" : "differ"));
  v.Check(log, std::string("training logs ") + (log ? "identical" : "differ"));

  for (const auto policy : {governor::PolicyKind::kBaseline, governor::PolicyKind::kLearned}) {
    harness::RunConfig cfg = DefaultConfig();
    cfg.seed = kTraceSeed;
    cfg.policy = policy;
    const std::string name = harness::ToString(policy);
    for (int run = 0; run < 2; ++run) {
      const harness::EpisodeResult r = harness::RunEpisode(
          cfg, policy == governor::PolicyKind::kLearned ? agent : nullptr, true);
      harness::WriteTraceCsv(
          r.traces, (work / ("trace_" + name + "_" + std::to_string(run) + ".csv")).string());
    }
    const bool trace = same("trace_" + name + "_0.csv", "trace_" + name + "_1.csv");
    v.Check(trace, name + " traces " + (trace ? "identical" : "differ"));
  }
  return v;
}

std::set<int> ParseCriteria(const std::string& text) {
  std::set<int> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int id = std::stoi(item);
    if (id < 1 || id > 10) throw std::out_of_range("criterion " + item);
    ids.insert(id);
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
  CLI::App app{"srgov acceptance checks"};
  std::string criteria = "1,2,3,4,5,6,7,8,9,10";
  std::string work_dir =
      (fs::temp_directory_path() / "srgov_acceptance").string();
  app.add_option("--criteria", criteria, "comma separated criterion ids");
  app.add_option("--work-dir", work_dir, "directory for models, logs and traces");
  CLI11_PARSE(app, argc, argv);

  std::set<int> ids;
  try {
    ids = ParseCriteria(criteria);
  } catch (const std::exception& e) {
    std::cerr << "bad --criteria: " << e.what() << "\n";
    return 2;
  }
  const fs::path work(work_dir);
  fs::create_directories(work);

  bool all = true;
  auto run = [&](int id, const std::string& name, const std::function<Verdict()>& fn) {
    if (!ids.count(id)) return;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.Check(false, std::string("threw: ") + e.what());
    }
    all = all && v.pass;
    Print(id, name, v);
  };

  run(1, "numerics", Numerics);
  run(2, "stability certificates", Certificates);
  run(3, "observer and rollback mechanics", Mechanics);

  std::optional<harness::EpisodeResult> baseline;
  double baseline_seconds = 0.0;
  if (ids.count(4) || ids.count(5)) {
    const auto start = Clock::now();
    baseline = harness::RunEpisode(DefaultConfig());
    baseline_seconds = Seconds(start);
  }
  run(4, "baseline mission", [&] { return BaselineMission(*baseline, baseline_seconds); });
  run(5, "governor ordering", [&] { return GovernorOrdering(*baseline); });

  std::optional<Trained> trained;
  std::string train_error;
  if (ids.count(6) || ids.count(7) || ids.count(8) || ids.count(9)) {
    try {
      trained = TrainAndEvaluate(work);
    } catch (const std::exception& e) {
      train_error = e.what();
    }
  }
  auto needs_training = [&](const std::function<Verdict(const Trained&)>& fn) {
    return [&, fn] {
      if (!trained) {
        Verdict v;
        v.Check(false, "training failed: " + train_error);
        return v;
      }
      return fn(*trained);
    };
  };
  bool safety = false;
  run(6, "safety audit", needs_training([&](const Trained& t) {
        const Verdict v = SafetyAudit(t);
        safety = v.pass;
        return v;
      }));
  run(7, "rl improvement", needs_training(Improvement));
  run(8, "peak pushing", needs_training([&](const Trained& t) {
        return PeakPushing(t, ids.count(6) ? safety : SafetyAudit(t).pass);
      }));
  run(9, "sac sanity", [&] { return SacSanity(trained ? &*trained : nullptr); });
  run(10, "reproducibility", [&] { return Reproducibility(work); });

  return all ? 0 : 1;
}
