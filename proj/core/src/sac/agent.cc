#include "srgov/sac/agent.h"

#include <cmath>
#include <numbers>

#include "srgov/error.h"

namespace srgov {
namespace sac {

namespace {

std::vector<int> PolicySizes(int state_dim, int action_dim, int hidden) {
  return {state_dim, hidden, hidden, 2 * action_dim};
}

std::vector<int> CriticSizes(int state_dim, int action_dim, int hidden) {
  return {state_dim + action_dim, hidden, hidden, 1};
}

AdamConfig OptConfig(const SacConfig& config) {
  AdamConfig out;
  out.lr = config.lr;
  return out;
}

const double kHalfLogTwoPi = 0.5 * std::log(2.0 * std::numbers::pi);

}  // namespace

void SacConfig::Validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    Throw(ErrorCode::kInvalidArgument, "gamma must lie in (0, 1)");
  }
  if (!(tau > 0.0 && tau <= 1.0)) {
    Throw(ErrorCode::kInvalidArgument, "tau must lie in (0, 1]");
  }
  if (!(lr > 0.0) || batch <= 0 || warmup < 0 || updates_per_step < 0 ||
      total_steps <= 0 || buffer_capacity < batch || hidden <= 0 ||
      !(reward_scale > 0.0) || !std::isfinite(target_entropy) ||
      !std::isfinite(init_log_beta)) {
    Throw(ErrorCode::kInvalidArgument, "SAC configuration out of range");
  }
}

Agent::Agent(int state_dim, int action_dim, const SacConfig& config)
    : state_dim_(state_dim),
      action_dim_(action_dim),
      config_(config),
      policy_(PolicySizes(state_dim, action_dim, config.hidden)),
      q1_(CriticSizes(state_dim, action_dim, config.hidden)),
      q2_(CriticSizes(state_dim, action_dim, config.hidden)),
      q1_target_(q1_),
      q2_target_(q2_),
      log_beta_(Vec::Constant(1, config.init_log_beta)),
      policy_opt_(policy_.params().size(), OptConfig(config)),
      q1_opt_(q1_.params().size(), OptConfig(config)),
      q2_opt_(q2_.params().size(), OptConfig(config)),
      beta_opt_(1, OptConfig(config)) {
  config_.Validate();
}

Agent Agent::Create(int state_dim, int action_dim, const SacConfig& config,
                    Rng& init_rng) {
  Agent agent(state_dim, action_dim, config);
  agent.policy_ = Mlp::Random(agent.policy_.sizes(), init_rng);
  agent.q1_ = Mlp::Random(agent.q1_.sizes(), init_rng);
  agent.q2_ = Mlp::Random(agent.q2_.sizes(), init_rng);
  agent.q1_target_ = agent.q1_;
  agent.q2_target_ = agent.q2_;
  return agent;
}

double Agent::beta() const { return std::exp(log_beta_(0)); }

Mat Agent::StackInput(const Mat& s, const Mat& a) const {
  Mat sa(state_dim_ + action_dim_, s.cols());
  sa.topRows(state_dim_) = s;
  sa.bottomRows(action_dim_) = a;
  return sa;
}

PolicySample Agent::PolicyFromNoise(const Mat& s, const Mat& eps) const {
  const Mat out = policy_.Forward(s);
  PolicySample sample;
  sample.mean = out.topRows(action_dim_);
  sample.log_std =
      out.bottomRows(action_dim_).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  const Mat z = sample.mean + (sample.log_std.array().exp() * eps.array()).matrix();
  sample.action = z.array().tanh().matrix();
  const Eigen::ArrayXXd per_dim =
      -0.5 * eps.array().square() - sample.log_std.array() - kHalfLogTwoPi -
      (1.0 - sample.action.array().square() + kSquashEps).log();
  sample.log_prob = per_dim.colwise().sum().matrix();
  return sample;
}

PolicySample Agent::SamplePolicy(const Mat& s, Rng& rng) const {
  Mat eps(action_dim_, s.cols());
  for (Eigen::Index j = 0; j < eps.cols(); ++j) {
    for (Eigen::Index i = 0; i < eps.rows(); ++i) eps(i, j) = rng.Normal();
  }
  return PolicyFromNoise(s, eps);
}

Vec Agent::Act(const Vec& s, bool deterministic, Rng& rng) const {
  if (s.size() != state_dim_) {
    Throw(ErrorCode::kInvalidArgument, "state has the wrong dimension");
  }
  if (deterministic) {
    const Mat out = policy_.Forward(s);
    return out.topRows(action_dim_).col(0).array().tanh().matrix();
  }
  return SamplePolicy(s, rng).action.col(0);
}

Eigen::RowVectorXd Agent::BellmanTarget(const Batch& batch, Rng& rng) const {
  const PolicySample next = SamplePolicy(batch.s_next, rng);
  const Mat sa = StackInput(batch.s_next, next.action);
  const Eigen::RowVectorXd q_next =
      q1_target_.Forward(sa).row(0).cwiseMin(q2_target_.Forward(sa).row(0));
  const Eigen::RowVectorXd soft = q_next - beta() * next.log_prob;
  return config_.reward_scale * batch.r +
         config_.gamma *
             (Eigen::RowVectorXd::Ones(batch.done.size()) - batch.done)
                 .cwiseProduct(soft);
}

double Agent::CriticUpdate(const Batch& batch, Rng& rng) {
  const Eigen::RowVectorXd y = BellmanTarget(batch, rng);
  const Mat sa = StackInput(batch.s, batch.a);
  const double n = static_cast<double>(sa.cols());
  double loss_sum = 0.0;
  for (auto [net, opt] : {std::pair<Mlp*, Adam*>{&q1_, &q1_opt_},
                          std::pair<Mlp*, Adam*>{&q2_, &q2_opt_}}) {
    Mlp::Cache cache;
    const Eigen::RowVectorXd err = net->Forward(sa, &cache).row(0) - y;
    loss_sum += err.squaredNorm() / n;
    const Mlp::Gradients grads = net->Backward(cache, (2.0 / n) * err);
    opt->Step(net->params(), grads.params);
  }
  const double tau = config_.tau;
  q1_target_.params() = tau * q1_.params() + (1.0 - tau) * q1_target_.params();
  q2_target_.params() = tau * q2_.params() + (1.0 - tau) * q2_target_.params();
  return 0.5 * loss_sum;
}

ActorLoss Agent::ActorObjective(const Mat& s, const Mat& eps,
                                bool with_grad) const {
  Mlp::Cache policy_cache;
  const Mat out = policy_.Forward(s, &policy_cache);
  const double n = static_cast<double>(s.cols());
  const double b = beta();

  const Mat mean = out.topRows(action_dim_);
  const Mat raw_log_std = out.bottomRows(action_dim_);
  const Eigen::ArrayXXd log_std =
      raw_log_std.array().cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  const Eigen::ArrayXXd std_dev = log_std.exp();
  const Eigen::ArrayXXd z = mean.array() + std_dev * eps.array();
  const Eigen::ArrayXXd a = z.tanh();
  const Eigen::ArrayXXd one_minus_a2 = 1.0 - a.square();
  const Eigen::RowVectorXd log_prob =
      (-0.5 * eps.array().square() - log_std - kHalfLogTwoPi -
       (one_minus_a2 + kSquashEps).log())
          .colwise()
          .sum()
          .matrix();

  const Mat sa = StackInput(s, a.matrix());
  Mlp::Cache c1;
  Mlp::Cache c2;
  const Eigen::RowVectorXd q1 = q1_.Forward(sa, &c1).row(0);
  const Eigen::RowVectorXd q2 = q2_.Forward(sa, &c2).row(0);
  const Eigen::RowVectorXd q_min = q1.cwiseMin(q2);

  ActorLoss result;
  result.loss = (b * log_prob - q_min).sum() / n;
  result.entropy = -log_prob.sum() / n;
  if (!with_grad) return result;

  // Loss gradient flows into the smaller critic only.
  Mat d_q1 = Mat::Zero(1, sa.cols());
  Mat d_q2 = Mat::Zero(1, sa.cols());
  for (Eigen::Index j = 0; j < sa.cols(); ++j) {
    if (q1(j) <= q2(j)) {
      d_q1(0, j) = -1.0 / n;
    } else {
      d_q2(0, j) = -1.0 / n;
    }
  }
  const Eigen::ArrayXXd d_a =
      (q1_.Backward(c1, d_q1, false).input.bottomRows(action_dim_) +
       q2_.Backward(c2, d_q2, false).input.bottomRows(action_dim_))
          .array();
  const double d_log_prob = b / n;
  const Eigen::ArrayXXd d_z =
      d_a * one_minus_a2 +
      d_log_prob * 2.0 * a * one_minus_a2 / (one_minus_a2 + kSquashEps);
  const Eigen::ArrayXXd inside = (raw_log_std.array() > kLogStdMin &&
                                  raw_log_std.array() < kLogStdMax)
                                     .cast<double>();
  Mat d_out(2 * action_dim_, s.cols());
  d_out.topRows(action_dim_) = d_z.matrix();
  d_out.bottomRows(action_dim_) =
      ((d_z * std_dev * eps.array() - d_log_prob) * inside).matrix();
  result.grad = policy_.Backward(policy_cache, d_out).params;
  return result;
}

ActorLoss Agent::PolicyUpdate(const Batch& batch, Rng& rng) {
  Mat eps(action_dim_, batch.s.cols());
  for (Eigen::Index j = 0; j < eps.cols(); ++j) {
    for (Eigen::Index i = 0; i < eps.rows(); ++i) eps(i, j) = rng.Normal();
  }
  ActorLoss result = ActorObjective(batch.s, eps, true);
  policy_opt_.Step(policy_.params(), result.grad);

  // d/d(log beta) of E[-beta (log pi + target_entropy)], with the entropy
  // measured before the policy step.
  const double mean_log_prob = -result.entropy;
  Vec grad(1);
  grad(0) = -beta() * (mean_log_prob + config_.target_entropy);
  beta_opt_.Step(log_beta_, grad);
  return result;
}

UpdateStats Agent::Update(const Batch& batch, Rng& rng) {
  UpdateStats stats;
  stats.critic_loss = CriticUpdate(batch, rng);
  const ActorLoss actor = PolicyUpdate(batch, rng);
  stats.policy_loss = actor.loss;
  stats.entropy = actor.entropy;
  stats.beta = beta();
  return stats;
}

}  // namespace sac
}  // namespace srgov
