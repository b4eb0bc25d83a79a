#pragma once

// Soft actor-critic with a tanh-squashed Gaussian policy, twin critics with
// polyak-averaged targets and an automatically tuned entropy temperature
// beta (held as log beta).

#include <cstdint>

#include "srgov/random.h"
#include "srgov/sac/adam.h"
#include "srgov/sac/mlp.h"
#include "srgov/sac/replay_buffer.h"

namespace srgov {
namespace sac {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEps = 1e-6;

struct SacConfig {
  double gamma = 0.99;
  double lr = 3e-4;
  int batch = 256;
  int warmup = 1000;            // uniformly random env steps before updates
  int updates_per_step = 1;
  double target_entropy = -1.0;    // -action_dim
  std::int64_t total_steps = 20000;
  std::int64_t buffer_capacity = 100000;
  double tau = 0.005;
  int hidden = 256;
  double init_log_beta = -6.9;  // beta starts near 1e-3
  double reward_scale = 1.0;    // multiplies r inside the Bellman target
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on values outside their domains (0 < gamma < 1,
  /// 0 < tau <= 1, positive sizes and rates).
  void Validate() const;
};

/// Batch of reparameterized policy draws, one column per state.
struct PolicySample {
  Mat action;              // tanh(z), in (-1, 1)
  Eigen::RowVectorXd log_prob;
  Mat mean;
  Mat log_std;             // after clamping
};

struct ActorLoss {
  double loss = 0.0;
  double entropy = 0.0;    // -mean log_prob
  Vec grad;                // w.r.t. policy params, empty unless requested
};

struct UpdateStats {
  double critic_loss = 0.0;
  double policy_loss = 0.0;
  double beta = 0.0;
  double entropy = 0.0;
};

class Agent {
 public:
  /// Zero-parameter agent of the right shape; used when loading a model.
  Agent(int state_dim, int action_dim, const SacConfig& config);

  /// Randomly initialized agent; targets start as copies of the critics.
  static Agent Create(int state_dim, int action_dim, const SacConfig& config,
                      Rng& init_rng);

  /// Draws z = mean + std * eps with the given standard normal eps
  /// (action_dim x B) and returns the squashed action and its log-density.
  PolicySample PolicyFromNoise(const Mat& s, const Mat& eps) const;
  PolicySample SamplePolicy(const Mat& s, Rng& rng) const;

  /// Raw action for one state: tanh(mean) when deterministic, otherwise a
  /// policy draw.
  Vec Act(const Vec& s, bool deterministic, Rng& rng) const;

  /// r_scaled + gamma (1 - done) (min target Q(s', a') - beta log pi(a'|s'))
  /// with a' drawn from the current policy.
  Eigen::RowVectorXd BellmanTarget(const Batch& batch, Rng& rng) const;

  /// One Adam step for each critic toward the Bellman target, then the
  /// polyak update of the targets. Returns the mean of the two losses.
  double CriticUpdate(const Batch& batch, Rng& rng);

  /// E[beta log pi(a|s) - min Q(s, a)] for the given noise; the gradient is
  /// filled when `with_grad`.
  ActorLoss ActorObjective(const Mat& s, const Mat& eps, bool with_grad) const;

  /// One Adam step on the policy followed by one on log beta.
  ActorLoss PolicyUpdate(const Batch& batch, Rng& rng);

  /// CriticUpdate then PolicyUpdate.
  UpdateStats Update(const Batch& batch, Rng& rng);

  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  const SacConfig& config() const { return config_; }
  double beta() const;
  double log_beta() const { return log_beta_(0); }

  const Mlp& policy() const { return policy_; }
  const Mlp& q1() const { return q1_; }
  const Mlp& q2() const { return q2_; }
  const Mlp& q1_target() const { return q1_target_; }
  const Mlp& q2_target() const { return q2_target_; }
  Mlp& policy() { return policy_; }
  Mlp& q1() { return q1_; }
  Mlp& q2() { return q2_; }
  Mlp& q1_target() { return q1_target_; }
  Mlp& q2_target() { return q2_target_; }
  Vec& log_beta_vec() { return log_beta_; }

  Adam& policy_opt() { return policy_opt_; }
  Adam& q1_opt() { return q1_opt_; }
  Adam& q2_opt() { return q2_opt_; }
  Adam& beta_opt() { return beta_opt_; }
  const Adam& policy_opt() const { return policy_opt_; }
  const Adam& q1_opt() const { return q1_opt_; }
  const Adam& q2_opt() const { return q2_opt_; }
  const Adam& beta_opt() const { return beta_opt_; }

 private:
  Mat StackInput(const Mat& s, const Mat& a) const;

  int state_dim_;
  int action_dim_;
  SacConfig config_;
  Mlp policy_;
  Mlp q1_;
  Mlp q2_;
  Mlp q1_target_;
  Mlp q2_target_;
  Vec log_beta_;
  Adam policy_opt_;
  Adam q1_opt_;
  Adam q2_opt_;
  Adam beta_opt_;
};

}  // namespace sac
}  // namespace srgov
