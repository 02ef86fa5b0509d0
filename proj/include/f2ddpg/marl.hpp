#pragma once

// Centralized-critic actor-critic learners with friend-or-foe biased joint
// actions.
//
// Every agent i owns an actor mu_i(o_i) and a critic Q_i(o, a) over the
// joint observation and joint action. Before the critic sees the other
// agents' actions, each other agent's action block a_k is nudged one
// normalized gradient step of Q_i:
//
//   a_k <- a_k + s_k * delta_k * |a_k| * g_k / |g_k|,   g_k = dQ_i / da_k
//
// where (s_k, delta_k) is (+1, ally_step) for allies and (-1, enemy_step)
// for enemies under F2DDPG. The other variants only change that sign rule.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "f2ddpg/nn.hpp"
#include "f2ddpg/particle_env.hpp"
#include "f2ddpg/replay_buffer.hpp"
#include "f2ddpg/rng.hpp"

namespace f2ddpg::marl {

using nn::Matrix;
using nn::Vector;

enum class BiasVariant { kMaddpg, kM3ddpg, kAllPlus, kRandomSign, kF2ddpg };

std::string VariantName(BiasVariant variant);
// Accepts the names produced by VariantName. Throws ConfigError otherwise.
BiasVariant ParseVariant(const std::string& name);

struct BiasConfig {
  double ally_step = 1e-5;
  double enemy_step = 1e-3;

  void Validate() const;
};

// Partition of the other agents into allies A(i) and enemies E(i).
class TeamSpec {
 public:
  // Throws ConfigError unless A(i), E(i) partition the others and the ally
  // relation is symmetric.
  TeamSpec(std::vector<std::vector<int>> allies,
           std::vector<std::vector<int>> enemies);

  // Agents sharing a team label are allies, everyone else an enemy.
  static TeamSpec FromTeams(std::span<const int> team_of);
  static TeamSpec AllAllies(int num_agents);
  static TeamSpec AllEnemies(int num_agents);

  int num_agents() const { return static_cast<int>(allies_.size()); }
  const std::vector<int>& allies(int agent) const { return allies_.at(agent); }
  const std::vector<int>& enemies(int agent) const { return enemies_.at(agent); }
  bool IsAlly(int agent, int other) const;

 private:
  std::vector<std::vector<int>> allies_;
  std::vector<std::vector<int>> enemies_;
  std::vector<std::vector<char>> ally_matrix_;
};

// Critic input layout: all observations in agent order, then all actions
// in agent order. Shared by every critic in an experiment.
class JointLayout {
 public:
  JointLayout(std::vector<int> observation_dims, std::vector<int> action_dims);

  int num_agents() const { return static_cast<int>(observation_dims_.size()); }
  int observation_dim(int agent) const { return observation_dims_.at(agent); }
  int action_dim(int agent) const { return action_dims_.at(agent); }
  int observation_offset(int agent) const { return obs_offsets_.at(agent); }
  int action_offset(int agent) const { return action_offsets_.at(agent); }
  int total_observation() const { return total_obs_; }
  int total_action() const { return total_action_; }
  int critic_input_dim() const { return total_obs_ + total_action_; }
  const std::vector<int>& observation_dims() const { return observation_dims_; }
  const std::vector<int>& action_dims() const { return action_dims_; }

 private:
  std::vector<int> observation_dims_;
  std::vector<int> action_dims_;
  std::vector<int> obs_offsets_;
  std::vector<int> action_offsets_;
  int total_obs_ = 0;
  int total_action_ = 0;
};

// Stacks per-agent blocks (each dim x B) in agent order. Throws
// ContractError when counts or heights disagree with `dims`.
Matrix StackBlocks(std::span<const Matrix> blocks, std::span<const int> dims);

Matrix CriticInput(const JointLayout& layout, std::span<const Matrix> observations,
                   std::span<const Matrix> actions);
Vector CriticInput(const JointLayout& layout,
                   std::span<const std::vector<double>> observations,
                   std::span<const std::vector<double>> actions);

// Running sums of cos(a_k, g_k) over ally blocks seen by BiasJointActions.
struct BiasDiagnostics {
  double ally_cosine_sum = 0.0;
  std::int64_t ally_cosine_count = 0;
  std::int64_t ally_cosine_undefined = 0;

  std::optional<double> mean() const;
};

struct BiasRequest {
  const nn::MlpParams* critic = nullptr;
  const JointLayout* layout = nullptr;
  const TeamSpec* team = nullptr;
  BiasVariant variant = BiasVariant::kF2ddpg;
  BiasConfig steps;
};

// Returns the joint actions (total_action x B) with every block except
// `agent`'s moved one normalized step along dQ_agent/da_k. Blocks with a
// zero action or zero gradient are left as they are. RandomSign draws one
// sign per (sample, other agent) from `rng`. When `diagnostics` is set the
// gradient is computed even for MADDPG so ally cosines can be recorded.
// Throws NumericError naming the agent whose gradient block is non-finite.
Matrix BiasJointActions(const BiasRequest& request, const Matrix& joint_observations,
                        const Matrix& joint_actions, int agent, Rng& rng,
                        BiasDiagnostics* diagnostics = nullptr,
                        Matrix* gradient = nullptr);

struct NetworkShape {
  std::vector<int> actor_hidden{64, 64};
  std::vector<int> critic_hidden{64, 64};
};

struct AgentLearner {
  nn::MlpParams actor;
  nn::MlpParams critic;
  nn::MlpParams target_actor;
  nn::MlpParams target_critic;
  nn::AdamState actor_optimizer;
  nn::AdamState critic_optimizer;
  double noise_scale = 0.0;

  int observation_dim() const { return actor.input_dim(); }
  int action_dim() const { return actor.output_dim(); }

  // Targets start as exact copies of the online networks.
  static AgentLearner Create(int observation_dim, int action_dim,
                             int critic_input_dim, const NetworkShape& shape,
                             const nn::AdamOptions& adam, Rng& rng);

  bool operator==(const AgentLearner&) const = default;
};

// tanh(mu(o) + noise_scale * N(0, I)) when exploring, tanh(mu(o)) otherwise.
std::vector<double> SelectAction(const AgentLearner& learner,
                                 std::span<const double> observation,
                                 Rng& noise_rng, bool explore);

struct TrainConfig {
  double gamma = 0.95;
  double tau = 0.01;
  double actor_lr = 1e-2;
  double critic_lr = 1e-2;
  int batch_size = 1024;
  std::int64_t episodes = 120000;
  std::int64_t buffer_capacity = 1000000;
  double noise_initial = 0.3;
  double noise_final = 0.05;
  double noise_decay_fraction = 0.5;
  NetworkShape network;
  nn::AdamOptions adam;
  std::uint64_t seed = 1;
  bool similarity_diagnostics = true;

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

// Exploration scale for a 0-based episode: geometric decay from
// noise_initial to noise_final over the first decay fraction of training.
double NoiseScale(const TrainConfig& config, std::int64_t episode);

// y_b = r_i + gamma * Q'_i(o', a'_i, biased a'_{-i}) with a'_k = tanh(mu'_k(o'_k))
// and the bias computed with agent i's target critic.
Vector CriticTarget(const replay::Minibatch& batch, int agent,
                    std::span<const AgentLearner> learners,
                    const JointLayout& layout, const TeamSpec& team,
                    BiasVariant variant, const BiasConfig& steps, double gamma,
                    Rng& rng);

// Mean-squared error of Q_i on the stored joint actions against `targets`,
// followed by one Adam step. Returns the loss before the step.
double CriticUpdate(const replay::Minibatch& batch, int agent,
                    AgentLearner& learner, const Vector& targets,
                    const JointLayout& layout, double learning_rate);

struct ActorUpdateResult {
  double policy_gradient_norm = 0.0;
  double mean_q = 0.0;
};

// Ascends mean_b Q_i(o, tanh(mu_i(o_i)), biased stored a_{-i}) in theta_i.
// Biases come from the online critic evaluated at the stored joint action.
ActorUpdateResult ActorUpdate(const replay::Minibatch& batch, int agent,
                              AgentLearner& learner, const JointLayout& layout,
                              const TeamSpec& team, BiasVariant variant,
                              const BiasConfig& steps, double learning_rate,
                              Rng& rng, BiasDiagnostics* diagnostics = nullptr);

struct UpdateRecord {
  std::int64_t update = 0;  // global per-agent update counter
  std::int64_t step = 0;    // 0-based environment step that triggered it
  std::int64_t episode = 0;
  int agent = 0;
  BiasVariant variant = BiasVariant::kMaddpg;
  double critic_loss = 0.0;
  double policy_gradient_norm = 0.0;
  std::optional<double> ally_cosine;
  std::int64_t ally_cosine_samples = 0;
};

struct EpisodeSummary {
  std::int64_t episode = 0;
  std::vector<double> returns;
  std::vector<double> mean_critic_loss;
  std::vector<double> mean_policy_gradient_norm;
  std::int64_t updates = 0;
  std::optional<double> mean_ally_cosine;
  env::CaptureCount captures;
  double noise_scale = 0.0;
};

using UpdateSink = std::function<void(const UpdateRecord&)>;
using StepObserver =
    std::function<void(const env::WorldState&, std::span<const env::EnvAction>,
                       std::span<const double>)>;

// Complete training state except the replay buffer.
struct TrainerState {
  std::vector<AgentLearner> learners;
  std::int64_t episode = 0;
  std::int64_t global_step = 0;
  std::int64_t updates = 0;
  Rng env_rng;
  Rng noise_rng;
  Rng sample_rng;
  Rng bias_rng;

  bool operator==(const TrainerState&) const = default;
};

class Trainer {
 public:
  // `variants` holds one entry per agent.
  Trainer(env::Scenario scenario, TeamSpec team,
          std::vector<BiasVariant> variants, BiasConfig steps,
          TrainConfig config);

  // One episode: act with exploration noise, step, store, update every
  // agent once the buffer holds a full minibatch, then soft-update targets.
  EpisodeSummary TrainEpisode();

  // Runs episodes until `episode()` reaches config().episodes, invoking
  // `on_episode` after each one.
  void Run(const std::function<void(const EpisodeSummary&)>& on_episode = {});

  void set_update_sink(UpdateSink sink) { update_sink_ = std::move(sink); }
  void set_step_observer(StepObserver observer) { step_observer_ = std::move(observer); }

  const env::Scenario& scenario() const { return scenario_; }
  const TeamSpec& team() const { return team_; }
  const JointLayout& layout() const { return layout_; }
  const std::vector<BiasVariant>& variants() const { return variants_; }
  const BiasConfig& steps() const { return steps_; }
  const TrainConfig& config() const { return config_; }
  const std::vector<AgentLearner>& learners() const { return state_.learners; }
  std::vector<AgentLearner>& mutable_learners() { return state_.learners; }
  const replay::ReplayBuffer& buffer() const { return buffer_; }
  std::int64_t episode() const { return state_.episode; }
  std::int64_t global_step() const { return state_.global_step; }

  const TrainerState& state() const { return state_; }
  // Replaces all learner parameters, counters and random streams. The
  // replay buffer is emptied. Throws ShapeError on mismatched learners.
  void Restore(TrainerState state);

 private:
  env::Scenario scenario_;
  TeamSpec team_;
  std::vector<BiasVariant> variants_;
  BiasConfig steps_;
  TrainConfig config_;
  JointLayout layout_;
  replay::ReplayBuffer buffer_;
  TrainerState state_;
  UpdateSink update_sink_;
  StepObserver step_observer_;
};

// Layout of the scenario's observation and action vectors.
JointLayout LayoutFor(const env::Scenario& scenario);

}  // namespace f2ddpg::marl
