#include "f2ddpg/marl.hpp"

#include <algorithm>
#include <cmath>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::marl {

namespace {

constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kSampleStream = 3;
constexpr std::uint64_t kBiasStream = 4;
constexpr std::uint64_t kInitStream = 5;

std::vector<int> WithEnds(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

Matrix SquashAll(const Matrix& raw) {
  return raw.unaryExpr([](double v) { return env::Squash(v); });
}

Matrix JoinRows(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

double GradientNorm(const nn::GradientBundle& grads) {
  double sum = 0.0;
  for (const auto& layer : grads.params) {
    sum += layer.weight.squaredNorm() + layer.bias.squaredNorm();
  }
  return std::sqrt(sum);
}

}  // namespace

std::string VariantName(BiasVariant variant) {
  switch (variant) {
    case BiasVariant::kMaddpg: return "maddpg";
    case BiasVariant::kM3ddpg: return "m3ddpg";
    case BiasVariant::kAllPlus: return "all_plus";
    case BiasVariant::kRandomSign: return "random_sign";
    case BiasVariant::kF2ddpg: return "f2ddpg";
  }
  return "unknown";
}

BiasVariant ParseVariant(const std::string& name) {
  for (auto v : {BiasVariant::kMaddpg, BiasVariant::kM3ddpg,
                 BiasVariant::kAllPlus, BiasVariant::kRandomSign,
                 BiasVariant::kF2ddpg}) {
    if (VariantName(v) == name) return v;
  }
  throw ConfigError("unknown variant '" + name + "'");
}

void BiasConfig::Validate() const {
  if (!(ally_step >= 0.0) || !std::isfinite(ally_step)) {
    throw ConfigError("ally_step must be a finite nonnegative number");
  }
  if (!(enemy_step >= 0.0) || !std::isfinite(enemy_step)) {
    throw ConfigError("enemy_step must be a finite nonnegative number");
  }
}

TeamSpec::TeamSpec(std::vector<std::vector<int>> allies,
                   std::vector<std::vector<int>> enemies)
    : allies_(std::move(allies)), enemies_(std::move(enemies)) {
  const int n = static_cast<int>(allies_.size());
  if (static_cast<int>(enemies_.size()) != n) {
    throw ConfigError("team spec needs ally and enemy sets for every agent");
  }
  ally_matrix_.assign(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    std::vector<int> seen(n, 0);
    for (int k : allies_[i]) {
      if (k < 0 || k >= n || k == i) {
        throw ConfigError("invalid ally index for agent " + std::to_string(i));
      }
      ++seen[k];
      ally_matrix_[i][k] = 1;
    }
    for (int k : enemies_[i]) {
      if (k < 0 || k >= n || k == i) {
        throw ConfigError("invalid enemy index for agent " + std::to_string(i));
      }
      ++seen[k];
    }
    for (int k = 0; k < n; ++k) {
      if (k != i && seen[k] != 1) {
        throw ConfigError("allies and enemies of agent " + std::to_string(i) +
                          " must partition the other agents");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (ally_matrix_[i][k] != ally_matrix_[k][i]) {
        throw ConfigError("ally relation must be symmetric");
      }
    }
  }
}

TeamSpec TeamSpec::FromTeams(std::span<const int> team_of) {
  const int n = static_cast<int>(team_of.size());
  std::vector<std::vector<int>> allies(n), enemies(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      (team_of[i] == team_of[k] ? allies[i] : enemies[i]).push_back(k);
    }
  }
  return TeamSpec(std::move(allies), std::move(enemies));
}

TeamSpec TeamSpec::AllAllies(int num_agents) {
  std::vector<int> teams(num_agents, 0);
  return FromTeams(teams);
}

TeamSpec TeamSpec::AllEnemies(int num_agents) {
  std::vector<int> teams(num_agents);
  for (int i = 0; i < num_agents; ++i) teams[i] = i;
  return FromTeams(teams);
}

bool TeamSpec::IsAlly(int agent, int other) const {
  return ally_matrix_.at(agent).at(other) != 0;
}

JointLayout::JointLayout(std::vector<int> observation_dims,
                         std::vector<int> action_dims)
    : observation_dims_(std::move(observation_dims)),
      action_dims_(std::move(action_dims)) {
  if (observation_dims_.size() != action_dims_.size()) {
    throw ContractError("joint layout needs one action dim per observation");
  }
  for (int d : observation_dims_) {
    obs_offsets_.push_back(total_obs_);
    total_obs_ += d;
  }
  for (int d : action_dims_) {
    action_offsets_.push_back(total_action_);
    total_action_ += d;
  }
}

Matrix StackBlocks(std::span<const Matrix> blocks, std::span<const int> dims) {
  if (blocks.size() != dims.size() || blocks.empty()) {
    throw ContractError("expected " + std::to_string(dims.size()) +
                        " per-agent blocks, got " +
                        std::to_string(blocks.size()));
  }
  int rows = 0;
  const Eigen::Index cols = blocks.front().cols();
  for (size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].rows() != dims[k] || blocks[k].cols() != cols) {
      throw ContractError("block for agent " + std::to_string(k) +
                          " does not match the joint layout");
    }
    rows += dims[k];
  }
  Matrix out(rows, cols);
  int offset = 0;
  for (size_t k = 0; k < blocks.size(); ++k) {
    out.middleRows(offset, dims[k]) = blocks[k];
    offset += dims[k];
  }
  return out;
}

Matrix CriticInput(const JointLayout& layout, std::span<const Matrix> observations,
                   std::span<const Matrix> actions) {
  return JoinRows(StackBlocks(observations, layout.observation_dims()),
                  StackBlocks(actions, layout.action_dims()));
}

Vector CriticInput(const JointLayout& layout,
                   std::span<const std::vector<double>> observations,
                   std::span<const std::vector<double>> actions) {
  std::vector<Matrix> obs, act;
  for (const auto& o : observations) {
    obs.push_back(Eigen::Map<const Vector>(o.data(), static_cast<Eigen::Index>(o.size())));
  }
  for (const auto& a : actions) {
    act.push_back(Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size())));
  }
  return CriticInput(layout, obs, act).col(0);
}

std::optional<double> BiasDiagnostics::mean() const {
  if (ally_cosine_count == 0) return std::nullopt;
  return ally_cosine_sum / static_cast<double>(ally_cosine_count);
}

Matrix BiasJointActions(const BiasRequest& request, const Matrix& joint_observations,
                        const Matrix& joint_actions, int agent, Rng& rng,
                        BiasDiagnostics* diagnostics, Matrix* gradient) {
  const JointLayout& layout = *request.layout;
  const TeamSpec& team = *request.team;
  const int n = layout.num_agents();
  if (agent < 0 || agent >= n || team.num_agents() != n) {
    throw ContractError("bias target agent out of range");
  }
  if (joint_observations.rows() != layout.total_observation() ||
      joint_actions.rows() != layout.total_action() ||
      joint_observations.cols() != joint_actions.cols()) {
    throw ContractError("joint observation/action shapes do not match layout");
  }
  if (request.critic->input_dim() != layout.critic_input_dim()) {
    throw ShapeError("critic input width does not match the joint layout");
  }

  const bool applies = request.variant != BiasVariant::kMaddpg;
  if (!applies && diagnostics == nullptr && gradient == nullptr) {
    return joint_actions;
  }

  const Eigen::Index batch = joint_actions.cols();
  nn::ForwardTrace trace;
  nn::Forward(*request.critic, JoinRows(joint_observations, joint_actions),
              &trace);
  const nn::GradientBundle grads =
      nn::Backward(*request.critic, trace, Matrix(Matrix::Ones(1, batch)),
                   {.parameter_gradients = false});
  const auto g = grads.input.bottomRows(layout.total_action());
  for (int k = 0; k < n; ++k) {
    if (!g.middleRows(layout.action_offset(k), layout.action_dim(k)).allFinite()) {
      throw NumericError("non-finite critic action gradient for agent", k);
    }
  }
  if (gradient != nullptr) *gradient = g;

  Matrix biased = joint_actions;
  std::bernoulli_distribution coin(0.5);
  const auto& steps = request.steps;
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int k = 0; k < n; ++k) {
      if (k == agent) continue;
      const int off = layout.action_offset(k);
      const int dim = layout.action_dim(k);
      const auto a_k = joint_actions.col(b).segment(off, dim);
      const auto g_k = g.col(b).segment(off, dim);
      const double a_norm = a_k.norm();
      const double g_norm = g_k.norm();
      const bool ally = team.IsAlly(agent, k);

      if (diagnostics != nullptr && ally) {
        if (a_norm > 0.0 && g_norm > 0.0) {
          diagnostics->ally_cosine_sum += a_k.dot(g_k) / (a_norm * g_norm);
          ++diagnostics->ally_cosine_count;
        } else {
          ++diagnostics->ally_cosine_undefined;
        }
      }

      double sign = 0.0;
      double step = 0.0;
      switch (request.variant) {
        case BiasVariant::kMaddpg:
          continue;
        case BiasVariant::kF2ddpg:
          sign = ally ? 1.0 : -1.0;
          step = ally ? steps.ally_step : steps.enemy_step;
          break;
        case BiasVariant::kM3ddpg:
          sign = -1.0;
          step = steps.enemy_step;
          break;
        case BiasVariant::kAllPlus:
          sign = 1.0;
          step = steps.ally_step;
          break;
        case BiasVariant::kRandomSign: {
          const bool plus = coin(rng);
          sign = plus ? 1.0 : -1.0;
          step = plus ? steps.ally_step : steps.enemy_step;
          break;
        }
      }
      if (a_norm == 0.0 || g_norm == 0.0) continue;
      const double scale = sign * step * a_norm / g_norm;
      biased.block(off, b, dim, 1) = a_k + scale * g_k;
    }
  }
  return biased;
}

AgentLearner AgentLearner::Create(int observation_dim, int action_dim,
                                  int critic_input_dim, const NetworkShape& shape,
                                  const nn::AdamOptions& adam, Rng& rng) {
  AgentLearner learner;
  learner.actor = nn::XavierUniformInit(
      WithEnds(observation_dim, shape.actor_hidden, action_dim), rng);
  learner.critic = nn::XavierUniformInit(
      WithEnds(critic_input_dim, shape.critic_hidden, 1), rng);
  learner.target_actor = learner.actor;
  learner.target_critic = learner.critic;
  learner.actor_optimizer = nn::AdamState::For(learner.actor, adam);
  learner.critic_optimizer = nn::AdamState::For(learner.critic, adam);
  return learner;
}

std::vector<double> SelectAction(const AgentLearner& learner,
                                 std::span<const double> observation,
                                 Rng& noise_rng, bool explore) {
  Vector obs = Eigen::Map<const Vector>(observation.data(),
                                        static_cast<Eigen::Index>(observation.size()));
  Vector raw = nn::Forward(learner.actor, obs);
  std::vector<double> action(raw.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index k = 0; k < raw.size(); ++k) {
    double v = raw[k];
    if (explore) v += learner.noise_scale * normal(noise_rng);
    action[k] = env::Squash(v);
  }
  return action;
}

void TrainConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(tau > 0.0 && tau <= 1.0, "tau must lie in (0, 1]");
  require(actor_lr > 0.0, "actor_lr must be positive");
  require(critic_lr > 0.0, "critic_lr must be positive");
  require(batch_size >= 1, "batch_size must be at least 1");
  require(episodes >= 0, "episodes must be nonnegative");
  require(buffer_capacity >= 1, "buffer_capacity must be positive");
  require(buffer_capacity >= batch_size,
          "buffer_capacity must be at least batch_size");
  require(noise_initial >= 0.0, "noise_initial must be nonnegative");
  require(noise_final >= 0.0, "noise_final must be nonnegative");
  require(noise_decay_fraction > 0.0 && noise_decay_fraction <= 1.0,
          "noise_decay_fraction must lie in (0, 1]");
  for (int h : network.actor_hidden) require(h > 0, "actor_hidden widths must be positive");
  for (int h : network.critic_hidden) require(h > 0, "critic_hidden widths must be positive");
  require(adam.beta1 >= 0.0 && adam.beta1 < 1.0, "adam_beta1 must lie in [0, 1)");
  require(adam.beta2 >= 0.0 && adam.beta2 < 1.0, "adam_beta2 must lie in [0, 1)");
  require(adam.epsilon > 0.0, "adam_epsilon must be positive");
}

double NoiseScale(const TrainConfig& config, std::int64_t episode) {
  if (config.noise_initial <= 0.0) return 0.0;
  const double horizon =
      config.noise_decay_fraction * static_cast<double>(config.episodes);
  const double progress =
      horizon > 0.0 ? std::min(1.0, static_cast<double>(episode) / horizon) : 1.0;
  if (config.noise_final <= 0.0) {
    return progress >= 1.0 ? 0.0 : config.noise_initial * (1.0 - progress);
  }
  return config.noise_initial *
         std::pow(config.noise_final / config.noise_initial, progress);
}

Vector CriticTarget(const replay::Minibatch& batch, int agent,
                    std::span<const AgentLearner> learners,
                    const JointLayout& layout, const TeamSpec& team,
                    BiasVariant variant, const BiasConfig& steps, double gamma,
                    Rng& rng) {
  const int n = layout.num_agents();
  if (static_cast<int>(learners.size()) != n) {
    throw ContractError("one learner per agent required");
  }
  std::vector<Matrix> next_actions;
  next_actions.reserve(n);
  for (int k = 0; k < n; ++k) {
    next_actions.push_back(
        SquashAll(nn::Forward(learners[k].target_actor, batch.next_observations[k])));
  }
  const Matrix next_obs = StackBlocks(batch.next_observations, layout.observation_dims());
  const Matrix joint_next = StackBlocks(next_actions, layout.action_dims());
  const BiasRequest request{&learners[agent].target_critic, &layout, &team,
                            variant, steps};
  const Matrix biased = BiasJointActions(request, next_obs, joint_next, agent, rng);
  const Matrix q_next =
      nn::Forward(learners[agent].target_critic, JoinRows(next_obs, biased));
  return batch.rewards.row(agent).transpose() + gamma * q_next.row(0).transpose();
}

double CriticUpdate(const replay::Minibatch& batch, int agent,
                    AgentLearner& learner, const Vector& targets,
                    const JointLayout& layout, double learning_rate) {
  const int size = batch.size();
  if (targets.size() != size) {
    throw ContractError("critic targets do not match the minibatch size");
  }
  nn::ForwardTrace trace;
  const Matrix q = nn::Forward(
      learner.critic, CriticInput(layout, batch.observations, batch.actions), &trace);
  const Eigen::RowVectorXd error = q.row(0) - targets.transpose();
  const double loss = error.squaredNorm() / size;
  if (!std::isfinite(loss)) {
    throw NumericError("non-finite critic loss for agent", agent);
  }
  const Matrix output_grad = (2.0 / size) * error;
  const nn::GradientBundle grads = nn::Backward(learner.critic, trace, output_grad);
  nn::AdamStep(learner.critic, grads, learner.critic_optimizer, learning_rate);
  return loss;
}

ActorUpdateResult ActorUpdate(const replay::Minibatch& batch, int agent,
                              AgentLearner& learner, const JointLayout& layout,
                              const TeamSpec& team, BiasVariant variant,
                              const BiasConfig& steps, double learning_rate,
                              Rng& rng, BiasDiagnostics* diagnostics) {
  const int size = batch.size();
  nn::ForwardTrace actor_trace;
  const Matrix raw = nn::Forward(learner.actor, batch.observations[agent], &actor_trace);
  const Matrix policy_action = SquashAll(raw);

  const Matrix joint_obs = StackBlocks(batch.observations, layout.observation_dims());
  const Matrix stored = StackBlocks(batch.actions, layout.action_dims());
  const BiasRequest request{&learner.critic, &layout, &team, variant, steps};
  Matrix joint = BiasJointActions(request, joint_obs, stored, agent, rng, diagnostics);
  joint.middleRows(layout.action_offset(agent), layout.action_dim(agent)) = policy_action;

  nn::ForwardTrace critic_trace;
  const Matrix q = nn::Forward(learner.critic, JoinRows(joint_obs, joint), &critic_trace);
  const nn::GradientBundle critic_grads =
      nn::Backward(learner.critic, critic_trace,
                   Matrix(Matrix::Constant(1, size, 1.0 / size)),
                   {.parameter_gradients = false});
  const auto dq_da = critic_grads.input.middleRows(
      layout.total_observation() + layout.action_offset(agent), layout.action_dim(agent));
  // Ascent on the objective is descent on its negation; chain through tanh.
  const Matrix raw_grad =
      -(dq_da.array() * (1.0 - policy_action.array().square())).matrix();
  if (!raw_grad.allFinite()) {
    throw NumericError("non-finite policy gradient for agent", agent);
  }
  const nn::GradientBundle grads = nn::Backward(learner.actor, actor_trace, raw_grad);
  ActorUpdateResult result;
  result.policy_gradient_norm = GradientNorm(grads);
  result.mean_q = q.mean();
  nn::AdamStep(learner.actor, grads, learner.actor_optimizer, learning_rate);
  return result;
}

JointLayout LayoutFor(const env::Scenario& scenario) {
  std::vector<int> obs, act;
  for (int a = 0; a < scenario.num_agents(); ++a) {
    obs.push_back(scenario.observation_size(a));
    act.push_back(scenario.action_layout(a).size());
  }
  return JointLayout(std::move(obs), std::move(act));
}

Trainer::Trainer(env::Scenario scenario, TeamSpec team,
                 std::vector<BiasVariant> variants, BiasConfig steps,
                 TrainConfig config)
    : scenario_(std::move(scenario)),
      team_(std::move(team)),
      variants_(std::move(variants)),
      steps_(steps),
      config_(std::move(config)),
      layout_(LayoutFor(scenario_)),
      buffer_(replay::TransitionLayout{layout_.observation_dims(), layout_.action_dims()},
              static_cast<std::size_t>(config_.buffer_capacity)) {
  config_.Validate();
  steps_.Validate();
  const int n = scenario_.num_agents();
  if (team_.num_agents() != n) {
    throw ConfigError("team spec agent count does not match the scenario");
  }
  if (static_cast<int>(variants_.size()) != n) {
    throw ConfigError("one bias variant per agent required");
  }
  state_.env_rng = MakeRng(config_.seed, kEnvStream);
  state_.noise_rng = MakeRng(config_.seed, kNoiseStream);
  state_.sample_rng = MakeRng(config_.seed, kSampleStream);
  state_.bias_rng = MakeRng(config_.seed, kBiasStream);
  Rng init_rng = MakeRng(config_.seed, kInitStream);
  for (int a = 0; a < n; ++a) {
    state_.learners.push_back(AgentLearner::Create(
        layout_.observation_dim(a), layout_.action_dim(a),
        layout_.critic_input_dim(), config_.network, config_.adam, init_rng));
  }
}

EpisodeSummary Trainer::TrainEpisode() {
  const int n = scenario_.num_agents();
  auto& learners = state_.learners;
  EpisodeSummary summary;
  summary.episode = state_.episode;
  summary.returns.assign(n, 0.0);
  summary.mean_critic_loss.assign(n, 0.0);
  summary.mean_policy_gradient_norm.assign(n, 0.0);
  summary.noise_scale = NoiseScale(config_, state_.episode);
  for (auto& l : learners) l.noise_scale = summary.noise_scale;

  BiasDiagnostics episode_diag;
  std::int64_t agent_updates = 0;
  env::WorldState world = scenario_.Reset(state_.env_rng);
  std::vector<std::vector<double>> obs = scenario_.ObserveAll(world);
  const auto batch_size = static_cast<std::size_t>(config_.batch_size);

  for (bool terminal = false; !terminal;) {
    replay::Transition transition;
    transition.observations = obs;
    std::vector<env::EnvAction> env_actions;
    for (int a = 0; a < n; ++a) {
      transition.actions.push_back(
          SelectAction(learners[a], obs[a], state_.noise_rng, true));
      env_actions.push_back(scenario_.ToEnvAction(a, transition.actions.back()));
    }
    env::StepResult step = scenario_.Step(world, env_actions);
    transition.rewards = step.rewards;
    transition.next_observations = step.observations;
    buffer_.Push(transition);
    if (step_observer_) step_observer_(step.world, env_actions, step.rewards);

    for (int a = 0; a < n; ++a) summary.returns[a] += step.rewards[a];
    const env::CaptureCount captures = env::CountCaptures(step.world, step.collisions);
    summary.captures.green += captures.green;
    summary.captures.blue += captures.blue;
    world = std::move(step.world);
    obs = std::move(step.observations);
    terminal = step.terminal;
    ++state_.global_step;

    if (buffer_.size() < batch_size) continue;
    for (int a = 0; a < n; ++a) {
      const replay::Minibatch batch = *buffer_.Sample(batch_size, state_.sample_rng);
      const Vector targets =
          CriticTarget(batch, a, learners, layout_, team_, variants_[a], steps_,
                       config_.gamma, state_.bias_rng);
      const double loss =
          CriticUpdate(batch, a, learners[a], targets, layout_, config_.critic_lr);
      BiasDiagnostics diag;
      const ActorUpdateResult actor = ActorUpdate(
          batch, a, learners[a], layout_, team_, variants_[a], steps_,
          config_.actor_lr, state_.bias_rng,
          config_.similarity_diagnostics ? &diag : nullptr);

      summary.mean_critic_loss[a] += loss;
      summary.mean_policy_gradient_norm[a] += actor.policy_gradient_norm;
      episode_diag.ally_cosine_sum += diag.ally_cosine_sum;
      episode_diag.ally_cosine_count += diag.ally_cosine_count;
      ++agent_updates;
      if (update_sink_) {
        UpdateRecord record;
        record.update = state_.updates;
        record.step = state_.global_step - 1;
        record.episode = state_.episode;
        record.agent = a;
        record.variant = variants_[a];
        record.critic_loss = loss;
        record.policy_gradient_norm = actor.policy_gradient_norm;
        record.ally_cosine = diag.mean();
        record.ally_cosine_samples = diag.ally_cosine_count;
        update_sink_(record);
      }
      ++state_.updates;
    }
    for (auto& l : learners) {
      nn::SoftUpdate(l.target_actor, l.actor, config_.tau);
      nn::SoftUpdate(l.target_critic, l.critic, config_.tau);
    }
  }

  summary.updates = agent_updates;
  if (agent_updates > 0) {
    const double per_agent = static_cast<double>(agent_updates) / n;
    for (int a = 0; a < n; ++a) {
      summary.mean_critic_loss[a] /= per_agent;
      summary.mean_policy_gradient_norm[a] /= per_agent;
    }
  }
  summary.mean_ally_cosine = episode_diag.mean();
  ++state_.episode;
  return summary;
}

void Trainer::Run(const std::function<void(const EpisodeSummary&)>& on_episode) {
  while (state_.episode < config_.episodes) {
    const EpisodeSummary summary = TrainEpisode();
    if (on_episode) on_episode(summary);
  }
}

void Trainer::Restore(TrainerState state) {
  if (state.learners.size() != state_.learners.size()) {
    throw ShapeError("restored learner count does not match the scenario");
  }
  for (size_t a = 0; a < state.learners.size(); ++a) {
    const auto& have = state_.learners[a];
    const auto& got = state.learners[a];
    if (have.actor.dims() != got.actor.dims() ||
        have.critic.dims() != got.critic.dims() ||
        have.target_actor.dims() != got.target_actor.dims() ||
        have.target_critic.dims() != got.target_critic.dims()) {
      throw ShapeError("restored network shapes do not match for agent " +
                       std::to_string(a));
    }
  }
  state_ = std::move(state);
  buffer_ = replay::ReplayBuffer(buffer_.layout(), buffer_.capacity());
}

}  // namespace f2ddpg::marl
