#include "f2ddpg/particle_env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::env {

namespace {

constexpr int kCooperativeCommunicationLandmarks = 3;
constexpr int kCooperativeCommunicationChannel = 3;
constexpr int kCovertChannel = 4;

void AppendVec(std::vector<double>& out, Vec2 v) {
  out.push_back(v.x);
  out.push_back(v.y);
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

// Scales v onto the disc of radius max_speed. The loop absorbs the rare
// rounding overshoot of a single rescale.
void ClampSpeed(Vec2& v, double max_speed) {
  double norm = v.Norm();
  while (norm > max_speed) {
    v *= std::nextafter(max_speed / norm, 0.0);
    norm = v.Norm();
  }
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

}  // namespace

double Vec2::Norm() const { return std::hypot(x, y); }

double Distance(Vec2 a, Vec2 b) { return (a - b).Norm(); }

std::string ScenarioName(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kCooperativeNavigation:
      return "cooperative_navigation";
    case ScenarioKind::kCooperativeCommunication:
      return "cooperative_communication";
    case ScenarioKind::kPredatorPrey:
      return "predator_prey";
    case ScenarioKind::kCovertCommunication:
      return "covert_communication";
  }
  return "unknown";
}

ScenarioKind ParseScenarioName(const std::string& name) {
  for (auto kind : {ScenarioKind::kCooperativeNavigation,
                    ScenarioKind::kCooperativeCommunication,
                    ScenarioKind::kPredatorPrey,
                    ScenarioKind::kCovertCommunication}) {
    if (ScenarioName(kind) == name) return kind;
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string RoleName(Role role) {
  switch (role) {
    case Role::kNavigator: return "navigator";
    case Role::kSpeaker: return "speaker";
    case Role::kListener: return "listener";
    case Role::kPredator: return "predator";
    case Role::kPreyGreen: return "prey_green";
    case Role::kPreyBlue: return "prey_blue";
    case Role::kAdversary: return "adversary";
    case Role::kLandmark: return "landmark";
  }
  return "unknown";
}

double Squash(double raw) { return std::tanh(raw); }

Vec2 DecodeAction(std::span<const double, 5> movement, double accel_scale) {
  if (!AllFinite(movement)) {
    throw NumericError("non-finite movement action component", 0);
  }
  return Vec2{movement[1] - movement[2], movement[3] - movement[4]} *
         accel_scale;
}

std::vector<AgentPair> DetectCollisions(const WorldState& world) {
  std::vector<AgentPair> pairs;
  for (int i = 0; i < world.num_agents; ++i) {
    for (int j = i + 1; j < world.num_agents; ++j) {
      const auto& a = world.entities[i];
      const auto& b = world.entities[j];
      if (Distance(a.position, b.position) < a.radius + b.radius) {
        pairs.emplace_back(i, j);
      }
    }
  }
  return pairs;
}

std::vector<double> RewardCooperativeNavigation(const WorldState& world,
                                                const RewardConfig& cfg) {
  double shared = 0.0;
  for (size_t l = world.num_agents; l < world.entities.size(); ++l) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int a = 0; a < world.num_agents; ++a) {
      nearest = std::min(nearest, Distance(world.entities[a].position,
                                           world.entities[l].position));
    }
    shared -= nearest;
  }
  std::vector<double> rewards(world.num_agents, shared);
  for (const auto& [i, j] : DetectCollisions(world)) {
    rewards[i] -= cfg.collision_penalty;
    rewards[j] -= cfg.collision_penalty;
  }
  return rewards;
}

std::vector<double> RewardCooperativeCommunication(const WorldState& world) {
  const auto* goal = std::get_if<GoalPayload>(&world.payload);
  if (goal == nullptr) {
    throw ContractError("cooperative communication world without a goal");
  }
  int listener = -1;
  for (int a = 0; a < world.num_agents; ++a) {
    if (world.entities[a].role == Role::kListener) listener = a;
  }
  const Vec2 target =
      world.entities[world.num_agents + goal->goal_landmark].position;
  const Vec2 offset = world.entities[listener].position - target;
  const double reward = -(offset.x * offset.x + offset.y * offset.y);
  return std::vector<double>(world.num_agents, reward);
}

std::vector<double> RewardPredatorPrey(const WorldState& world,
                                       std::span<const AgentPair> collisions,
                                       const RewardConfig& cfg) {
  std::vector<double> rewards(world.num_agents, 0.0);
  double predator_total = 0.0;
  auto is_prey = [&](int a) {
    const Role r = world.entities[a].role;
    return r == Role::kPreyGreen || r == Role::kPreyBlue;
  };
  for (const auto& [i, j] : collisions) {
    const Role ri = world.entities[i].role;
    const Role rj = world.entities[j].role;
    int prey = -1;
    if (ri == Role::kPredator && is_prey(j)) prey = j;
    if (rj == Role::kPredator && is_prey(i)) prey = i;
    if (prey < 0) continue;
    const double value = world.entities[prey].role == Role::kPreyGreen
                             ? cfg.green_capture_reward
                             : cfg.blue_capture_reward;
    predator_total += value;
    rewards[prey] -= value;
  }
  for (int a = 0; a < world.num_agents; ++a) {
    if (world.entities[a].role == Role::kPredator) {
      rewards[a] = predator_total;
    } else if (is_prey(a)) {
      const Vec2 p = world.entities[a].position;
      for (double c : {p.x, p.y}) {
        const double excess = std::max(0.0, std::abs(c) - 1.0);
        rewards[a] -= cfg.boundary_penalty_scale * excess * excess;
      }
    }
  }
  return rewards;
}

std::vector<double> RewardCovertCommunication(const WorldState& world) {
  const auto* payload = std::get_if<CovertPayload>(&world.payload);
  if (payload == nullptr) {
    throw ContractError("covert communication world without a message");
  }
  int listener = -1;
  int adversary = -1;
  for (int a = 0; a < world.num_agents; ++a) {
    if (world.entities[a].role == Role::kListener) listener = a;
    if (world.entities[a].role == Role::kAdversary) adversary = a;
  }
  const double listener_error =
      SquaredDistance(payload->message, world.communication[listener]);
  const double adversary_error =
      SquaredDistance(payload->message, world.communication[adversary]);
  std::vector<double> rewards(world.num_agents,
                              -listener_error + adversary_error);
  rewards[adversary] = -adversary_error;
  return rewards;
}

CaptureCount CountCaptures(const WorldState& world,
                           std::span<const AgentPair> collisions) {
  CaptureCount count;
  for (const auto& [i, j] : collisions) {
    const Role ri = world.entities[i].role;
    const Role rj = world.entities[j].role;
    Role prey = Role::kLandmark;
    if (ri == Role::kPredator) prey = rj;
    if (rj == Role::kPredator) prey = ri;
    if (prey == Role::kPreyGreen) ++count.green;
    if (prey == Role::kPreyBlue) ++count.blue;
  }
  return count;
}

Scenario::Scenario(ScenarioConfig config) : config_(std::move(config)) {
  const auto& phys = config_.physics;
  if (config_.horizon <= 0) throw ConfigError("horizon must be positive");
  if (!(phys.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(phys.damping >= 0.0 && phys.damping <= 1.0)) {
    throw ConfigError("damping must lie in [0, 1]");
  }
  if (!(phys.contact_stiffness >= 0.0)) {
    throw ConfigError("contact_stiffness must be nonnegative");
  }
  const std::pair<const char*, double> positive[] = {
      {"agent_radius", phys.agent_radius},
      {"landmark_radius", phys.landmark_radius},
      {"agent_max_speed", phys.agent_max_speed},
      {"agent_accel", phys.agent_accel},
      {"predator_max_speed", phys.predator_max_speed},
      {"predator_accel", phys.predator_accel},
      {"blue_prey_max_speed", phys.blue_prey_max_speed},
      {"blue_prey_accel", phys.blue_prey_accel},
      {"green_prey_max_speed", phys.green_prey_max_speed},
      {"green_prey_accel", phys.green_prey_accel},
  };
  for (const auto& [name, value] : positive) {
    if (!(value > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  }
  switch (config_.kind) {
    case ScenarioKind::kCooperativeNavigation:
      if (config_.navigators < 1) {
        throw ConfigError("navigators must be at least 1");
      }
      roles_.assign(config_.navigators, Role::kNavigator);
      landmarks_ = config_.navigators;
      break;
    case ScenarioKind::kCooperativeCommunication:
      roles_ = {Role::kSpeaker, Role::kListener};
      landmarks_ = kCooperativeCommunicationLandmarks;
      comm_dim_ = kCooperativeCommunicationChannel;
      break;
    case ScenarioKind::kPredatorPrey:
      if (config_.predators < 1) {
        throw ConfigError("predators must be at least 1");
      }
      if (config_.prey < 1) throw ConfigError("prey must be at least 1");
      if (config_.green_prey < 0 || config_.green_prey > config_.prey) {
        throw ConfigError("green_prey must lie in [0, prey]");
      }
      roles_.assign(config_.predators, Role::kPredator);
      roles_.insert(roles_.end(), config_.green_prey, Role::kPreyGreen);
      roles_.insert(roles_.end(), config_.prey - config_.green_prey,
                    Role::kPreyBlue);
      break;
    case ScenarioKind::kCovertCommunication:
      roles_ = {Role::kSpeaker, Role::kListener, Role::kAdversary};
      comm_dim_ = kCovertChannel;
      break;
  }
}

ActionLayout Scenario::action_layout(int agent) const {
  switch (roles_.at(agent)) {
    case Role::kSpeaker:
      return {false, comm_dim_};
    case Role::kListener:
    case Role::kAdversary:
      if (config_.kind == ScenarioKind::kCovertCommunication) {
        return {false, comm_dim_};
      }
      return {true, 0};
    default:
      return {true, 0};
  }
}

int Scenario::observation_size(int agent) const {
  const int others = num_agents() - 1;
  int size = 4 + 2 * landmarks_ + 4 * others;
  switch (roles_.at(agent)) {
    case Role::kSpeaker:
      size += config_.kind == ScenarioKind::kCovertCommunication
                  ? 2 * comm_dim_
                  : landmarks_;
      break;
    case Role::kListener:
      size += config_.kind == ScenarioKind::kCovertCommunication
                  ? 2 * comm_dim_
                  : landmarks_ * landmarks_ + comm_dim_;
      break;
    case Role::kAdversary:
      size += comm_dim_;
      break;
    default:
      break;
  }
  return size;
}

std::vector<int> Scenario::team_of() const {
  std::vector<int> teams(roles_.size(), 0);
  for (size_t a = 0; a < roles_.size(); ++a) {
    const Role r = roles_[a];
    if (r == Role::kPreyGreen || r == Role::kPreyBlue ||
        r == Role::kAdversary) {
      teams[a] = 1;
    }
  }
  return teams;
}

int Scenario::AgentWithRole(Role role) const {
  for (int a = 0; a < num_agents(); ++a) {
    if (roles_[a] == role) return a;
  }
  return -1;
}

WorldState Scenario::Reset(Rng& rng) const {
  const auto& phys = config_.physics;
  const bool communication_only =
      config_.kind == ScenarioKind::kCovertCommunication;
  WorldState world;
  world.num_agents = num_agents();
  for (Role role : roles_) {
    EntityState e;
    e.kind = EntityKind::kAgent;
    e.role = role;
    e.radius = phys.agent_radius;
    switch (role) {
      case Role::kPredator:
        e.max_speed = phys.predator_max_speed;
        e.accel_scale = phys.predator_accel;
        break;
      case Role::kPreyBlue:
        e.max_speed = phys.blue_prey_max_speed;
        e.accel_scale = phys.blue_prey_accel;
        break;
      case Role::kPreyGreen:
        e.max_speed = phys.green_prey_max_speed;
        e.accel_scale = phys.green_prey_accel;
        break;
      default:
        e.max_speed = phys.agent_max_speed;
        e.accel_scale = phys.agent_accel;
        break;
    }
    e.movable = !communication_only && role != Role::kSpeaker;
    world.entities.push_back(e);
  }
  for (int l = 0; l < landmarks_; ++l) {
    EntityState e;
    e.kind = EntityKind::kLandmark;
    e.role = Role::kLandmark;
    e.radius = phys.landmark_radius;
    e.movable = false;
    world.entities.push_back(e);
  }
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (auto& e : world.entities) {
    e.position.x = unit(rng);
    e.position.y = unit(rng);
  }
  world.communication.resize(num_agents());
  for (int a = 0; a < num_agents(); ++a) {
    world.communication[a].assign(action_layout(a).communication, 0.0);
  }
  switch (config_.kind) {
    case ScenarioKind::kCooperativeCommunication: {
      std::uniform_int_distribution<int> pick(0, landmarks_ - 1);
      world.payload = GoalPayload{pick(rng)};
      break;
    }
    case ScenarioKind::kCovertCommunication: {
      CovertPayload payload;
      for (int k = 0; k < comm_dim_; ++k) payload.message.push_back(unit(rng));
      for (int k = 0; k < comm_dim_; ++k) payload.key.push_back(unit(rng));
      world.payload = std::move(payload);
      break;
    }
    default:
      break;
  }
  return world;
}

StepResult Scenario::Step(const WorldState& world,
                          std::span<const EnvAction> actions) const {
  if (static_cast<int>(actions.size()) != num_agents() ||
      world.num_agents != num_agents()) {
    throw ContractError("expected " + std::to_string(num_agents()) +
                        " actions, got " + std::to_string(actions.size()));
  }
  if (world.timestep >= config_.horizon) {
    throw ContractError("step called on a finished episode");
  }
  for (int a = 0; a < num_agents(); ++a) {
    const ActionLayout layout = action_layout(a);
    const auto& act = actions[a];
    const int comm = act.communication ? static_cast<int>(act.communication->size()) : 0;
    if (act.movement.has_value() != layout.movement ||
        comm != layout.communication ||
        (layout.communication == 0 && act.communication.has_value())) {
      throw ContractError("action for agent " + std::to_string(a) + " (" +
                          RoleName(roles_[a]) +
                          ") does not match its role's layout");
    }
    if (act.communication && !AllFinite(*act.communication)) {
      throw NumericError("non-finite communication action", a);
    }
  }

  const auto& phys = config_.physics;
  StepResult result;
  WorldState& next = result.world;
  next = world;

  std::vector<Vec2> accel(num_agents());
  for (int a = 0; a < num_agents(); ++a) {
    const auto& e = world.entities[a];
    if (e.movable && actions[a].movement) {
      accel[a] = DecodeAction(*actions[a].movement, e.accel_scale);
    }
  }
  for (int i = 0; i < num_agents(); ++i) {
    for (int j = i + 1; j < num_agents(); ++j) {
      const auto& ei = world.entities[i];
      const auto& ej = world.entities[j];
      const Vec2 delta = ei.position - ej.position;
      const double dist = delta.Norm();
      const double overlap = ei.radius + ej.radius - dist;
      if (overlap <= 0.0 || dist == 0.0) continue;
      const Vec2 push = delta * (phys.contact_stiffness * overlap / dist);
      if (ei.movable) accel[i] += push;
      if (ej.movable) accel[j] -= push;
    }
  }
  for (int a = 0; a < num_agents(); ++a) {
    auto& e = next.entities[a];
    if (!e.movable) continue;
    e.velocity = e.velocity * (1.0 - phys.damping) + accel[a] * phys.dt;
    ClampSpeed(e.velocity, e.max_speed);
    e.position += e.velocity * phys.dt;
  }
  for (int a = 0; a < num_agents(); ++a) {
    if (actions[a].communication) next.communication[a] = *actions[a].communication;
  }
  next.timestep = world.timestep + 1;

  result.collisions = DetectCollisions(next);
  result.rewards = Rewards(next, result.collisions);
  result.observations = ObserveAll(next);
  result.terminal = next.timestep == config_.horizon;
  return result;
}

std::vector<double> Scenario::Observe(const WorldState& world,
                                      int agent) const {
  if (agent < 0 || agent >= num_agents()) {
    throw ContractError("agent index out of range");
  }
  const auto& self = world.entities[agent];
  std::vector<double> obs;
  obs.reserve(observation_size(agent));
  AppendVec(obs, self.velocity);
  AppendVec(obs, self.position);
  for (int l = 0; l < landmarks_; ++l) {
    AppendVec(obs, world.entities[num_agents() + l].position - self.position);
  }
  for (int k = 0; k < num_agents(); ++k) {
    if (k != agent) AppendVec(obs, world.entities[k].position - self.position);
  }
  for (int k = 0; k < num_agents(); ++k) {
    if (k != agent) AppendVec(obs, world.entities[k].velocity - self.velocity);
  }

  const bool covert = config_.kind == ScenarioKind::kCovertCommunication;
  switch (roles_[agent]) {
    case Role::kSpeaker:
      if (covert) {
        const auto& p = std::get<CovertPayload>(world.payload);
        obs.insert(obs.end(), p.message.begin(), p.message.end());
        obs.insert(obs.end(), p.key.begin(), p.key.end());
      } else {
        const int goal = std::get<GoalPayload>(world.payload).goal_landmark;
        for (int l = 0; l < landmarks_; ++l) obs.push_back(l == goal ? 1.0 : 0.0);
      }
      break;
    case Role::kListener: {
      const auto& channel = world.communication[AgentWithRole(Role::kSpeaker)];
      if (covert) {
        const auto& p = std::get<CovertPayload>(world.payload);
        obs.insert(obs.end(), p.key.begin(), p.key.end());
      } else {
        // Landmark l is painted with colour l.
        for (int l = 0; l < landmarks_; ++l) {
          for (int c = 0; c < landmarks_; ++c) obs.push_back(l == c ? 1.0 : 0.0);
        }
      }
      obs.insert(obs.end(), channel.begin(), channel.end());
      break;
    }
    case Role::kAdversary: {
      const auto& channel = world.communication[AgentWithRole(Role::kSpeaker)];
      obs.insert(obs.end(), channel.begin(), channel.end());
      break;
    }
    default:
      break;
  }
  return obs;
}

std::vector<std::vector<double>> Scenario::ObserveAll(
    const WorldState& world) const {
  std::vector<std::vector<double>> out;
  out.reserve(num_agents());
  for (int a = 0; a < num_agents(); ++a) out.push_back(Observe(world, a));
  return out;
}

std::vector<double> Scenario::Rewards(
    const WorldState& world, std::span<const AgentPair> collisions) const {
  switch (config_.kind) {
    case ScenarioKind::kCooperativeNavigation:
      return RewardCooperativeNavigation(world, config_.rewards);
    case ScenarioKind::kCooperativeCommunication:
      return RewardCooperativeCommunication(world);
    case ScenarioKind::kPredatorPrey:
      return RewardPredatorPrey(world, collisions, config_.rewards);
    case ScenarioKind::kCovertCommunication:
      return RewardCovertCommunication(world);
  }
  return {};
}

EnvAction Scenario::ToEnvAction(int agent,
                                std::span<const double> flat) const {
  const ActionLayout layout = action_layout(agent);
  if (static_cast<int>(flat.size()) != layout.size()) {
    throw ContractError("flat action for agent " + std::to_string(agent) +
                        " has length " + std::to_string(flat.size()) +
                        ", expected " + std::to_string(layout.size()));
  }
  EnvAction action;
  size_t offset = 0;
  if (layout.movement) {
    std::array<double, 5> m{};
    std::copy_n(flat.begin(), 5, m.begin());
    action.movement = m;
    offset = 5;
  }
  if (layout.communication > 0) {
    action.communication.emplace(flat.begin() + offset, flat.end());
  }
  return action;
}

nlohmann::json TraceRecord(
    const WorldState& world, std::span<const EnvAction> actions,
    std::span<const double> rewards,
    const std::vector<std::vector<std::vector<double>>>* biases) {
  nlohmann::json rec;
  rec["timestep"] = world.timestep;
  auto positions = nlohmann::json::array();
  auto velocities = nlohmann::json::array();
  for (const auto& e : world.entities) {
    positions.push_back({e.position.x, e.position.y});
    velocities.push_back({e.velocity.x, e.velocity.y});
  }
  rec["positions"] = std::move(positions);
  rec["velocities"] = std::move(velocities);
  auto acts = nlohmann::json::array();
  for (const auto& a : actions) {
    nlohmann::json entry = nlohmann::json::object();
    if (a.movement) {
      entry["movement"] = std::vector<double>(a.movement->begin(), a.movement->end());
    }
    if (a.communication) entry["communication"] = *a.communication;
    acts.push_back(std::move(entry));
  }
  rec["actions"] = std::move(acts);
  rec["rewards"] = std::vector<double>(rewards.begin(), rewards.end());
  if (biases != nullptr) rec["biases"] = *biases;
  return rec;
}

}  // namespace f2ddpg::env
