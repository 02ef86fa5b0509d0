#pragma once

// Two-dimensional particle worlds: cooperative navigation, cooperative
// communication, predator-prey and covert communication.
//
// Entity order inside a WorldState is fixed: all agents first (in role
// order), then landmarks. Agent indices used everywhere else in the
// framework are indices into that leading agent block.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "f2ddpg/rng.hpp"

namespace f2ddpg::env {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend bool operator==(Vec2 a, Vec2 b) = default;

  double Norm() const;
};

double Distance(Vec2 a, Vec2 b);

enum class ScenarioKind {
  kCooperativeNavigation,
  kCooperativeCommunication,
  kPredatorPrey,
  kCovertCommunication,
};

std::string ScenarioName(ScenarioKind kind);
// Throws ConfigError for unknown names.
ScenarioKind ParseScenarioName(const std::string& name);

enum class EntityKind { kAgent, kLandmark };

enum class Role {
  kNavigator,
  kSpeaker,
  kListener,
  kPredator,
  kPreyGreen,
  kPreyBlue,
  kAdversary,
  kLandmark,
};

std::string RoleName(Role role);

struct EntityState {
  Vec2 position;
  Vec2 velocity;
  EntityKind kind = EntityKind::kAgent;
  Role role = Role::kNavigator;
  double radius = 0.05;
  double max_speed = 1.0;
  double accel_scale = 3.0;
  bool movable = true;

  bool operator==(const EntityState&) const = default;
};

struct GoalPayload {
  int goal_landmark = 0;
  bool operator==(const GoalPayload&) const = default;
};

struct CovertPayload {
  std::vector<double> message;
  std::vector<double> key;
  bool operator==(const CovertPayload&) const = default;
};

using ScenarioPayload = std::variant<std::monostate, GoalPayload, CovertPayload>;

struct WorldState {
  std::vector<EntityState> entities;
  int num_agents = 0;
  int timestep = 0;
  // Last communication vector emitted by each agent (empty if it has none).
  std::vector<std::vector<double>> communication;
  ScenarioPayload payload;

  bool operator==(const WorldState&) const = default;
};

struct EnvAction {
  // hold, right, left, up, down
  std::optional<std::array<double, 5>> movement;
  std::optional<std::vector<double>> communication;
};

// Unordered agent pair with first < second.
using AgentPair = std::pair<int, int>;

struct StepResult {
  WorldState world;
  std::vector<double> rewards;
  std::vector<std::vector<double>> observations;
  std::vector<AgentPair> collisions;
  bool terminal = false;
};

struct PhysicsConfig {
  double dt = 0.1;
  double damping = 0.25;
  double contact_stiffness = 100.0;
  double agent_radius = 0.05;
  double landmark_radius = 0.05;
  double agent_max_speed = 1.0;
  double agent_accel = 3.0;
  double predator_max_speed = 1.0;
  double predator_accel = 3.0;
  double blue_prey_max_speed = 1.3;
  double blue_prey_accel = 4.0;
  double green_prey_max_speed = 3.0;
  double green_prey_accel = 9.0;
};

struct RewardConfig {
  double collision_penalty = 1.0;
  double blue_capture_reward = 10.0;
  double green_capture_reward = 100.0;
  double boundary_penalty_scale = 10.0;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kCooperativeNavigation;
  int navigators = 3;  // cooperative navigation: agents and landmarks
  int predators = 5;
  int prey = 3;
  int green_prey = 1;  // the first green_prey prey are green, the rest blue
  int horizon = 25;
  PhysicsConfig physics;
  RewardConfig rewards;
};

struct ActionLayout {
  bool movement = false;
  int communication = 0;

  int size() const { return (movement ? 5 : 0) + communication; }
};

struct CaptureCount {
  int green = 0;
  int blue = 0;
};

// Maps raw network outputs into [-1, 1] per component.
double Squash(double raw);

// accel_scale * (right - left, up - down). Hold is ignored. Inputs are
// already-squashed movement components. Throws NumericError on NaN/inf.
Vec2 DecodeAction(std::span<const double, 5> movement, double accel_scale);

// Pairs of agents whose discs strictly overlap: distance < r_i + r_j.
std::vector<AgentPair> DetectCollisions(const WorldState& world);

std::vector<double> RewardCooperativeNavigation(const WorldState& world,
                                                const RewardConfig& cfg);
std::vector<double> RewardCooperativeCommunication(const WorldState& world);
std::vector<double> RewardPredatorPrey(const WorldState& world,
                                       std::span<const AgentPair> collisions,
                                       const RewardConfig& cfg);
// Uses the reconstructions stored as the listener's and adversary's
// communication vectors.
std::vector<double> RewardCovertCommunication(const WorldState& world);

// Predator/prey colliding pairs, split by prey colour.
CaptureCount CountCaptures(const WorldState& world,
                           std::span<const AgentPair> collisions);

class Scenario {
 public:
  // Throws ConfigError on nonpositive counts or physics constants.
  explicit Scenario(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  ScenarioKind kind() const { return config_.kind; }
  int num_agents() const { return static_cast<int>(roles_.size()); }
  int horizon() const { return config_.horizon; }
  Role role(int agent) const { return roles_.at(agent); }
  int landmark_count() const { return landmarks_; }

  ActionLayout action_layout(int agent) const;
  int observation_size(int agent) const;
  // 0 for the team under study (navigators, predators, speaker/listener),
  // 1 for opponents (prey, covert adversary).
  std::vector<int> team_of() const;

  // Positions i.i.d. uniform on [-1, 1]^2, velocities zero.
  WorldState Reset(Rng& rng) const;

  // Throws ContractError on wrong action count or role-inconsistent actions,
  // or when the episode is already over.
  StepResult Step(const WorldState& world,
                  std::span<const EnvAction> actions) const;

  // Layout: own velocity, own position, landmark offsets, offsets of the
  // other agents, their relative velocities, then role extras (landmark
  // colours + received message for a listener, goal colour for a speaker,
  // message/key/channel for covert roles).
  std::vector<double> Observe(const WorldState& world, int agent) const;
  std::vector<std::vector<double>> ObserveAll(const WorldState& world) const;

  std::vector<double> Rewards(const WorldState& world,
                              std::span<const AgentPair> collisions) const;

  // Splits a flat squashed action (movement first, then communication)
  // into an EnvAction according to the agent's layout.
  EnvAction ToEnvAction(int agent, std::span<const double> flat) const;

 private:
  int AgentWithRole(Role role) const;

  ScenarioConfig config_;
  std::vector<Role> roles_;
  int landmarks_ = 0;
  int comm_dim_ = 0;
};

// One trace.jsonl record. `biases[i][k]` is the displacement agent i applies
// to agent k's action (empty when k == i or biases are not requested).
nlohmann::json TraceRecord(
    const WorldState& world, std::span<const EnvAction> actions,
    std::span<const double> rewards,
    const std::vector<std::vector<std::vector<double>>>* biases = nullptr);

}  // namespace f2ddpg::env
