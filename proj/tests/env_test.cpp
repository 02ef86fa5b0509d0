#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "f2ddpg/errors.hpp"
#include "f2ddpg/particle_env.hpp"

namespace f2ddpg::env {
namespace {

ScenarioConfig Config(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  return c;
}

std::vector<EnvAction> HoldActions(const Scenario& s) {
  std::vector<EnvAction> actions;
  for (int a = 0; a < s.num_agents(); ++a) {
    actions.push_back(s.ToEnvAction(a, std::vector<double>(s.action_layout(a).size(), 0.0)));
  }
  return actions;
}

std::vector<EnvAction> RandomActions(const Scenario& s, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<EnvAction> actions;
  for (int a = 0; a < s.num_agents(); ++a) {
    std::vector<double> flat(s.action_layout(a).size());
    for (double& v : flat) v = u(rng);
    actions.push_back(s.ToEnvAction(a, flat));
  }
  return actions;
}

// Places entities at the given positions (agents first, then landmarks).
WorldState Place(const Scenario& s, const std::vector<Vec2>& positions, Rng& rng) {
  WorldState w = s.Reset(rng);
  for (size_t k = 0; k < positions.size(); ++k) w.entities[k].position = positions[k];
  return w;
}

TEST(ScenarioNames, RoundTrip) {
  for (auto kind : {ScenarioKind::kCooperativeNavigation,
                    ScenarioKind::kCooperativeCommunication,
                    ScenarioKind::kPredatorPrey, ScenarioKind::kCovertCommunication}) {
    EXPECT_EQ(ParseScenarioName(ScenarioName(kind)), kind);
  }
  EXPECT_THROW(ParseScenarioName("tag"), ConfigError);
}

TEST(Reset, CoordinatesInsideUnitSquareAndVelocitiesZero) {
  for (auto kind : {ScenarioKind::kCooperativeNavigation,
                    ScenarioKind::kCooperativeCommunication,
                    ScenarioKind::kPredatorPrey, ScenarioKind::kCovertCommunication}) {
    const Scenario s(Config(kind));
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed);
      const WorldState w = s.Reset(rng);
      for (const auto& e : w.entities) {
        EXPECT_GE(e.position.x, -1.0);
        EXPECT_LE(e.position.x, 1.0);
        EXPECT_GE(e.position.y, -1.0);
        EXPECT_LE(e.position.y, 1.0);
        EXPECT_EQ(e.velocity, Vec2{});
      }
      EXPECT_EQ(w.timestep, 0);
    }
  }
}

TEST(Reset, SameSeedSameWorld) {
  const Scenario s(Config(ScenarioKind::kCovertCommunication));
  Rng a(42), b(42);
  EXPECT_EQ(s.Reset(a), s.Reset(b));
}

TEST(Reset, CooperativeNavigationHasThreeAgentsThreeLandmarks) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(1);
  const WorldState w = s.Reset(rng);
  EXPECT_EQ(w.num_agents, 3);
  EXPECT_EQ(std::count_if(w.entities.begin(), w.entities.end(),
                          [](const EntityState& e) { return e.kind == EntityKind::kLandmark; }),
            3);
}

TEST(Reset, PayloadsMatchScenario) {
  Rng rng(7);
  const Scenario cc(Config(ScenarioKind::kCooperativeCommunication));
  std::vector<int> goal_counts(3, 0);
  for (int k = 0; k < 3000; ++k) {
    const auto w = cc.Reset(rng);
    const int g = std::get<GoalPayload>(w.payload).goal_landmark;
    ASSERT_GE(g, 0);
    ASSERT_LT(g, 3);
    ++goal_counts[g];
  }
  for (int c : goal_counts) EXPECT_NEAR(c, 1000, 150);

  const Scenario covert(Config(ScenarioKind::kCovertCommunication));
  const auto w = covert.Reset(rng);
  const auto& p = std::get<CovertPayload>(w.payload);
  EXPECT_EQ(p.message.size(), 4u);
  EXPECT_EQ(p.key.size(), 4u);
  for (double v : p.message) EXPECT_LE(std::abs(v), 1.0);

  const Scenario pp(Config(ScenarioKind::kPredatorPrey));
  EXPECT_TRUE(std::holds_alternative<std::monostate>(pp.Reset(rng).payload));
}

TEST(Scenario, RejectsNonPositiveCounts) {
  ScenarioConfig c = Config(ScenarioKind::kPredatorPrey);
  c.predators = 0;
  EXPECT_THROW(Scenario{c}, ConfigError);
  c = Config(ScenarioKind::kPredatorPrey);
  c.prey = 0;
  EXPECT_THROW(Scenario{c}, ConfigError);
  c = Config(ScenarioKind::kCooperativeNavigation);
  c.navigators = -1;
  EXPECT_THROW(Scenario{c}, ConfigError);
  c = Config(ScenarioKind::kCooperativeNavigation);
  c.horizon = 0;
  EXPECT_THROW(Scenario{c}, ConfigError);
  c = Config(ScenarioKind::kCooperativeNavigation);
  c.physics.green_prey_max_speed = 0.0;
  try {
    Scenario{c};
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("green_prey_max_speed"), std::string::npos);
  }
}

TEST(Scenario, RolesAndActionLayouts) {
  const Scenario pp(Config(ScenarioKind::kPredatorPrey));
  ASSERT_EQ(pp.num_agents(), 8);
  for (int a = 0; a < 5; ++a) EXPECT_EQ(pp.role(a), Role::kPredator);
  EXPECT_EQ(pp.role(5), Role::kPreyGreen);
  EXPECT_EQ(pp.role(6), Role::kPreyBlue);
  EXPECT_EQ(pp.role(7), Role::kPreyBlue);
  EXPECT_EQ(pp.team_of(), (std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(pp.action_layout(0).size(), 5);

  const Scenario cc(Config(ScenarioKind::kCooperativeCommunication));
  EXPECT_FALSE(cc.action_layout(0).movement);
  EXPECT_EQ(cc.action_layout(0).communication, 3);
  EXPECT_TRUE(cc.action_layout(1).movement);
  EXPECT_EQ(cc.action_layout(1).communication, 0);

  const Scenario covert(Config(ScenarioKind::kCovertCommunication));
  for (int a = 0; a < 3; ++a) EXPECT_EQ(covert.action_layout(a).communication, 4);
  EXPECT_EQ(covert.team_of(), (std::vector<int>{0, 0, 1}));
}

TEST(DecodeAction, Examples) {
  EXPECT_EQ(DecodeAction(std::array<double, 5>{1, 0, 0, 0, 0}, 3.0), (Vec2{0, 0}));
  EXPECT_EQ(DecodeAction(std::array<double, 5>{0, 1, 0, 0, 0}, 1.0), (Vec2{1, 0}));
  EXPECT_EQ(DecodeAction(std::array<double, 5>{0, 0.5, 0.5, 0, 0}, 2.0), (Vec2{0, 0}));
  EXPECT_EQ(DecodeAction(std::array<double, 5>{0, 0, 0, 0.25, 1}, 2.0), (Vec2{0, -1.5}));
}

TEST(DecodeAction, NonFiniteThrows) {
  EXPECT_THROW(DecodeAction(std::array<double, 5>{0, NAN, 0, 0, 0}, 1.0), NumericError);
  EXPECT_THROW(DecodeAction(std::array<double, 5>{0, 0, 0, INFINITY, 0}, 1.0),
               NumericError);
}

TEST(Squash, BoundedAndMonotone) {
  EXPECT_EQ(Squash(0.0), 0.0);
  EXPECT_LE(Squash(100.0), 1.0);
  EXPECT_GE(Squash(-100.0), -1.0);
  EXPECT_LT(Squash(0.1), Squash(0.2));
}

TEST(Step, AllHoldFromRestKeepsPositions) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(3);
  // Far apart so no contact force acts.
  const WorldState w = Place(s, {{-0.8, -0.8}, {0.0, 0.8}, {0.8, -0.8}}, rng);
  const StepResult r = s.Step(w, HoldActions(s));
  for (size_t k = 0; k < w.entities.size(); ++k) {
    EXPECT_EQ(r.world.entities[k].position, w.entities[k].position);
  }
}

TEST(Step, IntegratorByHand) {
  ScenarioConfig c = Config(ScenarioKind::kCooperativeNavigation);
  c.navigators = 1;
  c.physics.agent_accel = 1.0;
  const Scenario s(c);
  Rng rng(4);
  const WorldState w = Place(s, {{0.2, 0.3}}, rng);
  EnvAction right;
  right.movement = std::array<double, 5>{0, 1, 0, 0, 0};
  const StepResult r = s.Step(w, std::vector<EnvAction>{right});
  EXPECT_DOUBLE_EQ(r.world.entities[0].velocity.x, 0.1);
  EXPECT_EQ(r.world.entities[0].velocity.y, 0.0);
  EXPECT_NEAR(r.world.entities[0].position.x - 0.2, 0.01, 1e-15);
  EXPECT_EQ(r.world.entities[0].position.y, 0.3);

  // Second step: v = 0.75 * 0.1 + 0.1.
  const StepResult r2 = s.Step(r.world, std::vector<EnvAction>{right});
  EXPECT_DOUBLE_EQ(r2.world.entities[0].velocity.x, 0.175);
}

TEST(Step, DeterministicForIdenticalInputs) {
  const Scenario s(Config(ScenarioKind::kPredatorPrey));
  Rng rng(5), act_rng(6);
  const WorldState w = s.Reset(rng);
  const auto actions = RandomActions(s, act_rng);
  const StepResult a = s.Step(w, actions);
  const StepResult b = s.Step(w, actions);
  EXPECT_EQ(a.world, b.world);
  EXPECT_EQ(a.rewards, b.rewards);
  EXPECT_EQ(a.observations, b.observations);
}

TEST(Step, ActionCountMismatchIsContractError) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(1);
  const WorldState w = s.Reset(rng);
  auto actions = HoldActions(s);
  actions.pop_back();
  EXPECT_THROW(s.Step(w, actions), ContractError);
}

TEST(Step, RoleInconsistentActionIsContractError) {
  const Scenario s(Config(ScenarioKind::kCooperativeCommunication));
  Rng rng(1);
  const WorldState w = s.Reset(rng);
  auto actions = HoldActions(s);
  actions[0].movement = std::array<double, 5>{};  // speaker cannot move
  EXPECT_THROW(s.Step(w, actions), ContractError);
}

TEST(Step, TerminalExactlyAtHorizon) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(2);
  WorldState w = s.Reset(rng);
  for (int t = 1; t <= 25; ++t) {
    StepResult r = s.Step(w, HoldActions(s));
    EXPECT_EQ(r.terminal, t == 25);
    EXPECT_EQ(r.world.timestep, t);
    w = std::move(r.world);
  }
  EXPECT_THROW(s.Step(w, HoldActions(s)), ContractError);
}

TEST(Step, SpeedClampAndStaticLandmarksUnderRandomPlay) {
  for (auto kind : {ScenarioKind::kCooperativeNavigation,
                    ScenarioKind::kCooperativeCommunication, ScenarioKind::kPredatorPrey}) {
    const Scenario s(Config(kind));
    Rng rng(11), act_rng(12);
    for (int episode = 0; episode < 40; ++episode) {
      WorldState w = s.Reset(rng);
      const WorldState start = w;
      for (bool done = false; !done;) {
        // Saturated actions push every agent to its top speed.
        auto actions = RandomActions(s, act_rng);
        for (auto& a : actions) {
          if (a.movement) {
            for (double& m : *a.movement) m = m > 0 ? 1.0 : -1.0;
          }
        }
        StepResult r = s.Step(w, actions);
        for (size_t k = 0; k < r.world.entities.size(); ++k) {
          const auto& e = r.world.entities[k];
          if (e.movable) {
            ASSERT_LE(e.velocity.Norm(), e.max_speed);
          } else {
            ASSERT_EQ(e.position, start.entities[k].position);
            ASSERT_EQ(e.velocity, Vec2{});
          }
        }
        done = r.terminal;
        w = std::move(r.world);
      }
    }
  }
}

TEST(Step, CommunicationCopiedIntoWorld) {
  const Scenario s(Config(ScenarioKind::kCooperativeCommunication));
  Rng rng(9);
  const WorldState w = s.Reset(rng);
  auto actions = HoldActions(s);
  actions[0].communication = std::vector<double>{0.1, -0.2, 0.3};
  const StepResult r = s.Step(w, actions);
  EXPECT_EQ(r.world.communication[0], (std::vector<double>{0.1, -0.2, 0.3}));
  const auto& listener_obs = r.observations[1];
  EXPECT_EQ(std::vector<double>(listener_obs.end() - 3, listener_obs.end()),
            (std::vector<double>{0.1, -0.2, 0.3}));
}

TEST(Step, ContactForcePushesOverlappingAgentsApart) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(10);
  const WorldState w = Place(s, {{0.0, 0.0}, {0.05, 0.0}, {0.9, 0.9}}, rng);
  const StepResult r = s.Step(w, HoldActions(s));
  EXPECT_LT(r.world.entities[0].position.x, 0.0);
  EXPECT_GT(r.world.entities[1].position.x, 0.05);
}

TEST(Observe, RelativePositionBlock) {
  ScenarioConfig c = Config(ScenarioKind::kCooperativeNavigation);
  c.navigators = 2;
  const Scenario s(c);
  Rng rng(1);
  const WorldState w = Place(s, {{0, 0}, {1, 1}, {0.5, 0}, {0, -0.5}}, rng);
  const auto obs = s.Observe(w, 0);
  ASSERT_EQ(static_cast<int>(obs.size()), s.observation_size(0));
  // own vel (2), own pos (2), landmarks (4), then agent 1's offset.
  EXPECT_EQ(obs[2], 0.0);
  EXPECT_EQ(obs[4], 0.5);
  EXPECT_EQ(obs[7], -0.5);
  EXPECT_EQ(obs[8], 1.0);
  EXPECT_EQ(obs[9], 1.0);
}

TEST(Observe, ListenerDoesNotSeeGoal) {
  const Scenario s(Config(ScenarioKind::kCooperativeCommunication));
  Rng rng(3);
  WorldState w = s.Reset(rng);
  std::vector<std::vector<double>> listener, speaker;
  for (int g = 0; g < 3; ++g) {
    w.payload = GoalPayload{g};
    listener.push_back(s.Observe(w, 1));
    speaker.push_back(s.Observe(w, 0));
  }
  EXPECT_EQ(listener[0], listener[1]);
  EXPECT_EQ(listener[1], listener[2]);
  EXPECT_NE(speaker[0], speaker[1]);
}

TEST(Observe, LengthConstantAcrossSteps) {
  for (auto kind : {ScenarioKind::kCooperativeNavigation,
                    ScenarioKind::kCooperativeCommunication,
                    ScenarioKind::kPredatorPrey, ScenarioKind::kCovertCommunication}) {
    const Scenario s(Config(kind));
    Rng rng(4), act_rng(5);
    WorldState w = s.Reset(rng);
    for (int t = 0; t < 25; ++t) {
      StepResult r = s.Step(w, RandomActions(s, act_rng));
      for (int a = 0; a < s.num_agents(); ++a) {
        ASSERT_EQ(static_cast<int>(r.observations[a].size()), s.observation_size(a));
      }
      w = std::move(r.world);
    }
  }
}

TEST(Observe, CovertRolesSeeKeyOnlyWhenEntitled) {
  const Scenario s(Config(ScenarioKind::kCovertCommunication));
  Rng rng(6);
  WorldState w = s.Reset(rng);
  const auto before = s.ObserveAll(w);
  std::get<CovertPayload>(w.payload).key[0] += 0.5;
  const auto after = s.ObserveAll(w);
  EXPECT_NE(before[0], after[0]);
  EXPECT_NE(before[1], after[1]);
  EXPECT_EQ(before[2], after[2]);
}

TEST(RewardCooperativeNavigation, AgentsOnLandmarksScoreZero) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(1);
  const WorldState w = Place(
      s, {{-0.5, 0}, {0, 0.5}, {0.5, 0}, {-0.5, 0}, {0, 0.5}, {0.5, 0}}, rng);
  EXPECT_EQ(RewardCooperativeNavigation(w, {}), (std::vector<double>{0, 0, 0}));
}

TEST(RewardCooperativeNavigation, MinDistanceByHand) {
  ScenarioConfig c = Config(ScenarioKind::kCooperativeNavigation);
  c.navigators = 2;
  const Scenario s(c);
  Rng rng(1);
  // Both landmarks at the origin; nearest agent is at distance 1.
  const WorldState w = Place(s, {{0, 1}, {0, 2}, {0, 0}, {0, 0}}, rng);
  EXPECT_EQ(RewardCooperativeNavigation(w, {}), (std::vector<double>{-2, -2}));

  ScenarioConfig one = c;
  one.navigators = 1;
  const Scenario s1(one);
  const WorldState w1 = Place(s1, {{0, 1}, {0, 0}}, rng);
  EXPECT_EQ(RewardCooperativeNavigation(w1, {}), (std::vector<double>{-1}));
}

TEST(RewardCooperativeNavigation, StackedAgentsPayPerPair) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(1);
  const WorldState w = Place(s, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}, rng);
  // Three pairs; every agent belongs to two of them.
  EXPECT_EQ(RewardCooperativeNavigation(w, {}), (std::vector<double>{-2, -2, -2}));
}

TEST(RewardCooperativeCommunication, Examples) {
  const Scenario s(Config(ScenarioKind::kCooperativeCommunication));
  Rng rng(1);
  WorldState w = Place(s, {{0.9, 0.9}, {0.2, 0.3}, {0.2, 0.3}, {1, 1}, {-1, -1}}, rng);
  w.payload = GoalPayload{0};
  EXPECT_EQ(RewardCooperativeCommunication(w), (std::vector<double>{0, 0}));
  w.entities[1].position = {0.2, 1.3};
  const auto r = RewardCooperativeCommunication(w);
  EXPECT_DOUBLE_EQ(r[0], -1.0);
  EXPECT_EQ(r[0], r[1]);
}

TEST(RewardPredatorPrey, NoEventsNoReward) {
  const Scenario s(Config(ScenarioKind::kPredatorPrey));
  Rng rng(1);
  std::vector<Vec2> spread;
  for (int a = 0; a < 8; ++a) spread.push_back({-0.9 + 0.25 * a, 0.0});
  const WorldState w = Place(s, spread, rng);
  const auto collisions = DetectCollisions(w);
  EXPECT_TRUE(collisions.empty());
  EXPECT_EQ(RewardPredatorPrey(w, collisions, {}), std::vector<double>(8, 0.0));
}

TEST(RewardPredatorPrey, GreenAndBlueCaptures) {
  ScenarioConfig c = Config(ScenarioKind::kPredatorPrey);
  c.predators = 2;
  c.prey = 2;
  c.green_prey = 1;
  const Scenario s(c);
  Rng rng(1);
  // Predator 0 touches the green prey (2); blue prey (3) far away.
  WorldState w = Place(s, {{0, 0}, {0.5, 0.5}, {0.01, 0}, {-0.5, -0.5}}, rng);
  auto r = RewardPredatorPrey(w, DetectCollisions(w), {});
  EXPECT_EQ(r, (std::vector<double>{100, 100, -100, 0}));
  CaptureCount cc = CountCaptures(w, DetectCollisions(w));
  EXPECT_EQ(cc.green, 1);
  EXPECT_EQ(cc.blue, 0);

  // Now predator 1 also touches the blue prey.
  w.entities[3].position = {0.5, 0.51};
  r = RewardPredatorPrey(w, DetectCollisions(w), {});
  EXPECT_EQ(r, (std::vector<double>{110, 110, -100, -10}));
  cc = CountCaptures(w, DetectCollisions(w));
  EXPECT_EQ(cc.blue, 1);
}

TEST(RewardPredatorPrey, PreyTouchingPreyIsNotACapture) {
  ScenarioConfig c = Config(ScenarioKind::kPredatorPrey);
  c.predators = 1;
  c.prey = 2;
  const Scenario s(c);
  Rng rng(1);
  const WorldState w = Place(s, {{0.8, 0.8}, {0, 0}, {0.01, 0}}, rng);
  EXPECT_EQ(RewardPredatorPrey(w, DetectCollisions(w), {}), (std::vector<double>{0, 0, 0}));
}

TEST(RewardPredatorPrey, BoundaryPenaltyOnlyForPrey) {
  ScenarioConfig c = Config(ScenarioKind::kPredatorPrey);
  c.predators = 1;
  c.prey = 1;
  const Scenario s(c);
  Rng rng(1);
  const WorldState w = Place(s, {{1.5, 0}, {1.5, -1.2}}, rng);
  const auto r = RewardPredatorPrey(w, DetectCollisions(w), {});
  EXPECT_EQ(r[0], 0.0);
  EXPECT_DOUBLE_EQ(r[1], -(10 * 0.25 + 10 * 0.04));
}

TEST(RewardPredatorPrey, SpeedRatios) {
  const PhysicsConfig p;
  EXPECT_EQ(p.green_prey_max_speed, 3.0 * p.predator_max_speed);
  EXPECT_EQ(p.blue_prey_max_speed, 1.3 * p.predator_max_speed);
  const Scenario s(Config(ScenarioKind::kPredatorPrey));
  Rng rng(1);
  const WorldState w = s.Reset(rng);
  EXPECT_EQ(w.entities[5].max_speed, 3.0 * w.entities[0].max_speed);
  EXPECT_EQ(w.entities[6].max_speed, 1.3 * w.entities[0].max_speed);
}

TEST(RewardPredatorPrey, PredatorsShareRewardUnderRandomPlay) {
  const Scenario s(Config(ScenarioKind::kPredatorPrey));
  Rng rng(21), act_rng(22);
  for (int episode = 0; episode < 30; ++episode) {
    WorldState w = s.Reset(rng);
    for (bool done = false; !done;) {
      StepResult r = s.Step(w, RandomActions(s, act_rng));
      for (int a = 1; a < 5; ++a) ASSERT_EQ(r.rewards[a], r.rewards[0]);
      done = r.terminal;
      w = std::move(r.world);
    }
  }
}

TEST(RewardCovertCommunication, Examples) {
  const Scenario s(Config(ScenarioKind::kCovertCommunication));
  Rng rng(1);
  WorldState w = s.Reset(rng);
  auto& p = std::get<CovertPayload>(w.payload);
  p.message = {0.5, -0.5, 0.25, 0.0};
  w.communication[1] = p.message;                 // listener exact
  w.communication[2] = {-0.5, 0.5, -0.75, 1.0};   // adversary wrong
  auto r = RewardCovertCommunication(w);
  EXPECT_DOUBLE_EQ(r[0], 1.0 + 1.0 + 1.0 + 1.0);
  EXPECT_EQ(r[0], r[1]);
  EXPECT_DOUBLE_EQ(r[2], -4.0);

  w.communication[1] = w.communication[2];
  r = RewardCovertCommunication(w);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_EQ(r[1], 0.0);
}

TEST(RewardCovertCommunication, AdversaryNeverPositive) {
  const Scenario s(Config(ScenarioKind::kCovertCommunication));
  Rng rng(31), act_rng(32);
  for (int episode = 0; episode < 20; ++episode) {
    WorldState w = s.Reset(rng);
    for (bool done = false; !done;) {
      StepResult r = s.Step(w, RandomActions(s, act_rng));
      ASSERT_LE(r.rewards[2], 0.0);
      ASSERT_EQ(r.rewards[0], r.rewards[1]);
      done = r.terminal;
      w = std::move(r.world);
    }
  }
}

TEST(DetectCollisions, StrictInequality) {
  ScenarioConfig c = Config(ScenarioKind::kCooperativeNavigation);
  c.navigators = 2;
  const Scenario s(c);
  Rng rng(1);
  WorldState w = Place(s, {{0, 0}, {0, 0}}, rng);
  EXPECT_EQ(DetectCollisions(w), (std::vector<AgentPair>{{0, 1}}));
  w.entities[1].position = {0.1, 0.0};  // exactly r_0 + r_1 apart
  EXPECT_TRUE(DetectCollisions(w).empty());
  w.entities[1].position = {0.8, -0.8};
  EXPECT_TRUE(DetectCollisions(w).empty());
}

TEST(Episode, DeterministicGivenSeedAndActions) {
  const Scenario s(Config(ScenarioKind::kPredatorPrey));
  auto run = [&] {
    Rng rng(77), act_rng(78);
    WorldState w = s.Reset(rng);
    std::vector<double> rewards;
    for (bool done = false; !done;) {
      StepResult r = s.Step(w, RandomActions(s, act_rng));
      rewards.insert(rewards.end(), r.rewards.begin(), r.rewards.end());
      done = r.terminal;
      w = std::move(r.world);
    }
    return std::make_pair(w, rewards);
  };
  EXPECT_EQ(run(), run());
}

TEST(TraceRecord, CarriesStepFields) {
  const Scenario s(Config(ScenarioKind::kCooperativeNavigation));
  Rng rng(1);
  const WorldState w = s.Reset(rng);
  const auto actions = HoldActions(s);
  const StepResult r = s.Step(w, actions);
  std::vector<std::vector<std::vector<double>>> biases(3, std::vector<std::vector<double>>(3));
  biases[0][1] = {0.1, 0, 0, 0, 0};
  const auto rec = TraceRecord(r.world, actions, r.rewards, &biases);
  EXPECT_EQ(rec["timestep"], 1);
  EXPECT_EQ(rec["positions"].size(), 6u);
  EXPECT_EQ(rec["actions"].size(), 3u);
  EXPECT_EQ(rec["rewards"].size(), 3u);
  EXPECT_EQ(rec["biases"][0][1][0], 0.1);
}

}  // namespace
}  // namespace f2ddpg::env
