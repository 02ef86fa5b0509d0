#include "f2ddpg/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::harness {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const char* expected) {
  throw ConfigError("key '" + key + "': expected " + expected + ", got '" +
                    value + "'");
}

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    BadValue(key, v, "a finite real number");
  }
  return out;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    BadValue(key, v, "an integer");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  BadValue(key, v, "true or false");
}

std::vector<int> ParseList(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(ParseInt<int>(key, Trim(item)));
  if (out.empty()) BadValue(key, v, "a comma-separated list of widths");
  return out;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string FormatList(const std::vector<int>& v) {
  std::string out;
  for (size_t k = 0; k < v.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(v[k]);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Ref>
Field DoubleField(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& k, const std::string& v) {
            ref(c) = ParseDouble(k, v);
          },
          [ref](const RunConfig& c) {
            return FormatDouble(ref(const_cast<RunConfig&>(c)));
          }};
}

template <typename Int, typename Ref>
Field IntField(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& k, const std::string& v) {
            ref(c) = ParseInt<Int>(k, v);
          },
          [ref](const RunConfig& c) {
            return std::to_string(ref(const_cast<RunConfig&>(c)));
          }};
}

template <typename Ref>
Field BoolField(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& k, const std::string& v) {
            ref(c) = ParseBool(k, v);
          },
          [ref](const RunConfig& c) {
            return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false");
          }};
}

template <typename Ref>
Field ListField(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& k, const std::string& v) {
            ref(c) = ParseList(k, v);
          },
          [ref](const RunConfig& c) {
            return FormatList(ref(const_cast<RunConfig&>(c)));
          }};
}

template <typename Ref>
Field VariantField(std::string key, Ref ref) {
  return {std::move(key),
          [ref](RunConfig& c, const std::string& k, const std::string& v) {
            try {
              ref(c) = marl::ParseVariant(v);
            } catch (const ConfigError&) {
              BadValue(k, v, "one of maddpg, m3ddpg, all_plus, random_sign, f2ddpg");
            }
          },
          [ref](const RunConfig& c) {
            return marl::VariantName(ref(const_cast<RunConfig&>(c)));
          }};
}

#define F2_REF(expr) [](RunConfig& c) -> auto& { return c.expr; }

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      {"scenario",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.scenario.kind = env::ParseScenarioName(v);
         } catch (const ConfigError&) {
           BadValue(k, v,
                    "one of cooperative_navigation, cooperative_communication, "
                    "predator_prey, covert_communication");
         }
       },
       [](const RunConfig& c) { return env::ScenarioName(c.scenario.kind); }},
      IntField<int>("navigators", F2_REF(scenario.navigators)),
      IntField<int>("predators", F2_REF(scenario.predators)),
      IntField<int>("prey", F2_REF(scenario.prey)),
      IntField<int>("green_prey", F2_REF(scenario.green_prey)),
      IntField<int>("horizon", F2_REF(scenario.horizon)),
      DoubleField("dt", F2_REF(scenario.physics.dt)),
      DoubleField("damping", F2_REF(scenario.physics.damping)),
      DoubleField("contact_stiffness", F2_REF(scenario.physics.contact_stiffness)),
      DoubleField("agent_radius", F2_REF(scenario.physics.agent_radius)),
      DoubleField("landmark_radius", F2_REF(scenario.physics.landmark_radius)),
      DoubleField("agent_max_speed", F2_REF(scenario.physics.agent_max_speed)),
      DoubleField("agent_accel", F2_REF(scenario.physics.agent_accel)),
      DoubleField("predator_max_speed", F2_REF(scenario.physics.predator_max_speed)),
      DoubleField("predator_accel", F2_REF(scenario.physics.predator_accel)),
      DoubleField("blue_prey_max_speed", F2_REF(scenario.physics.blue_prey_max_speed)),
      DoubleField("blue_prey_accel", F2_REF(scenario.physics.blue_prey_accel)),
      DoubleField("green_prey_max_speed", F2_REF(scenario.physics.green_prey_max_speed)),
      DoubleField("green_prey_accel", F2_REF(scenario.physics.green_prey_accel)),
      DoubleField("collision_penalty", F2_REF(scenario.rewards.collision_penalty)),
      DoubleField("blue_capture_reward", F2_REF(scenario.rewards.blue_capture_reward)),
      DoubleField("green_capture_reward", F2_REF(scenario.rewards.green_capture_reward)),
      DoubleField("boundary_penalty_scale", F2_REF(scenario.rewards.boundary_penalty_scale)),
      VariantField("variant", F2_REF(variant)),
      VariantField("opponent_variant", F2_REF(opponent_variant)),
      DoubleField("ally_step", F2_REF(bias.ally_step)),
      DoubleField("enemy_step", F2_REF(bias.enemy_step)),
      DoubleField("gamma", F2_REF(train.gamma)),
      DoubleField("tau", F2_REF(train.tau)),
      DoubleField("actor_lr", F2_REF(train.actor_lr)),
      DoubleField("critic_lr", F2_REF(train.critic_lr)),
      IntField<int>("batch_size", F2_REF(train.batch_size)),
      IntField<std::int64_t>("episodes", F2_REF(train.episodes)),
      IntField<std::int64_t>("buffer_capacity", F2_REF(train.buffer_capacity)),
      DoubleField("noise_initial", F2_REF(train.noise_initial)),
      DoubleField("noise_final", F2_REF(train.noise_final)),
      DoubleField("noise_decay_fraction", F2_REF(train.noise_decay_fraction)),
      ListField("actor_hidden", F2_REF(train.network.actor_hidden)),
      ListField("critic_hidden", F2_REF(train.network.critic_hidden)),
      DoubleField("adam_beta1", F2_REF(train.adam.beta1)),
      DoubleField("adam_beta2", F2_REF(train.adam.beta2)),
      DoubleField("adam_epsilon", F2_REF(train.adam.epsilon)),
      IntField<std::uint64_t>("seed", F2_REF(train.seed)),
      BoolField("similarity_diagnostics", F2_REF(train.similarity_diagnostics)),
      IntField<std::int64_t>("eval_every", F2_REF(eval_every)),
      IntField<int>("eval_episodes", F2_REF(eval_episodes)),
      IntField<std::uint64_t>("eval_seed", F2_REF(eval_seed)),
      IntField<std::int64_t>("checkpoint_every", F2_REF(checkpoint_every)),
      BoolField("write_diagnostics", F2_REF(write_diagnostics)),
  };
  return fields;
}

#undef F2_REF

}  // namespace

bool RunConfig::operator==(const RunConfig& other) const {
  return SerializeConfig(*this) == SerializeConfig(other);
}

void ValidateConfig(const RunConfig& config) {
  env::Scenario scenario(config.scenario);
  config.train.Validate();
  config.bias.Validate();
  if (config.eval_every < 0) throw ConfigError("eval_every must be nonnegative");
  if (config.eval_episodes < 1) throw ConfigError("eval_episodes must be at least 1");
  if (config.checkpoint_every < 0) {
    throw ConfigError("checkpoint_every must be nonnegative");
  }
}

RunConfig ParseConfig(const std::string& text) {
  std::map<std::string, const Field*> by_key;
  for (const auto& f : Fields()) by_key[f.key] = &f;

  RunConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    const std::string value = Trim(trimmed.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError("unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("repeated key '" + key + "'");
    it->second->set(config, key, value);
  }
  ValidateConfig(config);
  return config;
}

std::string SerializeConfig(const RunConfig& config) {
  std::string out;
  for (const auto& f : Fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

std::vector<marl::BiasVariant> AgentVariants(const RunConfig& config,
                                             const env::Scenario& scenario) {
  std::vector<marl::BiasVariant> variants;
  for (int team : scenario.team_of()) {
    variants.push_back(team == 0 ? config.variant : config.opponent_variant);
  }
  return variants;
}

}  // namespace f2ddpg::harness
