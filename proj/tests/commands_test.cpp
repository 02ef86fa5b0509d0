#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "f2ddpg/commands.hpp"

namespace f2ddpg::harness {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("f2ddpg_cmd_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    std::ofstream(root_ / "run.cfg") << "scenario = predator_prey\n"
                                        "predators = 2\nprey = 1\n"
                                        "batch_size = 8\nbuffer_capacity = 200\n"
                                        "actor_hidden = 8\ncritic_hidden = 8\n"
                                        "episodes = 2\neval_every = 2\n"
                                        "eval_episodes = 3\neval_seed = 77\n"
                                        "checkpoint_every = 1\n";
  }
  void TearDown() override { fs::remove_all(root_); }

  int Train(const std::string& out, std::optional<std::int64_t> episodes = {},
            std::string resume = {}) {
    TrainOptions o;
    if (resume.empty()) o.config_path = (root_ / "run.cfg").string();
    o.resume_path = resume;
    o.out_dir = (root_ / out).string();
    o.seed = 5;
    o.episodes = episodes;
    std::ostringstream log;
    return CmdTrain(o, log);
  }

  fs::path root_;
};

TEST_F(CommandsTest, TrainWritesEveryFile) {
  ASSERT_EQ(Train("a"), 0);
  for (const char* f : {"config.txt", "rewards.csv", "diagnostics.jsonl", "train_eval.csv",
                        "similarity.csv", "checkpoint.bin", "run.log"}) {
    EXPECT_TRUE(fs::exists(root_ / "a" / f)) << f;
  }
  const auto rewards = Lines(Slurp(root_ / "a" / "rewards.csv"));
  ASSERT_EQ(rewards.size(), 3u);
  EXPECT_EQ(rewards[0], "episode,return_0,return_1,return_2");
  EXPECT_EQ(Split(rewards[1])[0], "0");
  EXPECT_EQ(Split(rewards[2])[0], "1");
  EXPECT_NE(Slurp(root_ / "a" / "config.txt").find("seed = 5\n"), std::string::npos);
}

TEST_F(CommandsTest, ConfigEchoIsWrittenEvenWhenTrainingFails) {
  // Out directory blocked for rewards.csv but not for config.txt.
  fs::create_directories(root_ / "b" / "rewards.csv");
  EXPECT_NE(Train("b"), 0);
  EXPECT_TRUE(fs::is_regular_file(root_ / "b" / "config.txt"));
}

TEST_F(CommandsTest, SameSeedGivesIdenticalRewards) {
  ASSERT_EQ(Train("a"), 0);
  ASSERT_EQ(Train("b"), 0);
  EXPECT_EQ(Slurp(root_ / "a" / "rewards.csv"), Slurp(root_ / "b" / "rewards.csv"));
  EXPECT_EQ(Slurp(root_ / "a" / "checkpoint.bin"), Slurp(root_ / "b" / "checkpoint.bin"));
}

TEST_F(CommandsTest, ResumeContinuesEpisodeCounter) {
  ASSERT_EQ(Train("a"), 0);
  ASSERT_EQ(Train("a", 4, (root_ / "a" / "checkpoint.bin").string()), 0);
  const auto rewards = Lines(Slurp(root_ / "a" / "rewards.csv"));
  ASSERT_EQ(rewards.size(), 5u);
  for (int e = 0; e < 4; ++e) EXPECT_EQ(Split(rewards[e + 1])[0], std::to_string(e));
  std::ostringstream out, err;
  ASSERT_EQ(CmdInspect((root_ / "a" / "checkpoint.bin").string(), out, err), 0);
  EXPECT_NE(out.str().find("episode: 4"), std::string::npos) << out.str();
}

TEST_F(CommandsTest, EvalReproducesTrainingEvaluation) {
  ASSERT_EQ(Train("a"), 0);
  const auto train_eval = Lines(Slurp(root_ / "a" / "train_eval.csv"));
  ASSERT_EQ(train_eval.size(), 2u);
  const auto row = Split(train_eval[1]);

  EvalOptions o;
  o.checkpoint_path = (root_ / "a" / "checkpoint.bin").string();
  o.episodes = 3;
  o.seed = 77;
  o.out_dir = (root_ / "e").string();
  o.trace = true;
  std::ostringstream log;
  ASSERT_EQ(CmdEval(o, log), 0) << log.str();
  const std::string summary = Slurp(root_ / "e" / "eval_summary.csv");
  for (int a = 0; a < 3; ++a) {
    const std::string key = "mean_return_" + std::to_string(a) + ",";
    const auto pos = summary.find(key);
    ASSERT_NE(pos, std::string::npos);
    const double value = std::stod(summary.substr(pos + key.size()));
    EXPECT_NEAR(value, std::stod(row[1 + a]), 1e-4 * (1 + std::abs(value)));
  }
  EXPECT_EQ(Lines(Slurp(root_ / "e" / "eval.csv")).size(), 4u);
  EXPECT_EQ(Lines(Slurp(root_ / "e" / "trace.jsonl")).size(), 3u * 25u);
}

TEST_F(CommandsTest, CorruptCheckpointFails) {
  ASSERT_EQ(Train("a"), 0);
  const fs::path ck = root_ / "a" / "checkpoint.bin";
  std::string bytes = Slurp(ck);
  bytes[0] = 'Z';
  std::ofstream(ck, std::ios::binary | std::ios::trunc) << bytes;
  std::ostringstream out, err;
  EXPECT_NE(CmdInspect(ck.string(), out, err), 0);
  EXPECT_NE(err.str().find("magic"), std::string::npos);
  EvalOptions o;
  o.checkpoint_path = ck.string();
  o.out_dir = (root_ / "e").string();
  std::ostringstream log;
  EXPECT_NE(CmdEval(o, log), 0);
  EXPECT_NE(Train("a", 3, ck.string()), 0);
}

TEST_F(CommandsTest, InspectIsDeterministic) {
  ASSERT_EQ(Train("a"), 0);
  const std::string ck = (root_ / "a" / "checkpoint.bin").string();
  std::ostringstream o1, o2, err;
  ASSERT_EQ(CmdInspect(ck, o1, err), 0);
  ASSERT_EQ(CmdInspect(ck, o2, err), 0);
  EXPECT_EQ(o1.str(), o2.str());
  EXPECT_NE(o1.str().find("config:"), std::string::npos);
  EXPECT_NE(o1.str().find("actor"), std::string::npos);
}

TEST_F(CommandsTest, MissingInputsFail) {
  std::ostringstream out, err, log;
  EXPECT_NE(CmdInspect((root_ / "none.bin").string(), out, err), 0);
  TrainOptions t;
  t.config_path = (root_ / "none.cfg").string();
  t.out_dir = (root_ / "x").string();
  EXPECT_NE(CmdTrain(t, log), 0);
  t.config_path.clear();
  t.out_dir.clear();
  EXPECT_NE(CmdTrain(t, log), 0);
}

TEST_F(CommandsTest, InvalidConfigFailsNamingKey) {
  std::ofstream(root_ / "run.cfg", std::ios::app) << "gamma = 1.5\n";
  std::ostringstream log;
  TrainOptions o;
  o.config_path = (root_ / "run.cfg").string();
  o.out_dir = (root_ / "a").string();
  EXPECT_NE(CmdTrain(o, log), 0);
  EXPECT_NE(log.str().find("gamma"), std::string::npos);
}

}  // namespace
}  // namespace f2ddpg::harness
