#include "f2ddpg/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::harness {

namespace {

class Writer {
 public:
  void U64(std::uint64_t v) { Raw(v); }
  void I64(std::int64_t v) { Raw(static_cast<std::uint64_t>(v)); }
  void F64(double v) { Raw(std::bit_cast<std::uint64_t>(v)); }
  void Bytes(const std::string& s) {
    U64(s.size());
    out_ += s;
  }

  void Network(const nn::MlpParams& p) {
    const auto dims = p.dims();
    U64(p.layers.size());
    for (int d : dims) U64(static_cast<std::uint64_t>(d));
    Layers(p.layers);
  }

  void Optimizer(const nn::AdamState& s) {
    I64(s.step);
    F64(s.options.beta1);
    F64(s.options.beta2);
    F64(s.options.epsilon);
    Layers(s.first_moment);
    Layers(s.second_moment);
  }

  std::string Take() { return std::move(out_); }

 private:
  void Raw(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out_.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }

  void Layers(const std::vector<nn::DenseLayer>& layers) {
    for (const auto& layer : layers) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) F64(layer.weight(r, c));
      }
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) F64(layer.bias[r]);
    }
  }

  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
    }
    pos_ += 8;
    return v;
  }
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  double F64() { return std::bit_cast<double>(U64()); }

  std::string Bytes() {
    const std::uint64_t n = U64();
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void Magic() {
    Need(sizeof(kCheckpointMagic));
    if (std::memcmp(bytes_.data() + pos_, kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
      throw FormatError("not a checkpoint: bad magic string");
    }
    pos_ += sizeof(kCheckpointMagic);
  }

  nn::MlpParams Network() {
    const std::uint64_t layers = U64();
    if (layers == 0 || layers > 64) throw FormatError("implausible layer count in checkpoint");
    std::vector<int> dims;
    for (std::uint64_t k = 0; k <= layers; ++k) {
      const std::uint64_t d = U64();
      if (d == 0 || d > (1u << 20)) throw FormatError("implausible layer width in checkpoint");
      dims.push_back(static_cast<int>(d));
    }
    nn::MlpParams p = nn::MlpParams::Zeros(dims);
    Layers(p.layers);
    return p;
  }

  nn::AdamState Optimizer(const nn::MlpParams& shape) {
    nn::AdamState s = nn::AdamState::For(shape);
    s.step = I64();
    s.options.beta1 = F64();
    s.options.beta2 = F64();
    s.options.epsilon = F64();
    Layers(s.first_moment);
    Layers(s.second_moment);
    return s;
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  void Need(std::uint64_t n) const {
    if (n > bytes_.size() - pos_) throw FormatError("checkpoint is truncated");
  }

  void Layers(std::vector<nn::DenseLayer>& layers) {
    for (auto& layer : layers) {
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = F64();
      }
      for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias[r] = F64();
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

Rng DecodeRng(const std::string& text) {
  Rng rng;
  std::istringstream in(text);
  in >> rng;
  if (in.fail()) throw FormatError("corrupt random stream state in checkpoint");
  return rng;
}

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& checkpoint) {
  Writer w;
  std::string magic(kCheckpointMagic, sizeof(kCheckpointMagic));
  std::string out = magic;
  w.U64(kCheckpointVersion);
  w.Bytes(checkpoint.config_text);
  const auto& s = checkpoint.state;
  w.I64(s.episode);
  w.I64(s.global_step);
  w.I64(s.updates);
  w.U64(s.learners.size());
  for (const auto& l : s.learners) {
    w.Network(l.actor);
    w.Network(l.critic);
    w.Network(l.target_actor);
    w.Network(l.target_critic);
    w.Optimizer(l.actor_optimizer);
    w.Optimizer(l.critic_optimizer);
    w.F64(l.noise_scale);
  }
  for (const Rng* rng : {&s.env_rng, &s.noise_rng, &s.sample_rng, &s.bias_rng}) {
    w.Bytes(SaveRngState(*rng));
  }
  return out + w.Take();
}

Checkpoint DecodeCheckpoint(const std::string& bytes) {
  Reader r(bytes);
  r.Magic();
  const std::uint64_t version = r.U64();
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint format version " + std::to_string(version) +
                      " is not supported (this build reads version " +
                      std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint ck;
  ck.config_text = r.Bytes();
  auto& s = ck.state;
  s.episode = r.I64();
  s.global_step = r.I64();
  s.updates = r.I64();
  const std::uint64_t agents = r.U64();
  if (agents > 4096) throw FormatError("implausible agent count in checkpoint");
  for (std::uint64_t a = 0; a < agents; ++a) {
    marl::AgentLearner l;
    l.actor = r.Network();
    l.critic = r.Network();
    l.target_actor = r.Network();
    l.target_critic = r.Network();
    l.actor_optimizer = r.Optimizer(l.actor);
    l.critic_optimizer = r.Optimizer(l.critic);
    l.noise_scale = r.F64();
    s.learners.push_back(std::move(l));
  }
  s.env_rng = DecodeRng(r.Bytes());
  s.noise_rng = DecodeRng(r.Bytes());
  s.sample_rng = DecodeRng(r.Bytes());
  s.bias_rng = DecodeRng(r.Bytes());
  if (!r.AtEnd()) throw FormatError("trailing bytes after checkpoint payload");
  return ck;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& checkpoint) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + tmp + "' for writing");
    const std::string bytes = EncodeCheckpoint(checkpoint);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw FormatError("cannot move checkpoint into place: " + ec.message());
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return DecodeCheckpoint(bytes);
}

}  // namespace f2ddpg::harness
