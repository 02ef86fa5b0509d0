#include "f2ddpg/nn.hpp"

#include <cmath>
#include <string>

#include "f2ddpg/errors.hpp"

namespace f2ddpg::nn {

namespace {

void CheckDims(std::span<const int> dims) {
  if (dims.size() < 2) {
    throw ConfigError("network needs at least an input and an output width");
  }
  for (int d : dims) {
    if (d <= 0) throw ConfigError("network widths must be positive");
  }
}

std::vector<DenseLayer> ZeroLike(const std::vector<DenseLayer>& layers) {
  std::vector<DenseLayer> out;
  out.reserve(layers.size());
  for (const auto& layer : layers) {
    out.push_back({Matrix::Zero(layer.weight.rows(), layer.weight.cols()),
                   Vector::Zero(layer.bias.size())});
  }
  return out;
}

bool SameLayers(const std::vector<DenseLayer>& a,
                const std::vector<DenseLayer>& b) {
  if (a.size() != b.size()) return false;
  for (size_t l = 0; l < a.size(); ++l) {
    if (a[l].weight.rows() != b[l].weight.rows() ||
        a[l].weight.cols() != b[l].weight.cols() ||
        a[l].bias.size() != b[l].bias.size()) {
      return false;
    }
    if (a[l].weight != b[l].weight || a[l].bias != b[l].bias) return false;
  }
  return true;
}

bool SameShapes(const std::vector<DenseLayer>& a,
                const std::vector<DenseLayer>& b) {
  if (a.size() != b.size()) return false;
  for (size_t l = 0; l < a.size(); ++l) {
    if (a[l].weight.rows() != b[l].weight.rows() ||
        a[l].weight.cols() != b[l].weight.cols() ||
        a[l].bias.size() != b[l].bias.size()) {
      return false;
    }
  }
  return true;
}

}  // namespace

int MlpParams::input_dim() const {
  return layers.empty() ? 0 : layers.front().in_dim();
}

int MlpParams::output_dim() const {
  return layers.empty() ? 0 : layers.back().out_dim();
}

std::vector<int> MlpParams::dims() const {
  std::vector<int> out;
  if (layers.empty()) return out;
  out.push_back(input_dim());
  for (const auto& layer : layers) out.push_back(layer.out_dim());
  return out;
}

std::int64_t MlpParams::parameter_count() const {
  std::int64_t count = 0;
  for (const auto& layer : layers) {
    count += layer.weight.size() + layer.bias.size();
  }
  return count;
}

MlpParams MlpParams::Zeros(std::span<const int> dims) {
  CheckDims(dims);
  MlpParams params;
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    params.layers.push_back(
        {Matrix::Zero(dims[l + 1], dims[l]), Vector::Zero(dims[l + 1])});
  }
  return params;
}

bool MlpParams::operator==(const MlpParams& other) const {
  return SameLayers(layers, other.layers);
}

AdamState AdamState::For(const MlpParams& params, AdamOptions options) {
  AdamState state;
  state.first_moment = ZeroLike(params.layers);
  state.second_moment = ZeroLike(params.layers);
  state.options = options;
  return state;
}

bool AdamState::operator==(const AdamState& other) const {
  return step == other.step && options.beta1 == other.options.beta1 &&
         options.beta2 == other.options.beta2 &&
         options.epsilon == other.options.epsilon &&
         SameLayers(first_moment, other.first_moment) &&
         SameLayers(second_moment, other.second_moment);
}

MlpParams XavierUniformInit(std::span<const int> dims, Rng& rng) {
  MlpParams params = MlpParams::Zeros(dims);
  for (auto& layer : params.layers) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(layer.in_dim() + layer.out_dim()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    // Row-major draw order so the stream is independent of storage order.
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        layer.weight(r, c) = dist(rng);
      }
    }
  }
  return params;
}

Matrix Forward(const MlpParams& params, const Matrix& input,
               ForwardTrace* trace) {
  if (params.layers.empty()) throw ShapeError("network has no layers");
  if (input.rows() != params.input_dim()) {
    throw ShapeError("network input has " + std::to_string(input.rows()) +
                     " rows, expected " + std::to_string(params.input_dim()));
  }
  const size_t depth = params.layers.size();
  if (trace != nullptr) {
    trace->input = input;
    trace->pre_activations.resize(depth);
    trace->post_activations.resize(depth);
  }
  Matrix current = input;
  for (size_t l = 0; l < depth; ++l) {
    const auto& layer = params.layers[l];
    Matrix pre = layer.weight * current;
    pre.colwise() += layer.bias;
    Matrix post = (l + 1 < depth) ? Matrix(pre.cwiseMax(0.0)) : pre;
    if (trace != nullptr) {
      trace->pre_activations[l] = std::move(pre);
      trace->post_activations[l] = post;
    }
    current = std::move(post);
  }
  return current;
}

Vector Forward(const MlpParams& params, const Vector& input,
               ForwardTrace* trace) {
  Matrix out = Forward(params, Matrix(input), trace);
  return out.col(0);
}

GradientBundle Backward(const MlpParams& params, const ForwardTrace& trace,
                        const Matrix& output_grad, BackwardOptions options) {
  const size_t depth = params.layers.size();
  if (trace.pre_activations.size() != depth ||
      trace.post_activations.size() != depth ||
      trace.input.rows() != params.input_dim()) {
    throw ShapeError("forward trace does not match the network");
  }
  for (size_t l = 0; l < depth; ++l) {
    if (trace.pre_activations[l].rows() != params.layers[l].out_dim() ||
        trace.pre_activations[l].cols() != trace.input.cols()) {
      throw ShapeError("forward trace layer " + std::to_string(l) +
                       " does not match the network");
    }
  }
  if (output_grad.rows() != params.output_dim() ||
      output_grad.cols() != trace.input.cols()) {
    throw ShapeError("output gradient shape does not match the forward trace");
  }

  GradientBundle grads;
  if (options.parameter_gradients) grads.params.resize(depth);
  Matrix delta = output_grad;
  for (size_t l = depth; l-- > 0;) {
    if (l + 1 < depth) {
      delta = delta.cwiseProduct(
          (trace.pre_activations[l].array() > 0.0).cast<double>().matrix());
    }
    const Matrix& layer_input =
        (l == 0) ? trace.input : trace.post_activations[l - 1];
    if (options.parameter_gradients) {
      grads.params[l].weight = delta * layer_input.transpose();
      grads.params[l].bias = delta.rowwise().sum();
    }
    delta = params.layers[l].weight.transpose() * delta;
  }
  grads.input = std::move(delta);
  return grads;
}

GradientBundle Backward(const MlpParams& params, const ForwardTrace& trace,
                        const Vector& output_grad, BackwardOptions options) {
  return Backward(params, trace, Matrix(output_grad), options);
}

void AdamStep(MlpParams& params, const GradientBundle& grads,
              AdamState& state, double learning_rate) {
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!SameShapes(params.layers, grads.params) ||
      !SameShapes(params.layers, state.first_moment) ||
      !SameShapes(params.layers, state.second_moment)) {
    throw ShapeError("Adam step: parameter, gradient and moment shapes differ");
  }
  bool all_zero = true;
  for (size_t l = 0; l < grads.params.size(); ++l) {
    const auto& g = grads.params[l];
    if (!g.weight.allFinite() || !g.bias.allFinite()) {
      throw NumericError("non-finite gradient in layer", static_cast<int>(l));
    }
    if (all_zero && (!g.weight.isZero(0.0) || !g.bias.isZero(0.0))) {
      all_zero = false;
    }
  }
  ++state.step;
  if (all_zero) return;

  const auto& opt = state.options;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(opt.beta1, t);
  const double correction2 = 1.0 - std::pow(opt.beta2, t);
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
    v = opt.beta2 * v + (1.0 - opt.beta2) * grad.cwiseAbs2();
    param.array() -= learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + opt.epsilon);
  };
  for (size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weight, grads.params[l].weight,
           state.first_moment[l].weight, state.second_moment[l].weight);
    update(params.layers[l].bias, grads.params[l].bias,
           state.first_moment[l].bias, state.second_moment[l].bias);
  }
}

void SoftUpdate(MlpParams& target, const MlpParams& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw ConfigError("soft update tau must lie in [0, 1]");
  }
  if (!SameShapes(target.layers, online.layers)) {
    throw ShapeError("soft update between networks of different shapes");
  }
  for (size_t l = 0; l < target.layers.size(); ++l) {
    auto& t = target.layers[l];
    const auto& o = online.layers[l];
    t.weight = tau * o.weight + (1.0 - tau) * t.weight;
    t.bias = tau * o.bias + (1.0 - tau) * t.bias;
  }
}

double MaxAbsDifference(const MlpParams& a, const MlpParams& b) {
  if (!SameShapes(a.layers, b.layers)) {
    throw ShapeError("comparing networks of different shapes");
  }
  double worst = 0.0;
  for (size_t l = 0; l < a.layers.size(); ++l) {
    worst = std::max(worst, (a.layers[l].weight - b.layers[l].weight)
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(
        worst, (a.layers[l].bias - b.layers[l].bias).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace f2ddpg::nn
