#pragma once

// Dense ReLU networks with exact reverse-mode gradients and Adam.
//
// Batched calls put one sample per column: an input matrix is
// (input_dim x batch) and the output is (output_dim x batch). The
// single-vector overloads are thin wrappers over a batch of one.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "f2ddpg/rng.hpp"

namespace f2ddpg::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }
};

// Hidden layers use ReLU, the last layer is linear.
struct MlpParams {
  std::vector<DenseLayer> layers;

  int input_dim() const;
  int output_dim() const;
  std::vector<int> dims() const;
  std::int64_t parameter_count() const;

  // Zero-filled parameters with the given layer widths.
  static MlpParams Zeros(std::span<const int> dims);

  bool operator==(const MlpParams& other) const;
};

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  std::int64_t step = 0;
  AdamOptions options;

  static AdamState For(const MlpParams& params, AdamOptions options = {});

  bool operator==(const AdamState& other) const;
};

// Per-layer values retained by a forward pass; one column per sample.
struct ForwardTrace {
  Matrix input;
  std::vector<Matrix> pre_activations;
  std::vector<Matrix> post_activations;

  int batch_size() const { return static_cast<int>(input.cols()); }
};

struct GradientBundle {
  std::vector<DenseLayer> params;  // summed over the batch
  Matrix input;                    // input_dim x batch
};

// Weights ~ U[-b, b] with b = sqrt(6 / (fan_in + fan_out)); biases zero.
// Throws ConfigError for fewer than two dims or a nonpositive width.
MlpParams XavierUniformInit(std::span<const int> dims, Rng& rng);

// Throws ShapeError if the input height does not match the first layer.
Matrix Forward(const MlpParams& params, const Matrix& input,
               ForwardTrace* trace = nullptr);
Vector Forward(const MlpParams& params, const Vector& input,
               ForwardTrace* trace = nullptr);

struct BackwardOptions {
  // Input gradients are always produced; parameter gradients can be skipped
  // when only the input gradient is consumed.
  bool parameter_gradients = true;
};

// output_grad is (output_dim x batch), matching the trace.
GradientBundle Backward(const MlpParams& params, const ForwardTrace& trace,
                        const Matrix& output_grad,
                        BackwardOptions options = {});
GradientBundle Backward(const MlpParams& params, const ForwardTrace& trace,
                        const Vector& output_grad,
                        BackwardOptions options = {});

// One bias-corrected Adam step. A gradient that is zero everywhere only
// advances the step counter. Throws NumericError naming the first layer
// with a non-finite gradient, leaving params and state untouched.
void AdamStep(MlpParams& params, const GradientBundle& grads,
              AdamState& state, double learning_rate);

// target <- tau * online + (1 - tau) * target, elementwise.
void SoftUpdate(MlpParams& target, const MlpParams& online, double tau);

// Max-norm over all parameter entries of (a - b).
double MaxAbsDifference(const MlpParams& a, const MlpParams& b);

}  // namespace f2ddpg::nn
