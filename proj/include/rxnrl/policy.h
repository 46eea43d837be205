//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNRL_POLICY_H_
#define RXNRL_POLICY_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rxnrl/fingerprint.h"

namespace rxnrl {

struct PolicyShape {
  int n_bits = kDefaultFingerprintBits;
  int d_in = 64;
  int hidden = 128;
  int d_score = 64;

  friend bool operator==(const PolicyShape &, const PolicyShape &) = default;
};

// Offsets of the parameter blocks inside one flat vector.
struct PolicyLayout {
  explicit PolicyLayout(const PolicyShape &shape);

  PolicyShape shape;
  std::size_t w_embed;  // d_in x (n_bits + 1)
  std::size_t b_embed;  // d_in
  std::size_t w_x;      // 4h x d_in, gate rows ordered i, f, g, o
  std::size_t w_h;      // 4h x h
  std::size_t b_gate;   // 4h
  std::size_t u_h;      // d_score x h
  std::size_t u_z;      // d_score x n_bits
  std::size_t b_score;  // d_score
  std::size_t w_score;  // d_score
  std::size_t w_value;  // h
  std::size_t b_value;  // 1
  std::size_t total;
};

/**
 * Weights of the recurrent policy/value network, stored as one flat vector
 * (column-major blocks, see PolicyLayout).
 *
 *   e_t   = tanh(W_embed [bits_t ; t/M] + b_embed)
 *   (h,c) = LSTM(e_t, h_{t-1}, c_{t-1})
 *   u_a   = tanh(U_h h_t + U_z after_a + b_score)
 *   logit = w_score . u_a          (softmax over the legal actions)
 *   V     = w_value . h_t + b_value
 */
class PolicyParams {
public:
  using MatMap = Eigen::Map<Eigen::MatrixXd>;
  using CMatMap = Eigen::Map<const Eigen::MatrixXd>;
  using VecMap = Eigen::Map<Eigen::VectorXd>;
  using CVecMap = Eigen::Map<const Eigen::VectorXd>;

  // All zero.
  explicit PolicyParams(const PolicyShape &shape = {});

  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, forget-gate bias 1,
  // scoring and value outputs scaled by 0.01.
  static PolicyParams random(const PolicyShape &shape, std::uint64_t seed);

  const PolicyShape &shape() const noexcept { return layout_.shape; }
  const PolicyLayout &layout() const noexcept { return layout_; }
  Eigen::VectorXd &data() noexcept { return data_; }
  const Eigen::VectorXd &data() const noexcept { return data_; }
  std::size_t size() const noexcept { return layout_.total; }

  MatMap w_embed();
  CMatMap w_embed() const;
  VecMap b_embed();
  CVecMap b_embed() const;
  MatMap w_x();
  CMatMap w_x() const;
  MatMap w_h();
  CMatMap w_h() const;
  VecMap b_gate();
  CVecMap b_gate() const;
  MatMap u_h();
  CMatMap u_h() const;
  MatMap u_z();
  CMatMap u_z() const;
  VecMap b_score();
  CVecMap b_score() const;
  VecMap w_score();
  CVecMap w_score() const;
  VecMap w_value();
  CVecMap w_value() const;
  double &b_value() { return data_[layout_.b_value]; }
  double b_value() const { return data_[layout_.b_value]; }

  bool finite() const;

private:
  PolicyLayout layout_;
  Eigen::VectorXd data_;
};

struct RecurrentState {
  Eigen::VectorXd h;
  Eigen::VectorXd c;

  static RecurrentState zeros(int hidden);
};

// Sparse view of one step's inputs.
struct StepInput {
  std::vector<int> bits;
  double step_frac = 0.0;
  std::vector<std::vector<int>> action_bits;
};

// Everything the backward pass needs from one forward step.
struct StepCache {
  StepInput input;
  Eigen::VectorXd e;
  Eigen::VectorXd i, f, g, o;
  Eigen::VectorXd c_prev, h_prev, c, tanh_c, h;
  Eigen::MatrixXd u; // d_score x k
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;
  double value = 0.0;
};

// Forward pass for one step; fills cache and returns the next state.
RecurrentState forward_step(const PolicyParams &params,
                            const RecurrentState &prev, StepInput input,
                            StepCache &cache);

struct PolicyOutput {
  std::vector<double> probs;
  double value = 0.0;
  RecurrentState next;
};

// Throws std::invalid_argument when no actions are given or a fingerprint
// length differs from the policy's n_bits.
PolicyOutput policy_step(const PolicyParams &params,
                         const RecurrentState &state,
                         const Fingerprint &observation_bits,
                         double step_frac,
                         const std::vector<Fingerprint> &afterstates);

// Per-step loss gradients with respect to the logits and the value.
struct StepGrad {
  Eigen::VectorXd d_logits;
  double d_value = 0.0;
};

// Backpropagation through time over one episode. Accumulates into grad,
// which must have the params' layout.
void backward_episode(const PolicyParams &params,
                      const std::vector<StepCache> &caches,
                      const std::vector<StepGrad> &step_grads,
                      PolicyParams &grad);

// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd &logits);

} // namespace rxnrl

#endif // RXNRL_POLICY_H_
