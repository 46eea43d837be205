//
// Project rxnrl - Copyright 2026 rxnrl authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnrl/policy.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rxnrl/random.h"

namespace rxnrl {

PolicyLayout::PolicyLayout(const PolicyShape &s): shape(s) {
  if (s.n_bits < 1 || s.d_in < 1 || s.hidden < 1 || s.d_score < 1)
    throw std::invalid_argument("policy dimensions must be positive");
  const std::size_t nb = s.n_bits, di = s.d_in, h = s.hidden,
                    ds = s.d_score;
  std::size_t off = 0;
  auto take = [&off](std::size_t n) {
    const std::size_t at = off;
    off += n;
    return at;
  };
  w_embed = take(di * (nb + 1));
  b_embed = take(di);
  w_x = take(4 * h * di);
  w_h = take(4 * h * h);
  b_gate = take(4 * h);
  u_h = take(ds * h);
  u_z = take(ds * nb);
  b_score = take(ds);
  w_score = take(ds);
  w_value = take(h);
  b_value = take(1);
  total = off;
}

PolicyParams::PolicyParams(const PolicyShape &shape)
    : layout_(shape), data_(Eigen::VectorXd::Zero(layout_.total)) { }

PolicyParams PolicyParams::random(const PolicyShape &shape,
                                  std::uint64_t seed) {
  PolicyParams p(shape);
  Rng rng(seed);
  auto fill = [&rng](auto &&block, double scale) {
    for (Eigen::Index k = 0; k < block.size(); ++k)
      block.data()[k] = scale * (2.0 * rng.uniform() - 1.0);
  };
  const PolicyShape &s = shape;
  fill(p.w_embed(), 1.0 / std::sqrt(64.0));
  fill(p.w_x(), 1.0 / std::sqrt(static_cast<double>(s.d_in)));
  fill(p.w_h(), 1.0 / std::sqrt(static_cast<double>(s.hidden)));
  p.b_gate().segment(s.hidden, s.hidden).setOnes();
  fill(p.u_h(), 1.0 / std::sqrt(static_cast<double>(s.hidden)));
  fill(p.u_z(), 1.0 / std::sqrt(64.0));
  fill(p.w_score(), 0.01);
  fill(p.w_value(), 0.01);
  return p;
}

#define RXNRL_MAT_BLOCK(name, rows, cols)                                      \
  PolicyParams::MatMap PolicyParams::name() {                                  \
    return MatMap(data_.data() + layout_.name, rows, cols);                    \
  }                                                                            \
  PolicyParams::CMatMap PolicyParams::name() const {                           \
    return CMatMap(data_.data() + layout_.name, rows, cols);                   \
  }
#define RXNRL_VEC_BLOCK(name, n)                                               \
  PolicyParams::VecMap PolicyParams::name() {                                  \
    return VecMap(data_.data() + layout_.name, n);                             \
  }                                                                            \
  PolicyParams::CVecMap PolicyParams::name() const {                           \
    return CVecMap(data_.data() + layout_.name, n);                            \
  }

RXNRL_MAT_BLOCK(w_embed, shape().d_in, shape().n_bits + 1)
RXNRL_VEC_BLOCK(b_embed, shape().d_in)
RXNRL_MAT_BLOCK(w_x, 4 * shape().hidden, shape().d_in)
RXNRL_MAT_BLOCK(w_h, 4 * shape().hidden, shape().hidden)
RXNRL_VEC_BLOCK(b_gate, 4 * shape().hidden)
RXNRL_MAT_BLOCK(u_h, shape().d_score, shape().hidden)
RXNRL_MAT_BLOCK(u_z, shape().d_score, shape().n_bits)
RXNRL_VEC_BLOCK(b_score, shape().d_score)
RXNRL_VEC_BLOCK(w_score, shape().d_score)
RXNRL_VEC_BLOCK(w_value, shape().hidden)

#undef RXNRL_MAT_BLOCK
#undef RXNRL_VEC_BLOCK

bool PolicyParams::finite() const { return data_.allFinite(); }

RecurrentState RecurrentState::zeros(int hidden) {
  return { Eigen::VectorXd::Zero(hidden), Eigen::VectorXd::Zero(hidden) };
}

Eigen::VectorXd softmax(const Eigen::VectorXd &logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd p = (logits.array() - m).exp().matrix();
  return p / p.sum();
}

namespace {

Eigen::VectorXd sigmoid(const Eigen::VectorXd &x) {
  return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

} // namespace

RecurrentState forward_step(const PolicyParams &params,
                            const RecurrentState &prev, StepInput input,
                            StepCache &cache) {
  const PolicyShape &s = params.shape();
  const int h = s.hidden;
  const auto we = params.w_embed();

  Eigen::VectorXd a = params.b_embed();
  for (int bit: input.bits)
    a += we.col(bit);
  a += input.step_frac * we.col(s.n_bits);
  cache.e = a.array().tanh().matrix();

  const Eigen::VectorXd z =
      params.w_x() * cache.e + params.w_h() * prev.h + params.b_gate();
  cache.i = sigmoid(z.segment(0, h));
  cache.f = sigmoid(z.segment(h, h));
  cache.g = z.segment(2 * h, h).array().tanh().matrix();
  cache.o = sigmoid(z.segment(3 * h, h));
  cache.c_prev = prev.c;
  cache.h_prev = prev.h;
  cache.c = cache.f.cwiseProduct(prev.c) + cache.i.cwiseProduct(cache.g);
  cache.tanh_c = cache.c.array().tanh().matrix();
  cache.h = cache.o.cwiseProduct(cache.tanh_c);

  const int k = static_cast<int>(input.action_bits.size());
  const Eigen::VectorXd base = params.u_h() * cache.h + params.b_score();
  const auto uz = params.u_z();
  cache.u.resize(s.d_score, k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd pre = base;
    for (int bit: input.action_bits[j])
      pre += uz.col(bit);
    cache.u.col(j) = pre.array().tanh().matrix();
  }
  cache.logits = cache.u.transpose() * params.w_score();
  cache.probs = k > 0 ? softmax(cache.logits) : Eigen::VectorXd();
  cache.value = params.w_value().dot(cache.h) + params.b_value();
  cache.input = std::move(input);
  return { cache.h, cache.c };
}

PolicyOutput policy_step(const PolicyParams &params,
                         const RecurrentState &state,
                         const Fingerprint &observation_bits,
                         double step_frac,
                         const std::vector<Fingerprint> &afterstates) {
  const int nb = params.shape().n_bits;
  if (afterstates.empty())
    throw std::invalid_argument("policy_step needs at least one action");
  if (observation_bits.size() != nb)
    throw std::invalid_argument("observation length differs from policy");
  StepInput in;
  in.bits = observation_bits.on_bits();
  in.step_frac = step_frac;
  for (const Fingerprint &fp: afterstates) {
    if (fp.size() != nb)
      throw std::invalid_argument("afterstate length differs from policy");
    in.action_bits.push_back(fp.on_bits());
  }
  StepCache cache;
  PolicyOutput out;
  out.next = forward_step(params, state, std::move(in), cache);
  out.probs.assign(cache.probs.data(), cache.probs.data() + cache.probs.size());
  out.value = cache.value;
  return out;
}

void backward_episode(const PolicyParams &params,
                      const std::vector<StepCache> &caches,
                      const std::vector<StepGrad> &step_grads,
                      PolicyParams &grad) {
  const PolicyShape &s = params.shape();
  const int h = s.hidden;
  Eigen::VectorXd dh_next = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd dc_next = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd dz(4 * h);

  auto g_we = grad.w_embed();
  auto g_uz = grad.u_z();
  const auto w_score = params.w_score();

  for (int t = static_cast<int>(caches.size()) - 1; t >= 0; --t) {
    const StepCache &c = caches[t];
    const StepGrad &sg = step_grads[t];

    Eigen::VectorXd dpre_sum = Eigen::VectorXd::Zero(s.d_score);
    if (c.u.cols() > 0) {
      grad.w_score() += c.u * sg.d_logits;
      Eigen::MatrixXd dpre = w_score * sg.d_logits.transpose();
      dpre.array() *= 1.0 - c.u.array().square();
      for (int j = 0; j < dpre.cols(); ++j)
        for (int bit: c.input.action_bits[j])
          g_uz.col(bit) += dpre.col(j);
      dpre_sum = dpre.rowwise().sum();
    }
    grad.b_score() += dpre_sum;
    grad.u_h().noalias() += dpre_sum * c.h.transpose();

    Eigen::VectorXd dh = params.u_h().transpose() * dpre_sum
                         + sg.d_value * params.w_value() + dh_next;
    grad.w_value() += sg.d_value * c.h;
    grad.b_value() += sg.d_value;

    const Eigen::VectorXd d_o = dh.cwiseProduct(c.tanh_c);
    const Eigen::VectorXd dc =
        dh.cwiseProduct(c.o).cwiseProduct(
            (1.0 - c.tanh_c.array().square()).matrix())
        + dc_next;
    dz.segment(0, h) = (dc.array() * c.g.array() * c.i.array()
                        * (1.0 - c.i.array()))
                           .matrix();
    dz.segment(h, h) = (dc.array() * c.c_prev.array() * c.f.array()
                        * (1.0 - c.f.array()))
                           .matrix();
    dz.segment(2 * h, h) =
        (dc.array() * c.i.array() * (1.0 - c.g.array().square())).matrix();
    dz.segment(3 * h, h) =
        (d_o.array() * c.o.array() * (1.0 - c.o.array())).matrix();
    dc_next = dc.cwiseProduct(c.f);

    grad.w_x().noalias() += dz * c.e.transpose();
    grad.w_h().noalias() += dz * c.h_prev.transpose();
    grad.b_gate() += dz;
    dh_next = params.w_h().transpose() * dz;

    const Eigen::VectorXd dae =
        ((params.w_x().transpose() * dz).array()
         * (1.0 - c.e.array().square()))
            .matrix();
    for (int bit: c.input.bits)
      g_we.col(bit) += dae;
    g_we.col(s.n_bits) += c.input.step_frac * dae;
    grad.b_embed() += dae;
  }
}

} // namespace rxnrl
