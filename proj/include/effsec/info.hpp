// Entropy, mutual information, divergences, variational distance, and the
// Pinsker-derived detection band. All quantities are in bits.
#pragma once

#include <cmath>
#include <numbers>
#include <span>

#include "effsec/core.hpp"
#include "effsec/prob.hpp"

namespace effsec {

namespace detail {

inline double entropy_span(std::span<const double> p) {
  NeumaierSum s;
  for (double x : p) {
    if (x > 0.0) s.add(-x * std::log2(x));
  }
  double h = s.value();
  return h < 0.0 ? 0.0 : h;
}

// KL divergence in bits over a shared index space. 0*log(0/q) = 0;
// p*log(p/0) makes the result infinite.
inline BitsValue kl_span(std::span<const double> p, std::span<const double> q) {
  NeumaierSum s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return BitsValue::infinity();
    s.add(p[i] * std::log2(p[i] / q[i]));
  }
  return BitsValue::finite(s.value());
}

inline double total_variation_span(std::span<const double> p, std::span<const double> q) {
  NeumaierSum s;
  for (std::size_t i = 0; i < p.size(); ++i) s.add(std::abs(p[i] - q[i]));
  return s.value();
}

}  // namespace detail

inline BitsValue entropy(const Pmf& p) {
  return BitsValue::finite(detail::entropy_span(p.probs()));
}

// I(X;Y) for X ~ q through ch, as H(output) minus the mean row entropy.
inline BitsValue mutual_information(const Pmf& q, const Dmc& ch) {
  if (q.alphabet() != ch.input()) {
    throw DimensionError("mutual_information: pmf alphabet does not match channel input");
  }
  Pmf out = push_forward(q, ch);
  NeumaierSum cond;
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] > 0.0) cond.add(q[x] * detail::entropy_span(ch.row(x)));
  }
  double mi = detail::entropy_span(out.probs()) - cond.value();
  return BitsValue::finite(mi < 0.0 ? 0.0 : mi);
}

inline BitsValue kl_divergence(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) {
    throw DimensionError("kl_divergence: alphabets differ");
  }
  return detail::kl_span(p.probs(), q.probs());
}

inline BitsValue kl_divergence(const SequenceDist& p, const SequenceDist& q) {
  if (p.base() != q.base() || p.n() != q.n()) {
    throw DimensionError("kl_divergence: sequence spaces differ");
  }
  return detail::kl_span(p.probs(), q.probs());
}

// Variational distance, sum of absolute differences without the 1/2
// factor; range [0, 2].
inline double total_variation(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) {
    throw DimensionError("total_variation: alphabets differ");
  }
  return detail::total_variation_span(p.probs(), q.probs());
}

inline double total_variation(const SequenceDist& p, const SequenceDist& q) {
  if (p.base() != q.base() || p.n() != q.n()) {
    throw DimensionError("total_variation: sequence spaces differ");
  }
  return detail::total_variation_span(p.probs(), q.probs());
}

// g(xi2) = sqrt(xi2 * 2 ln 2): the variational-distance band implied by a
// divergence budget of xi2 bits, via Pinsker's inequality.
inline double pinsker_g(double xi2) {
  if (xi2 < 0.0) throw DomainError("pinsker_g: divergence budget must be nonnegative");
  return std::sqrt(xi2 * 2.0 * std::numbers::ln2_v<double>);
}

// I(V;Y|U) for (U,V) ~ q_uv (pair alphabet, index u * |V| + v) and Y
// reached from V through ch: the q_u-weighted mutual information of the
// conditional input laws.
inline BitsValue conditional_mutual_information(const Pmf& q_uv, std::size_t u_size,
                                                const Dmc& ch_from_v) {
  if (u_size == 0 || q_uv.size() % u_size != 0) {
    throw DimensionError("conditional_mutual_information: joint size not divisible by |U|");
  }
  const std::size_t v_size = q_uv.size() / u_size;
  if (v_size != ch_from_v.input_size()) {
    throw DimensionError("conditional_mutual_information: |V| does not match channel input");
  }
  NeumaierSum total;
  for (std::size_t u = 0; u < u_size; ++u) {
    NeumaierSum mass;
    for (std::size_t v = 0; v < v_size; ++v) mass.add(q_uv[u * v_size + v]);
    double pu = mass.value();
    if (pu <= 0.0) continue;
    std::vector<double> cond(v_size);
    for (std::size_t v = 0; v < v_size; ++v) cond[v] = q_uv[u * v_size + v] / pu;
    Pmf q_v_given_u(ch_from_v.input(), std::move(cond));
    total.add(pu * mutual_information(q_v_given_u, ch_from_v).bits);
  }
  double cmi = total.value();
  return BitsValue::finite(cmi < 0.0 ? 0.0 : cmi);
}

}  // namespace effsec
