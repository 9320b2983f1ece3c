// Random wiretap codes: i.i.d. codebook generation, encoding with a
// confusion randomizer, typicality decoding, exact induced eavesdropper
// distributions, the secrecy report (confusion / stealth / effective),
// Monte Carlo reliability, codebook-ensemble divergence averages, and the
// Jensen upper bound on the ensemble mean.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "effsec/core.hpp"
#include "effsec/info.hpp"
#include "effsec/prob.hpp"

namespace effsec {

// Blocklength and rates; codebook sizes are the rounded powers
// L = round(2^{nR}), L1 = round(2^{nR1}) (half away from zero).
struct CodeParams {
  int n = 1;
  double rate = 0.0;        // message rate R, bits/symbol
  double rate1 = 0.0;       // randomizer rate R1, bits/symbol
  std::size_t num_messages = 1;
  std::size_t num_randomizers = 1;
  double eps = 0.2;         // decoder typicality slack

  static CodeParams from_rates(int n, double rate, double rate1, double eps = 0.2,
                               std::uint64_t memory_cap = kDefaultOpsCap) {
    if (n < 1) throw DomainError("blocklength must be >= 1");
    if (rate < 0.0 || rate1 < 0.0) throw DomainError("rates must be nonnegative");
    if (eps < 0.0) throw DomainError("decoder slack must be nonnegative");
    if (rate * n > 62.0 || rate1 * n > 62.0) {
      throw EnumerationOverflow("codebook storage",
                                std::numeric_limits<std::uint64_t>::max(), memory_cap);
    }
    CodeParams p;
    p.n = n;
    p.rate = rate;
    p.rate1 = rate1;
    p.eps = eps;
    p.num_messages = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(std::exp2(rate * n))));
    p.num_randomizers = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(std::exp2(rate1 * n))));
    std::uint64_t cells = static_cast<std::uint64_t>(p.num_messages);
    for (std::uint64_t factor : {static_cast<std::uint64_t>(p.num_randomizers),
                                 static_cast<std::uint64_t>(n)}) {
      if (cells > memory_cap / factor) {
        throw EnumerationOverflow("codebook storage",
                                  std::numeric_limits<std::uint64_t>::max(), memory_cap);
      }
      cells *= factor;
    }
    if (cells > memory_cap) {
      throw EnumerationOverflow("codebook storage", cells, memory_cap);
    }
    return p;
  }

  std::size_t num_words() const { return num_messages * num_randomizers; }
};

// L x L1 array of length-n codewords, stored m-major, w-minor.
class Codebook {
 public:
  Codebook(CodeParams params, Alphabet input, std::vector<Symbol> words,
           std::uint64_t gen_seed)
      : params_(params), input_(std::move(input)), words_(std::move(words)),
        gen_seed_(gen_seed) {
    if (words_.size() != params_.num_words() * static_cast<std::size_t>(params_.n)) {
      throw DimensionError("codebook storage does not match L * L1 * n");
    }
  }

  const CodeParams& params() const { return params_; }
  const Alphabet& input() const { return input_; }
  std::uint64_t gen_seed() const { return gen_seed_; }

  std::span<const Symbol> word(std::size_t m, std::size_t w) const {
    const std::size_t n = static_cast<std::size_t>(params_.n);
    return {words_.data() + (m * params_.num_randomizers + w) * n, n};
  }

  bool operator==(const Codebook& other) const {
    return words_ == other.words_ && input_ == other.input_;
  }

 private:
  CodeParams params_;
  Alphabet input_;
  std::vector<Symbol> words_;
  std::uint64_t gen_seed_;
};

// Draws every codeword symbol i.i.d. from q_x; identical seeds give
// identical codebooks.
inline Codebook generate_codebook(const Pmf& q_x, const CodeParams& params,
                                  std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x636f6465));
  std::vector<Symbol> words;
  words.reserve(params.num_words() * static_cast<std::size_t>(params.n));
  for (std::size_t k = 0; k < params.num_words(); ++k) {
    for (int i = 0; i < params.n; ++i) {
      words.push_back(static_cast<Symbol>(rng.sample(q_x.probs())));
    }
  }
  return Codebook(params, q_x.alphabet(), std::move(words), seed);
}

// Transmitted word for (message, randomizer). The uniform draw of the
// randomizer index is the caller's job.
inline std::span<const Symbol> encode(const Codebook& cb, std::size_t m, std::size_t w) {
  if (m >= cb.params().num_messages) {
    throw std::out_of_range("encode: message index " + std::to_string(m) +
                            " out of range [0, " +
                            std::to_string(cb.params().num_messages) + ")");
  }
  if (w >= cb.params().num_randomizers) {
    throw std::out_of_range("encode: randomizer index " + std::to_string(w) +
                            " out of range [0, " +
                            std::to_string(cb.params().num_randomizers) + ")");
  }
  return cb.word(m, w);
}

struct DecodedPair {
  std::size_t m = 0;
  std::size_t w = 0;
  bool operator==(const DecodedPair&) const = default;
};

// Outputs the unique (m, w) whose codeword is jointly letter-typical with
// y^n under joint_xy at the codebook's slack; otherwise the fixed
// fallback pair (0, 0).
inline DecodedPair decode_typicality(const Codebook& cb, std::span<const Symbol> y,
                                     const Pmf& joint_xy) {
  if (y.size() != static_cast<std::size_t>(cb.params().n)) {
    throw DimensionError("decode: received length does not match blocklength");
  }
  const std::size_t x_size = cb.input().size();
  if (joint_xy.size() % x_size != 0) {
    throw DimensionError("decode: joint pmf does not factor over the input alphabet");
  }
  const std::size_t y_size = joint_xy.size() / x_size;
  DecodedPair found{0, 0};
  int hits = 0;
  for (std::size_t m = 0; m < cb.params().num_messages; ++m) {
    for (std::size_t w = 0; w < cb.params().num_randomizers; ++w) {
      if (is_jointly_typical(cb.word(m, w), y, joint_xy, y_size, cb.params().eps)) {
        found = {m, w};
        if (++hits > 1) return {0, 0};
      }
    }
  }
  return hits == 1 ? found : DecodedPair{0, 0};
}

struct InducedDistributions {
  std::vector<SequenceDist> per_message;  // P(. | m)
  SequenceDist marginal;                  // P_{Z^n}
};

namespace detail {

// Dense output distribution of one codeword through the z-marginal rows,
// accumulated into acc with weight.
inline void accumulate_word_dist(std::span<const Symbol> word, const Dmc& chz,
                                 std::vector<double>& buf_a, std::vector<double>& buf_b,
                                 std::vector<double>& acc, double weight) {
  const std::size_t z = chz.output_size();
  buf_a.assign(1, 1.0);
  std::vector<double>* cur = &buf_a;
  std::vector<double>* next = &buf_b;
  for (Symbol x : word) {
    auto row = chz.row(x);
    next->resize(cur->size() * z);
    for (std::size_t i = 0; i < cur->size(); ++i) {
      double c = (*cur)[i];
      for (std::size_t zz = 0; zz < z; ++zz) (*next)[i * z + zz] = c * row[zz];
    }
    std::swap(cur, next);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += weight * (*cur)[i];
}

inline std::uint64_t secrecy_ops(const Codebook& cb, std::size_t z_size) {
  std::uint64_t zn = SequenceDist::space_size(z_size, cb.params().n);
  return zn * static_cast<std::uint64_t>(cb.params().num_words());
}

// C(n + m - 1, m - 1): count vectors of n letters over m distinct values.
inline std::uint64_t count_vector_support(int n, std::size_t m) {
  std::uint64_t num = 1;
  for (std::size_t i = 1; i < m; ++i) {
    num = num * (static_cast<std::uint64_t>(n) + i) / i;
    if (num > (std::uint64_t{1} << 62)) return num;
  }
  return num;
}

}  // namespace detail

// Exact per-message eavesdropper distributions P(z^n | m) and their
// uniform mixture P_{Z^n}, by dense enumeration of the z-sequence space.
inline InducedDistributions induced_distributions(const Codebook& cb,
                                                  const WiretapChannel& ch,
                                                  std::uint64_t ops_cap = kDefaultOpsCap) {
  if (ch.input() != cb.input()) {
    throw DimensionError("induced_distributions: codebook and channel inputs differ");
  }
  const Dmc chz = ch.z_channel();
  const std::size_t z_size = chz.output_size();
  std::uint64_t ops = detail::secrecy_ops(cb, z_size);
  if (ops > ops_cap) {
    throw EnumerationOverflow("induced_distributions (|Z|^n * L * L1)", ops, ops_cap);
  }
  const std::size_t zn =
      static_cast<std::size_t>(SequenceDist::space_size(z_size, cb.params().n));
  const std::size_t L = cb.params().num_messages;
  const std::size_t L1 = cb.params().num_randomizers;

  std::vector<double> buf_a, buf_b;
  std::vector<SequenceDist> per_message;
  per_message.reserve(L);
  std::vector<double> marginal(zn, 0.0);
  for (std::size_t m = 0; m < L; ++m) {
    std::vector<double> pm(zn, 0.0);
    for (std::size_t w = 0; w < L1; ++w) {
      detail::accumulate_word_dist(cb.word(m, w), chz, buf_a, buf_b, pm,
                                   1.0 / static_cast<double>(L1));
    }
    for (std::size_t i = 0; i < zn; ++i) marginal[i] += pm[i] / static_cast<double>(L);
    per_message.emplace_back(ch.z_alphabet(), cb.params().n, std::move(pm));
  }
  return InducedDistributions{std::move(per_message),
                              SequenceDist(ch.z_alphabet(), cb.params().n,
                                           std::move(marginal))};
}

// Confusion I(M;Z^n), stealth D(P_{Z^n} || Q^n_Z) and the effective
// divergence D(P_{MZ^n} || P_M Q^n_Z), all measured exactly. The three
// are computed independently; identity_residual records how far the
// chain-rule decomposition effective = confusion + stealth is from exact.
struct SecrecyReport {
  BitsValue confusion;
  BitsValue stealth;
  BitsValue effective;
  double identity_residual = 0.0;
};

inline SecrecyReport secrecy_report(const Codebook& cb, const WiretapChannel& ch,
                                    const Pmf& q_z_ref,
                                    std::uint64_t ops_cap = kDefaultOpsCap) {
  if (q_z_ref.alphabet() != ch.z_alphabet()) {
    throw DimensionError("secrecy_report: reference pmf is not over the Z alphabet");
  }
  InducedDistributions induced = induced_distributions(cb, ch, ops_cap);
  SequenceDist ref = product_extension(q_z_ref, cb.params().n, ops_cap);
  const std::size_t L = cb.params().num_messages;
  const double pm = 1.0 / static_cast<double>(L);

  NeumaierSum confusion_sum;
  NeumaierSum effective_sum;
  bool effective_inf = false;
  for (std::size_t m = 0; m < L; ++m) {
    BitsValue c = kl_divergence(induced.per_message[m], induced.marginal);
    confusion_sum.add(pm * c.bits);  // finite: marginal dominates each component
    BitsValue e = kl_divergence(induced.per_message[m], ref);
    if (e.infinite) {
      effective_inf = true;
    } else {
      effective_sum.add(pm * e.bits);
    }
  }
  BitsValue stealth = kl_divergence(induced.marginal, ref);

  SecrecyReport rep;
  rep.confusion = BitsValue::finite(std::max(0.0, confusion_sum.value()));
  rep.stealth = stealth;
  rep.effective = effective_inf ? BitsValue::infinity()
                                : BitsValue::finite(effective_sum.value());
  if (rep.effective.infinite || rep.stealth.infinite) {
    // A reference support violation makes both sides infinite together.
    rep.identity_residual = (rep.effective.infinite == rep.stealth.infinite)
                                ? 0.0
                                : std::numeric_limits<double>::infinity();
  } else {
    rep.identity_residual =
        std::abs(rep.effective.bits - rep.confusion.bits - rep.stealth.bits);
  }
  return rep;
}

struct ReliabilityEstimate {
  double error_prob = 0.0;          // pair event (m^, w^) != (m, w)
  double message_error_prob = 0.0;  // m^ != m only
  long trials = 0;
  double half_width = 0.0;          // 95% normal-approximation half-width
};

// Simulates uniform (m, w), transmission through the y-marginal channel,
// and typicality decoding.
inline ReliabilityEstimate reliability_mc(const Codebook& cb, const WiretapChannel& ch,
                                          const Pmf& joint_xy, long trials,
                                          std::uint64_t seed) {
  if (trials < 1) throw DomainError("reliability_mc: trials must be >= 1");
  const Dmc chy = ch.y_channel();
  Rng rng(derive_seed(seed, 0x72656c79));
  const std::size_t n = static_cast<std::size_t>(cb.params().n);
  Sequence y(n);
  long pair_errors = 0;
  long message_errors = 0;
  for (long t = 0; t < trials; ++t) {
    std::size_t m = rng.next_index(cb.params().num_messages);
    std::size_t w = rng.next_index(cb.params().num_randomizers);
    auto x = cb.word(m, w);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<Symbol>(rng.sample(chy.row(x[i])));
    }
    DecodedPair d = decode_typicality(cb, y, joint_xy);
    if (d.m != m) ++message_errors;
    if (d.m != m || d.w != w) ++pair_errors;
  }
  ReliabilityEstimate est;
  est.trials = trials;
  est.error_prob = static_cast<double>(pair_errors) / static_cast<double>(trials);
  est.message_error_prob =
      static_cast<double>(message_errors) / static_cast<double>(trials);
  est.half_width = 1.96 * std::sqrt(est.error_prob * (1.0 - est.error_prob) /
                                    static_cast<double>(trials));
  return est;
}

struct EnsembleDivergence {
  BitsValue mean;
  double half_width = 0.0;  // 95% half-width over codebooks
  int codebooks = 0;
};

// Mean effective divergence over independently generated codebooks; the
// Monte Carlo estimate of the codebook-ensemble average.
inline EnsembleDivergence ensemble_average_divergence(
    const Pmf& q_x, const CodeParams& params, const WiretapChannel& ch,
    const Pmf& q_z_ref, int num_codebooks, std::uint64_t seed,
    std::uint64_t ops_cap = kDefaultOpsCap) {
  if (num_codebooks < 1) throw DomainError("ensemble size must be >= 1");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(num_codebooks));
  bool infinite = false;
  for (int k = 0; k < num_codebooks; ++k) {
    Codebook cb = generate_codebook(q_x, params, derive_seed(seed, static_cast<std::uint64_t>(k)));
    SecrecyReport rep = secrecy_report(cb, ch, q_z_ref, ops_cap);
    if (rep.effective.infinite) {
      infinite = true;
      break;
    }
    values.push_back(rep.effective.bits);
  }
  EnsembleDivergence out;
  out.codebooks = num_codebooks;
  if (infinite) {
    out.mean = BitsValue::infinity();
    out.half_width = std::numeric_limits<double>::infinity();
    return out;
  }
  NeumaierSum s;
  for (double v : values) s.add(v);
  double mean = s.value() / static_cast<double>(values.size());
  out.mean = BitsValue::finite(mean);
  if (values.size() > 1) {
    NeumaierSum var;
    for (double v : values) var.add((v - mean) * (v - mean));
    double sd = std::sqrt(var.value() / static_cast<double>(values.size() - 1));
    out.half_width = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  } else {
    out.half_width = std::numeric_limits<double>::infinity();
  }
  return out;
}

struct JensenBound {
  BitsValue value;
  double half_width = 0.0;  // 0 when exact
  bool exact = true;
};

// E[log2(Q^n(Z^n|X^n) / (L1 Q^n_Z(Z^n)) + 1)] under the i.i.d. joint law,
// an upper bound on the ensemble-mean effective divergence. Evaluated
// exactly through the n-fold distribution of the per-letter log ratio
// (grouped by distinct value); falls back to Monte Carlo when that
// support would exceed the cap.
inline JensenBound jensen_upper_bound(const Pmf& q_x, std::size_t num_randomizers, int n,
                                      const WiretapChannel& ch,
                                      std::uint64_t cap = kDefaultEnumerationCap,
                                      long mc_trials = 0, std::uint64_t seed = 0) {
  if (n < 1) throw DomainError("jensen_upper_bound: blocklength must be >= 1");
  if (num_randomizers < 1) throw DomainError("jensen_upper_bound: L1 must be >= 1");
  if (q_x.alphabet() != ch.input()) {
    throw DimensionError("jensen_upper_bound: pmf alphabet does not match channel input");
  }
  const Dmc chz = ch.z_channel();
  const Pmf qz = push_forward(q_x, chz);
  const double log_l1 = std::log2(static_cast<double>(num_randomizers));
  auto term = [log_l1](double log_ratio) {
    // log2(2^v / L1 + 1), stably.
    double d = log_ratio - log_l1;
    if (d > 0.0) return d + std::log1p(std::exp2(-d)) / std::numbers::ln2_v<double>;
    return std::log1p(std::exp2(d)) / std::numbers::ln2_v<double>;
  };

  // Distinct per-letter log ratios with their probabilities.
  std::map<double, double> letter;
  for (std::size_t x = 0; x < q_x.size(); ++x) {
    if (q_x[x] == 0.0) continue;
    auto row = chz.row(x);
    for (std::size_t z = 0; z < row.size(); ++z) {
      if (row[z] == 0.0) continue;
      letter[std::log2(row[z] / qz[z])] += q_x[x] * row[z];
    }
  }
  std::vector<double> vals, probs;
  for (auto& [v, p] : letter) {
    vals.push_back(v);
    probs.push_back(p);
  }
  const std::size_t m = vals.size();

  // Exact route: enumerate count vectors over the m distinct values.
  std::uint64_t support = detail::count_vector_support(n, m);
  if (support <= cap) {
    std::vector<double> log_fact(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t i = 2; i < log_fact.size(); ++i) {
      log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
    }
    NeumaierSum total;
    std::vector<int> counts(m, 0);
    auto rec = [&](auto&& self, std::size_t at, int left) -> void {
      if (at + 1 == m) {
        counts[at] = left;
        double logp = log_fact[static_cast<std::size_t>(n)];
        double value = 0.0;
        bool possible = true;
        for (std::size_t i = 0; i < m; ++i) {
          if (counts[i] > 0 && probs[i] == 0.0) { possible = false; break; }
          logp -= log_fact[static_cast<std::size_t>(counts[i])];
          if (counts[i] > 0) logp += counts[i] * std::log(probs[i]);
          value += counts[i] * vals[i];
        }
        if (possible) total.add(std::exp(logp) * term(value));
        return;
      }
      for (int c = 0; c <= left; ++c) {
        counts[at] = c;
        self(self, at + 1, left - c);
      }
    };
    rec(rec, 0, n);
    return JensenBound{BitsValue::finite(total.value()), 0.0, true};
  }

  if (mc_trials < 1) {
    throw EnumerationOverflow("jensen_upper_bound (log-ratio support)", support, cap);
  }
  Rng rng(derive_seed(seed, 0x6a656e73));
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(mc_trials));
  for (long t = 0; t < mc_trials; ++t) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += vals[rng.sample(probs)];
    samples.push_back(term(v));
  }
  NeumaierSum s;
  for (double v : samples) s.add(v);
  double mean = s.value() / static_cast<double>(samples.size());
  NeumaierSum var;
  for (double v : samples) var.add((v - mean) * (v - mean));
  double sd = samples.size() > 1
      ? std::sqrt(var.value() / static_cast<double>(samples.size() - 1))
      : 0.0;
  return JensenBound{BitsValue::finite(mean),
                     1.96 * sd / std::sqrt(static_cast<double>(samples.size())), false};
}

}  // namespace effsec
