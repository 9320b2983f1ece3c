// Finite-alphabet probability objects: labeled alphabets, pmfs, discrete
// memoryless channels, wiretap (two-output) channels, dense distributions
// over length-n sequences, and letter-typicality tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "effsec/core.hpp"

namespace effsec {

using Symbol = std::uint32_t;
using Sequence = std::vector<Symbol>;

// Ordered set of distinct symbol labels; all indexing is by position.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw InvalidDistribution("alphabet must be nonempty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      for (std::size_t j = i + 1; j < symbols_.size(); ++j) {
        if (symbols_[i] == symbols_[j]) {
          throw InvalidDistribution("duplicate alphabet label '" + symbols_[i] + "'");
        }
      }
    }
  }

  // "0", "1", ..., "k-1", optionally prefixed.
  static Alphabet indexed(std::size_t k, const std::string& prefix = "") {
    std::vector<std::string> s;
    s.reserve(k);
    for (std::size_t i = 0; i < k; ++i) s.push_back(prefix + std::to_string(i));
    return Alphabet(std::move(s));
  }

  std::size_t size() const { return symbols_.size(); }
  const std::string& label(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& labels() const { return symbols_; }

  std::optional<std::size_t> index_of(std::string_view label) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i] == label) return i;
    }
    return std::nullopt;
  }

  bool operator==(const Alphabet& other) const = default;

 private:
  std::vector<std::string> symbols_;
};

// Product alphabet over (a, b) pairs, index = i * |B| + j.
inline Alphabet pair_alphabet(const Alphabet& a, const Alphabet& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      labels.push_back(a.label(i) + "," + b.label(j));
    }
  }
  return Alphabet(std::move(labels));
}

namespace detail {

// Accepts mass within 1e-9 of 1 and rescales exactly to unit mass;
// larger deviations are treated as caller bugs, not rounding.
inline void validate_and_normalize(std::vector<double>& probs, const char* what) {
  NeumaierSum sum;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw InvalidDistribution(std::string(what) + ": negative or NaN probability " +
                                std::to_string(p));
    }
    sum.add(p);
  }
  double total = sum.value();
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidDistribution(std::string(what) + ": mass " + std::to_string(total) +
                              " deviates from 1 by more than 1e-9");
  }
  if (total != 1.0) {
    for (double& p : probs) p /= total;
  }
}

}  // namespace detail

// Probability mass function over an Alphabet. Immutable once built.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<double> probs)
      : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
    if (probs_.size() != alphabet_.size()) {
      throw DimensionError("pmf has " + std::to_string(probs_.size()) +
                           " entries for alphabet of size " +
                           std::to_string(alphabet_.size()));
    }
    detail::validate_and_normalize(probs_, "pmf");
  }

  static Pmf uniform(Alphabet alphabet) {
    std::vector<double> p(alphabet.size(), 1.0 / static_cast<double>(alphabet.size()));
    return Pmf(std::move(alphabet), std::move(p));
  }

  static Pmf point_mass(Alphabet alphabet, std::size_t index) {
    std::vector<double> p(alphabet.size(), 0.0);
    p.at(index) = 1.0;
    return Pmf(std::move(alphabet), std::move(p));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      if (probs_[i] > 0.0) s.push_back(i);
    }
    return s;
  }

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
};

// Discrete memoryless channel as a stochastic matrix, one pmf row per
// input symbol.
class Dmc {
 public:
  Dmc(Alphabet input, Alphabet output, std::vector<std::vector<double>> rows)
      : input_(std::move(input)), output_(std::move(output)) {
    if (rows.size() != input_.size()) {
      throw DimensionError("channel has " + std::to_string(rows.size()) +
                           " rows for input alphabet of size " +
                           std::to_string(input_.size()));
    }
    rows_.reserve(input_.size() * output_.size());
    for (auto& row : rows) {
      if (row.size() != output_.size()) {
        throw DimensionError("channel row has " + std::to_string(row.size()) +
                             " entries for output alphabet of size " +
                             std::to_string(output_.size()));
      }
      detail::validate_and_normalize(row, "channel row");
      rows_.insert(rows_.end(), row.begin(), row.end());
    }
  }

  // Binary symmetric channel with flip probability p.
  static Dmc bsc(double p) {
    if (p < 0.0 || p > 1.0) throw DomainError("bsc flip probability outside [0,1]");
    Alphabet b = Alphabet::indexed(2);
    return Dmc(b, b, {{1.0 - p, p}, {p, 1.0 - p}});
  }

  // Binary erasure channel; output alphabet {0, 1, e}.
  static Dmc binary_erasure(double e) {
    if (e < 0.0 || e > 1.0) throw DomainError("erasure probability outside [0,1]");
    return Dmc(Alphabet::indexed(2), Alphabet(std::vector<std::string>{"0", "1", "e"}),
               {{1.0 - e, 0.0, e}, {0.0, 1.0 - e, e}});
  }

  static Dmc identity(const Alphabet& a) {
    std::vector<std::vector<double>> rows(a.size(), std::vector<double>(a.size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) rows[i][i] = 1.0;
    return Dmc(a, a, std::move(rows));
  }

  // k-ary channel whose row x is uniform over {x, x+1, ..., x+s-1} mod k.
  // Uniform input gives a uniform output and constant information density
  // log2(k/s) on the support.
  static Dmc noisy_typewriter(std::size_t k, std::size_t s) {
    if (s == 0 || s > k) throw DomainError("typewriter spread must be in [1, k]");
    std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t j = 0; j < s; ++j) rows[x][(x + j) % k] = 1.0 / static_cast<double>(s);
    }
    Alphabet a = Alphabet::indexed(k);
    return Dmc(a, a, std::move(rows));
  }

  const Alphabet& input() const { return input_; }
  const Alphabet& output() const { return output_; }
  std::size_t input_size() const { return input_.size(); }
  std::size_t output_size() const { return output_.size(); }

  std::span<const double> row(std::size_t x) const {
    return {rows_.data() + x * output_.size(), output_.size()};
  }

  Pmf row_pmf(std::size_t x) const {
    auto r = row(x);
    return Pmf(output_, std::vector<double>(r.begin(), r.end()));
  }

  double at(std::size_t x, std::size_t y) const { return rows_[x * output_.size() + y]; }

 private:
  Alphabet input_;
  Alphabet output_;
  std::vector<double> rows_;  // input-major
};

// Output distribution of `q` pushed through `ch`.
inline Pmf push_forward(const Pmf& q, const Dmc& ch) {
  if (q.alphabet() != ch.input()) {
    throw DimensionError("push_forward: pmf alphabet does not match channel input");
  }
  std::vector<double> out(ch.output_size(), 0.0);
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] == 0.0) continue;
    auto row = ch.row(x);
    for (std::size_t y = 0; y < out.size(); ++y) out[y] += q[x] * row[y];
  }
  return Pmf(ch.output(), std::move(out));
}

// Channel composition: first V->X, then X->Y, giving V->Y.
inline Dmc compose(const Dmc& first, const Dmc& second) {
  if (first.output() != second.input()) {
    throw DimensionError("compose: inner alphabets do not match");
  }
  std::vector<std::vector<double>> rows(first.input_size(),
                                        std::vector<double>(second.output_size(), 0.0));
  for (std::size_t v = 0; v < first.input_size(); ++v) {
    auto fr = first.row(v);
    for (std::size_t x = 0; x < first.output_size(); ++x) {
      if (fr[x] == 0.0) continue;
      auto sr = second.row(x);
      for (std::size_t y = 0; y < second.output_size(); ++y) rows[v][y] += fr[x] * sr[y];
    }
  }
  return Dmc(first.input(), second.output(), std::move(rows));
}

// Joint pmf over (input, output) pairs induced by q through ch, on the
// pair alphabet with index x * |Y| + y.
inline Pmf joint_pmf(const Pmf& q, const Dmc& ch) {
  if (q.alphabet() != ch.input()) {
    throw DimensionError("joint_pmf: pmf alphabet does not match channel input");
  }
  std::vector<double> j(q.size() * ch.output_size());
  for (std::size_t x = 0; x < q.size(); ++x) {
    auto row = ch.row(x);
    for (std::size_t y = 0; y < ch.output_size(); ++y) j[x * ch.output_size() + y] = q[x] * row[y];
  }
  return Pmf(pair_alphabet(q.alphabet(), ch.output()), std::move(j));
}

// Broadcast channel with one input and two outputs, stored as the joint
// conditional law Q_{YZ|X}. Marginal single-output channels are derived
// by exact summation.
class WiretapChannel {
 public:
  WiretapChannel(Alphabet input, Alphabet y_alphabet, Alphabet z_alphabet,
                 std::vector<std::vector<double>> joint_rows)
      : input_(std::move(input)),
        y_(std::move(y_alphabet)),
        z_(std::move(z_alphabet)) {
    if (joint_rows.size() != input_.size()) {
      throw DimensionError("wiretap channel has " + std::to_string(joint_rows.size()) +
                           " rows for input of size " + std::to_string(input_.size()));
    }
    const std::size_t yz = y_.size() * z_.size();
    joint_.reserve(input_.size() * yz);
    for (auto& row : joint_rows) {
      if (row.size() != yz) {
        throw DimensionError("wiretap joint row has " + std::to_string(row.size()) +
                             " entries, expected |Y|*|Z| = " + std::to_string(yz));
      }
      detail::validate_and_normalize(row, "wiretap joint row");
      joint_.insert(joint_.end(), row.begin(), row.end());
    }
  }

  // Independent legitimate and eavesdropper channels sharing one input.
  static WiretapChannel from_marginals(const Dmc& y_channel, const Dmc& z_channel) {
    if (y_channel.input() != z_channel.input()) {
      throw DimensionError("from_marginals: channels have different input alphabets");
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(y_channel.input_size());
    for (std::size_t x = 0; x < y_channel.input_size(); ++x) {
      auto ry = y_channel.row(x);
      auto rz = z_channel.row(x);
      std::vector<double> row(ry.size() * rz.size());
      for (std::size_t y = 0; y < ry.size(); ++y) {
        for (std::size_t z = 0; z < rz.size(); ++z) row[y * rz.size() + z] = ry[y] * rz[z];
      }
      rows.push_back(std::move(row));
    }
    return WiretapChannel(y_channel.input(), y_channel.output(), z_channel.output(),
                          std::move(rows));
  }

  const Alphabet& input() const { return input_; }
  const Alphabet& y_alphabet() const { return y_; }
  const Alphabet& z_alphabet() const { return z_; }
  std::size_t input_size() const { return input_.size(); }

  double joint(std::size_t x, std::size_t y, std::size_t z) const {
    return joint_[(x * y_.size() + y) * z_.size() + z];
  }

  std::span<const double> joint_row(std::size_t x) const {
    const std::size_t yz = y_.size() * z_.size();
    return {joint_.data() + x * yz, yz};
  }

  Dmc y_channel() const {
    std::vector<std::vector<double>> rows(input_.size(), std::vector<double>(y_.size(), 0.0));
    for (std::size_t x = 0; x < input_.size(); ++x) {
      for (std::size_t y = 0; y < y_.size(); ++y) {
        NeumaierSum s;
        for (std::size_t z = 0; z < z_.size(); ++z) s.add(joint(x, y, z));
        rows[x][y] = s.value();
      }
    }
    return Dmc(input_, y_, std::move(rows));
  }

  Dmc z_channel() const {
    std::vector<std::vector<double>> rows(input_.size(), std::vector<double>(z_.size(), 0.0));
    for (std::size_t x = 0; x < input_.size(); ++x) {
      for (std::size_t z = 0; z < z_.size(); ++z) {
        NeumaierSum s;
        for (std::size_t y = 0; y < y_.size(); ++y) s.add(joint(x, y, z));
        rows[x][z] = s.value();
      }
    }
    return Dmc(input_, z_, std::move(rows));
  }

 private:
  Alphabet input_;
  Alphabet y_;
  Alphabet z_;
  std::vector<double> joint_;  // x-major, then y-major, then z
};

// Both marginal channels of a wiretap channel.
inline std::pair<Dmc, Dmc> marginal_channels(const WiretapChannel& ch) {
  return {ch.y_channel(), ch.z_channel()};
}

// Prefixing an artificial channel Q_{X|V} in front of Q_{YZ|X} yields the
// wiretap channel Q_{YZ|V}.
inline WiretapChannel compose_prefix(const Dmc& prefix, const WiretapChannel& ch) {
  if (prefix.output() != ch.input()) {
    throw DimensionError("compose_prefix: prefix output does not match channel input");
  }
  const std::size_t yz = ch.y_alphabet().size() * ch.z_alphabet().size();
  std::vector<std::vector<double>> rows(prefix.input_size(), std::vector<double>(yz, 0.0));
  for (std::size_t v = 0; v < prefix.input_size(); ++v) {
    auto pr = prefix.row(v);
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
      if (pr[x] == 0.0) continue;
      auto jr = ch.joint_row(x);
      for (std::size_t i = 0; i < yz; ++i) rows[v][i] += pr[x] * jr[i];
    }
  }
  return WiretapChannel(prefix.input(), ch.y_alphabet(), ch.z_alphabet(), std::move(rows));
}

// Dense distribution over length-n sequences from a base alphabet.
// Index packs symbols most-significant-first: ((a1*k + a2)*k + a3)...
class SequenceDist {
 public:
  SequenceDist(Alphabet base, int n, std::vector<double> probs)
      : base_(std::move(base)), n_(n), probs_(std::move(probs)) {
    if (n_ < 1) throw DomainError("sequence length must be >= 1");
    std::uint64_t expect = space_size(base_.size(), n_);
    if (probs_.size() != expect) {
      throw DimensionError("sequence distribution has " + std::to_string(probs_.size()) +
                           " entries, expected " + std::to_string(expect));
    }
    NeumaierSum s;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw InvalidDistribution("negative sequence probability");
      s.add(p);
    }
    if (std::abs(s.value() - 1.0) > 1e-10) {
      throw InvalidDistribution("sequence distribution mass " + std::to_string(s.value()) +
                                " deviates from 1 by more than 1e-10");
    }
  }

  // |base|^n without overflow; throws when above the cap.
  static std::uint64_t checked_space_size(std::size_t base_size, int n, std::uint64_t cap,
                                          const char* what) {
    std::uint64_t size = 1;
    for (int i = 0; i < n; ++i) {
      if (size > cap / base_size) {
        throw EnumerationOverflow(what, std::numeric_limits<std::uint64_t>::max(), cap);
      }
      size *= base_size;
    }
    if (size > cap) throw EnumerationOverflow(what, size, cap);
    return size;
  }

  static std::uint64_t space_size(std::size_t base_size, int n) {
    std::uint64_t size = 1;
    for (int i = 0; i < n; ++i) size *= base_size;
    return size;
  }

  const Alphabet& base() const { return base_; }
  int n() const { return n_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  Sequence sequence_at(std::size_t index) const {
    Sequence seq(static_cast<std::size_t>(n_));
    const std::size_t k = base_.size();
    for (int i = n_ - 1; i >= 0; --i) {
      seq[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % k);
      index /= k;
    }
    return seq;
  }

  std::size_t index_of(std::span<const Symbol> seq) const {
    std::size_t idx = 0;
    for (Symbol s : seq) idx = idx * base_.size() + s;
    return idx;
  }

 private:
  Alphabet base_;
  int n_;
  std::vector<double> probs_;
};

// i.i.d. product extension P^n of a single-letter pmf, dense.
inline SequenceDist product_extension(const Pmf& p, int n,
                                      std::uint64_t cap = kDefaultEnumerationCap) {
  if (n < 1) throw DomainError("product_extension: blocklength must be >= 1");
  std::uint64_t total =
      SequenceDist::checked_space_size(p.size(), n, cap, "product_extension");
  std::vector<double> probs{1.0};
  probs.reserve(total);
  std::vector<double> next;
  next.reserve(total);
  for (int i = 0; i < n; ++i) {
    next.clear();
    for (double cur : probs) {
      for (std::size_t a = 0; a < p.size(); ++a) next.push_back(cur * p[a]);
    }
    probs.swap(next);
  }
  return SequenceDist(p.alphabet(), n, std::move(probs));
}

// Letter-typicality: every symbol's empirical frequency stays within
// eps * P(a) of P(a). A symbol outside the support occurring at all
// fails the test.
inline bool is_typical(std::span<const Symbol> seq, const Pmf& p, double eps) {
  if (eps < 0.0) throw DomainError("typicality slack must be nonnegative");
  std::vector<std::size_t> counts(p.size(), 0);
  for (Symbol s : seq) {
    if (s >= p.size()) throw DimensionError("sequence symbol outside pmf alphabet");
    ++counts[s];
  }
  const double n = static_cast<double>(seq.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (std::abs(static_cast<double>(counts[a]) / n - p[a]) > eps * p[a]) return false;
  }
  return true;
}

// Pair typicality of (a^n, b^n) against a joint pmf on the pair alphabet
// with index a * b_size + b.
inline bool is_jointly_typical(std::span<const Symbol> a, std::span<const Symbol> b,
                               const Pmf& joint_ab, std::size_t b_size, double eps) {
  if (a.size() != b.size()) throw DimensionError("paired sequences differ in length");
  if (joint_ab.size() % b_size != 0) {
    throw DimensionError("joint pmf size is not a multiple of the second alphabet size");
  }
  if (eps < 0.0) throw DomainError("typicality slack must be nonnegative");
  std::vector<std::size_t> counts(joint_ab.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t pair = a[i] * b_size + b[i];
    if (pair >= joint_ab.size()) throw DimensionError("pair symbol outside joint alphabet");
    ++counts[pair];
  }
  const double n = static_cast<double>(a.size());
  for (std::size_t s = 0; s < joint_ab.size(); ++s) {
    if (std::abs(static_cast<double>(counts[s]) / n - joint_ab[s]) > eps * joint_ab[s]) {
      return false;
    }
  }
  return true;
}

}  // namespace effsec
