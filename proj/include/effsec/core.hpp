// Shared basics: error types, bit-valued quantities with an explicit
// infinity flag, compensated summation, and deterministic RNG streams.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace effsec {

// A distribution-shaped input that is not one (mass mismatch, negative
// probability, bad label set).
class InvalidDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Alphabet shapes of two objects do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the operation's domain (negative divergence budget,
// cardinality bound violation, rate-condition violation).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A dense enumeration or codebook would exceed the configured cap.
class EnumerationOverflow : public std::length_error {
 public:
  EnumerationOverflow(const std::string& what, std::uint64_t required,
                      std::uint64_t allowed)
      : std::length_error(what + ": requires " + std::to_string(required) +
                          " entries, cap is " + std::to_string(allowed)),
        required_(required),
        allowed_(allowed) {}

  std::uint64_t required() const { return required_; }
  std::uint64_t allowed() const { return allowed_; }

 private:
  std::uint64_t required_;
  std::uint64_t allowed_;
};

// A stated precondition does not hold (e.g. a hypothesis-test budget
// smaller than the measured divergence).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Default cap on dense sequence-space sizes (entries).
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;
// Default cap on |Z|^n * L * L1 work for exact secrecy evaluation.
inline constexpr std::uint64_t kDefaultOpsCap = std::uint64_t{1} << 26;

// An information quantity in bits. Divergences can be infinite when the
// first argument's support escapes the second's; the flag keeps that case
// explicit instead of relying on IEEE infinities.
struct BitsValue {
  double bits = 0.0;
  bool infinite = false;

  static BitsValue finite(double b) { return {b, false}; }
  static BitsValue infinity() { return {std::numeric_limits<double>::infinity(), true}; }

  friend BitsValue operator+(BitsValue a, BitsValue b) {
    if (a.infinite || b.infinite) return infinity();
    return finite(a.bits + b.bits);
  }
  friend BitsValue operator-(BitsValue a, BitsValue b) {
    if (a.infinite || b.infinite) return infinity();
    return finite(a.bits - b.bits);
  }
};

// Neumaier-compensated accumulator; sequence-space sums mix magnitudes
// across many orders, plain summation loses the small terms.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// SplitMix64 step, used both as a seed mixer and for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for work unit (a, b) of a seeded computation.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
  std::uint64_t s = base;
  splitmix64(s);
  s ^= a * 0x9e3779b97f4a7c15ULL;
  splitmix64(s);
  s ^= b * 0xbf58476d1ce4e5b9ULL;
  return splitmix64(s);
}

// Seeded generator. Unit doubles come straight from the top 53 bits so
// draws do not depend on library-specific distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::size_t next_index(std::size_t bound) {
    return static_cast<std::size_t>(gen_() % bound);
  }

  // Inverse-CDF draw from a probability vector.
  std::size_t sample(std::span<const double> probs) {
    double u = next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace effsec
