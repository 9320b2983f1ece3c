// The eavesdropper's binary hypothesis test between the idle reference
// law Q^n_Z and the induced law P_{Z^n}: Neyman-Pearson threshold regions,
// the exact (alpha, beta) tradeoff curve, the Pinsker detection band, the
// blind guessing baseline, and a brute-force optimality audit.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "effsec/core.hpp"
#include "effsec/info.hpp"
#include "effsec/prob.hpp"

namespace effsec {

// h0 is the idle reference Q^n_Z, h1 the transmission law P_{Z^n}.
struct HypothesisPair {
  SequenceDist h0;
  SequenceDist h1;

  HypothesisPair(SequenceDist idle, SequenceDist active)
      : h0(std::move(idle)), h1(std::move(active)) {
    if (h0.base() != h1.base() || h0.n() != h1.n()) {
      throw DimensionError("hypothesis pair: sequence spaces differ");
    }
  }
};

// One threshold of the ratio test: the idle hypothesis is accepted on
// A_F = { z^n : Q(z^n)/P(z^n) > F }.
struct TradeoffPoint {
  double threshold = 0.0;    // F
  double alpha = 0.0;        // false alarm, 1 - Q(A_F)
  double beta = 0.0;         // mis-detection, P(A_F)
  std::size_t region_size = 0;
};

namespace detail {

// Q/P with the zero-atom conventions: P = 0 gives +infinity (the point
// always lands in the acceptance region), Q = 0 < P gives 0.
inline double likelihood_ratio(double q, double p) {
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  return q / p;
}

struct RatioTable {
  std::vector<double> ratio;   // sorted ascending
  std::vector<double> q;       // aligned with ratio
  std::vector<double> p;
};

inline RatioTable build_ratio_table(const HypothesisPair& hp) {
  const std::size_t s = hp.h0.size();
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> r(s);
  for (std::size_t i = 0; i < s; ++i) r[i] = likelihood_ratio(hp.h0[i], hp.h1[i]);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
  RatioTable t;
  t.ratio.reserve(s);
  t.q.reserve(s);
  t.p.reserve(s);
  for (std::size_t i : order) {
    t.ratio.push_back(r[i]);
    t.q.push_back(hp.h0[i]);
    t.p.push_back(hp.h1[i]);
  }
  return t;
}

// Emits the complete deterministic NP curve: one point per distinct
// finite threshold (0 first when 0 is below every ratio). Thresholds
// ascend, alpha ascends, beta descends.
template <typename Fn>
void scan_curve(const RatioTable& t, Fn&& emit) {
  const std::size_t s = t.ratio.size();
  // Suffix masses: acceptance region for threshold F is a ratio suffix.
  std::vector<double> sq(s + 1, 0.0), sp(s + 1, 0.0);
  for (std::size_t i = s; i-- > 0;) {
    sq[i] = sq[i + 1] + t.q[i];
    sp[i] = sp[i + 1] + t.p[i];
  }
  auto emit_at = [&](double f, std::size_t first_kept) {
    double alpha = 1.0 - sq[first_kept];
    emit(TradeoffPoint{f, alpha < 0.0 ? 0.0 : alpha, sp[first_kept], s - first_kept});
  };
  if (s == 0) return;
  if (t.ratio.front() > 0.0) {
    emit_at(0.0, 0);
  }
  std::size_t i = 0;
  while (i < s && std::isfinite(t.ratio[i])) {
    double f = t.ratio[i];
    std::size_t j = i;
    while (j < s && t.ratio[j] == f) ++j;
    emit_at(f, j);
    i = j;
  }
}

}  // namespace detail

// The ratio test at a fixed threshold F >= 0, with exact summation.
inline TradeoffPoint np_decision(const HypothesisPair& hp, double F) {
  if (F < 0.0) throw DomainError("np_decision: threshold must be nonnegative");
  NeumaierSum q_acc, p_acc;
  std::size_t size = 0;
  for (std::size_t i = 0; i < hp.h0.size(); ++i) {
    if (detail::likelihood_ratio(hp.h0[i], hp.h1[i]) > F) {
      q_acc.add(hp.h0[i]);
      p_acc.add(hp.h1[i]);
      ++size;
    }
  }
  double alpha = 1.0 - q_acc.value();
  return TradeoffPoint{F, alpha < 0.0 ? 0.0 : alpha, p_acc.value(), size};
}

// Every achievable deterministic NP point, sorted by threshold.
inline std::vector<TradeoffPoint> tradeoff_curve(const HypothesisPair& hp) {
  auto table = detail::build_ratio_table(hp);
  std::vector<TradeoffPoint> points;
  detail::scan_curve(table, [&](const TradeoffPoint& pt) { points.push_back(pt); });
  return points;
}

// Smallest alpha + beta over the curve; 1 - this is the best detection
// advantage any threshold achieves.
inline double min_alpha_plus_beta(const HypothesisPair& hp) {
  auto table = detail::build_ratio_table(hp);
  double best = std::numeric_limits<double>::infinity();
  detail::scan_curve(table, [&](const TradeoffPoint& pt) {
    best = std::min(best, pt.alpha + pt.beta);
  });
  return best;
}

struct LemmaCheckResult {
  bool holds = false;
  double band = 0.0;                    // g(xi2)
  double measured_divergence = 0.0;     // D(h1 || h0), bits
  std::optional<TradeoffPoint> witness; // first violating point, if any
};

// Verifies 1 - g(xi2) <= alpha + beta <= 1 + g(xi2) across the whole
// curve, under the hypothesis D(P_{Z^n} || Q^n_Z) <= xi2 (checked).
inline LemmaCheckResult lemma_check(const HypothesisPair& hp, double xi2) {
  if (xi2 < 0.0) throw DomainError("lemma_check: divergence budget must be nonnegative");
  BitsValue measured = kl_divergence(hp.h1, hp.h0);
  if (measured.infinite || measured.bits > xi2 + 1e-12) {
    throw PreconditionError(
        "lemma_check: measured divergence " +
        (measured.infinite ? std::string("inf") : std::to_string(measured.bits)) +
        " bits exceeds the stated budget " + std::to_string(xi2));
  }
  LemmaCheckResult res;
  res.band = pinsker_g(xi2);
  res.measured_divergence = measured.bits;
  res.holds = true;
  auto table = detail::build_ratio_table(hp);
  detail::scan_curve(table, [&](const TradeoffPoint& pt) {
    if (!res.holds) return;
    double s = pt.alpha + pt.beta;
    if (s < 1.0 - res.band - 1e-12 || s > 1.0 + res.band + 1e-12) {
      res.holds = false;
      res.witness = pt;
    }
  });
  return res;
}

struct GuessResult {
  double achieved_alpha = 0.0;
  double beta = 0.0;
  std::size_t region_size = 0;  // size of the acceptance region A'
};

// Blind detector: builds a random acceptance region whose idle mass
// approaches 1 - alpha_target by greedy accumulation over a shuffled
// order, without looking at likelihood ratios.
inline GuessResult guess_detector(const HypothesisPair& hp, double alpha_target,
                                  std::uint64_t seed) {
  if (alpha_target < 0.0 || alpha_target > 1.0) {
    throw DomainError("guess_detector: alpha target must lie in [0, 1]");
  }
  const std::size_t s = hp.h0.size();
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0x67756573));
  for (std::size_t i = s; i > 1; --i) {
    std::size_t j = rng.next_index(i);
    std::swap(order[i - 1], order[j]);
  }
  // Move points out of the acceptance region while that brings the false
  // alarm closer to the target.
  double alpha = 0.0;
  double beta = 1.0;
  std::size_t rejected = 0;
  for (std::size_t i : order) {
    double cand = alpha + hp.h0[i];
    if (std::abs(cand - alpha_target) <= std::abs(alpha - alpha_target)) {
      alpha = cand;
      beta -= hp.h1[i];
      ++rejected;
    }
  }
  return GuessResult{alpha, beta < 0.0 ? 0.0 : beta, s - rejected};
}

// Exhaustive check that no acceptance region improves on the NP curve:
// for every region B and every curve point with alpha_B <= alpha_NP,
// beta_B must be >= beta_NP. Brute force over all 2^|space| regions.
inline bool np_optimality_audit(const HypothesisPair& hp) {
  const std::size_t s = hp.h0.size();
  if (s > 14) {
    throw EnumerationOverflow("np_optimality_audit (2^space regions)",
                              std::uint64_t{1} << s, std::uint64_t{1} << 14);
  }
  auto curve = tradeoff_curve(hp);
  const std::size_t masks = std::size_t{1} << s;
  std::vector<double> qmass(masks, 0.0), pmass(masks, 0.0);
  for (std::size_t mask = 1; mask < masks; ++mask) {
    std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    std::size_t rest = mask & (mask - 1);
    qmass[mask] = qmass[rest] + hp.h0[low];
    pmass[mask] = pmass[rest] + hp.h1[low];
  }
  for (std::size_t mask = 0; mask < masks; ++mask) {
    double alpha_b = 1.0 - qmass[mask];
    double beta_b = pmass[mask];
    for (const TradeoffPoint& pt : curve) {
      if (alpha_b <= pt.alpha + 1e-12 && beta_b < pt.beta - 1e-12) return false;
    }
  }
  return true;
}

}  // namespace effsec
