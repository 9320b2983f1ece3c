// End-to-end operating regimes: the matched stealth sweep, the mismatched
// codebook regime (secret but detectable), and the leaky regime (stealthy
// but decodable), each producing per-blocklength ensemble records.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "effsec/code.hpp"
#include "effsec/core.hpp"
#include "effsec/detect.hpp"
#include "effsec/info.hpp"
#include "effsec/prob.hpp"

namespace effsec {

// Ensemble statistics for one blocklength. Divergence means are over the
// codebook ensemble; the NP-curve summary and the *_single values come
// from the first codebook; reliability pools the Monte Carlo budget
// across the ensemble.
struct RegimeRecord {
  int n = 0;
  std::size_t num_messages = 0;
  std::size_t num_randomizers = 0;
  BitsValue confusion;
  BitsValue stealth;
  BitsValue effective;
  double effective_half_width = 0.0;
  BitsValue confusion_single;
  BitsValue stealth_single;
  BitsValue effective_single;
  double error_prob = 0.0;
  double message_error_prob = 0.0;
  long trials = 0;
  double alpha_plus_beta_min = 1.0;
  double max_identity_residual = 0.0;
};

struct SweepConfig {
  double rate = 0.0;
  double rate1 = 0.0;
  std::vector<int> n_list;
  int codebooks_per_n = 200;
  long trials = 10000;
  double eps = 0.2;
  std::uint64_t seed = 1;
  std::uint64_t ops_cap = kDefaultOpsCap;
};

struct RegimeResult {
  std::vector<RegimeRecord> records;           // sorted by n
  std::vector<std::string> warnings;           // soft precondition reports
  double single_letter_ref_divergence = 0.0;   // D(actual Q_Z || reference Q_Z), bits
  double input_mi_y = 0.0;                     // I(X;Y) under the codebook input
  double input_mi_z = 0.0;                     // I(X;Z) under the codebook input
};

namespace detail {

// Shared regime engine: codebooks drawn from q_code, secrecy measured
// against the single-letter reference law derived from q_ref.
inline RegimeResult run_regime(const WiretapChannel& ch, const Pmf& q_code,
                               const Pmf& q_ref, const SweepConfig& cfg) {
  if (cfg.n_list.empty()) throw DomainError("regime sweep: empty blocklength list");
  if (cfg.codebooks_per_n < 1) throw DomainError("regime sweep: ensemble size must be >= 1");
  const Dmc chy = ch.y_channel();
  const Dmc chz = ch.z_channel();
  const Pmf qz_ref = push_forward(q_ref, chz);
  const Pmf qz_actual = push_forward(q_code, chz);
  const Pmf joint_xy = joint_pmf(q_code, chy);

  RegimeResult out;
  BitsValue ref_div = kl_divergence(qz_actual, qz_ref);
  out.single_letter_ref_divergence =
      ref_div.infinite ? std::numeric_limits<double>::infinity() : ref_div.bits;
  out.input_mi_y = mutual_information(q_code, chy).bits;
  out.input_mi_z = mutual_information(q_code, chz).bits;

  std::vector<int> ns = cfg.n_list;
  std::sort(ns.begin(), ns.end());
  for (int n : ns) {
    CodeParams params = CodeParams::from_rates(n, cfg.rate, cfg.rate1, cfg.eps, cfg.ops_cap);
    RegimeRecord rec;
    rec.n = n;
    rec.num_messages = params.num_messages;
    rec.num_randomizers = params.num_randomizers;

    const int K = cfg.codebooks_per_n;
    const long trials_per_cb = std::max<long>(1, cfg.trials / K);
    NeumaierSum conf_sum, stealth_sum, eff_sum;
    std::vector<double> eff_values;
    eff_values.reserve(static_cast<std::size_t>(K));
    bool conf_inf = false, stealth_inf = false, eff_inf = false;
    long pair_errors = 0, message_errors = 0, total_trials = 0;

    for (int k = 0; k < K; ++k) {
      std::uint64_t cb_seed =
          derive_seed(cfg.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
      Codebook cb = generate_codebook(q_code, params, cb_seed);
      SecrecyReport rep = secrecy_report(cb, ch, qz_ref, cfg.ops_cap);
      rec.max_identity_residual = std::max(rec.max_identity_residual, rep.identity_residual);
      conf_inf = conf_inf || rep.confusion.infinite;
      stealth_inf = stealth_inf || rep.stealth.infinite;
      eff_inf = eff_inf || rep.effective.infinite;
      if (!rep.confusion.infinite) conf_sum.add(rep.confusion.bits);
      if (!rep.stealth.infinite) stealth_sum.add(rep.stealth.bits);
      if (!rep.effective.infinite) {
        eff_sum.add(rep.effective.bits);
        eff_values.push_back(rep.effective.bits);
      }

      if (k == 0) {
        rec.confusion_single = rep.confusion;
        rec.stealth_single = rep.stealth;
        rec.effective_single = rep.effective;
        InducedDistributions induced = induced_distributions(cb, ch, cfg.ops_cap);
        SequenceDist idle = product_extension(qz_ref, n, cfg.ops_cap);
        HypothesisPair hp(std::move(idle), std::move(induced.marginal));
        rec.alpha_plus_beta_min = min_alpha_plus_beta(hp);
      }

      ReliabilityEstimate rel =
          reliability_mc(cb, ch, joint_xy, trials_per_cb, derive_seed(cb_seed, 0x7472));
      pair_errors += std::lround(rel.error_prob * static_cast<double>(rel.trials));
      message_errors +=
          std::lround(rel.message_error_prob * static_cast<double>(rel.trials));
      total_trials += rel.trials;
    }

    const double kd = static_cast<double>(K);
    rec.confusion = conf_inf ? BitsValue::infinity() : BitsValue::finite(conf_sum.value() / kd);
    rec.stealth = stealth_inf ? BitsValue::infinity() : BitsValue::finite(stealth_sum.value() / kd);
    rec.effective = eff_inf ? BitsValue::infinity() : BitsValue::finite(eff_sum.value() / kd);
    if (!eff_inf && eff_values.size() > 1) {
      double mean = rec.effective.bits;
      NeumaierSum var;
      for (double v : eff_values) var.add((v - mean) * (v - mean));
      double sd = std::sqrt(var.value() / static_cast<double>(eff_values.size() - 1));
      rec.effective_half_width = 1.96 * sd / std::sqrt(static_cast<double>(eff_values.size()));
    } else {
      rec.effective_half_width = std::numeric_limits<double>::infinity();
    }
    rec.error_prob = static_cast<double>(pair_errors) / static_cast<double>(total_trials);
    rec.message_error_prob =
        static_cast<double>(message_errors) / static_cast<double>(total_trials);
    rec.trials = total_trials;
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace detail

// Matched regime: reference distribution equals the codebook input's
// output law. With R1 above I(X;Z) and R + R1 below I(X;Y), both terms of
// the effective divergence shrink with n. Violations of those rate
// conditions are legitimate experiments, so they warn instead of failing.
inline RegimeResult stealth_sweep(const WiretapChannel& ch, const Pmf& q_x,
                                  const SweepConfig& cfg) {
  RegimeResult out = detail::run_regime(ch, q_x, q_x, cfg);
  if (!(cfg.rate1 > out.input_mi_z)) {
    out.warnings.push_back("rate condition violated: R1 = " + std::to_string(cfg.rate1) +
                           " is not above I(X;Z) = " + std::to_string(out.input_mi_z));
  }
  if (!(cfg.rate + cfg.rate1 < out.input_mi_y)) {
    out.warnings.push_back("rate condition violated: R + R1 = " +
                           std::to_string(cfg.rate + cfg.rate1) +
                           " is not below I(X;Y) = " + std::to_string(out.input_mi_y));
  }
  return out;
}

// Mismatched regime: codebooks are drawn from q_x_actual while the
// eavesdropper's idle reference is built from q_x_intended. Confusion
// still vanishes when R1 > I(X;Z) under the actual input, but stealth
// grows like n times the single-letter reference divergence.
inline RegimeResult example1_mismatch(const WiretapChannel& ch, const Pmf& q_x_intended,
                                      const Pmf& q_x_actual, const SweepConfig& cfg) {
  RegimeResult out = detail::run_regime(ch, q_x_actual, q_x_intended, cfg);
  if (!(cfg.rate1 > out.input_mi_z)) {
    out.warnings.push_back("rate condition violated: R1 = " + std::to_string(cfg.rate1) +
                           " is not above I(X;Z) = " + std::to_string(out.input_mi_z) +
                           " under the actual input");
  }
  return out;
}

// Leaky regime: R1 below I(X;Z) but R + R1 above it, so the output
// blends into the reference while the message leaks at roughly
// n * (I(X;Z) - R1) bits. The rate ordering is enforced strictly.
inline RegimeResult example2_leaky(const WiretapChannel& ch, const Pmf& q_x,
                                   const SweepConfig& cfg) {
  double iz = mutual_information(q_x, ch.z_channel()).bits;
  if (!(cfg.rate1 < iz && iz < cfg.rate + cfg.rate1)) {
    throw DomainError("example2_leaky: need R1 < I(X;Z) < R + R1, got R1 = " +
                      std::to_string(cfg.rate1) + ", I(X;Z) = " + std::to_string(iz) +
                      ", R + R1 = " + std::to_string(cfg.rate + cfg.rate1));
  }
  return detail::run_regime(ch, q_x, q_x, cfg);
}

}  // namespace effsec
