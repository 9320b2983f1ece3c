#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "effsec/scenarios.hpp"

using namespace effsec;

namespace {

// Constant-information-density eavesdropper channel with a noiseless main
// channel; the regime trends are visible at desk-scale blocklengths here.
WiretapChannel typewriter_channel() {
  return WiretapChannel::from_marginals(Dmc::identity(Alphabet::indexed(5)),
                                        Dmc::noisy_typewriter(5, 3));
}

}  // namespace

TEST_CASE("stealth sweep smoke and determinism") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.1), Dmc::bsc(0.3));
  Pmf u = Pmf::uniform(Alphabet::indexed(2));
  SweepConfig cfg;
  cfg.rate = 0.1;
  cfg.rate1 = mutual_information(u, ch.z_channel()).bits + 0.15;
  cfg.n_list = {1};
  cfg.codebooks_per_n = 10;
  cfg.trials = 200;
  cfg.seed = 3;

  RegimeResult a = stealth_sweep(ch, u, cfg);
  REQUIRE(a.records.size() == 1);
  const RegimeRecord& r = a.records[0];
  CHECK(r.n == 1);
  CHECK_FALSE(r.effective.infinite);
  CHECK(r.max_identity_residual <= 1e-9);
  CHECK(r.alpha_plus_beta_min >= 0.0);

  RegimeResult b = stealth_sweep(ch, u, cfg);
  CHECK(a.records[0].effective.bits == b.records[0].effective.bits);
  CHECK(a.records[0].error_prob == b.records[0].error_prob);
  CHECK(a.records[0].alpha_plus_beta_min == b.records[0].alpha_plus_beta_min);
}

TEST_CASE("stealth sweep warns on violated rate conditions") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.1), Dmc::bsc(0.3));
  Pmf u = Pmf::uniform(Alphabet::indexed(2));
  SweepConfig cfg;
  cfg.rate = 0.1;
  cfg.rate1 = 0.01;  // below I(X;Z)
  cfg.n_list = {1};
  cfg.codebooks_per_n = 2;
  cfg.trials = 10;
  RegimeResult res = stealth_sweep(ch, u, cfg);
  REQUIRE_FALSE(res.warnings.empty());
}

TEST_CASE("stealth sweep trends under the rate condition", "[slow]") {
  WiretapChannel ch = typewriter_channel();
  Pmf u = Pmf::uniform(Alphabet::indexed(5));
  SweepConfig cfg;
  cfg.rate = 0.05;
  cfg.rate1 = mutual_information(u, ch.z_channel()).bits + 0.15;
  cfg.n_list = {2, 4, 6, 8};
  cfg.codebooks_per_n = 200;
  cfg.trials = 4000;
  cfg.eps = 4.0;
  cfg.seed = 5;
  cfg.ops_cap = std::uint64_t{1} << 27;

  RegimeResult res = stealth_sweep(ch, u, cfg);
  CHECK(res.warnings.empty());
  REQUIRE(res.records.size() == 4);
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    CHECK(res.records[i].effective.bits < res.records[i - 1].effective.bits);
  }
  // reliability: the largest blocklength still decodes well on the
  // noiseless main channel
  CHECK(res.records.back().error_prob < 0.2);
  for (const auto& rec : res.records) CHECK(rec.max_identity_residual <= 1e-9);
}

TEST_CASE("mismatched codebooks: secrecy without stealth", "[slow]") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.02), Dmc::bsc(0.1));
  Pmf intended = Pmf::uniform(Alphabet::indexed(2));
  Pmf actual(Alphabet::indexed(2), {0.8, 0.2});
  SweepConfig cfg;
  cfg.rate = 0.25;
  cfg.rate1 = 1.0;
  cfg.n_list = {2, 3, 4, 5, 6, 7, 8};
  cfg.codebooks_per_n = 120;
  cfg.trials = 2000;
  cfg.seed = 11;

  RegimeResult res = example1_mismatch(ch, intended, actual, cfg);
  CHECK(res.warnings.empty());
  REQUIRE(res.records.size() == 7);

  // the single-letter reference divergence matches a direct evaluation
  Pmf qz_act = push_forward(actual, ch.z_channel());
  Pmf qz_int = push_forward(intended, ch.z_channel());
  double expect = 0.0;
  for (std::size_t z = 0; z < 2; ++z) {
    expect += qz_act[z] * std::log2(qz_act[z] / qz_int[z]);
  }
  CHECK(res.single_letter_ref_divergence == Catch::Approx(expect).margin(1e-12));

  // stealth grows linearly: least-squares slope against n within a wide
  // band of the single-letter divergence
  double sn = 0.0, ss = 0.0, snn = 0.0, sns = 0.0;
  for (const auto& rec : res.records) {
    double n = rec.n, s = rec.stealth.bits;
    sn += n;
    ss += s;
    snn += n * n;
    sns += n * s;
  }
  double k = static_cast<double>(res.records.size());
  double slope = (k * sns - sn * ss) / (k * snn - sn * sn);
  CHECK(slope >= 0.5 * expect);
  CHECK(slope <= 1.5 * expect);

  // confusion stays small while stealth grows
  const RegimeRecord& last = res.records.back();
  CHECK(last.confusion.bits < last.stealth.bits / 3.0);
}

TEST_CASE("matched inputs reduce the mismatch run to the stealth regime") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.02), Dmc::bsc(0.1));
  Pmf u = Pmf::uniform(Alphabet::indexed(2));
  SweepConfig cfg;
  cfg.rate = 0.1;
  cfg.rate1 = 1.0;
  cfg.n_list = {3};
  cfg.codebooks_per_n = 30;
  cfg.trials = 100;
  RegimeResult mismatch = example1_mismatch(ch, u, u, cfg);
  RegimeResult sweep = stealth_sweep(ch, u, cfg);
  CHECK(mismatch.single_letter_ref_divergence == 0.0);
  CHECK(mismatch.records[0].stealth.bits == sweep.records[0].stealth.bits);
  CHECK(mismatch.records[0].effective.bits == sweep.records[0].effective.bits);
}

TEST_CASE("leaky regime: stealth without secrecy", "[slow]") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::identity(Alphabet::indexed(2)),
                                                     Dmc::binary_erasure(0.25));
  Pmf u = Pmf::uniform(Alphabet::indexed(2));
  double iz = mutual_information(u, ch.z_channel()).bits;  // 0.75
  SweepConfig cfg;
  cfg.rate = 1.0;
  cfg.rate1 = 0.5;
  cfg.n_list = {2, 4, 6, 8};
  cfg.codebooks_per_n = 150;
  cfg.trials = 2000;
  cfg.seed = 13;

  RegimeResult res = example2_leaky(ch, u, cfg);
  REQUIRE(res.records.size() == 4);
  // stealth shrinks across the sweep
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    CHECK(res.records[i].stealth.bits < res.records[i - 1].stealth.bits);
  }
  // confusion per symbol near I(X;Z) - R1
  const RegimeRecord& last = res.records.back();
  double per_symbol = last.confusion.bits / 8.0;
  CHECK(per_symbol >= 0.3 * (iz - cfg.rate1));
  CHECK(per_symbol <= 1.7 * (iz - cfg.rate1));
}

TEST_CASE("leaky regime confusion band on a BSC pair") {
  // At n <= 8 the realized total rate of this config is non-monotone in n
  // (codebook sizes round), so only the confusion growth is asserted here;
  // the strict stealth decrease is exercised on the erasure config above.
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.1), Dmc::bsc(0.2));
  Pmf u = Pmf::uniform(Alphabet::indexed(2));
  double iz = mutual_information(u, ch.z_channel()).bits;  // ~0.2781
  SweepConfig cfg;
  cfg.rate = 0.35;
  cfg.rate1 = 0.15;
  cfg.n_list = {8};
  cfg.codebooks_per_n = 150;
  cfg.trials = 300;
  cfg.seed = 17;
  RegimeResult res = example2_leaky(ch, u, cfg);
  double per_symbol = res.records[0].confusion.bits / 8.0;
  CHECK(per_symbol >= 0.3 * (iz - cfg.rate1));
  CHECK(per_symbol <= 1.7 * (iz - cfg.rate1));
}

TEST_CASE("leaky regime guards its rate ordering") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.1), Dmc::bsc(0.2));
  Pmf u = Pmf::uniform(Alphabet::indexed(2));
  SweepConfig cfg;
  cfg.rate = 0.35;
  cfg.rate1 = 0.5;  // above I(X;Z) = 0.278: not leaky
  cfg.n_list = {2};
  cfg.codebooks_per_n = 2;
  cfg.trials = 10;
  CHECK_THROWS_AS(example2_leaky(ch, u, cfg), DomainError);
}

TEST_CASE("regime separation at the largest common blocklength", "[slow]") {
  // stealth regime: both terms small; mismatch regime: stealth dominates;
  // leaky regime: confusion dominates. Each distinguished quantity beats
  // the other regime's by a factor of three under the default configs.
  const int n_top = 8;

  WiretapChannel stealth_ch = typewriter_channel();
  Pmf u5 = Pmf::uniform(Alphabet::indexed(5));
  SweepConfig s_cfg;
  s_cfg.rate = 0.05;
  s_cfg.rate1 = mutual_information(u5, stealth_ch.z_channel()).bits + 0.15;
  s_cfg.n_list = {n_top};
  s_cfg.codebooks_per_n = 100;
  s_cfg.trials = 1000;
  s_cfg.eps = 4.0;
  s_cfg.ops_cap = std::uint64_t{1} << 27;
  RegimeRecord stealth_rec = stealth_sweep(stealth_ch, u5, s_cfg).records[0];

  WiretapChannel mm_ch = WiretapChannel::from_marginals(Dmc::bsc(0.02), Dmc::bsc(0.1));
  Pmf u2 = Pmf::uniform(Alphabet::indexed(2));
  Pmf skew(Alphabet::indexed(2), {0.8, 0.2});
  SweepConfig m_cfg;
  m_cfg.rate = 0.25;
  m_cfg.rate1 = 1.0;
  m_cfg.n_list = {n_top};
  m_cfg.codebooks_per_n = 100;
  m_cfg.trials = 1000;
  RegimeRecord mm_rec = example1_mismatch(mm_ch, u2, skew, m_cfg).records[0];

  WiretapChannel leaky_ch = WiretapChannel::from_marginals(
      Dmc::identity(Alphabet::indexed(2)), Dmc::binary_erasure(0.25));
  SweepConfig l_cfg;
  l_cfg.rate = 1.0;
  l_cfg.rate1 = 0.5;
  l_cfg.n_list = {n_top};
  l_cfg.codebooks_per_n = 100;
  l_cfg.trials = 1000;
  RegimeRecord leaky_rec = example2_leaky(leaky_ch, u2, l_cfg).records[0];

  // mismatch regime: stealth large, confusion small
  CHECK(mm_rec.stealth.bits > 3.0 * mm_rec.confusion.bits);
  // leaky regime: confusion large, stealth small
  CHECK(leaky_rec.confusion.bits > 3.0 * leaky_rec.stealth.bits);
  // stealth regime: both small compared to the distinguished quantities
  CHECK(mm_rec.stealth.bits > 3.0 * stealth_rec.stealth.bits);
  CHECK(leaky_rec.confusion.bits > 3.0 * stealth_rec.confusion.bits);
}
