#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "effsec/info.hpp"
#include "effsec/prob.hpp"

using namespace effsec;

namespace {

Pmf binary(double p0) { return Pmf(Alphabet::indexed(2), {p0, 1.0 - p0}); }

Pmf random_pmf(Rng& rng, const Alphabet& a) {
  std::vector<double> v(a.size());
  double sum = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - rng.next_unit());
    sum += x;
  }
  for (double& x : v) x /= sum;
  return Pmf(a, std::move(v));
}

}  // namespace

TEST_CASE("alphabet invariants") {
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{}), InvalidDistribution);
  CHECK_THROWS_AS(Alphabet(std::vector<std::string>{"a", "a"}), InvalidDistribution);
  Alphabet a = Alphabet::indexed(3);
  CHECK(a.size() == 3);
  CHECK(a.label(2) == "2");
  CHECK(a.index_of("1") == 1);
  CHECK_FALSE(a.index_of("7").has_value());

  Alphabet p = pair_alphabet(Alphabet::indexed(2), Alphabet::indexed(3));
  CHECK(p.size() == 6);
  CHECK(p.label(1 * 3 + 2) == "1,2");
}

TEST_CASE("pmf normalization window") {
  // Deviations up to 1e-9 are text-format rounding; larger ones are bugs.
  Pmf ok(Alphabet::indexed(2), {0.5 + 4e-10, 0.5});
  CHECK(ok[0] + ok[1] == Catch::Approx(1.0).margin(1e-15));
  CHECK_THROWS_AS(Pmf(Alphabet::indexed(2), {0.49, 0.49}), InvalidDistribution);
  CHECK_THROWS_AS(Pmf(Alphabet::indexed(2), {-0.1, 1.1}), InvalidDistribution);
  CHECK_THROWS_AS(Pmf(Alphabet::indexed(3), {0.5, 0.5}), DimensionError);
}

TEST_CASE("product_extension examples") {
  SECTION("deterministic input puts all mass on one tuple") {
    SequenceDist d = product_extension(binary(1.0), 3);
    CHECK(d[0] == 1.0);
    for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i] == 0.0);
  }
  SECTION("uniform product is uniform") {
    SequenceDist d = product_extension(binary(0.5), 2);
    for (std::size_t i = 0; i < 4; ++i) CHECK(d[i] == Catch::Approx(0.25));
  }
  SECTION("direct product evaluation") {
    SequenceDist d = product_extension(binary(0.25), 2);
    // tuple (0,1) has index 0*2+1
    CHECK(d[1] == Catch::Approx(0.1875).margin(1e-15));
  }
  SECTION("cap exceeded names sizes") {
    try {
      product_extension(binary(0.5), 30, 1 << 20);
      FAIL("expected EnumerationOverflow");
    } catch (const EnumerationOverflow& e) {
      CHECK(e.allowed() == (1 << 20));
      CHECK(std::string(e.what()).find("cap") != std::string::npos);
    }
  }
}

TEST_CASE("product_extension preserves mass") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    std::size_t k = 2 + t % 3;
    Pmf p = random_pmf(rng, Alphabet::indexed(k));
    SequenceDist d = product_extension(p, 1 + t % 5);
    NeumaierSum s;
    for (std::size_t i = 0; i < d.size(); ++i) s.add(d[i]);
    CHECK(s.value() == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("push_forward examples") {
  Dmc bsc01 = Dmc::bsc(0.1);
  Pmf u = push_forward(binary(0.5), bsc01);
  CHECK(u[0] == Catch::Approx(0.5));
  Pmf pt = push_forward(binary(1.0), bsc01);
  CHECK(pt[0] == Catch::Approx(0.9));
  CHECK(pt[1] == Catch::Approx(0.1));
  Pmf q = push_forward(binary(0.25), Dmc::bsc(0.2));
  CHECK(q[0] == Catch::Approx(0.35).margin(1e-12));
  CHECK(q[1] == Catch::Approx(0.65).margin(1e-12));

  CHECK_THROWS_AS(push_forward(Pmf::uniform(Alphabet::indexed(3)), bsc01), DimensionError);
}

TEST_CASE("push_forward composes associatively") {
  Rng rng(12);
  Alphabet a2 = Alphabet::indexed(2), a3 = Alphabet::indexed(3);
  auto row = [&](const Alphabet& a) {
    Pmf p = random_pmf(rng, a);
    return std::vector<double>(p.probs().begin(), p.probs().end());
  };
  for (int t = 0; t < 10; ++t) {
    Dmc first(a2, a3, {row(a3), row(a3)});
    Dmc second(a3, a2, {row(a2), row(a2), row(a2)});
    Pmf q = random_pmf(rng, a2);
    Pmf two_step = push_forward(push_forward(q, first), second);
    Pmf one_step = push_forward(q, compose(first, second));
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(two_step[i] == Catch::Approx(one_step[i]).margin(1e-12));
    }
  }
}

TEST_CASE("compose_prefix examples") {
  WiretapChannel ch = WiretapChannel::from_marginals(Dmc::bsc(0.1), Dmc::bsc(0.3));
  SECTION("identity prefix leaves the channel unchanged") {
    WiretapChannel same = compose_prefix(Dmc::identity(ch.input()), ch);
    for (std::size_t x = 0; x < 2; ++x) {
      auto a = ch.joint_row(x);
      auto b = same.joint_row(x);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == Catch::Approx(b[i]).margin(1e-15));
    }
  }
  SECTION("constant prefix collapses all rows") {
    Alphabet v = Alphabet::indexed(2, "v");
    Dmc constant(v, ch.input(), {{1.0, 0.0}, {1.0, 0.0}});
    WiretapChannel collapsed = compose_prefix(constant, ch);
    auto r0 = collapsed.joint_row(0);
    auto r1 = collapsed.joint_row(1);
    for (std::size_t i = 0; i < r0.size(); ++i) CHECK(r0[i] == Catch::Approx(r1[i]).margin(1e-15));
  }
  SECTION("2x2 prefix matches a brute-force sum over x") {
    Alphabet v = Alphabet::indexed(2, "v");
    Dmc prefix(v, ch.input(), {{0.9, 0.1}, {0.2, 0.8}});
    WiretapChannel composed = compose_prefix(prefix, ch);
    for (std::size_t vv = 0; vv < 2; ++vv) {
      for (std::size_t y = 0; y < 2; ++y) {
        for (std::size_t z = 0; z < 2; ++z) {
          double expect = 0.0;
          for (std::size_t x = 0; x < 2; ++x) {
            expect += prefix.at(vv, x) * ch.joint(x, y, z);
          }
          CHECK(composed.joint(vv, y, z) == Catch::Approx(expect).margin(1e-12));
        }
      }
    }
  }
  SECTION("alphabet mismatch") {
    Dmc bad(Alphabet::indexed(2, "v"), Alphabet::indexed(3), {{1, 0, 0}, {0, 1, 0}});
    CHECK_THROWS_AS(compose_prefix(bad, ch), DimensionError);
  }
}

TEST_CASE("marginal_channels examples") {
  SECTION("product joint recovers both factors") {
    Dmc chy = Dmc::bsc(0.1), chz = Dmc::bsc(0.3);
    auto [my, mz] = marginal_channels(WiretapChannel::from_marginals(chy, chz));
    for (std::size_t x = 0; x < 2; ++x) {
      for (std::size_t o = 0; o < 2; ++o) {
        CHECK(my.at(x, o) == Catch::Approx(chy.at(x, o)).margin(1e-12));
        CHECK(mz.at(x, o) == Catch::Approx(chz.at(x, o)).margin(1e-12));
      }
    }
  }
  SECTION("perfectly correlated outputs give identical marginals") {
    // Z == Y: joint(y,z|x) = Q(y|x) * [z == y]
    Alphabet b = Alphabet::indexed(2);
    std::vector<std::vector<double>> rows = {{0.9, 0.0, 0.0, 0.1}, {0.1, 0.0, 0.0, 0.9}};
    auto [my, mz] = marginal_channels(WiretapChannel(b, b, b, rows));
    for (std::size_t x = 0; x < 2; ++x) {
      for (std::size_t o = 0; o < 2; ++o) {
        CHECK(my.at(x, o) == Catch::Approx(mz.at(x, o)).margin(1e-15));
      }
    }
  }
  SECTION("random joint matches hand summation") {
    Rng rng(13);
    Alphabet b = Alphabet::indexed(2);
    Alphabet yz = Alphabet::indexed(4);
    std::vector<std::vector<double>> rows;
    for (int x = 0; x < 2; ++x) {
      Pmf p = random_pmf(rng, yz);
      rows.emplace_back(p.probs().begin(), p.probs().end());
    }
    WiretapChannel ch(b, b, b, rows);
    auto [my, mz] = marginal_channels(ch);
    for (std::size_t x = 0; x < 2; ++x) {
      CHECK(my.at(x, 0) == Catch::Approx(rows[x][0] + rows[x][1]).margin(1e-12));
      CHECK(mz.at(x, 0) == Catch::Approx(rows[x][0] + rows[x][2]).margin(1e-12));
    }
  }
}

TEST_CASE("prefix composition commutes with marginalization") {
  Rng rng(14);
  Alphabet b = Alphabet::indexed(2);
  Alphabet yz = Alphabet::indexed(4);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<double>> rows;
    for (int x = 0; x < 2; ++x) {
      Pmf p = random_pmf(rng, yz);
      rows.emplace_back(p.probs().begin(), p.probs().end());
    }
    WiretapChannel ch(b, b, b, rows);
    Pmf p0 = random_pmf(rng, b), p1 = random_pmf(rng, b);
    Dmc prefix(Alphabet::indexed(2, "v"), b,
               {std::vector<double>(p0.probs().begin(), p0.probs().end()),
                std::vector<double>(p1.probs().begin(), p1.probs().end())});
    auto [py, pz] = marginal_channels(compose_prefix(prefix, ch));
    Dmc qy = compose(prefix, ch.y_channel());
    Dmc qz = compose(prefix, ch.z_channel());
    for (std::size_t v = 0; v < 2; ++v) {
      for (std::size_t o = 0; o < 2; ++o) {
        CHECK(py.at(v, o) == Catch::Approx(qy.at(v, o)).margin(1e-12));
        CHECK(pz.at(v, o) == Catch::Approx(qz.at(v, o)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("letter typicality") {
  Pmf u = binary(0.5);
  SECTION("exact empirical match at zero slack") {
    Sequence s{0, 1, 0, 1};
    CHECK(is_typical(s, u, 0.0));
  }
  SECTION("all-zeros fails at slack 0.5") {
    Sequence s{0, 0, 0, 0};
    CHECK_FALSE(is_typical(s, u, 0.5));
  }
  SECTION("zero-probability symbol forces failure at any slack") {
    Pmf p = binary(1.0);
    Sequence s{0, 0, 1, 0};
    CHECK_FALSE(is_typical(s, p, 100.0));
  }
}

TEST_CASE("typical-set mass by exhaustive enumeration") {
  // Multiplicative letter-typicality is strict at short blocklengths: at
  // n = 16 and slack 0.2 only counts in {7, 8, 9} qualify, mass ~0.5455.
  // At slack 0.5 the set carries most of the product mass.
  Pmf u = binary(0.5);
  const int n = 16;
  SequenceDist d = product_extension(u, n);
  NeumaierSum mass02, mass05;
  for (std::size_t i = 0; i < d.size(); ++i) {
    Sequence s = d.sequence_at(i);
    if (is_typical(s, u, 0.2)) mass02.add(d[i]);
    if (is_typical(s, u, 0.5)) mass05.add(d[i]);
  }
  // Independent binomial-count oracle.
  auto binom_mass = [&](double eps) {
    double total = 0.0;
    double c = 1.0;  // C(16, 0)
    for (int k = 0; k <= n; ++k) {
      double f0 = static_cast<double>(k) / n;
      if (std::abs(f0 - 0.5) <= eps * 0.5 && std::abs((1.0 - f0) - 0.5) <= eps * 0.5) {
        total += c;
      }
      c = c * (n - k) / (k + 1);
    }
    return total / std::exp2(n);
  };
  CHECK(mass02.value() == Catch::Approx(binom_mass(0.2)).margin(1e-12));
  CHECK(mass05.value() == Catch::Approx(binom_mass(0.5)).margin(1e-12));
  CHECK(mass02.value() == Catch::Approx(35750.0 / 65536.0).margin(1e-12));
  CHECK(mass05.value() > 0.9);
}

TEST_CASE("joint typicality over the pair alphabet") {
  Pmf q = binary(0.5);
  Dmc noiseless = Dmc::identity(Alphabet::indexed(2));
  Pmf joint = joint_pmf(q, noiseless);
  Sequence x{0, 1, 0, 1}, same{0, 1, 0, 1}, other{0, 1, 1, 1};
  CHECK(is_jointly_typical(x, same, joint, 2, 1.0));
  // one crossed position hits a zero-probability pair
  CHECK_FALSE(is_jointly_typical(x, other, joint, 2, 1.0));
}
