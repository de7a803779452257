#include <catch2/catch_amalgamated.hpp>

#include "dchaos/entropy.hpp"
#include "dchaos/system_forge.hpp"

using namespace dchaos;
using Catch::Matchers::WithinAbs;

namespace {

// Per-A enumeration straight from the definition: slide both blocks and count
// the m-windows where they differ.
std::uint64_t naive_ball(const Word& a0, int m, double eta) {
  const int n = static_cast<int>(a0.size());
  const int windows = n - m + 1;
  std::uint64_t count = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    const Word a = bits_of(code, n);
    int differ = 0;
    for (int j = 0; j < windows; ++j)
      if (!std::equal(a.begin() + j, a.begin() + j + m, a0.begin() + j)) ++differ;
    if (differ < eta * windows) ++count;
  }
  return count;
}

Word alternating(int n) {
  Word w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = static_cast<Symbol>(i % 2);
  return w;
}

}  // namespace

TEST_CASE("binary entropy", "[entropy]") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK_THAT(binary_entropy(0.9), WithinAbs(0.4689955935892812, 1e-15));
  CHECK_THROWS_AS(binary_entropy(1.5), Error);
}

TEST_CASE("block-count entropy", "[entropy]") {
  const auto levels = block_count_entropy(QSchedule(std::vector<std::int64_t>(6, 2)));
  REQUIRE(levels.size() == 6);
  for (const auto& e : levels) CHECK(*e.exact == Ratio(1, std::int64_t{1} << e.level));
  const auto three = block_count_entropy(QSchedule({3, 5}));
  CHECK(*three[1].exact == Ratio(1, 4));

  const std::vector<std::pair<std::uint64_t, std::int64_t>> full{{2, 1}, {4, 2}, {256, 8}};
  for (const auto& e : block_count_entropy(full)) CHECK(*e.exact == Ratio(1));
  const std::vector<std::pair<std::uint64_t, std::int64_t>> odd{{3, 2}, {1, 5}};
  const auto o = block_count_entropy(odd);
  CHECK_FALSE(o[0].exact.has_value());
  CHECK_THAT(o[0].bits_per_symbol, WithinAbs(std::log2(3.0) / 2.0, 1e-15));
  CHECK(o[1].bits_per_symbol == 0.0);
}

TEST_CASE("empirical cylinder entropy", "[entropy]") {
  const Word zeros(1000, 0);
  CHECK(empirical_cylinder_entropy(zeros, 4).bits_per_symbol == 0.0);
  const Word period2 = alternating(1000);
  CHECK_THAT(empirical_cylinder_entropy(period2, 4).bits_per_symbol, WithinAbs(0.25, 1e-5));
  const auto fair = sample_orbit(FullShift{}, 100000, 7).symbols;
  const auto e = empirical_cylinder_entropy(fair, 8);
  CHECK_THAT(e.bits_per_symbol, WithinAbs(1.0, 0.05));
  CHECK_FALSE(e.undersampled);
  CHECK(e.distinct == 256);
  CHECK(empirical_cylinder_entropy(std::span(fair).first(1000), 8).undersampled);
  CHECK_THROWS_AS(empirical_cylinder_entropy(std::span(fair).first(3), 8), Error);
}

TEST_CASE("parameter inequality solver", "[entropy]") {
  SECTION("eta = 0.81") {
    const auto p = solve_pipka(0.81, 1.0, 2);
    REQUIRE(p.feasible);
    CHECK(p.epsilon == 0.005);
    CHECK(p.m == 15);
    // by substitution
    const double left = 2.0 * binary_entropy(0.9) / 15.0 + 0.005 * 7.0;
    CHECK(left < 0.1);
    CHECK(2.0 * binary_entropy(0.9) / 14.0 + 0.005 * 7.0 >= 0.1);
  }
  SECTION("results satisfy the inequality with minimal m") {
    for (double eta : {0.01, 0.25, 0.5, 0.9}) {
      for (int card : {2, 3}) {
        const auto p = solve_pipka(eta, 1.0, card);
        REQUIRE(p.feasible);
        CHECK(p.epsilon < 1.0 - std::sqrt(eta));
        CHECK(pipka_holds(eta, 1.0, card, p.epsilon, p.m));
        if (p.m > 1) {
          for (double eps : default_epsilon_grid()) CHECK_FALSE(pipka_holds(eta, 1.0, card, eps, p.m - 1));
        }
      }
    }
  }
  SECTION("infeasible cases") {
    const auto zero_h = solve_pipka(0.5, 0.0, 2);
    CHECK_FALSE(zero_h.feasible);
    CHECK_FALSE(zero_h.reason.empty());
    const std::vector<double> big{0.5};
    CHECK_FALSE(solve_pipka(0.5, 1.0, 2, big).feasible);
    CHECK_THROWS_AS(solve_pipka(1.0, 1.0, 2), Error);
  }
}

TEST_CASE("eta-ball counts", "[entropy]") {
  SECTION("agree with per-block enumeration") {
    for (int n : {6, 8, 10}) {
      for (int m : {1, 2, 3}) {
        for (double eta : {0.1, 0.25, 0.5, 0.75}) {
          CHECK(count_eta_ball(Word(static_cast<std::size_t>(n), 0), m, eta) == naive_ball(Word(static_cast<std::size_t>(n), 0), m, eta));
          CHECK(count_eta_ball(alternating(n), m, eta) == naive_ball(alternating(n), m, eta));
        }
      }
    }
  }
  SECTION("edge cases") {
    CHECK(count_eta_ball(Word(8, 0), 2, 1.01) == 256);
    CHECK(count_eta_ball(Word(8, 0), 2, 1e-9) == 1);
    // m = 1, eta = 1/2 on 4 bits: fewer than 2 differing bits
    CHECK(count_eta_ball(Word(4, 0), 1, 0.5) == 5);
  }
  SECTION("monotone in eta") {
    std::uint64_t prev = 0;
    for (double eta : {0.1, 0.2, 0.4, 0.6, 0.8, 1.0}) {
      const auto c = count_eta_ball(Word(10, 0), 2, eta);
      CHECK(c >= prev);
      prev = c;
    }
  }
  SECTION("guard") {
    try {
      count_eta_ball(Word(22, 0), 2, 0.5);
      FAIL("expected the guard to trip");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::budget);
    }
    CHECK_NOTHROW(count_eta_ball(Word(12, 0), 2, 0.5, 12));
  }
}

TEST_CASE("eta-ball bound", "[entropy]") {
  SECTION("counts stay under the bound") {
    for (int n : {8, 10, 12}) {
      for (int m : {2, 3}) {
        for (double eta : {0.25, 0.5}) {
          const auto b = eta_ball_bound(n, m, eta, 0.005, 1.0, 2, 0.0);
          CHECK(static_cast<double>(count_eta_ball(Word(static_cast<std::size_t>(n), 0), m, eta)) <= b.bound);
        }
      }
    }
  }
  SECTION("monotone in epsilon and in m on a grid") {
    double prev = 0.0;
    for (double eps : {0.001, 0.005, 0.01, 0.02}) {
      const auto b = eta_ball_bound(100, 4, 0.5, eps, 1.0, 2, 0.0);
      CHECK(b.log2_bound > prev);
      prev = b.log2_bound;
    }
    prev = 1e300;
    for (int m = 1; m <= 10; ++m) {
      const auto b = eta_ball_bound(100, m, 0.5, 0.01, 1.0, 2, 0.0);
      CHECK(b.log2_bound < prev);
      prev = b.log2_bound;
    }
  }
  SECTION("below-threshold flag") {
    const auto p = solve_pipka(0.81, 1.0, 2);
    CHECK(eta_ball_bound(10000, static_cast<int>(p.m), 0.81, p.epsilon, 1.0, 2, 0.0001).below_threshold);
    CHECK_FALSE(eta_ball_bound(10000, static_cast<int>(p.m), 0.81, p.epsilon, 1.0, 2, 0.01).below_threshold);
  }
}
