#pragma once

// Entropy bookkeeping: binary entropy, block-count entropy of block
// families, plug-in cylinder entropy of a track, the parameter inequality
//   2 H(sqrt eta)/m + eps (3 #P + 1) < (1 - sqrt eta) h,   eps < 1 - sqrt eta,
// and brute-force counts of eta-disagreement balls against the product bound.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dchaos/blocks.hpp"
#include "dchaos/error.hpp"

namespace dchaos {

/// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
inline double binary_entropy(double p) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::domain, "binary entropy needs p in [0, 1]");
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

struct LevelEntropy {
  int level = 0;
  double log2_count = 0.0;
  std::int64_t length = 0;
  std::optional<Ratio> exact;  // set when the count is a power of two
  double bits_per_symbol = 0.0;
};

struct CylinderEntropy {
  int word_length = 0;
  double bits_per_symbol = 0.0;
  std::int64_t windows = 0;
  std::int64_t distinct = 0;
  bool undersampled = false;
};

struct EntropyReport {
  std::vector<LevelEntropy> levels;
  std::vector<CylinderEntropy> cylinders;
  std::int64_t horizon = 0;
};

/// log2(count)/length per level for (count, length) pairs.
inline std::vector<LevelEntropy> block_count_entropy(std::span<const std::pair<std::uint64_t, std::int64_t>> families) {
  std::vector<LevelEntropy> out;
  int level = 0;
  for (const auto& [count, length] : families) {
    ++level;
    require(count >= 1 && length >= 1, ErrorKind::validation, "counts and lengths must be >= 1");
    LevelEntropy e;
    e.level = level;
    e.length = length;
    e.log2_count = std::log2(static_cast<double>(count));
    if (std::has_single_bit(count))
      e.exact = Ratio(static_cast<std::int64_t>(std::countr_zero(count)), length);
    e.bits_per_symbol = e.exact ? to_double(*e.exact) : e.log2_count / static_cast<double>(length);
    out.push_back(e);
  }
  return out;
}

/// The families C_1..C_K: #C_k = 2^{p_k} over length N_k, exactly p_k/N_k = 2^-k.
inline std::vector<LevelEntropy> block_count_entropy(const QSchedule& q) {
  std::vector<LevelEntropy> out;
  for (int k = 1; k <= q.depth(); ++k) {
    LevelEntropy e;
    e.level = k;
    e.length = q.block_length(k);
    e.log2_count = static_cast<double>(q.p(k));
    e.exact = Ratio(q.p(k), q.block_length(k));
    e.bits_per_symbol = to_double(*e.exact);
    out.push_back(e);
  }
  return out;
}

/// Plug-in entropy of the overlapping ell-words of a track, divided by ell.
/// Flags undersampling below 100 * 2^ell windows.
inline CylinderEntropy empirical_cylinder_entropy(std::span<const Symbol> track, int ell) {
  require(ell >= 1, ErrorKind::validation, "word length must be >= 1");
  require(static_cast<std::int64_t>(track.size()) >= ell, ErrorKind::insufficient_horizon,
          "track shorter than the word length");
  std::unordered_map<std::string, std::int64_t> counts;
  const std::size_t windows = track.size() - static_cast<std::size_t>(ell) + 1;
  std::string key(static_cast<std::size_t>(ell), '\0');
  for (std::size_t i = 0; i < windows; ++i) {
    for (int j = 0; j < ell; ++j) key[static_cast<std::size_t>(j)] = static_cast<char>(track[i + static_cast<std::size_t>(j)]);
    ++counts[key];
  }
  // sum in a fixed order so the result does not depend on hash iteration order
  std::vector<std::int64_t> c;
  c.reserve(counts.size());
  for (const auto& kv : counts) c.push_back(kv.second);
  std::sort(c.begin(), c.end());
  double h = 0.0;
  const double total = static_cast<double>(windows);
  for (auto n : c) {
    const double p = static_cast<double>(n) / total;
    h -= p * std::log2(p);
  }
  CylinderEntropy out;
  out.word_length = ell;
  out.bits_per_symbol = std::max(0.0, h) / ell;
  out.windows = static_cast<std::int64_t>(windows);
  out.distinct = static_cast<std::int64_t>(counts.size());
  out.undersampled = static_cast<double>(windows) < 100.0 * std::exp2(ell);
  return out;
}

// ---------------------------------------------------------------------------
// Parameter inequality

inline const std::vector<double>& default_epsilon_grid() {
  static const std::vector<double> grid{0.005, 0.01, 0.02, 0.05, 0.1};
  return grid;
}

struct PipkaParams {
  double eta = 0.0;
  double h = 0.0;
  int card = 2;
  bool feasible = false;
  double epsilon = 0.0;
  std::int64_t m = 0;
  double margin = 0.0;  // right side minus left side
  std::string reason;
};

inline double pipka_left(double eta, int card, double epsilon, std::int64_t m) {
  return 2.0 * binary_entropy(std::sqrt(eta)) / static_cast<double>(m) + epsilon * (3.0 * card + 1.0);
}

inline double pipka_right(double eta, double h) { return (1.0 - std::sqrt(eta)) * h; }

inline bool pipka_holds(double eta, double h, int card, double epsilon, std::int64_t m) {
  return epsilon > 0.0 && epsilon < 1.0 - std::sqrt(eta) && m >= 1 &&
         pipka_left(eta, card, epsilon, m) < pipka_right(eta, h);
}

/// Smallest m over the grid, then the largest grid epsilon reaching that m.
inline PipkaParams solve_pipka(double eta, double h, int card,
                               std::span<const double> epsilon_grid = default_epsilon_grid()) {
  require(eta > 0.0 && eta < 1.0, ErrorKind::domain, "eta must lie in (0, 1)");
  require(h >= 0.0, ErrorKind::domain, "entropy must be >= 0");
  require(card >= 2, ErrorKind::domain, "partition cardinality must be >= 2");
  require(!epsilon_grid.empty(), ErrorKind::validation, "epsilon grid is empty");
  PipkaParams out{eta, h, card, false, 0.0, 0, 0.0, {}};
  const double two_h = 2.0 * binary_entropy(std::sqrt(eta));
  std::vector<double> grid(epsilon_grid.begin(), epsilon_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double eps : grid) {
    if (eps <= 0.0 || eps >= 1.0 - std::sqrt(eta)) continue;
    const double room = pipka_right(eta, h) - eps * (3.0 * card + 1.0);
    if (room <= 0.0) continue;
    auto m = static_cast<std::int64_t>(std::floor(two_h / room)) + 1;
    while (m > 1 && pipka_holds(eta, h, card, eps, m - 1)) --m;  // guard the floor against rounding
    while (!pipka_holds(eta, h, card, eps, m)) ++m;
    if (!out.feasible || m < out.m || (m == out.m && eps > out.epsilon)) {
      out.feasible = true;
      out.m = m;
      out.epsilon = eps;
    }
  }
  if (out.feasible) {
    out.margin = pipka_right(eta, h) - pipka_left(eta, card, out.epsilon, out.m);
  } else {
    out.reason = h == 0.0 ? "right side vanishes at h = 0" : "no grid epsilon leaves room on the right side";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Disagreement balls

inline constexpr int kBallGuard = 20;

/// Number of binary blocks A of length n = |A0| whose fraction of differing
/// length-m windows (all n - m + 1 of them) is < eta. Exhaustive over 2^n.
inline std::uint64_t count_eta_ball(std::span<const Symbol> a0, int m, double eta, int guard = kBallGuard) {
  const int n = static_cast<int>(a0.size());
  require(n >= 1, ErrorKind::validation, "reference block is empty");
  require(n <= guard && n <= 40, ErrorKind::budget,
          "block length " + std::to_string(n) + " exceeds the enumeration guard " + std::to_string(guard));
  require(m >= 1 && m <= n, ErrorKind::validation, "need 1 <= m <= n");
  // A differs from A0 on a window iff D = A xor A0 has a set bit there, so the
  // count does not depend on A0; enumerating D covers every A exactly once.
  const int windows = n - m + 1;
  const std::uint64_t window_mask = (std::uint64_t{1} << m) - 1;
  std::uint64_t count = 0;
  for (std::uint64_t d = 0; d < (std::uint64_t{1} << n); ++d) {
    int differ = 0;
    for (int j = 0; j < windows; ++j) differ += ((d >> j) & window_mask) != 0 ? 1 : 0;
    if (static_cast<double>(differ) < eta * windows) ++count;
  }
  return count;
}

struct BallBound {
  double log2_bound = 0.0;
  double bound = 0.0;
  double log2_threshold = 0.0;  // n (h - 2 delta)
  bool below_threshold = false;
};

/// 2^{n (2H(sqrt eta)/m + log2 m / n + eps (3#P + 1) + h sqrt eta)} against 2^{n (h - 2 delta)}.
inline BallBound eta_ball_bound(int n, int m, double eta, double epsilon, double h, int card, double delta) {
  require(n >= 1 && m >= 1, ErrorKind::domain, "n and m must be positive");
  require(eta > 0.0 && eta < 1.0 && epsilon > 0.0 && h >= 0.0 && delta >= 0.0 && card >= 2,
          ErrorKind::domain, "bound parameters out of range");
  require(epsilon < 1.0 - std::sqrt(eta), ErrorKind::domain, "need epsilon < 1 - sqrt(eta)");
  const double r = std::sqrt(eta);
  BallBound b;
  b.log2_bound = n * (2.0 * binary_entropy(r) / m + std::log2(static_cast<double>(m)) / n +
                      epsilon * (3.0 * card + 1.0) + h * r);
  b.bound = std::exp2(b.log2_bound);
  b.log2_threshold = n * (h - 2.0 * delta);
  b.below_threshold = b.log2_bound < b.log2_threshold;
  return b;
}

}  // namespace dchaos
