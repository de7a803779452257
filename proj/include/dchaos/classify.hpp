#pragma once

// Pair classification: finite-horizon readings of Li-Yorke / DC1 / DC1half /
// DC2 / DC3 from a Phi profile, partition-based scrambling under a refining
// scheme, and a greedy scrambled-clique scan.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dchaos/density.hpp"
#include "dchaos/error.hpp"
#include "dchaos/system_forge.hpp"

namespace dchaos {

struct Thresholds {
  double tau_one = 0.05;
  double tau_zero = 0.05;
  std::vector<double> eta_grid{0.5, 0.75, 0.9};
  double eta_min = 0.05;
  double gap = 0.1;
  CheckpointPolicy policy;

  void validate() const {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    require(open_unit(tau_one) && open_unit(tau_zero) && open_unit(eta_min) && open_unit(gap),
            ErrorKind::validation, "thresholds must lie in (0, 1)");
    require(tau_one + tau_zero < 1.0, ErrorKind::validation, "tau_one + tau_zero must be < 1");
    require(!eta_grid.empty(), ErrorKind::validation, "eta grid is empty");
    for (double e : eta_grid) require(open_unit(e), ErrorKind::validation, "eta grid values must lie in (0, 1)");
  }
};

struct PairVerdict {
  bool li_yorke = false;
  bool dc1 = false;
  bool dc1half = false;
  bool dc2 = false;
  bool dc3 = false;
  bool dc1_finite_horizon_only = true;

  double s = 0.0;                  // separation threshold (smallest grid point)
  std::optional<double> dc1_s;     // largest grid t with Phi(t) <= tau_zero
  double agreement_upper = 0.0;    // Phi*(t_min)
  double separation_upper = 0.0;   // 1 - Phi(t_min)
  std::vector<std::optional<double>> s_eta;  // per eta-grid entry
  PhiProfile profile;
  BesicovitchBounds averages;

  bool chain_holds() const {
    return (!dc1 || dc1half) && (!dc1half || dc2) && (!dc2 || dc3) && (!dc2 || li_yorke);
  }
};

inline PairVerdict classify_metric_pair(const PhiProfile& profile, const BesicovitchBounds& averages,
                                        const Thresholds& th) {
  th.validate();
  require(profile.policy == averages.policy, ErrorKind::consistency,
          "profile and running means use different checkpoint policies (" +
              profile.policy.to_string() + " vs " + averages.policy.to_string() + ")");
  require(profile.size() > 0, ErrorKind::grid, "empty profile");

  PairVerdict v;
  v.profile = profile;
  v.averages = averages;
  v.s = profile.grid.front();
  v.agreement_upper = profile.phi_star.front();
  v.separation_upper = 1.0 - profile.phi_lower.front();

  const bool close = v.agreement_upper >= 1.0 - th.tau_one;
  const bool dc2 = close && v.separation_upper >= th.eta_min;
  const bool dc1half = close && profile.phi_lower.front() <= th.tau_zero;
  for (std::size_t j = 0; j < profile.size(); ++j)
    if (profile.phi_lower[j] <= th.tau_zero) v.dc1_s = profile.grid[j];
  const bool dc1 = close && v.dc1_s.has_value();

  bool dc3 = false;
  for (std::size_t j = 1; j < profile.size() && !dc3; ++j) {
    dc3 = profile.phi_star[j - 1] - profile.phi_lower[j - 1] >= th.gap &&
          profile.phi_star[j] - profile.phi_lower[j] >= th.gap;
  }
  if (profile.size() == 1) dc3 = profile.phi_star[0] - profile.phi_lower[0] >= th.gap;

  // liminf d = 0 and limsup d > 0: both events keep recurring in the second half.
  const std::int64_t half = profile.horizon / 2;
  bool separated = false;
  for (auto last : profile.last_at_or_above) separated = separated || last > half;
  const bool ly = profile.last_below.front() > half && separated;

  for (double eta : th.eta_grid) {
    std::optional<double> s_eta;
    for (std::size_t j = 0; j < profile.size(); ++j)
      if (1.0 - profile.phi_lower[j] >= eta) s_eta = profile.grid[j];
    v.s_eta.push_back(s_eta);
  }

  v.dc3 = dc3;
  v.li_yorke = ly;
  v.dc2 = dc2 && v.dc3 && v.li_yorke;
  v.dc1half = dc1half && v.dc2;
  v.dc1 = dc1 && v.dc1half;
  return v;
}

inline PairVerdict classify_metric_pair(const DistanceSeries& d, const Thresholds& th) {
  return classify_metric_pair(phi_profile(d, th.policy), besicovitch_bounds(d, th.policy), th);
}

inline PairVerdict classify_metric_pair(const OrbitPair& pair, Metric metric, const Thresholds& th) {
  return classify_metric_pair(distance_series(pair, metric), th);
}

inline bool has_flag(const PairVerdict& v, WitnessClass c) {
  switch (c) {
    case WitnessClass::li_yorke: return v.li_yorke;
    case WitnessClass::dc1: return v.dc1;
    case WitnessClass::dc1half: return v.dc1half;
    case WitnessClass::dc2: return v.dc2;
    case WitnessClass::dc3: return v.dc3;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Partition schemes

/// Atom of a trajectory at one time: a cell index plus a word. Two labels are
/// equal iff cells and words are equal.
struct AtomLabel {
  std::int64_t cell = 0;
  std::span<const Symbol> word;

  friend bool operator==(const AtomLabel& a, const AtomLabel& b) {
    if (a.cell != b.cell || a.word.size() != b.word.size()) return false;
    return a.word.data() == b.word.data() || std::equal(a.word.begin(), a.word.end(), b.word.begin());
  }
};

struct PartitionScheme {
  using Labeler = std::function<AtomLabel(int k, const Trajectory&, std::int64_t t)>;

  std::string name;
  int depth = 0;
  Labeler label;
  std::vector<double> log2_atom_bound;  // per k = 1..depth

  AtomLabel operator()(int k, const Trajectory& x, std::int64_t t) const {
    require(k >= 1 && k <= depth, ErrorKind::scheme,
            "level " + std::to_string(k) + " outside scheme depth " + std::to_string(depth));
    require(t >= 0 && t < x.horizon, ErrorKind::scheme, "time outside the trajectory window");
    return label(k, x, t);
  }
};

/// k-label at time t = the word x[t, t+k), cut at the horizon.
inline PartitionScheme cylinder_scheme(int depth, int arity = 2) {
  require(depth >= 1, ErrorKind::validation, "scheme depth must be >= 1");
  PartitionScheme s;
  s.name = "cylinder";
  s.depth = depth;
  s.label = [](int k, const Trajectory& x, std::int64_t t) {
    require(!x.symbols.empty(), ErrorKind::scheme, "cylinder scheme needs a symbol track");
    const auto len = std::min<std::int64_t>(k, x.horizon - t);
    return AtomLabel{len, std::span<const Symbol>(x.symbols).subspan(static_cast<std::size_t>(t),
                                                                      static_cast<std::size_t>(len))};
  };
  for (int k = 1; k <= depth; ++k) s.log2_atom_bound.push_back(k * std::log2(static_cast<double>(arity)));
  return s;
}

/// k-label at time t = (position of t in its enclosing k-block, content of
/// that block), with k-blocks of the given lengths read off the trajectory's
/// block window. Lengths must divide one another.
inline PartitionScheme block_position_scheme(std::string name, std::vector<std::int64_t> lengths,
                                             std::vector<double> log2_bounds) {
  require(!lengths.empty() && lengths.size() == log2_bounds.size(), ErrorKind::validation,
          "need one block length and bound per level");
  for (std::size_t i = 1; i < lengths.size(); ++i)
    require(lengths[i] % lengths[i - 1] == 0, ErrorKind::validation,
            "block lengths must divide one another (refinement)");
  PartitionScheme s;
  s.name = std::move(name);
  s.depth = static_cast<int>(lengths.size());
  s.log2_atom_bound = std::move(log2_bounds);
  s.label = [lengths = std::move(lengths)](int k, const Trajectory& x, std::int64_t t) {
    require(x.window.has_value(), ErrorKind::scheme, "block scheme needs a block window");
    const auto& w = *x.window;
    const auto size = static_cast<std::int64_t>(w.canonical.size());
    const auto len = lengths[static_cast<std::size_t>(k - 1)];
    require(size % len == 0, ErrorKind::scheme, "window is not a union of level-" + std::to_string(k) + " blocks");
    const std::int64_t c = floor_mod(w.origin + t, size);
    return AtomLabel{c % len, std::span<const Symbol>(w.canonical).subspan(
                                  static_cast<std::size_t>(c - c % len), static_cast<std::size_t>(len))};
  };
  return s;
}

/// Times n (1-based) where both trajectories carry equal k-labels.
inline IndexSet same_atom_series(const OrbitPair& pair, const PartitionScheme& scheme, int k) {
  require(k >= 1 && k <= scheme.depth, ErrorKind::validation,
          "level " + std::to_string(k) + " exceeds scheme depth " + std::to_string(scheme.depth));
  require(pair.first.horizon == pair.second.horizon, ErrorKind::validation, "orbit pair horizons differ");
  // Block schemes hand out the same word spans for long stretches; remember the last comparison.
  const Symbol* last_a = nullptr;
  const Symbol* last_b = nullptr;
  std::size_t last_len = 0;
  bool last_equal = false;
  return IndexSet::where(pair.horizon(), [&](std::int64_t t) {
    const AtomLabel a = scheme(k, pair.first, t);
    const AtomLabel b = scheme(k, pair.second, t);
    if (a.cell != b.cell || a.word.size() != b.word.size()) return false;
    if (a.word.data() != last_a || b.word.data() != last_b || a.word.size() != last_len) {
      last_a = a.word.data();
      last_b = b.word.data();
      last_len = a.word.size();
      last_equal = std::equal(a.word.begin(), a.word.end(), b.word.begin());
    }
    return last_equal;
  });
}

struct PartitionVerdict {
  bool pk_scrambled = false;
  bool pk_plus = false;
  bool pk_minus = false;
  int depth = 0;
  int k0 = 0;                     // 0 when no level separates
  int k_minus = 0;                // level where the same-atom set lacks a density
  double eta = 0.0;               // best different-atom upper density over k
  std::vector<std::optional<int>> k_eta;  // per eta-grid entry
  std::vector<DensityEstimate> same;      // per k = 1..depth
  std::vector<double> gaps;               // upper - lower of same, per k
};

inline PartitionVerdict classify_partition_pair(const OrbitPair& pair, const PartitionScheme& scheme,
                                                const Thresholds& th) {
  th.validate();
  require(scheme.depth >= 2, ErrorKind::validation, "partition classification needs scheme depth >= 2");
  PartitionVerdict v;
  v.depth = scheme.depth;
  bool agree_everywhere = true;
  std::vector<double> differ_upper;
  for (int k = 1; k <= scheme.depth; ++k) {
    const auto est = empirical_density(same_atom_series(pair, scheme, k), th.policy);
    agree_everywhere = agree_everywhere && est.upper >= 1.0 - th.tau_one;
    // different-atom set is the complement: its upper density is 1 - lower(same)
    differ_upper.push_back(1.0 - est.lower);
    v.gaps.push_back(est.gap());
    v.same.push_back(est);
  }
  for (int k = 1; k <= scheme.depth; ++k) {
    const double d = differ_upper[static_cast<std::size_t>(k - 1)];
    if (v.k0 == 0 && d >= th.eta_min) v.k0 = k;
    v.eta = std::max(v.eta, d);
    if (v.k_minus == 0 && v.gaps[static_cast<std::size_t>(k - 1)] >= th.gap) v.k_minus = k;
  }
  bool all_eta = true;
  for (double eta : th.eta_grid) {
    std::optional<int> k_eta;
    for (int k = 1; k <= scheme.depth && !k_eta; ++k)
      if (differ_upper[static_cast<std::size_t>(k - 1)] >= eta) k_eta = k;
    all_eta = all_eta && k_eta.has_value();
    v.k_eta.push_back(k_eta);
  }
  v.pk_scrambled = agree_everywhere && v.k0 != 0;
  v.pk_plus = v.pk_scrambled && all_eta;
  v.pk_minus = v.k_minus != 0;
  return v;
}

inline PartitionVerdict classify_pk_minus(const OrbitPair& pair, const PartitionScheme& scheme,
                                          const Thresholds& th) {
  return classify_partition_pair(pair, scheme, th);
}

// ---------------------------------------------------------------------------
// Scrambled-set scan

using PairTest = std::function<bool(const Trajectory&, const Trajectory&)>;

inline PairTest metric_target(WitnessClass target, Metric metric, Thresholds th) {
  return [=](const Trajectory& a, const Trajectory& b) {
    return has_flag(classify_metric_pair(OrbitPair{a, b, Coupling::independent}, metric, th), target);
  };
}

inline PairTest partition_target(PartitionScheme scheme, Thresholds th, bool plus = false) {
  return [=](const Trajectory& a, const Trajectory& b) {
    const auto v = classify_partition_pair(OrbitPair{a, b, Coupling::same_fiber}, scheme, th);
    return plus ? v.pk_plus : v.pk_scrambled;
  };
}

/// Greedy clique in the graph of target-scrambled pairs: vertices by
/// descending degree, ties by id; a vertex joins if it is adjacent to every
/// member so far. Returns trajectory ids in the order they joined.
inline std::vector<std::size_t> scan_scrambled_set(std::span<const Trajectory> trajectories,
                                                   const PairTest& scrambled, bool allow_singleton = true) {
  const std::size_t n = trajectories.size();
  require(n >= 2, ErrorKind::validation, "scan needs at least two trajectories");
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (scrambled(trajectories[i], trajectories[j])) {
        adj[i][j] = adj[j][i] = 1;
        ++degree[i];
        ++degree[j];
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  std::vector<std::size_t> clique;
  for (std::size_t v : order) {
    if (std::all_of(clique.begin(), clique.end(), [&](std::size_t u) { return adj[u][v] != 0; }))
      clique.push_back(v);
  }
  if (clique.size() == 1 && !allow_singleton) clique.clear();
  return clique;
}

}  // namespace dchaos
