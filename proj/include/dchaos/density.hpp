#pragma once

// Finite-horizon upper/lower densities, the distribution functions Phi* and
// Phi of an orbit distance sequence, and running-mean (Besicovitch) bounds.
//
// The limsup/liminf over all n is replaced by a max/min over checkpoints
// n >= burn-in. Counts are integers and ratios stay exact until reported.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dchaos/error.hpp"

namespace dchaos {

/// Per-time separation d_1..d_N of an orbit pair (stored 0-based).
struct DistanceSeries {
  std::vector<double> values;
  double diameter = 1.0;

  std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(values.size()); }

  void validate() const {
    require(diameter > 0.0, ErrorKind::validation, "diameter must be positive");
    for (double d : values) {
      require(d >= 0.0 && d <= diameter, ErrorKind::validation,
              "distance value outside [0, diameter]");
    }
  }
};

/// Strictly increasing times in [1, N].
class IndexSet {
 public:
  IndexSet() = default;

  IndexSet(std::int64_t horizon, std::vector<std::int64_t> members)
      : horizon_(horizon), members_(std::move(members)) {
    require(horizon_ >= 0, ErrorKind::validation, "negative horizon");
    for (std::size_t i = 0; i < members_.size(); ++i) {
      require(members_[i] >= 1 && members_[i] <= horizon_, ErrorKind::validation,
              "index set member outside [1, N]");
      require(i == 0 || members_[i - 1] < members_[i], ErrorKind::validation,
              "index set must be strictly increasing");
    }
  }

  static IndexSet all(std::int64_t horizon) {
    IndexSet s;
    s.horizon_ = horizon;
    s.members_.resize(static_cast<std::size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n) s.members_[static_cast<std::size_t>(n - 1)] = n;
    return s;
  }

  /// {n : pred(n - 1)} for a predicate on 0-based positions.
  template <class Pred>
  static IndexSet where(std::int64_t horizon, Pred&& pred) {
    IndexSet s;
    s.horizon_ = horizon;
    for (std::int64_t t = 0; t < horizon; ++t)
      if (pred(t)) s.members_.push_back(t + 1);
    return s;
  }

  std::int64_t horizon() const noexcept { return horizon_; }
  const std::vector<std::int64_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  bool contains(std::int64_t n) const {
    return std::binary_search(members_.begin(), members_.end(), n);
  }

  IndexSet complement() const {
    IndexSet c;
    c.horizon_ = horizon_;
    std::size_t i = 0;
    for (std::int64_t n = 1; n <= horizon_; ++n) {
      if (i < members_.size() && members_[i] == n) {
        ++i;
      } else {
        c.members_.push_back(n);
      }
    }
    return c;
  }

  bool is_subset_of(const IndexSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                         members_.end());
  }

  /// count(s intersect [1, n]) at each of the given increasing checkpoints.
  std::vector<std::int64_t> counts_at(std::span<const std::int64_t> checkpoints) const {
    std::vector<std::int64_t> out;
    out.reserve(checkpoints.size());
    std::size_t i = 0;
    for (auto n : checkpoints) {
      while (i < members_.size() && members_[i] <= n) ++i;
      out.push_back(static_cast<std::int64_t>(i));
    }
    return out;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::int64_t horizon_ = 0;
  std::vector<std::int64_t> members_;
};

enum class CheckpointGrid { geometric, dense };

/// Checkpoint policy as requested; `resolve` pins it to a horizon.
struct CheckpointPolicy {
  std::optional<std::int64_t> burn_in;  // default: max(100, N/10), capped at N
  CheckpointGrid grid = CheckpointGrid::geometric;
};

/// Checkpoint policy pinned to a horizon. The geometric grid steps
/// n -> n + max(1, n/20) (ratio ~1.05) in integer arithmetic, and always ends at N.
struct ResolvedPolicy {
  std::int64_t horizon = 0;
  std::int64_t burn_in = 1;
  CheckpointGrid grid = CheckpointGrid::geometric;

  std::vector<std::int64_t> checkpoints() const {
    std::vector<std::int64_t> cps;
    for (std::int64_t n = burn_in; n <= horizon;
         n += (grid == CheckpointGrid::dense ? 1 : std::max<std::int64_t>(1, n / 20))) {
      cps.push_back(n);
    }
    if (cps.empty() || cps.back() != horizon) cps.push_back(horizon);
    return cps;
  }

  std::string to_string() const {
    return "N=" + std::to_string(horizon) + ";burn_in=" + std::to_string(burn_in) +
           ";grid=" + (grid == CheckpointGrid::dense ? "dense" : "geometric");
  }

  friend bool operator==(const ResolvedPolicy&, const ResolvedPolicy&) = default;
};

inline std::int64_t default_burn_in(std::int64_t horizon) {
  return std::min(horizon, std::max<std::int64_t>(100, horizon / 10));
}

inline ResolvedPolicy resolve(const CheckpointPolicy& policy, std::int64_t horizon) {
  require(horizon >= 1, ErrorKind::policy, "horizon must be >= 1");
  const std::int64_t burn = policy.burn_in.value_or(default_burn_in(horizon));
  require(burn >= 1, ErrorKind::policy, "burn-in must be >= 1");
  require(burn <= horizon, ErrorKind::policy,
          "burn-in " + std::to_string(burn) + " exceeds horizon " + std::to_string(horizon));
  return {horizon, burn, policy.grid};
}

struct DensityEstimate {
  Ratio upper_exact{0};
  Ratio lower_exact{0};
  double upper = 0.0;
  double lower = 0.0;
  std::int64_t upper_at = 0;  // checkpoint attaining the max
  std::int64_t lower_at = 0;
  std::int64_t burn_in = 0;
  std::vector<std::int64_t> checkpoints;

  double gap() const { return upper - lower; }
};

namespace detail {

inline DensityEstimate density_from_counts(std::span<const std::int64_t> checkpoints,
                                           std::span<const std::int64_t> counts,
                                           std::int64_t burn_in) {
  require(!checkpoints.empty(), ErrorKind::policy, "empty checkpoint set");
  DensityEstimate est;
  est.burn_in = burn_in;
  est.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const Ratio r(counts[i], checkpoints[i]);
    if (i == 0 || r > est.upper_exact) {
      est.upper_exact = r;
      est.upper_at = checkpoints[i];
    }
    if (i == 0 || r < est.lower_exact) {
      est.lower_exact = r;
      est.lower_at = checkpoints[i];
    }
  }
  est.upper = to_double(est.upper_exact);
  est.lower = to_double(est.lower_exact);
  return est;
}

}  // namespace detail

inline DensityEstimate empirical_density(const IndexSet& s, const CheckpointPolicy& policy = {}) {
  const ResolvedPolicy rp = resolve(policy, s.horizon());
  const auto cps = rp.checkpoints();
  const auto counts = s.counts_at(cps);
  return detail::density_from_counts(cps, counts, rp.burn_in);
}

namespace detail {

inline std::vector<Ratio> ratios_along(const IndexSet& s, std::span<const std::int64_t> checkpoints) {
  require(!checkpoints.empty(), ErrorKind::policy, "empty checkpoint subsequence");
  std::vector<std::int64_t> sorted(checkpoints.begin(), checkpoints.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  require(sorted.front() >= 1 && sorted.back() <= s.horizon(), ErrorKind::policy,
          "checkpoints must lie in [1, N]");
  const auto counts = s.counts_at(sorted);
  std::vector<Ratio> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) out.emplace_back(counts[i], sorted[i]);
  return out;
}

}  // namespace detail

/// min over the given checkpoints of count(s, n)/n: the density the set
/// achieves from below along that subsequence.
inline Ratio lower_density_along(const IndexSet& s, std::span<const std::int64_t> checkpoints) {
  const auto r = detail::ratios_along(s, checkpoints);
  return *std::min_element(r.begin(), r.end());
}

inline Ratio upper_density_along(const IndexSet& s, std::span<const std::int64_t> checkpoints) {
  const auto r = detail::ratios_along(s, checkpoints);
  return *std::max_element(r.begin(), r.end());
}

inline double density_along(const IndexSet& s, std::span<const std::int64_t> checkpoints) {
  return to_double(lower_density_along(s, checkpoints));
}

/// 16 log-spaced thresholds from diameter * 2^-16 up to the diameter.
inline std::vector<double> default_threshold_grid(double diameter = 1.0, int points = 16) {
  require(diameter > 0.0 && points >= 2, ErrorKind::grid, "invalid default grid request");
  std::vector<double> grid;
  for (int j = 0; j < points; ++j) {
    const double exponent = -16.0 + 16.0 * static_cast<double>(j) / static_cast<double>(points - 1);
    grid.push_back(diameter * std::exp2(exponent));
  }
  grid.back() = diameter;
  return grid;
}

struct PhiProfile {
  std::vector<double> grid;
  std::vector<double> phi_star;   // upper density of {n : d_n < t}
  std::vector<double> phi_lower;  // lower density of the same set
  std::vector<Ratio> phi_star_exact;
  std::vector<Ratio> phi_lower_exact;
  /// Last time (1-based, 0 if none) with d_n < t, and with d_n >= t.
  std::vector<std::int64_t> last_below;
  std::vector<std::int64_t> last_at_or_above;
  ResolvedPolicy policy;
  std::int64_t horizon = 0;
  double diameter = 1.0;

  std::size_t size() const noexcept { return grid.size(); }
};

inline PhiProfile phi_profile(const DistanceSeries& d, std::vector<double> grid,
                              const CheckpointPolicy& policy = {}) {
  d.validate();
  require(!grid.empty(), ErrorKind::grid, "threshold grid is empty");
  require(grid.front() > 0.0, ErrorKind::grid, "smallest threshold must be positive");
  for (std::size_t j = 1; j < grid.size(); ++j)
    require(grid[j - 1] < grid[j], ErrorKind::grid, "threshold grid must be strictly increasing");

  PhiProfile prof;
  prof.policy = resolve(policy, d.horizon());
  prof.horizon = d.horizon();
  prof.diameter = d.diameter;
  const auto cps = prof.policy.checkpoints();
  for (double t : grid) {
    std::vector<std::int64_t> counts;
    counts.reserve(cps.size());
    std::int64_t running = 0;
    std::int64_t last_below = 0;
    std::int64_t last_above = 0;
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= d.horizon(); ++n) {
      if (d.values[static_cast<std::size_t>(n - 1)] < t) {
        ++running;
        last_below = n;
      } else {
        last_above = n;
      }
      if (next < cps.size() && cps[next] == n) {
        counts.push_back(running);
        ++next;
      }
    }
    const auto est = detail::density_from_counts(cps, counts, prof.policy.burn_in);
    prof.phi_star_exact.push_back(est.upper_exact);
    prof.phi_lower_exact.push_back(est.lower_exact);
    prof.phi_star.push_back(est.upper);
    prof.phi_lower.push_back(est.lower);
    prof.last_below.push_back(last_below);
    prof.last_at_or_above.push_back(last_above);
  }
  prof.grid = std::move(grid);
  return prof;
}

inline PhiProfile phi_profile(const DistanceSeries& d, const CheckpointPolicy& policy = {}) {
  return phi_profile(d, default_threshold_grid(d.diameter), policy);
}

/// Checks monotonicity in t, Phi <= Phi*, and range; returns a message or empty.
inline std::string check_profile(const PhiProfile& p) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.phi_lower_exact[j] > p.phi_star_exact[j]) return "Phi > Phi* at grid point " + std::to_string(j);
    if (p.phi_lower_exact[j] < 0 || p.phi_star_exact[j] > 1) return "value outside [0,1]";
    if (j > 0 && (p.phi_star_exact[j] < p.phi_star_exact[j - 1] ||
                  p.phi_lower_exact[j] < p.phi_lower_exact[j - 1]))
      return "profile not monotone at grid point " + std::to_string(j);
  }
  return {};
}

struct BesicovitchBounds {
  double low = 0.0;   // min over checkpoints of the running mean
  double high = 0.0;  // max over checkpoints
  std::int64_t low_at = 0;
  std::int64_t high_at = 0;
  ResolvedPolicy policy;
};

inline BesicovitchBounds besicovitch_bounds(const DistanceSeries& d, const CheckpointPolicy& policy = {}) {
  d.validate();
  BesicovitchBounds b;
  b.policy = resolve(policy, d.horizon());
  const auto cps = b.policy.checkpoints();
  double sum = 0.0;
  std::size_t next = 0;
  bool first = true;
  for (std::int64_t n = 1; n <= d.horizon() && next < cps.size(); ++n) {
    sum += d.values[static_cast<std::size_t>(n - 1)];
    if (cps[next] != n) continue;
    ++next;
    const double mean = sum / static_cast<double>(n);
    if (first || mean < b.low) {
      b.low = mean;
      b.low_at = n;
    }
    if (first || mean > b.high) {
      b.high = mean;
      b.high_at = n;
    }
    first = false;
  }
  return b;
}

}  // namespace dchaos
