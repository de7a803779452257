#pragma once

// Reference systems (full shift, interval maps, odometer, the zero-entropy
// two-row system), seeded trajectories, orbit pairs, and explicit scrambled
// witness pairs built from alternating agree/disagree run schedules.

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dchaos/blocks.hpp"
#include "dchaos/density.hpp"
#include "dchaos/error.hpp"
#include "dchaos/random.hpp"

namespace dchaos {

struct FullShift {
  int arity = 2;
  std::vector<double> probabilities{0.5, 0.5};
};

enum class MapKind { tent, logistic };

struct IntervalMap {
  MapKind kind = MapKind::tent;
  double parameter = 2.0;
  int coding_depth = 1;
};

struct Odometer {
  std::vector<std::int64_t> base;  // N_1 | N_2 | ...
};

struct ZeroEntropyExample {
  QSchedule schedule;
};

using SystemSpec = std::variant<FullShift, IntervalMap, Odometer, ZeroEntropyExample>;

inline int alphabet_size(const SystemSpec& spec) {
  struct {
    int operator()(const FullShift& s) const { return s.arity; }
    int operator()(const IntervalMap& m) const { return 1 << m.coding_depth; }
    int operator()(const Odometer& o) const { return static_cast<int>(o.base.size()) + 1; }
    int operator()(const ZeroEntropyExample&) const { return 2; }
  } visitor;
  return std::visit(visitor, spec);
}

inline void validate(const SystemSpec& spec) {
  struct {
    void operator()(const FullShift& s) const {
      require(s.arity >= 2 && s.arity <= 256, ErrorKind::validation, "arity must be in [2, 256]");
      require(static_cast<int>(s.probabilities.size()) == s.arity, ErrorKind::validation,
              "need one probability per symbol");
      double total = 0.0;
      for (double p : s.probabilities) {
        require(p >= 0.0, ErrorKind::validation, "negative symbol probability");
        total += p;
      }
      require(std::abs(total - 1.0) <= 1e-12, ErrorKind::validation, "probabilities must sum to 1");
    }
    void operator()(const IntervalMap& m) const {
      const double top = m.kind == MapKind::tent ? 2.0 : 4.0;
      require(m.parameter > 0.0 && m.parameter <= top, ErrorKind::validation,
              "map parameter outside (0, " + std::to_string(top) + "]");
      require(m.coding_depth >= 1 && m.coding_depth <= 8, ErrorKind::validation,
              "coding depth must be in [1, 8]");
    }
    void operator()(const Odometer& o) const {
      require(!o.base.empty() && o.base.size() < 256, ErrorKind::validation, "odometer base size");
      require(o.base.front() >= 1, ErrorKind::validation, "odometer base must be positive");
      for (std::size_t k = 1; k < o.base.size(); ++k) {
        require(o.base[k] > o.base[k - 1] && o.base[k] % o.base[k - 1] == 0, ErrorKind::validation,
                "odometer base must be increasing with N_k | N_{k+1}");
      }
    }
    void operator()(const ZeroEntropyExample& z) const {
      require(z.schedule.depth() >= 1, ErrorKind::validation, "empty q schedule");
    }
  } visitor;
  std::visit(visitor, spec);
}

inline std::string describe(const SystemSpec& spec) {
  struct {
    std::string operator()(const FullShift& s) const {
      std::string out = "fullshift(arity=" + std::to_string(s.arity) + ";p=";
      for (std::size_t i = 0; i < s.probabilities.size(); ++i) {
        if (i) out += ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", s.probabilities[i]);
        out += buf;
      }
      return out + ")";
    }
    std::string operator()(const IntervalMap& m) const {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", m.parameter);
      return std::string(m.kind == MapKind::tent ? "tent" : "logistic") + "(r=" + buf +
             ";depth=" + std::to_string(m.coding_depth) + ")";
    }
    std::string operator()(const Odometer& o) const {
      std::string out = "odometer(base=";
      for (std::size_t i = 0; i < o.base.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(o.base[i]);
      }
      return out + ")";
    }
    std::string operator()(const ZeroEntropyExample& z) const {
      return "zero-entropy(q=" + z.schedule.to_string() + ")";
    }
  } visitor;
  return std::visit(visitor, spec);
}

/// Content of the top-level block around a point of a block system, with the
/// block-relative position of time 0. Partition schemes read k-blocks from it.
struct BlockWindow {
  Word canonical;
  std::int64_t origin = 0;
};

struct Trajectory {
  std::int64_t horizon = 0;
  Word symbols;               // coding / symbolic track
  std::vector<double> reals;  // interval maps only
  Word markers;               // odometer-type systems
  std::optional<BlockWindow> window;
  SystemSpec spec;
  std::uint64_t seed = 0;

  void validate() const {
    require(horizon >= 1, ErrorKind::validation, "trajectory horizon must be >= 1");
    require(symbols.empty() || static_cast<std::int64_t>(symbols.size()) == horizon,
            ErrorKind::validation, "symbol track length differs from horizon");
    require(reals.empty() || static_cast<std::int64_t>(reals.size()) == horizon,
            ErrorKind::validation, "real track length differs from horizon");
    const int arity = alphabet_size(spec);
    for (Symbol s : symbols)
      require(s < arity, ErrorKind::validation, "symbol outside the alphabet");
  }
};

enum class Coupling { independent, same_fiber, explicit_witness };

inline std::string_view to_string(Coupling c) {
  switch (c) {
    case Coupling::independent: return "independent";
    case Coupling::same_fiber: return "same-fiber";
    case Coupling::explicit_witness: return "explicit-witness";
  }
  return "?";
}

struct OrbitPair {
  Trajectory first;
  Trajectory second;
  Coupling coupling = Coupling::independent;

  std::int64_t horizon() const noexcept { return first.horizon; }

  OrbitPair swapped() const { return {second, first, coupling}; }
};

// ---------------------------------------------------------------------------
// Interval maps

inline double apply_map(const IntervalMap& m, double x) {
  if (m.kind == MapKind::tent) return m.parameter * std::min(x, 1.0 - x);
  return m.parameter * x * (1.0 - x);
}

/// Coding partition {[0, 1/2), [1/2, 1]} for both map families.
inline Symbol coding_symbol(double x) { return x < 0.5 ? 0 : 1; }

namespace detail {

inline Word itinerary_words(const Word& itinerary, std::int64_t horizon, int depth) {
  Word out(static_cast<std::size_t>(horizon));
  for (std::int64_t n = 0; n < horizon; ++n) {
    unsigned w = 0;
    for (int i = 0; i < depth; ++i) w = (w << 1) | itinerary[static_cast<std::size_t>(n + i)];
    out[static_cast<std::size_t>(n)] = static_cast<Symbol>(w);
  }
  return out;
}

}  // namespace detail

/// Floating-point iteration from an explicit initial point; the symbol track
/// is the coding_depth-step itinerary word read from the real track.
inline Trajectory iterate_interval_map(const IntervalMap& m, double x0, std::int64_t horizon) {
  validate(SystemSpec{m});
  require(horizon >= 1, ErrorKind::usage, "horizon must be >= 1");
  require(x0 >= 0.0 && x0 <= 1.0, ErrorKind::validation, "initial point outside [0, 1]");
  const std::int64_t extra = m.coding_depth - 1;
  std::vector<double> xs(static_cast<std::size_t>(horizon + extra));
  Word itinerary(xs.size());
  double x = x0;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    xs[n] = x;
    itinerary[n] = coding_symbol(x);
    x = apply_map(m, x);
  }
  Trajectory t;
  t.horizon = horizon;
  t.symbols = detail::itinerary_words(itinerary, horizon, m.coding_depth);
  t.reals.assign(xs.begin(), xs.begin() + horizon);
  t.spec = m;
  return t;
}

namespace detail {

/// Full tent map from a uniformly random point, shadowed exactly: with binary
/// expansion x_0 = 0.b_1 b_2 ..., x_n has bits (b_{n+j} xor b_n)_{j>=1} and
/// itinerary symbol b_{n+1} xor b_n.
inline Trajectory full_tent_orbit(const IntervalMap& m, std::int64_t horizon, std::uint64_t seed) {
  constexpr int kMantissa = 53;
  const std::int64_t extra = m.coding_depth - 1;
  const std::int64_t nbits = horizon + extra + kMantissa + 1;
  SplitMix64 rng(seed);
  std::vector<std::uint8_t> b(static_cast<std::size_t>(nbits + 1), 0);  // b[0] = 0
  for (std::int64_t i = 1; i <= nbits; i += 64) {
    const std::uint64_t chunk = rng();
    for (int j = 0; j < 64 && i + j <= nbits; ++j)
      b[static_cast<std::size_t>(i + j)] = static_cast<std::uint8_t>((chunk >> (63 - j)) & 1u);
  }
  Word itinerary(static_cast<std::size_t>(horizon + extra));
  for (std::size_t n = 0; n < itinerary.size(); ++n) itinerary[n] = b[n + 1] ^ b[n];
  Trajectory t;
  t.horizon = horizon;
  t.reals.resize(static_cast<std::size_t>(horizon));
  for (std::int64_t n = 0; n < horizon; ++n) {
    double x = 0.0;
    for (int j = kMantissa; j >= 1; --j)
      x = (x + static_cast<double>(b[static_cast<std::size_t>(n + j)] ^ b[static_cast<std::size_t>(n)])) * 0.5;
    t.reals[static_cast<std::size_t>(n)] = x;
  }
  t.symbols = itinerary_words(itinerary, horizon, m.coding_depth);
  t.spec = m;
  t.seed = seed;
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sampling

inline Trajectory to_trajectory(const TwoRowWord& w, std::int64_t horizon) {
  const auto n = static_cast<std::int64_t>(w.binary.size());
  require(horizon >= 1 && horizon <= n, ErrorKind::usage,
          "horizon must be in [1, N_K] for a single-period window");
  Trajectory t;
  t.horizon = horizon;
  t.symbols.assign(w.binary.begin(), w.binary.begin() + horizon);
  t.markers.assign(w.markers.begin(), w.markers.begin() + horizon);
  t.window = BlockWindow{w.canonical_block(), floor_mod(-w.offset, n)};
  t.spec = ZeroEntropyExample{w.schedule};
  t.seed = w.seed;
  return t;
}

inline Trajectory sample_orbit(const SystemSpec& spec, std::int64_t horizon, std::uint64_t seed) {
  validate(spec);
  require(horizon >= 1, ErrorKind::usage, "horizon must be >= 1");
  if (const auto* s = std::get_if<FullShift>(&spec)) {
    SplitMix64 rng(seed);
    Trajectory t;
    t.horizon = horizon;
    t.symbols.resize(static_cast<std::size_t>(horizon));
    for (auto& sym : t.symbols) {
      const double u = rng.uniform();
      double acc = 0.0;
      int chosen = s->arity - 1;
      for (int a = 0; a < s->arity; ++a) {
        acc += s->probabilities[static_cast<std::size_t>(a)];
        if (u < acc) {
          chosen = a;
          break;
        }
      }
      // Never emit a zero-probability symbol through rounding at the top end.
      while (chosen > 0 && s->probabilities[static_cast<std::size_t>(chosen)] == 0.0) --chosen;
      sym = static_cast<Symbol>(chosen);
    }
    t.spec = spec;
    t.seed = seed;
    return t;
  }
  if (const auto* m = std::get_if<IntervalMap>(&spec)) {
    if (m->kind == MapKind::tent && m->parameter == 2.0) return detail::full_tent_orbit(*m, horizon, seed);
    SplitMix64 rng(seed);
    Trajectory t = iterate_interval_map(*m, rng.uniform(), horizon);
    t.seed = seed;
    return t;
  }
  if (const auto* o = std::get_if<Odometer>(&spec)) {
    SplitMix64 rng(seed);
    const auto offset = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(o->base.back())));
    Trajectory t;
    t.horizon = horizon;
    t.symbols = odometer_markers(o->base, offset, horizon);
    t.markers = t.symbols;
    t.spec = spec;
    t.seed = seed;
    return t;
  }
  const auto& z = std::get<ZeroEntropyExample>(spec);
  const QSchedule q = z.schedule.extended_to(horizon);
  Trajectory t = to_trajectory(sample_point(q, q.depth(), seed), horizon);
  t.spec = spec;
  return t;
}

/// Odometer track from an explicit offset (marker symbols).
inline Trajectory odometer_orbit(const Odometer& o, std::int64_t offset, std::int64_t horizon) {
  validate(SystemSpec{o});
  Trajectory t;
  t.horizon = horizon;
  t.symbols = odometer_markers(o.base, offset, horizon);
  t.markers = t.symbols;
  t.spec = o;
  return t;
}

inline OrbitPair make_pair(const SystemSpec& spec, std::int64_t horizon, Coupling coupling,
                           std::pair<std::uint64_t, std::uint64_t> seeds,
                           const std::optional<OrbitPair>& witness = std::nullopt) {
  switch (coupling) {
    case Coupling::same_fiber:
      throw Error(ErrorKind::unsupported_coupling,
                  "same-fiber pairs are built by the zero-entropy forge (fiber_pair)");
    case Coupling::explicit_witness: {
      require(witness.has_value(), ErrorKind::usage, "explicit-witness coupling needs a witness pair");
      require(witness->horizon() == horizon, ErrorKind::usage, "witness horizon mismatch");
      OrbitPair out = *witness;
      out.coupling = Coupling::explicit_witness;
      return out;
    }
    case Coupling::independent:
      break;
  }
  require(seeds.first != seeds.second, ErrorKind::seed_collision,
          "independent coupling needs distinct seeds");
  return {sample_orbit(spec, horizon, seeds.first), sample_orbit(spec, horizon, seeds.second),
          Coupling::independent};
}

// ---------------------------------------------------------------------------
// Witness pairs

enum class WitnessClass { li_yorke, dc1, dc1half, dc2, dc3 };

inline std::string_view to_string(WitnessClass c) {
  switch (c) {
    case WitnessClass::li_yorke: return "LY";
    case WitnessClass::dc1: return "DC1";
    case WitnessClass::dc1half: return "DC1half";
    case WitnessClass::dc2: return "DC2";
    case WitnessClass::dc3: return "DC3";
  }
  return "?";
}

inline std::optional<WitnessClass> parse_witness_class(std::string_view s) {
  if (s == "LY" || s == "ly") return WitnessClass::li_yorke;
  if (s == "DC1" || s == "dc1") return WitnessClass::dc1;
  if (s == "DC1half" || s == "dc1half") return WitnessClass::dc1half;
  if (s == "DC2" || s == "dc2") return WitnessClass::dc2;
  if (s == "DC3" || s == "dc3") return WitnessClass::dc3;
  return std::nullopt;
}

/// Growth law for alternating agree/disagree runs.
///  - geometric: L_1 = first, L_{i+1} = growth * L_i
///  - super_geometric: L_1 = first, L_{i+1} = growth * (L_1 + ... + L_i)
///  - periodic_fraction: periods P_1 = first, P_{i+1} = (growth - 1) * (P_1 + ... + P_i);
///    each period is an agree run followed by a disagree run of floor(fraction * P_i)
///  - arithmetic: L_i = first * i
struct RunSchedule {
  enum class Law { geometric, super_geometric, periodic_fraction, arithmetic };
  Law law = Law::geometric;
  double growth = 2.0;
  std::int64_t first = 1;
  double fraction = 0.2;
};

inline RunSchedule default_schedule(WitnessClass target) {
  using Law = RunSchedule::Law;
  switch (target) {
    case WitnessClass::dc1:
    case WitnessClass::dc1half: return {Law::super_geometric, 5.0, 1, 0.0};
    case WitnessClass::dc2: return {Law::periodic_fraction, 6.0, 1, 0.2};
    case WitnessClass::dc3: return {Law::geometric, 2.0, 2, 0.0};
    case WitnessClass::li_yorke: return {Law::arithmetic, 1.0, 1, 0.0};
  }
  return {};
}

struct Run {
  bool agree = true;
  std::int64_t length = 0;
  bool complete = true;  // false for a run cut by the horizon
};

/// Alternating runs (agree first) generated by the schedule and cut at horizon.
/// Adjacent runs of the same kind are merged.
inline std::vector<Run> witness_runs(const RunSchedule& sch, std::int64_t horizon) {
  using Law = RunSchedule::Law;
  require(sch.first >= 1, ErrorKind::validation, "first run length must be >= 1");
  require(horizon >= 1, ErrorKind::usage, "horizon must be >= 1");
  std::vector<Run> raw;
  std::int64_t total = 0;
  std::int64_t prev = 0;
  bool agree = true;
  auto push = [&](bool a, std::int64_t len) {
    if (len <= 0) return;
    raw.push_back({a, len, true});
    total += len;
  };
  for (std::int64_t i = 1; total < horizon; ++i) {
    std::int64_t len = 0;
    switch (sch.law) {
      case Law::geometric:
        len = i == 1 ? sch.first : std::llround(static_cast<double>(prev) * sch.growth);
        require(len > prev || i == 1, ErrorKind::validation, "geometric growth must exceed 1");
        push(agree, len);
        agree = !agree;
        break;
      case Law::super_geometric:
        len = i == 1 ? sch.first : std::llround(static_cast<double>(total) * sch.growth);
        push(agree, len);
        agree = !agree;
        break;
      case Law::arithmetic:
        len = sch.first * i;
        push(agree, len);
        agree = !agree;
        break;
      case Law::periodic_fraction: {
        len = i == 1 ? sch.first : std::llround(static_cast<double>(total) * (sch.growth - 1.0));
        const auto off = static_cast<std::int64_t>(std::floor(sch.fraction * static_cast<double>(len)));
        push(true, len - off);
        push(false, off);
        break;
      }
    }
    prev = len;
  }
  std::vector<Run> runs;
  for (const Run& r : raw) {
    if (!runs.empty() && runs.back().agree == r.agree) {
      runs.back().length += r.length;
    } else {
      runs.push_back(r);
    }
  }
  std::int64_t used = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (used + runs[i].length >= horizon) {
      runs[i].complete = used + runs[i].length == horizon;
      runs[i].length = horizon - used;
      runs.resize(i + 1);
      break;
    }
    used += runs[i].length;
  }
  return runs;
}

inline void check_schedule_for(WitnessClass target, const RunSchedule& sch) {
  using Law = RunSchedule::Law;
  switch (target) {
    case WitnessClass::dc1:
    case WitnessClass::dc1half:
      require(sch.law == Law::super_geometric && sch.growth >= 4.0, ErrorKind::validation,
              "DC1-type witnesses need super-geometric runs with L_{i+1} >= 4 (L_1 + ... + L_i)");
      break;
    case WitnessClass::dc2:
      require(sch.law == Law::periodic_fraction && sch.fraction > 0.0 && sch.fraction < 1.0 &&
                  (1.0 - sch.fraction) * (sch.growth - 1.0) >= 4.0,
              ErrorKind::validation,
              "DC2 witnesses need periodic-fraction runs whose agree part is >= 4x the past");
      break;
    case WitnessClass::dc3:
      require(sch.law == Law::geometric && sch.growth > 1.0, ErrorKind::validation,
              "DC3 witnesses need geometric runs");
      break;
    case WitnessClass::li_yorke:
      break;
  }
}

/// Full-shift pair x = 0^N, y = 0 on agree runs and 1 on disagree runs.
inline OrbitPair construct_witness_pair(WitnessClass target, const RunSchedule& schedule,
                                        std::int64_t horizon) {
  check_schedule_for(target, schedule);
  const auto runs = witness_runs(schedule, horizon);
  std::size_t complete = 0;
  for (const Run& r : runs) complete += r.complete ? 1 : 0;
  require(complete >= 6, ErrorKind::insufficient_horizon,
          "horizon " + std::to_string(horizon) + " covers only " + std::to_string(complete) +
              " complete runs; at least 6 are required");
  Trajectory x;
  x.horizon = horizon;
  x.symbols.assign(static_cast<std::size_t>(horizon), 0);
  x.spec = FullShift{};
  Trajectory y = x;
  std::size_t pos = 0;
  for (const Run& r : runs) {
    for (std::int64_t i = 0; i < r.length; ++i) y.symbols[pos++] = r.agree ? 0 : 1;
  }
  return {std::move(x), std::move(y), Coupling::explicit_witness};
}

inline OrbitPair construct_witness_pair(WitnessClass target, std::int64_t horizon) {
  return construct_witness_pair(target, default_schedule(target), horizon);
}

/// Several pairwise-separated sequences sharing one run schedule: zero on
/// agree runs, and on disagree runs sequence i reads the Walsh code
/// parity(i & (t mod L)), L the next power of two >= count. Any two distinct
/// sequences differ on exactly half of every disagree run of length >= L.
inline std::vector<Trajectory> construct_witness_family(WitnessClass target, const RunSchedule& schedule,
                                                        std::int64_t horizon, std::size_t count) {
  require(count >= 2, ErrorKind::validation, "a witness family needs at least two members");
  const OrbitPair base = construct_witness_pair(target, schedule, horizon);
  std::uint64_t period = 1;
  while (period < count) period <<= 1;
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < count; ++i) {
    Trajectory x = base.first;
    for (std::int64_t t = 0; t < horizon; ++t) {
      if (base.second.symbols[static_cast<std::size_t>(t)] == 0) continue;
      const auto phase = static_cast<std::uint64_t>(t) % period;
      x.symbols[static_cast<std::size_t>(t)] = static_cast<Symbol>(std::popcount(i & phase) & 1);
    }
    x.seed = i;
    out.push_back(std::move(x));
  }
  return out;
}

/// The first `horizon` times of a trajectory; a block window is kept whole.
inline Trajectory truncated(const Trajectory& x, std::int64_t horizon) {
  require(horizon >= 1 && horizon <= x.horizon, ErrorKind::usage,
          "cannot cut a trajectory of horizon " + std::to_string(x.horizon) + " to " + std::to_string(horizon));
  Trajectory t = x;
  t.horizon = horizon;
  auto cut = [&](auto& v) {
    if (!v.empty()) v.resize(static_cast<std::size_t>(horizon));
  };
  cut(t.symbols);
  cut(t.reals);
  cut(t.markers);
  return t;
}

// ---------------------------------------------------------------------------
// Distances

enum class Metric { hamming, cantor, absolute };

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::hamming: return "hamming";
    case Metric::cantor: return "cantor";
    case Metric::absolute: return "absolute";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view s) {
  if (s == "hamming" || s == "hamming-indicator") return Metric::hamming;
  if (s == "cantor") return Metric::cantor;
  if (s == "absolute") return Metric::absolute;
  return std::nullopt;
}

inline DistanceSeries distance_series(const OrbitPair& pair, Metric metric = Metric::hamming) {
  const auto& a = pair.first;
  const auto& b = pair.second;
  require(a.horizon == b.horizon, ErrorKind::validation, "orbit pair horizons differ");
  const auto n = static_cast<std::size_t>(a.horizon);
  DistanceSeries d;
  d.values.resize(n);
  if (metric == Metric::absolute) {
    require(a.reals.size() == n && b.reals.size() == n, ErrorKind::metric_unavailable,
            "absolute metric needs real tracks");
    for (std::size_t i = 0; i < n; ++i) d.values[i] = std::abs(a.reals[i] - b.reals[i]);
    return d;
  }
  require(a.symbols.size() == n && b.symbols.size() == n, ErrorKind::metric_unavailable,
          std::string(to_string(metric)) + " metric needs symbol tracks");
  if (metric == Metric::hamming) {
    for (std::size_t i = 0; i < n; ++i) d.values[i] = a.symbols[i] == b.symbols[i] ? 0.0 : 1.0;
    return d;
  }
  // cantor: 2^-j with j the agreement length starting at n, capped by the horizon
  std::int64_t run = 0;
  for (std::size_t i = n; i-- > 0;) {
    run = a.symbols[i] == b.symbols[i] ? run + 1 : 0;
    d.values[i] = std::ldexp(1.0, -static_cast<int>(std::min<std::int64_t>(run, 2000)));
  }
  return d;
}

}  // namespace dchaos
