#pragma once

// Command-line front end. Every subcommand maps a RunConfig onto library
// calls and writes one artifact (CSV, SVG, block dump, or a verification
// report). Exit codes: 0 ok, 1 usage, 2 invariant violated, 3 guard exceeded.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "dchaos/cli/config.hpp"
#include "dchaos/cli/csv.hpp"
#include "dchaos/cli/svg.hpp"
#include "dchaos/dchaos.hpp"

namespace dchaos::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_invariant = 2, exit_guard = 3 };

/// Raised when a produced artifact fails its own post-hoc checks.
struct InvariantFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"pair",  "phi",   "classify",   "scan",  "forge",
                                              "entropy", "pipka", "count-ball", "verify"};
  return names;
}

namespace detail {

struct Session {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  std::vector<std::uint64_t> seeds_used;
};

inline QSchedule schedule_of(const RunConfig& cfg) { return QSchedule(cfg.integers("system.q")); }

inline SystemSpec system_of(const RunConfig& cfg) {
  const std::string& kind = cfg.get("system.kind");
  if (kind == "fullshift") {
    FullShift s;
    s.arity = static_cast<int>(cfg.integer("system.arity"));
    s.probabilities = cfg.reals("system.probabilities");
    if (s.probabilities.empty()) s.probabilities.assign(static_cast<std::size_t>(std::max(1, s.arity)), 1.0 / s.arity);
    return s;
  }
  if (kind == "tent" || kind == "logistic") {
    return IntervalMap{kind == "tent" ? MapKind::tent : MapKind::logistic, cfg.real("system.parameter"),
                       static_cast<int>(cfg.integer("system.coding_depth"))};
  }
  if (kind == "odometer") return Odometer{schedule_of(cfg).base()};
  return ZeroEntropyExample{schedule_of(cfg)};
}

inline Thresholds thresholds_of(const RunConfig& cfg) {
  Thresholds th;
  th.tau_one = cfg.real("thresholds.tau_one");
  th.tau_zero = cfg.real("thresholds.tau_zero");
  th.eta_grid = cfg.reals("thresholds.eta_grid");
  th.eta_min = cfg.real("thresholds.eta_min");
  th.gap = cfg.real("thresholds.gap");
  if (cfg.has("thresholds.burn_in")) th.policy.burn_in = cfg.integer("thresholds.burn_in");
  th.policy.grid = cfg.get("thresholds.grid") == "dense" ? CheckpointGrid::dense : CheckpointGrid::geometric;
  th.validate();
  return th;
}

inline std::int64_t horizon_of(const RunConfig& cfg) {
  const auto n = cfg.integer("horizon");
  require(n >= 1, ErrorKind::usage, "horizon must be >= 1");
  return n;
}

/// Explicit seeds if given, otherwise a deterministic stream from `seed`.
inline std::vector<std::uint64_t> seeds_of(Session& s, std::size_t count) {
  std::vector<std::uint64_t> out;
  const auto given = s.cfg.integers("seeds");
  if (!given.empty()) {
    require(given.size() >= count, ErrorKind::usage,
            "need " + std::to_string(count) + " seeds, got " + std::to_string(given.size()));
    for (std::size_t i = 0; i < count; ++i) out.push_back(static_cast<std::uint64_t>(given[i]));
  } else {
    SplitMix64 rng(static_cast<std::uint64_t>(s.cfg.integer("seed")));
    for (std::size_t i = 0; i < count; ++i) out.push_back(rng());
  }
  s.seeds_used.insert(s.seeds_used.end(), out.begin(), out.end());
  return out;
}

inline std::vector<std::string> preamble(const Session& s) {
  std::vector<std::string> lines{"dchaos " + s.cfg.command};
  // the output path is where the artifact goes, not what it contains
  for (const auto& l : s.cfg.serialize())
    if (!l.starts_with("output.path =")) lines.push_back("config " + l);
  std::string seeds = "seeds used =";
  for (auto v : s.seeds_used) seeds += " " + std::to_string(v);
  lines.push_back(seeds);
  return lines;
}

inline void emit(const Session& s, const std::string& content) {
  const std::string& path = s.cfg.get("output.path");
  if (path.empty()) {
    s.out << content;
  } else {
    write_atomic(path, content);
  }
}

inline int depth_for(const RunConfig& cfg, const Trajectory& x) {
  const int wanted = static_cast<int>(cfg.integer("partition.depth"));
  require(wanted >= 2, ErrorKind::usage, "partition.depth must be >= 2");
  if (const auto* z = std::get_if<ZeroEntropyExample>(&x.spec)) {
    // the top level of a one-block window never repeats, so stop one level below it
    const int K = z->schedule.depth();
    require(K >= 3, ErrorKind::usage, "central-block classification needs q with at least 3 levels");
    return std::min(wanted, K - 1);
  }
  return wanted;
}

inline PartitionScheme scheme_for(const RunConfig& cfg, const Trajectory& x) {
  const int depth = depth_for(cfg, x);
  if (const auto* z = std::get_if<ZeroEntropyExample>(&x.spec)) return central_block_scheme(z->schedule, depth);
  return cylinder_scheme(depth, alphabet_size(x.spec));
}

inline OrbitPair pair_of(Session& s, std::size_t index, const std::vector<std::uint64_t>& seeds) {
  const auto horizon = horizon_of(s.cfg);
  const std::string& coupling = s.cfg.get("coupling");
  if (coupling == "explicit-witness") {
    const auto target = parse_witness_class(s.cfg.get("witness"));
    return construct_witness_pair(*target, horizon);
  }
  const std::pair<std::uint64_t, std::uint64_t> pr{seeds[2 * index], seeds[2 * index + 1]};
  const SystemSpec spec = system_of(s.cfg);
  if (coupling == "same-fiber") {
    const auto* z = std::get_if<ZeroEntropyExample>(&spec);
    require(z != nullptr, ErrorKind::unsupported_coupling, "same-fiber pairs exist only for the zero-entropy system");
    const QSchedule q = z->schedule.extended_to(horizon);
    const auto offset = floor_mod(s.cfg.integer("system.offset"), q.block_length(q.depth()));
    OrbitPair p = fiber_pair(q, q.depth(), offset, pr);
    p.first.spec = p.second.spec = ZeroEntropyExample{q};
    return {truncated(p.first, horizon), truncated(p.second, horizon), Coupling::same_fiber};
  }
  return make_pair(spec, horizon, Coupling::independent, pr);
}

inline std::string bit(bool b) { return b ? "1" : "0"; }

inline std::string symbol_cell(const Trajectory& x, Metric metric, std::size_t t) {
  if (metric == Metric::absolute) return format_number(x.reals[t]);
  return std::to_string(static_cast<int>(x.symbols[t]));
}

// ---------------------------------------------------------------------------

inline int cmd_pair(Session& s) {
  const auto seeds = seeds_of(s, 2);
  const OrbitPair pair = pair_of(s, 0, seeds);
  const Metric metric = *parse_metric(s.cfg.get("metric"));
  const DistanceSeries d = distance_series(pair, metric);
  CsvTable table(preamble(s), {"n", "x", "y", "d"});
  for (std::size_t t = 0; t < d.values.size(); ++t)
    table.row({std::to_string(t + 1), symbol_cell(pair.first, metric, t), symbol_cell(pair.second, metric, t),
               format_number(d.values[t])});
  emit(s, table.str());
  return exit_ok;
}

inline int cmd_phi(Session& s) {
  const auto seeds = seeds_of(s, 2);
  const Thresholds th = thresholds_of(s.cfg);
  const OrbitPair pair = pair_of(s, 0, seeds);
  const PhiProfile profile = phi_profile(distance_series(pair, *parse_metric(s.cfg.get("metric"))), th.policy);
  if (s.cfg.get("output.format") == "svg") {
    emit(s, phi_svg(profile, preamble(s)));
  } else {
    CsvTable table(preamble(s), {"t", "phi_star", "phi_lower"});
    for (std::size_t j = 0; j < profile.size(); ++j)
      table.row({format_number(profile.grid[j]), format_number(profile.phi_star[j]),
                 format_number(profile.phi_lower[j])});
    emit(s, table.str());
  }
  if (const auto msg = check_profile(profile); !msg.empty()) throw InvariantFailure(msg);
  return exit_ok;
}

inline int cmd_classify(Session& s) {
  const auto pairs = s.cfg.integer("pairs");
  require(pairs >= 1, ErrorKind::usage, "pairs must be >= 1");
  const auto seeds = seeds_of(s, static_cast<std::size_t>(2 * pairs));
  const Thresholds th = thresholds_of(s.cfg);
  const Metric metric = *parse_metric(s.cfg.get("metric"));
  CsvTable table(preamble(s), {"pair_id", "ly", "dc1", "dc1half", "dc2", "dc3", "s", "eta", "k0"});
  std::vector<std::string> problems;
  for (std::int64_t i = 0; i < pairs; ++i) {
    const OrbitPair pair = pair_of(s, static_cast<std::size_t>(i), seeds);
    const PairVerdict v = classify_metric_pair(pair, metric, th);
    const PartitionVerdict pv = classify_partition_pair(pair, scheme_for(s.cfg, pair.first), th);
    table.row({std::to_string(i), bit(v.li_yorke), bit(v.dc1), bit(v.dc1half), bit(v.dc2), bit(v.dc3),
               format_number(v.s), format_number(v.separation_upper), std::to_string(pv.k0)});
    if (!v.chain_holds()) problems.push_back("pair " + std::to_string(i) + ": implication chain broken");
    if (pv.pk_plus && !pv.pk_scrambled) problems.push_back("pair " + std::to_string(i) + ": pk_plus without pk_scrambled");
    if (const auto msg = check_profile(v.profile); !msg.empty()) problems.push_back(msg);
  }
  emit(s, table.str());
  if (!problems.empty()) throw InvariantFailure(problems.front());
  return exit_ok;
}

inline int cmd_scan(Session& s) {
  const auto size = s.cfg.integer("scan.size");
  require(size >= 2, ErrorKind::usage, "scan.size must be >= 2");
  const auto horizon = horizon_of(s.cfg);
  const Thresholds th = thresholds_of(s.cfg);
  const Metric metric = *parse_metric(s.cfg.get("metric"));
  const std::string& target = s.cfg.get("scan.target");
  std::vector<Trajectory> members;
  std::vector<std::uint64_t> ids;
  if (s.cfg.get("coupling") == "explicit-witness") {
    const auto cls = *parse_witness_class(s.cfg.get("witness"));
    members = construct_witness_family(cls, default_schedule(cls), horizon, static_cast<std::size_t>(size));
    for (std::int64_t i = 0; i < size; ++i) ids.push_back(static_cast<std::uint64_t>(i));
  } else {
    const auto seeds = seeds_of(s, static_cast<std::size_t>(size));
    const SystemSpec spec = system_of(s.cfg);
    for (auto seed : seeds) {
      if (const auto* z = std::get_if<ZeroEntropyExample>(&spec)) {
        // one shared fiber: common offset, independent free bits
        const QSchedule q = z->schedule.extended_to(horizon);
        const int K = q.depth();
        const auto offset = floor_mod(s.cfg.integer("system.offset"), q.block_length(K));
        Trajectory x = pullback_point(q, K, offset, random_free_word(q, K, seed));
        x.spec = ZeroEntropyExample{q};
        x.seed = seed;
        members.push_back(truncated(x, horizon));
      } else {
        members.push_back(sample_orbit(spec, horizon, seed));
      }
      ids.push_back(seed);
    }
  }
  PairTest test;
  if (target == "pk" || target == "pk+") {
    test = partition_target(scheme_for(s.cfg, members.front()), th, target == "pk+");
  } else {
    test = metric_target(*parse_witness_class(target), metric, th);
  }
  const auto clique = scan_scrambled_set(members, test, s.cfg.boolean("scan.allow_singleton"));
  for (std::size_t a = 0; a < clique.size(); ++a)
    for (std::size_t b = a + 1; b < clique.size(); ++b)
      if (!test(members[clique[a]], members[clique[b]])) throw InvariantFailure("clique contains an unscrambled pair");
  CsvTable table(preamble(s), {"member", "trajectory_id", "seed"});
  for (std::size_t i = 0; i < clique.size(); ++i)
    table.row({std::to_string(i), std::to_string(clique[i]), std::to_string(ids[clique[i]])});
  emit(s, table.str());
  return exit_ok;
}

inline int cmd_forge(Session& s) {
  const QSchedule q = schedule_of(s.cfg);
  const std::string& dump = s.cfg.get("forge.dump");
  if (dump == "params") {
    const auto params = derive_params(q);
    CsvTable table(preamble(s), {"k", "q_k", "p_k", "N_k", "lenB", "count"});
    for (const auto& p : params) {
      const boost::multiprecision::cpp_int count = boost::multiprecision::cpp_int(1) << static_cast<unsigned>(p.p);
      table.row({std::to_string(p.k), std::to_string(p.q), std::to_string(p.p), std::to_string(p.block_length),
                 std::to_string(p.half_length), count.str()});
      if (p.block_length != p.p * (std::int64_t{1} << p.k) || 2 * p.half_length != p.block_length)
        throw InvariantFailure("length identity fails at level " + std::to_string(p.k));
    }
    emit(s, table.str());
    return exit_ok;
  }
  const auto count = s.cfg.integer("forge.count");
  require(count >= 1, ErrorKind::usage, "forge.count must be >= 1");
  const int level = s.cfg.integer("forge.level") == 0 ? q.depth() : static_cast<int>(s.cfg.integer("forge.level"));
  require_level(q, level);
  derive_params(QSchedule({q.values().begin(), q.values().begin() + level}));
  const auto seeds = seeds_of(s, static_cast<std::size_t>(count));
  std::string text;
  for (const auto& line : preamble(s)) text += "# " + line + "\n";
  const BlockCodec codec(q, level);
  for (auto seed : seeds) {
    if (dump == "blocks") {
      const Word block = codec.encode(random_free_word(q, level, seed));
      if (!codec.is_member(block)) throw InvariantFailure("encoded block is not a family member");
      text += to_bit_string(block) + "\n";
    } else {
      const TwoRowWord w = sample_point(q, level, seed);
      std::string markers;
      for (std::size_t j = 0; j < w.markers.size(); ++j) {
        if (j) markers += ',';
        markers += std::to_string(static_cast<int>(w.markers[j]));
      }
      text += to_bit_string(w.binary) + " " + markers + "\n";
    }
  }
  emit(s, text);
  return exit_ok;
}

inline int cmd_entropy(Session& s) {
  const auto horizon = horizon_of(s.cfg);
  const int ell = static_cast<int>(s.cfg.integer("entropy.ell"));
  const auto seeds = seeds_of(s, 1);
  const SystemSpec spec = system_of(s.cfg);
  CsvTable table(preamble(s), {"kind", "level", "length", "bits_per_symbol", "exact", "undersampled"});
  if (const auto* z = std::get_if<ZeroEntropyExample>(&spec)) {
    for (const auto& e : block_count_entropy(z->schedule)) {
      const Ratio expected(1, std::int64_t{1} << e.level);
      if (*e.exact != expected) throw InvariantFailure("block-count entropy differs from 2^-k");
      table.row({"block-count", std::to_string(e.level), std::to_string(e.length), format_number(e.bits_per_symbol),
                 std::to_string(e.exact->numerator()) + "/" + std::to_string(e.exact->denominator()), "0"});
    }
  }
  const Trajectory x = sample_orbit(spec, horizon, seeds.front());
  const auto c = empirical_cylinder_entropy(x.symbols, ell);
  table.row({"cylinder", std::to_string(ell), std::to_string(horizon), format_number(c.bits_per_symbol), "",
             bit(c.undersampled)});
  if (c.undersampled) s.err << "warning: " << horizon << " samples undersample words of length " << ell << "\n";
  emit(s, table.str());
  return exit_ok;
}

inline int cmd_pipka(Session& s) {
  const double h = s.cfg.real("pipka.h");
  const int card = static_cast<int>(s.cfg.integer("pipka.card"));
  const auto grid = s.cfg.reals("pipka.epsilon_grid");
  CsvTable table(preamble(s), {"eta", "h", "card", "epsilon", "m", "margin"});
  for (double eta : s.cfg.reals("pipka.eta")) {
    const PipkaParams p = solve_pipka(eta, h, card, grid);
    if (!p.feasible) {
      s.err << "eta " << format_number(eta) << ": infeasible (" << p.reason << ")\n";
      table.row({format_number(eta), format_number(h), std::to_string(card), "", "", ""});
      continue;
    }
    if (!pipka_holds(eta, h, card, p.epsilon, p.m)) throw InvariantFailure("solver output fails substitution");
    table.row({format_number(eta), format_number(h), std::to_string(card), format_number(p.epsilon),
               std::to_string(p.m), format_number(p.margin)});
  }
  emit(s, table.str());
  return exit_ok;
}

inline int cmd_count_ball(Session& s) {
  const double h = s.cfg.real("ball.h");
  const int card = static_cast<int>(s.cfg.integer("ball.card"));
  const double delta = s.cfg.real("ball.delta");
  const int guard = static_cast<int>(s.cfg.integer("ball.guard"));
  const bool alternating = s.cfg.get("ball.a0") == "alternating";
  const auto grid = s.cfg.reals("pipka.epsilon_grid");
  CsvTable table(preamble(s), {"n", "m", "eta", "epsilon", "delta", "count", "bound", "ratio", "flag"});
  for (auto n : s.cfg.integers("ball.n")) {
    require(n >= 1, ErrorKind::usage, "ball.n values must be >= 1");
    Word a0(static_cast<std::size_t>(n), 0);
    if (alternating)
      for (std::size_t i = 1; i < a0.size(); i += 2) a0[i] = 1;
    for (auto m : s.cfg.integers("ball.m")) {
      for (double eta : s.cfg.reals("ball.eta")) {
        const PipkaParams p = solve_pipka(eta, h, card, grid);
        const std::uint64_t count = count_eta_ball(a0, static_cast<int>(m), eta, guard);
        const double total = std::exp2(static_cast<double>(n));
        if (static_cast<double>(count) > total) throw InvariantFailure("ball count exceeds 2^n");
        std::string eps, bound, flag;
        if (p.feasible) {
          const BallBound b = eta_ball_bound(static_cast<int>(n), static_cast<int>(m), eta, p.epsilon, h, card, delta);
          eps = format_number(p.epsilon);
          bound = format_number(b.bound);
          flag = bit(b.below_threshold);
        }
        table.row({std::to_string(n), std::to_string(m), format_number(eta), eps, format_number(delta),
                   std::to_string(count), bound, format_number(static_cast<double>(count) / total), flag});
      }
    }
  }
  emit(s, table.str());
  return exit_ok;
}

inline int cmd_verify(Session& s) {
  const std::string& suite = s.cfg.get("verify.suite");
  const QSchedule q = schedule_of(s.cfg);
  const int K = q.depth();
  std::ostringstream report;
  std::vector<std::string> failures;

  if (suite == "pi-bijection") {
    const auto family = enumerate_family(q, K);
    std::set<Word> images;
    for (std::size_t m = 0; m < family.size(); ++m) {
      const Word w = pi_k(q, K, family[m]);
      if (w != bits_of(m, static_cast<int>(q.p(K)))) failures.push_back("pi does not invert encoding at " + std::to_string(m));
      if (inverse_pi_k(q, K, w) != family[m]) failures.push_back("inverse_pi fails at " + std::to_string(m));
      images.insert(w);
      for (int k = 1; k < K; ++k) {
        // pi_{k+1}(C) = concatenation of pi_k over the q_{k+1} components of the first half
        const Word top = pi_k(q, k + 1, std::span(family[m]).first(static_cast<std::size_t>(q.block_length(k + 1))));
        Word joined;
        for (std::int64_t i = 0; i < q.q(k + 1); ++i) {
          const auto part = pi_k(q, k, std::span(family[m]).subspan(static_cast<std::size_t>(i * q.block_length(k)),
                                                                     static_cast<std::size_t>(q.block_length(k))));
          joined.insert(joined.end(), part.begin(), part.end());
        }
        if (joined != top) failures.push_back("recursion identity fails at level " + std::to_string(k + 1));
      }
    }
    if (images.size() != family.size() || images.size() != (std::size_t{1} << q.p(K)))
      failures.push_back("pi is not a bijection onto all free words");
    report << "enumerated " << family.size() << " blocks of length " << q.block_length(K) << "\n";
    if (failures.empty()) report << "bijection OK\n";
  } else if (suite == "percentage") {
    require(q.p(K) <= 10, ErrorKind::budget, "percentage suite enumerates pairs; needs p_K <= 10");
    const auto family = enumerate_family(q, K);
    std::size_t checks = 0;
    for (std::size_t a = 0; a < family.size(); ++a) {
      const Word wa = bits_of(a, static_cast<int>(q.p(K)));
      for (std::size_t b = 0; b < family.size(); ++b) {
        const Word wb = bits_of(b, static_cast<int>(q.p(K)));
        for (int k = 0; k < K; ++k) {
          ++checks;
          if (disagreement_fraction(q, family[a], family[b], k, K) != image_disagreement_fraction(q, wa, wb, k, K))
            failures.push_back("fractions differ for blocks " + std::to_string(a) + ", " + std::to_string(b));
        }
      }
    }
    report << checks << " exact fraction comparisons\n";
    if (failures.empty()) report << "percentage OK\n";
  } else if (suite == "scheme") {
    const auto seeds = seeds_of(s, 200);
    const PartitionScheme scheme = central_block_scheme(q);
    const auto n = q.block_length(K);
    for (std::size_t i = 0; i < 100; ++i) {
      const auto offset = static_cast<std::int64_t>(seeds[2 * i] % static_cast<std::uint64_t>(n));
      const OrbitPair pair = fiber_pair(q, K, offset, {seeds[2 * i], seeds[2 * i + 1]});
      for (int k = 1; k <= K; ++k) {
        const IndexSet same = same_atom_series(pair, scheme, k);
        if (k < K && !same_atom_series(pair, scheme, k + 1).is_subset_of(same))
          failures.push_back("refinement fails at level " + std::to_string(k));
        const auto len = q.block_length(k);
        for (auto t : same.members()) {
          const std::int64_t start = (t - 1) - floor_mod(t - 1 - offset, len);
          for (std::int64_t u = std::max<std::int64_t>(start, 0); u < std::min(start + len, n); ++u)
            if (!same.contains(u + 1)) failures.push_back("shift-window property fails at level " + std::to_string(k));
        }
      }
    }
    report << "100 fiber pairs checked\n";
    if (failures.empty()) report << "scheme OK\n";
  } else {
    for (const auto& e : block_count_entropy(q)) {
      const Ratio expected(1, std::int64_t{1} << e.level);
      report << "level " << e.level << ": " << e.exact->numerator() << "/" << e.exact->denominator() << "\n";
      if (*e.exact != expected) failures.push_back("level " + std::to_string(e.level) + " differs from 2^-k");
    }
    if (failures.empty()) report << "entropy-zero OK\n";
  }
  s.out << report.str();
  if (!failures.empty()) throw InvariantFailure(failures.front());
  return exit_ok;
}

inline int dispatch(Session& s) {
  const std::string& c = s.cfg.command;
  if (c == "pair") return cmd_pair(s);
  if (c == "phi") return cmd_phi(s);
  if (c == "classify") return cmd_classify(s);
  if (c == "scan") return cmd_scan(s);
  if (c == "forge") return cmd_forge(s);
  if (c == "entropy") return cmd_entropy(s);
  if (c == "pipka") return cmd_pipka(s);
  if (c == "count-ball") return cmd_count_ball(s);
  return cmd_verify(s);
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"distributional-chaos toolkit"};
  app.set_help_flag("--help", "print this help and exit");
  app.set_version_flag("--version", "dchaos 1.0");
  std::string command;
  std::string config_path;
  app.add_option("command", command, "pair | phi | classify | scan | forge | entropy | pipka | count-ball | verify")
      ->required();
  app.add_option("--config", config_path, "config file of `key = value` lines");

  // flag -> config key; some flags depend on the subcommand
  struct FlagDef {
    const char* flag;
    const char* key;
    const char* help;
  };
  static const FlagDef flags[] = {
      {"--q", "system.q", "q schedule, e.g. 2,2,2"},
      {"--horizon", "horizon", "orbit horizon N"},
      {"--seed", "seed", "master seed"},
      {"--seeds", "seeds", "explicit seed list"},
      {"--metric", "metric", "hamming | cantor | absolute"},
      {"--tau-one", "thresholds.tau_one", "closeness-to-1 tolerance"},
      {"--tau-zero", "thresholds.tau_zero", "closeness-to-0 tolerance"},
      {"--eta-grid", "thresholds.eta_grid", "eta grid for plus-classification"},
      {"--eta-min", "thresholds.eta_min", "positive-density floor"},
      {"--gap", "thresholds.gap", "no-density gap"},
      {"--burn-in", "thresholds.burn_in", "checkpoint burn-in"},
      {"--out", "output.path", "output file (stdout if absent)"},
      {"--format", "output.format", "csv | svg"},
      {"--system", "system.kind", "fullshift | tent | logistic | odometer | zero-entropy"},
      {"--param", "system.parameter", "interval-map parameter"},
      {"--arity", "system.arity", "full-shift arity"},
      {"--offset", "system.offset", "odometer offset"},
      {"--coupling", "coupling", "independent | explicit-witness | same-fiber"},
      {"--witness", "witness", "LY | DC1 | DC1half | DC2 | DC3"},
      {"--pairs", "pairs", "number of pairs to classify"},
      {"--depth", "partition.depth", "partition scheme depth"},
      {"--size", "scan.size", "number of trajectories to scan"},
      {"--target", "scan.target", "scan target class"},
      {"--dump", "forge.dump", "params | blocks | points"},
      {"--level", "forge.level", "block level (0 = top)"},
      {"--count", "forge.count", "number of dumped blocks"},
      {"--ell", "entropy.ell", "cylinder word length"},
      {"--epsilon-grid", "pipka.epsilon_grid", "candidate epsilon values"},
      {"--n", "ball.n", "block lengths"},
      {"--m", "ball.m", "subblock lengths"},
      {"--delta", "ball.delta", "slack delta"},
      {"--guard", "ball.guard", "enumeration guard"},
      {"--a0", "ball.a0", "zeros | alternating"},
      {"--suite", "verify.suite", "pi-bijection | percentage | scheme | entropy-zero"},
  };
  std::map<std::string, std::string> given;
  for (const auto& f : flags) app.add_option(f.flag, given[f.flag], f.help);
  // shared between pipka and count-ball
  app.add_option("--eta", given["--eta"], "eta value(s)");
  app.add_option("--h", given["--h"], "entropy h");
  app.add_option("--card", given["--card"], "partition cardinality");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForVersion& e) {
    out << "dchaos 1.0\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_usage;
  }

  if (std::ranges::find(command_names(), command) == command_names().end()) {
    err << "error: unknown subcommand '" << command << "'\n" << app.help();
    return exit_usage;
  }

  detail::Session session{RunConfig{}, out, err, {}};
  try {
    if (!config_path.empty()) session.cfg = load_config(config_path);
    session.cfg.command = command;
    for (const auto& f : flags)
      if (app.count(f.flag) > 0) session.cfg.set(f.key, given[f.flag]);
    const bool ball = command == "count-ball";
    if (app.count("--eta") > 0) session.cfg.set(ball ? "ball.eta" : "pipka.eta", given["--eta"]);
    if (app.count("--h") > 0) session.cfg.set(ball ? "ball.h" : "pipka.h", given["--h"]);
    if (app.count("--card") > 0) session.cfg.set(ball ? "ball.card" : "pipka.card", given["--card"]);
    const std::string& target = session.cfg.get("output.path");
    if (!target.empty() && !config_path.empty() && std::filesystem::exists(target) &&
        std::filesystem::equivalent(target, config_path)) {
      throw Error(ErrorKind::usage, "output path would overwrite the config file");
    }
    return detail::dispatch(session);
  } catch (const InvariantFailure& e) {
    err << "invariant violated: " << e.what() << "\n";
    return exit_invariant;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.kind() == ErrorKind::budget ? exit_guard : exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
}

}  // namespace dchaos::cli
