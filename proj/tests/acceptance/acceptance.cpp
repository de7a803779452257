// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dchaos/cli/app.hpp"
#include "dchaos/dchaos.hpp"

using namespace dchaos;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void fail(const std::string& why) {
    if (ok) note = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::string fmt(double v, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Thresholds witness_thresholds() {
  Thresholds th;
  th.tau_one = 0.25;
  th.tau_zero = 0.25;
  return th;
}

// ---------------------------------------------------------------------------

Outcome parameter_table() {
  Outcome o;
  const auto a = derive_params(QSchedule({3, 3}));
  o.expect(a[0].block_length == 6 && a[1].block_length == 36, "q=(3,3): N_1, N_2 != 6, 36");
  const auto b = derive_params(QSchedule({2, 2, 2}));
  o.expect(b[2].log2_count == 8 && b[2].block_length == 64 && b[2].half_length == 32,
           "q=(2,2,2): #C_3, N_3, len B_3 != 256, 64, 32");
  if (o.ok) o.note = "N=(6,36); #C_3=256 N_3=64 lenB_3=32";
  return o;
}

Outcome pi_bijection() {
  Outcome o;
  const QSchedule q({2, 2, 2});
  const auto family = enumerate_family(q, 3);
  std::set<Word> images;
  for (const auto& row : family) {
    const Word w = pi_k(q, 3, row);
    images.insert(w);
    if (inverse_pi_k(q, 3, w) != row) o.fail("inverse_pi_k(pi_k(A)) != A");
  }
  o.expect(family.size() == 256 && images.size() == 256, "pi_3 is not a bijection onto {0,1}^8");
  for (int k = 1; k <= 2; ++k) {
    for (const auto& row : enumerate_family(q, k + 1)) {
      Word joined;
      const auto len = static_cast<std::size_t>(q.block_length(k));
      for (std::int64_t i = 0; i < q.q(k + 1); ++i) {
        const Word part = pi_k(q, k, std::span(row).subspan(static_cast<std::size_t>(i) * len, len));
        joined.insert(joined.end(), part.begin(), part.end());
      }
      if (joined != pi_k(q, k + 1, row)) o.fail("recursion identity fails at k=" + std::to_string(k));
    }
  }
  if (o.ok) o.note = "256 members, recursion exact for k=1,2";
  return o;
}

Outcome percentage_preservation() {
  Outcome o;
  const QSchedule q({2, 2, 2});
  const auto family = enumerate_family(q, 3);
  std::vector<Word> images;
  for (const auto& row : family) images.push_back(pi_k(q, 3, row));
  std::int64_t failures = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      for (int k = 0; k <= 2; ++k) {
        if (disagreement_fraction(q, family[i], family[j], k, 3) !=
            image_disagreement_fraction(q, images[i], images[j], k, 3))
          ++failures;
      }
    }
  }
  o.expect(failures == 0, std::to_string(failures) + " mismatches");
  if (o.ok) o.note = "65536 ordered pairs x k in {0,1,2}, zero mismatches";
  return o;
}

Outcome entropy_signature() {
  Outcome o;
  for (const auto& e : block_count_entropy(QSchedule(std::vector<std::int64_t>(6, 2))))
    o.expect(e.exact && *e.exact == Ratio(1, std::int64_t{1} << e.level),
             "log2 #C_k / N_k != 2^-k at k=" + std::to_string(e.level));
  const auto row = sample_orbit(ZeroEntropyExample{QSchedule({2, 2, 2, 2})}, 100000, 7);
  const double h_row = empirical_cylinder_entropy(row.symbols, 8).bits_per_symbol;
  const double h_fair = empirical_cylinder_entropy(sample_orbit(FullShift{}, 100000, 7).symbols, 8).bits_per_symbol;
  o.expect(std::abs(h_fair - 1.0) <= 0.05, "fair bits give " + fmt(h_fair) + " bits/symbol");
  o.expect(h_row <= 0.5, "zero-entropy row gives H_8/8 = " + fmt(h_row) + " > 0.5 bits/symbol");
  if (o.ok) o.note = "row " + fmt(h_row) + ", fair " + fmt(h_fair);
  else o.note += " (fair " + fmt(h_fair) + ")";
  return o;
}

Outcome phi_calibration() {
  Outcome o;
  const auto pair = make_pair(FullShift{}, 100000, Coupling::independent, {1, 2});
  const auto p = phi_profile(distance_series(pair, Metric::hamming));
  double worst = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j)
    worst = std::max({worst, std::abs(p.phi_star[j] - 0.5), std::abs(p.phi_lower[j] - 0.5)});
  o.expect(worst <= 0.02, "max deviation " + fmt(worst));
  if (o.ok) o.note = "max |Phi - 1/2| = " + fmt(worst);
  return o;
}

Outcome oscillating_oracle() {
  Outcome o;
  const auto pair = construct_witness_pair(WitnessClass::dc3, std::int64_t{1} << 20);
  const auto d = distance_series(pair);
  const auto p = phi_profile(d);
  const auto b = besicovitch_bounds(d);
  const double up = p.phi_star.front(), lo = p.phi_lower.front();
  o.expect(std::abs(up - 2.0 / 3.0) <= 0.05, "Phi*(0+) = " + fmt(up));
  o.expect(std::abs(lo - 1.0 / 3.0) <= 0.05, "Phi(0+) = " + fmt(lo));
  o.expect(std::abs(b.low - 1.0 / 3.0) <= 0.05 && std::abs(b.high - 2.0 / 3.0) <= 0.05,
           "Besicovitch bounds (" + fmt(b.low) + ", " + fmt(b.high) + ")");
  const auto v = classify_pk_minus(pair, cylinder_scheme(2), witness_thresholds());
  o.expect(v.pk_minus && v.gaps[0] >= 0.1, "pk_minus did not fire");
  if (o.ok)
    o.note = "Phi*=" + fmt(up, 4) + " Phi=" + fmt(lo, 4) + " bounds=(" + fmt(b.low, 4) + "," + fmt(b.high, 4) +
             ") gap=" + fmt(v.gaps[0], 4);
  return o;
}

// Random pairs across systems and run structures, for the implication chain.
OrbitPair random_pair(SplitMix64& rng, std::int64_t horizon) {
  switch (rng.below(5)) {
    case 0: {
      const double p = 0.02 + 0.96 * rng.uniform();
      return make_pair(FullShift{2, {p, 1.0 - p}}, horizon, Coupling::independent, {rng(), rng() | 1});
    }
    case 1:
      return make_pair(IntervalMap{MapKind::tent, 2.0, 1 + static_cast<int>(rng.below(3))}, horizon,
                       Coupling::independent, {rng(), rng() | 1});
    case 2: {
      // steep enough to vary, shallow enough for 6 complete runs in 5000 steps
      RunSchedule s{RunSchedule::Law::geometric, 1.5 + 1.5 * rng.uniform(), 1 + static_cast<std::int64_t>(rng.below(3)),
                    0.0};
      auto pair = construct_witness_pair(WitnessClass::dc3, s, horizon);
      // sprinkle noise so flags vary
      const double noise = 0.3 * rng.uniform();
      for (auto& sym : pair.second.symbols)
        if (rng.uniform() < noise) sym ^= 1;
      return pair;
    }
    case 3: {
      // super-geometric runs reach the top of the chain
      RunSchedule s{RunSchedule::Law::super_geometric, 4.0 + 0.5 * rng.uniform(), 1, 0.0};
      auto pair = construct_witness_pair(WitnessClass::dc1, s, horizon);
      const double noise = 0.05 * rng.uniform();
      for (auto& sym : pair.second.symbols)
        if (rng.uniform() < noise) sym ^= 1;
      return pair;
    }
    default: {
      RunSchedule s{RunSchedule::Law::periodic_fraction, 2.5 + 1.5 * rng.uniform(), 1 + static_cast<std::int64_t>(rng.below(3)),
                    0.05 + 0.5 * rng.uniform()};
      auto pair = construct_witness_pair(WitnessClass::li_yorke, s, horizon);
      const double noise = 0.1 * rng.uniform();
      for (auto& sym : pair.second.symbols)
        if (rng.uniform() < noise) sym ^= 1;
      return pair;
    }
  }
}

Outcome round_trip() {
  Outcome o;
  const auto th = witness_thresholds();
  const std::vector<std::pair<WitnessClass, std::int64_t>> cases{
      {WitnessClass::dc1, 50000}, {WitnessClass::dc1half, 50000}, {WitnessClass::dc2, 50000},
      {WitnessClass::dc3, std::int64_t{1} << 20}, {WitnessClass::li_yorke, 50000}};
  int violations = 0;
  for (const auto& [target, horizon] : cases) {
    const auto v = classify_metric_pair(construct_witness_pair(target, horizon), Metric::hamming, th);
    o.expect(has_flag(v, target), std::string(to_string(target)) + " witness lacks its flag");
    violations += v.chain_holds() ? 0 : 1;
  }
  SplitMix64 rng(20240607);
  std::map<std::string, int> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto pair = random_pair(rng, 5000);
    for (const Thresholds& t : {th, Thresholds{}}) {
      const auto v = classify_metric_pair(pair, Metric::hamming, t);
      violations += v.chain_holds() ? 0 : 1;
      seen[std::string(v.li_yorke ? "L" : "-") + (v.dc3 ? "3" : "-") + (v.dc2 ? "2" : "-") + (v.dc1 ? "1" : "-")]++;
    }
  }
  o.expect(violations == 0, std::to_string(violations) + " chain violations");
  std::string patterns;
  for (const auto& [k, n] : seen) patterns += " " + k + ":" + std::to_string(n);
  if (o.ok) o.note = "5 witnesses flagged, 1000 random pairs, 0 violations; flags (L3 2 1):" + patterns;
  return o;
}

Outcome pipka_solver() {
  Outcome o;
  std::string note;
  for (double eta : {0.25, 0.5, 0.81, 0.9}) {
    const auto p = solve_pipka(eta, 1.0, 2);
    if (!p.feasible) {
      o.fail("infeasible at eta=" + fmt(eta, 2));
      continue;
    }
    // independent substitution
    const double r = std::sqrt(eta);
    const double hr = -r * std::log2(r) - (1 - r) * std::log2(1 - r);
    const double left = 2.0 * hr / static_cast<double>(p.m) + p.epsilon * (3.0 * 2 + 1.0);
    const double right = (1.0 - r) * 1.0;
    o.expect(left < right && p.epsilon < 1.0 - r, "solution fails substitution at eta=" + fmt(eta, 2));
    note += "eta=" + fmt(eta, 2) + ":(" + fmt(p.epsilon, 3) + "," + std::to_string(p.m) + ") ";
  }
  o.expect(pipka_holds(0.81, 1.0, 2, 0.005, 15), "(0.005, 15) not feasible at eta=0.81");
  const auto p81 = solve_pipka(0.81, 1.0, 2);
  o.expect(p81.epsilon == 0.005 && p81.m == 15, "solver returns (" + fmt(p81.epsilon, 3) + "," + std::to_string(p81.m) + ") at eta=0.81");
  if (o.ok) o.note = note;
  return o;
}

Outcome counting_bound() {
  Outcome o;
  int over_bound = 0;
  std::string monotone_breaks;
  for (int m : {2, 3}) {
    for (double eta : {0.25, 0.5, 0.75}) {
      for (bool alt : {false, true}) {
        double prev = 2.0;
        int prev_n = 0;
        for (int n : {8, 10, 12}) {
          Word a0(static_cast<std::size_t>(n), 0);
          if (alt)
            for (int i = 0; i < n; ++i) a0[static_cast<std::size_t>(i)] = static_cast<Symbol>(i % 2);
          const auto count = count_eta_ball(a0, m, eta);
          const auto p = solve_pipka(eta, 1.0, 2);
          const double eps = p.feasible ? p.epsilon : 0.005;
          const auto b = eta_ball_bound(n, m, eta, eps, 1.0, 2, 0.0);
          if (static_cast<double>(count) > b.bound) ++over_bound;
          const double frac = static_cast<double>(count) / std::exp2(n);
          if (frac > prev)
            monotone_breaks += std::string(" a0=") + (alt ? "alt" : "zeros") + " m=" + std::to_string(m) +
                               " eta=" + fmt(eta, 2) + ": " + fmt(prev) + "@n=" + std::to_string(prev_n) + " -> " +
                               fmt(frac) + "@n=" + std::to_string(n) + ";";
          prev = frac;
          prev_n = n;
        }
      }
    }
  }
  o.ok = over_bound == 0 && monotone_breaks.empty();
  o.note = "count <= bound: " + std::string(over_bound == 0 ? "holds" : std::to_string(over_bound) + " violations");
  if (!monotone_breaks.empty()) o.note += "; count/2^n not nonincreasing in n:" + monotone_breaks;
  return o;
}

Outcome scrambling_transfer() {
  Outcome o;
  const QSchedule q({6, 6, 6, 6, 6});
  constexpr int K = 5;
  const auto witness = construct_witness_pair(WitnessClass::dc2, q.p(K - 1));
  Word wa(static_cast<std::size_t>(q.p(K)), 0), wb = wa;
  for (std::size_t c = 0; c < witness.second.symbols.size(); ++c)
    for (std::size_t b = 0; b < 6; ++b) wb[c * 6 + b] = witness.second.symbols[c];
  const auto th = witness_thresholds();
  const auto pulled_scheme = central_block_scheme(q, K - 1);
  const auto image_scheme = image_block_scheme(q, K - 1);
  const auto pb = pullback_pair(q, K, 0, wa, wb);
  const auto im = image_pair(q, K, wa, wb);
  const auto v = classify_partition_pair(pb, pulled_scheme, th);
  o.expect(v.pk_scrambled && v.k0 == 1, "pulled-back witness not pk_scrambled with k0=1");
  double worst = 0.0;
  for (int k = 1; k < K; ++k) {
    const IndexSet s_pb = same_atom_series(pb, pulled_scheme, k);
    const IndexSet s_im = same_atom_series(im, image_scheme, k);
    // marker-aligned checkpoints j * N_k' against j * p_k', j <= q_{k'+1}: the
    // first k'+1 block half is the only stretch where k'-blocks map in order
    for (int kp = 1; kp < K; ++kp) {
      std::vector<std::int64_t> cp_pb, cp_im;
      for (std::int64_t j = 1; j <= q.q(kp + 1); ++j) {
        cp_pb.push_back(j * q.block_length(kp));
        cp_im.push_back(j * q.p(kp));
      }
      const auto a = s_pb.counts_at(cp_pb);
      const auto b = s_im.counts_at(cp_im);
      for (std::size_t j = 0; j < a.size(); ++j) {
        const double same_pb = static_cast<double>(a[j]) / static_cast<double>(cp_pb[j]);
        const double same_im = static_cast<double>(b[j]) / static_cast<double>(cp_im[j]);
        // different-atom densities are the complements, so one comparison covers both
        worst = std::max(worst, std::abs(same_pb - same_im));
      }
    }
  }
  o.expect(worst <= 0.05, "density mismatch " + fmt(worst));

  SplitMix64 rng(99);
  int scrambled = 0, nonempty = 0;
  for (int i = 0; i < 20; ++i) {
    const auto n1 = q.block_length(1);
    const auto oa = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(q.block_length(K))));
    auto ob = oa + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n1 - 1)));
    ob %= q.block_length(K);
    const OrbitPair diff{pullback_point(q, K, oa, random_free_word(q, K, rng())),
                         pullback_point(q, K, ob, random_free_word(q, K, rng())), Coupling::independent};
    scrambled += classify_partition_pair(diff, pulled_scheme, th).pk_scrambled ? 1 : 0;
    nonempty += same_atom_series(diff, pulled_scheme, 1).empty() ? 0 : 1;
  }
  o.expect(scrambled == 0, std::to_string(scrambled) + " different-fiber pairs classified pk_scrambled");
  o.expect(nonempty == 0, std::to_string(nonempty) + " different-fiber pairs share a k=1 atom");
  if (o.ok) o.note = "k0=1, max density gap " + fmt(worst) + ", 20 different-fiber pairs separated";
  return o;
}

Outcome scheme_validity() {
  Outcome o;
  const QSchedule q({2, 2, 2});
  constexpr int K = 3;
  const auto scheme = central_block_scheme(q);
  const auto n = q.block_length(K);
  SplitMix64 rng(31);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const auto offset = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
    const std::uint64_t s1 = rng();
    const auto pair = fiber_pair(q, K, offset, {s1, s1 + 1});
    for (int k = 1; k <= K; ++k) {
      const IndexSet same = same_atom_series(pair, scheme, k);
      if (k < K && !same_atom_series(pair, scheme, k + 1).is_subset_of(same)) ++failures;
      const auto len = q.block_length(k);
      for (std::int64_t start = offset % len; start < n; start += len) {
        const bool first = same.contains(start + 1);
        for (std::int64_t u = start; u < std::min(start + len, n); ++u)
          if (same.contains(u + 1) != first) ++failures;
      }
      // the wrap-around piece before the first marker belongs to the last window
      if (offset % len != 0) {
        const bool tail = same.contains(n);
        for (std::int64_t u = 0; u < offset % len; ++u)
          if (same.contains(u + 1) != tail) ++failures;
      }
    }
  }
  o.expect(failures == 0, std::to_string(failures) + " violations");
  if (o.ok) o.note = "100 fiber pairs, refinement and shift windows exact";
  return o;
}

Outcome reproducibility() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "dchaos_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> commands{
      {"pair", "--horizon", "5000", "--seed", "3"},
      {"phi", "--horizon", "20000", "--seed", "5"},
      {"phi", "--horizon", "20000", "--seed", "5", "--format", "svg"},
      {"classify", "--pairs", "20", "--horizon", "5000", "--seed", "8"},
      {"classify", "--system", "zero-entropy", "--q", "2,2,2,2", "--pairs", "5", "--horizon", "256", "--seed", "8"},
      {"scan", "--size", "8", "--horizon", "5000", "--seed", "2"},
      {"forge", "--q", "2,2,2", "--dump", "params"},
      {"forge", "--q", "2,2,2", "--dump", "blocks", "--count", "8"},
      {"entropy", "--q", "2,2,2,2", "--system", "zero-entropy", "--horizon", "100000", "--seed", "7"},
      {"pipka", "--eta", "0.25,0.5,0.81,0.9", "--h", "1", "--card", "2"},
      {"count-ball", "--n", "8,10,12", "--m", "2,3", "--eta", "0.25,0.5,0.75"},
  };
  int compared = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first;
    for (int round = 0; round < 2; ++round) {
      auto args = commands[i];
      const auto path = dir / ("artifact_" + std::to_string(i) + "_" + std::to_string(round));
      args.insert(args.begin(), "dchaos");
      args.push_back("--out");
      args.push_back(path.string());
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      if (code != 0) {
        o.fail("`" + commands[i][0] + "` exited " + std::to_string(code) + ": " + err.str());
        break;
      }
      std::ifstream in(path, std::ios::binary);
      std::ostringstream bytes;
      bytes << in.rdbuf();
      if (round == 0) {
        first = bytes.str();
      } else {
        ++compared;
        if (bytes.str() != first || first.empty()) o.fail("artifact of `" + commands[i][0] + "` differs between runs");
      }
    }
  }
  if (o.ok) o.note = std::to_string(compared) + " artifacts byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "parameter table", 1, parameter_table},
      {2, "pi bijection", 1, pi_bijection},
      {3, "percentage preservation", 30, percentage_preservation},
      {4, "entropy-zero signature", 10, entropy_signature},
      {5, "Phi estimator calibration", 5, phi_calibration},
      {6, "oscillating-density oracle", 10, oscillating_oracle},
      {7, "constructor-classifier round trip", 60, round_trip},
      {8, "parameter inequality solver", 1, pipka_solver},
      {9, "counting bound", 60, counting_bound},
      {10, "scrambling transfer", 60, scrambling_transfer},
      {11, "scheme validity", 10, scheme_validity},
      {12, "reproducibility", 0, reproducibility},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs > c.limit_s) o.fail("runtime " + fmt(secs, 2) + " s exceeds " + fmt(c.limit_s, 0) + " s");
    failed += o.ok ? 0 : 1;
    std::printf("%s %2d %-36s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs, o.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
