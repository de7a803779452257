#pragma once

// The zero-entropy two-row example as a measure-theoretic system: the pi_k
// bijection onto free words, same-fiber pairs, the central-block partition
// scheme, and exact percentage comparisons between the two sides of pi.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dchaos/blocks.hpp"
#include "dchaos/classify.hpp"
#include "dchaos/error.hpp"
#include "dchaos/random.hpp"
#include "dchaos/system_forge.hpp"

namespace dchaos {

/// Reads the p_k free positions of a C_k member, left to right.
inline Word pi_k(const QSchedule& q, int k, std::span<const Symbol> row) {
  const BlockCodec codec(q, k);
  require(codec.is_member(row), ErrorKind::membership,
          "row of length " + std::to_string(row.size()) + " is not a member of C_" + std::to_string(k));
  return codec.read_free(row);
}

inline Word inverse_pi_k(const QSchedule& q, int k, const Word& word) { return encode_block(q, k, word); }

inline Word random_free_word(const QSchedule& q, int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Word w(static_cast<std::size_t>(q.p(k)));
  for (auto& b : w) b = rng.bit() ? 1 : 0;
  return w;
}

/// Two points over the same odometer coordinate with independent fair free bits.
inline OrbitPair fiber_pair(const QSchedule& q, int K, std::int64_t offset,
                            std::pair<std::uint64_t, std::uint64_t> seeds) {
  require(seeds.first != seeds.second, ErrorKind::seed_collision, "same-fiber pair needs distinct seeds");
  auto point = [&](std::uint64_t seed) {
    return to_trajectory(make_two_row_word(q, K, offset, random_free_word(q, K, seed), seed), q.block_length(K));
  };
  return {point(seeds.first), point(seeds.second), Coupling::same_fiber};
}

/// Same fiber, free words chosen by the caller (image-side words pulled back through pi_K).
inline OrbitPair pullback_pair(const QSchedule& q, int K, std::int64_t offset, const Word& wa, const Word& wb) {
  auto point = [&](const Word& w) {
    return to_trajectory(make_two_row_word(q, K, offset, w), q.block_length(K));
  };
  return {point(wa), point(wb), Coupling::same_fiber};
}

inline Trajectory pullback_point(const QSchedule& q, int K, std::int64_t offset, const Word& w) {
  return to_trajectory(make_two_row_word(q, K, offset, w), q.block_length(K));
}

/// A point of the image system (full shift over the odometer with base p_k):
/// one top-level image block starting at time 0.
inline Trajectory image_point(const QSchedule& q, int K, const Word& w) {
  require_level(q, K);
  require(static_cast<std::int64_t>(w.size()) == q.p(K), ErrorKind::encoding, "image word must have p_K bits");
  Trajectory t;
  t.horizon = q.p(K);
  t.symbols = w;
  const auto base = q.image_base();
  t.markers = odometer_markers(std::span(base).first(static_cast<std::size_t>(K)), 0, t.horizon);
  t.window = BlockWindow{w, 0};
  t.spec = FullShift{};
  return t;
}

inline OrbitPair image_pair(const QSchedule& q, int K, const Word& wa, const Word& wb) {
  return {image_point(q, K, wa), image_point(q, K, wb), Coupling::explicit_witness};
}

/// k-label = (position within the enclosing k-block, content of that block).
inline PartitionScheme central_block_scheme(const QSchedule& q, int depth) {
  require_level(q, depth);
  std::vector<std::int64_t> lengths;
  std::vector<double> bounds;
  for (int k = 1; k <= depth; ++k) {
    lengths.push_back(q.block_length(k));
    bounds.push_back(std::log2(static_cast<double>(q.block_length(k))) + static_cast<double>(q.p(k)));
  }
  return block_position_scheme("central-block", std::move(lengths), std::move(bounds));
}

inline PartitionScheme central_block_scheme(const QSchedule& q) { return central_block_scheme(q, q.depth()); }

/// The same scheme on the image side: k-blocks have length p_k.
inline PartitionScheme image_block_scheme(const QSchedule& q, int depth) {
  require_level(q, depth);
  std::vector<std::int64_t> lengths;
  std::vector<double> bounds;
  for (int k = 1; k <= depth; ++k) {
    lengths.push_back(q.p(k));
    bounds.push_back(std::log2(static_cast<double>(q.p(k))) + static_cast<double>(q.p(k)));
  }
  return block_position_scheme("image-block", std::move(lengths), std::move(bounds));
}

namespace detail {

inline Ratio component_fraction(std::span<const Symbol> a, std::span<const Symbol> b, std::int64_t len) {
  const auto n = static_cast<std::int64_t>(a.size());
  std::int64_t differ = 0;
  for (std::int64_t start = 0; start < n; start += len) {
    const auto sa = a.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(len));
    const auto sb = b.subspan(static_cast<std::size_t>(start), static_cast<std::size_t>(len));
    if (!std::equal(sa.begin(), sa.end(), sb.begin())) ++differ;
  }
  return {differ, n / len};
}

}  // namespace detail

/// Fraction of component k-blocks (k = 0: single entries) in which two
/// C_{k'} members differ.
inline Ratio disagreement_fraction(const QSchedule& q, std::span<const Symbol> a, std::span<const Symbol> b,
                                   int k, int k_top) {
  require_level(q, k_top);
  require(k >= 0 && k < k_top, ErrorKind::validation, "component level must lie in [0, k')");
  const BlockCodec codec(q, k_top);
  require(codec.is_member(a) && codec.is_member(b), ErrorKind::membership,
          "both blocks must be members of C_" + std::to_string(k_top));
  return detail::component_fraction(a, b, q.block_length(k));
}

/// Same fraction on the image side: components of p_k bits of p_{k'}-bit words.
inline Ratio image_disagreement_fraction(const QSchedule& q, std::span<const Symbol> wa, std::span<const Symbol> wb,
                                         int k, int k_top) {
  require_level(q, k_top);
  require(k >= 0 && k < k_top, ErrorKind::validation, "component level must lie in [0, k')");
  require(static_cast<std::int64_t>(wa.size()) == q.p(k_top) && wa.size() == wb.size(), ErrorKind::encoding,
          "image words must have p_k' bits");
  return detail::component_fraction(wa, wb, q.p(k));
}

/// Enumerates C_k (p_k <= 20).
inline std::vector<Word> enumerate_family(const QSchedule& q, int k) {
  require_level(q, k);
  require(q.p(k) <= 20, ErrorKind::budget, "enumeration limited to p_k <= 20");
  const BlockCodec codec(q, k);
  std::vector<Word> out;
  const std::uint64_t count = std::uint64_t{1} << q.p(k);
  out.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t m = 0; m < count; ++m) out.push_back(codec.encode(bits_of(m, static_cast<int>(q.p(k)))));
  return out;
}

}  // namespace dchaos
