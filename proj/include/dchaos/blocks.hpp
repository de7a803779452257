#pragma once

// Block arithmetic of the zero-entropy odometer system: the q-schedule, the
// families C_k of repeated blocks, their free positions, and marker rows.

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dchaos/error.hpp"
#include "dchaos/random.hpp"

namespace dchaos {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

/// The n low bits of m, most significant first.
inline Word bits_of(std::uint64_t m, int n) {
  Word w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = static_cast<Symbol>((m >> (n - 1 - i)) & 1u);
  return w;
}

inline std::string to_bit_string(std::span<const Symbol> w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol b : w) s += static_cast<char>('0' + b);
  return s;
}

inline Word parse_bits(std::string_view s) {
  Word w;
  for (char c : s) {
    if (c == ' ' || c == '_') continue;
    require(c == '0' || c == '1', ErrorKind::parse, "expected a 0/1 string, got '" + std::string(s) + "'");
    w.push_back(static_cast<Symbol>(c - '0'));
  }
  return w;
}

/// Default cap on N_K for anything that materializes a K-block.
inline constexpr std::int64_t kDefaultWindowBudget = std::int64_t{1} << 26;

/// The integer sequence (q_k) driving the construction, with the derived
/// products p_k = q_1...q_k and block lengths N_k = p_k 2^k. Levels are
/// 1-based; level 0 is the single-entry block (p_0 = N_0 = 1).
class QSchedule {
 public:
  QSchedule() = default;

  explicit QSchedule(std::vector<std::int64_t> q) : q_(std::move(q)) {
    require(!q_.empty(), ErrorKind::validation, "q schedule must have at least one level");
    p_.assign(1, 1);
    n_.assign(1, 1);
    for (std::size_t i = 0; i < q_.size(); ++i) {
      require(q_[i] >= 2, ErrorKind::validation, "q_k must be >= 2");
      std::int64_t p = 0;
      std::int64_t n = 0;
      if (__builtin_mul_overflow(p_.back(), q_[i], &p) ||
          __builtin_mul_overflow(n_.back(), 2 * q_[i], &n)) {
        throw Error(ErrorKind::budget, "block length overflows 64-bit arithmetic at level " +
                                           std::to_string(i + 1));
      }
      p_.push_back(p);
      n_.push_back(n);
    }
  }

  int depth() const noexcept { return static_cast<int>(q_.size()); }
  std::int64_t q(int k) const { return q_.at(static_cast<std::size_t>(k - 1)); }
  std::int64_t p(int k) const { return p_.at(static_cast<std::size_t>(k)); }
  std::int64_t block_length(int k) const { return n_.at(static_cast<std::size_t>(k)); }
  /// Length of members of B_k (half a C_k member).
  std::int64_t half_length(int k) const { return block_length(k) / 2; }
  std::span<const std::int64_t> values() const noexcept { return q_; }

  /// Odometer base (N_1, ..., N_K).
  std::vector<std::int64_t> base() const { return {n_.begin() + 1, n_.end()}; }
  /// Base (p_1, ..., p_K) of the image odometer.
  std::vector<std::int64_t> image_base() const { return {p_.begin() + 1, p_.end()}; }

  /// Same schedule, continued with copies of q_K until N_K' >= length.
  QSchedule extended_to(std::int64_t length) const {
    std::vector<std::int64_t> q = q_;
    QSchedule out(q);
    while (out.block_length(out.depth()) < length) {
      q.push_back(q_.back());
      out = QSchedule(q);
    }
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < q_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(q_[i]);
    }
    return s;
  }

  friend bool operator==(const QSchedule& a, const QSchedule& b) { return a.q_ == b.q_; }

 private:
  std::vector<std::int64_t> q_;
  std::vector<std::int64_t> p_;
  std::vector<std::int64_t> n_;
};

struct LevelParams {
  int k = 0;
  std::int64_t q = 0;
  std::int64_t p = 0;
  std::int64_t block_length = 0;  // N_k
  std::int64_t half_length = 0;   // length of B_k members
  std::int64_t log2_count = 0;    // #B_k = #C_k = 2^{p_k}
};

inline std::vector<LevelParams> derive_params(const QSchedule& q,
                                              std::int64_t budget = kDefaultWindowBudget) {
  const int depth = q.depth();
  require(q.block_length(depth) <= budget, ErrorKind::budget,
          "N_" + std::to_string(depth) + " = " + std::to_string(q.block_length(depth)) +
              " exceeds the window budget " + std::to_string(budget));
  std::vector<LevelParams> table;
  for (int k = 1; k <= depth; ++k) {
    table.push_back({k, q.q(k), q.p(k), q.block_length(k), q.half_length(k), q.p(k)});
  }
  return table;
}

inline void require_level(const QSchedule& q, int k) {
  require(k >= 1 && k <= q.depth(), ErrorKind::validation,
          "level " + std::to_string(k) + " outside 1.." + std::to_string(q.depth()));
}

/// Builds the C_k member determined by p_k free entries. Works over any
/// entry type, so encoding position labels yields the repetition map.
template <class T>
std::vector<T> encode_block(const QSchedule& q, int k, std::span<const T> free_entries) {
  require_level(q, k);
  require(static_cast<std::int64_t>(free_entries.size()) == q.p(k), ErrorKind::encoding,
          "expected " + std::to_string(q.p(k)) + " free entries at level " + std::to_string(k) +
              ", got " + std::to_string(free_entries.size()));
  std::vector<T> row(free_entries.begin(), free_entries.end());
  for (int level = 1; level <= k; ++level) {
    // row is a sequence of (level-1)-blocks; group q_level of them, then repeat each group.
    const auto group = static_cast<std::size_t>(q.q(level) * q.block_length(level - 1));
    std::vector<T> next;
    next.reserve(row.size() * 2);
    for (std::size_t start = 0; start < row.size(); start += group) {
      next.insert(next.end(), row.begin() + start, row.begin() + start + group);
      next.insert(next.end(), row.begin() + start, row.begin() + start + group);
    }
    row = std::move(next);
  }
  return row;
}

inline Word encode_block(const QSchedule& q, int k, const Word& free_bits) {
  return encode_block<Symbol>(q, k, std::span<const Symbol>(free_bits));
}

/// Free positions of a k-block and the repetition class of every coordinate.
class BlockCodec {
 public:
  BlockCodec(QSchedule q, int k) : q_(std::move(q)), k_(k) {
    require_level(q_, k_);
    std::vector<std::int64_t> labels(static_cast<std::size_t>(q_.p(k_)));
    std::iota(labels.begin(), labels.end(), std::int64_t{0});
    class_of_ = encode_block<std::int64_t>(q_, k_, labels);
    classes_.resize(labels.size());
    for (std::size_t j = 0; j < class_of_.size(); ++j) {
      classes_[static_cast<std::size_t>(class_of_[j])].push_back(static_cast<std::int64_t>(j));
    }
    for (const auto& c : classes_) free_.push_back(c.front());
  }

  const QSchedule& schedule() const noexcept { return q_; }
  int level() const noexcept { return k_; }
  std::int64_t length() const { return q_.block_length(k_); }
  std::int64_t free_count() const { return q_.p(k_); }

  /// Free positions in increasing order.
  const std::vector<std::int64_t>& free_positions() const noexcept { return free_; }
  /// classes()[i]: the free position free_positions()[i] followed by its forced repetitions.
  const std::vector<std::vector<std::int64_t>>& classes() const noexcept { return classes_; }

  /// Index of the repetition class of coordinate j (the projection to [0, p_k)).
  std::int64_t project(std::int64_t j) const {
    require(j >= 0 && j < length(), ErrorKind::domain,
            "position " + std::to_string(j) + " outside [0, " + std::to_string(length()) + ")");
    return class_of_[static_cast<std::size_t>(j)];
  }

  Word encode(const Word& free_bits) const { return encode_block(q_, k_, free_bits); }

  /// Reads the free positions left to right.
  Word read_free(std::span<const Symbol> row) const {
    Word out;
    out.reserve(free_.size());
    for (auto j : free_) out.push_back(row[static_cast<std::size_t>(j)]);
    return out;
  }

  bool is_member(std::span<const Symbol> row) const {
    if (static_cast<std::int64_t>(row.size()) != length()) return false;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] > 1) return false;
      if (row[j] != row[static_cast<std::size_t>(free_[static_cast<std::size_t>(class_of_[j])])])
        return false;
    }
    return true;
  }

 private:
  QSchedule q_;
  int k_;
  std::vector<std::int64_t> class_of_;
  std::vector<std::vector<std::int64_t>> classes_;
  std::vector<std::int64_t> free_;
};

struct FreePositions {
  std::vector<std::int64_t> free;
  std::vector<std::vector<std::int64_t>> repetitions;  // forced copies per free position
};

inline FreePositions free_positions(const QSchedule& q, int k) {
  BlockCodec codec(q, k);
  FreePositions out{codec.free_positions(), {}};
  for (const auto& c : codec.classes()) out.repetitions.emplace_back(c.begin() + 1, c.end());
  return out;
}

inline std::int64_t project_position(const QSchedule& q, int k, std::int64_t j) {
  return BlockCodec(q, k).project(j);
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Marker track of an odometer with base (N_1..N_K): position j carries the
/// largest k with j = offset (mod N_k), or 0.
inline Word odometer_markers(std::span<const std::int64_t> base, std::int64_t offset,
                             std::int64_t length) {
  require(!base.empty(), ErrorKind::validation, "odometer base is empty");
  Word row(static_cast<std::size_t>(length), 0);
  for (std::int64_t j = 0; j < length; ++j) {
    Symbol level = 0;
    for (std::size_t k = 0; k < base.size(); ++k) {
      if (floor_mod(j - offset, base[k]) != 0) break;
      level = static_cast<Symbol>(k + 1);
    }
    row[static_cast<std::size_t>(j)] = level;
  }
  return row;
}

inline Word marker_row(const QSchedule& q, int K, std::int64_t offset) {
  require_level(q, K);
  const auto n = q.block_length(K);
  require(offset >= 0 && offset < n, ErrorKind::domain, "offset outside [0, N_K)");
  const auto base = q.base();
  return odometer_markers(std::span(base).first(static_cast<std::size_t>(K)), offset, n);
}

/// Odometer coordinate plus fiber coordinate of a point.
struct FiberPoint {
  std::vector<std::int64_t> offsets;  // o_k = offset mod N_k, k = 1..K
  Word free_bits;                     // p_K fair bits
  std::uint64_t seed = 0;
};

/// One period (length N_K) of a point: the K-marker sits at `offset` and the
/// binary row is the C_K member encode_block(K, free_bits) rotated into place.
struct TwoRowWord {
  QSchedule schedule;
  int level = 0;  // K
  std::int64_t offset = 0;
  Word markers;
  Word binary;
  Word free_bits;
  std::uint64_t seed = 0;

  /// The K-block starting at the K-marker.
  Word canonical_block() const {
    const auto n = static_cast<std::int64_t>(binary.size());
    Word out(binary.size());
    for (std::int64_t c = 0; c < n; ++c)
      out[static_cast<std::size_t>(c)] = binary[static_cast<std::size_t>((c + offset) % n)];
    return out;
  }

  FiberPoint fiber_point() const {
    FiberPoint fp{{}, free_bits, seed};
    for (int k = 1; k <= level; ++k) fp.offsets.push_back(offset % schedule.block_length(k));
    return fp;
  }
};

inline TwoRowWord make_two_row_word(const QSchedule& q, int K, std::int64_t offset, Word free_bits,
                                    std::uint64_t seed = 0) {
  require_level(q, K);
  const auto n = q.block_length(K);
  require(offset >= 0 && offset < n, ErrorKind::domain, "offset outside [0, N_K)");
  TwoRowWord w{q, K, offset, marker_row(q, K, offset), {}, std::move(free_bits), seed};
  const Word block = encode_block(q, K, w.free_bits);
  w.binary.resize(block.size());
  for (std::int64_t j = 0; j < n; ++j)
    w.binary[static_cast<std::size_t>(j)] = block[static_cast<std::size_t>(floor_mod(j - offset, n))];
  return w;
}

/// Draws a point from the invariant measure restricted to level K: uniform
/// offset, uniform free bits. Each (offset, free word) atom has mass 1/(N_K 2^{p_K}).
inline TwoRowWord sample_point(const QSchedule& q, int K, std::uint64_t seed,
                               std::int64_t budget = kDefaultWindowBudget) {
  require_level(q, K);
  require(q.block_length(K) <= budget, ErrorKind::budget, "N_K exceeds the window budget");
  SplitMix64 rng(seed);
  const auto offset = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(q.block_length(K))));
  Word bits(static_cast<std::size_t>(q.p(K)));
  for (auto& b : bits) b = rng.bit() ? 1 : 0;
  return make_two_row_word(q, K, offset, std::move(bits), seed);
}

}  // namespace dchaos
