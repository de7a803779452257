#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace dchaos {

/// Exact ratio of integer counts. All densities and disagreement
/// percentages are carried in this form until they are reported.
using Ratio = boost::rational<std::int64_t>;

inline double to_double(const Ratio& r) {
  return boost::rational_cast<double>(r);
}

enum class ErrorKind {
  validation,
  usage,
  unsupported_coupling,
  seed_collision,
  insufficient_horizon,
  metric_unavailable,
  policy,
  grid,
  consistency,
  scheme,
  encoding,
  membership,
  budget,
  domain,
  parse,
  unknown_key,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::usage: return "usage";
    case ErrorKind::unsupported_coupling: return "unsupported-coupling";
    case ErrorKind::seed_collision: return "seed-collision";
    case ErrorKind::insufficient_horizon: return "insufficient-horizon";
    case ErrorKind::metric_unavailable: return "metric-unavailable";
    case ErrorKind::policy: return "policy";
    case ErrorKind::grid: return "grid";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::scheme: return "scheme";
    case ErrorKind::encoding: return "encoding";
    case ErrorKind::membership: return "membership";
    case ErrorKind::budget: return "budget";
    case ErrorKind::domain: return "domain";
    case ErrorKind::parse: return "parse";
    case ErrorKind::unknown_key: return "unknown-key";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace dchaos
