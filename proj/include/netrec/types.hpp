#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace netrec {

using Timestep = std::int32_t;

/// Identifier of a node within one trajectory. Ids are dense, assigned in
/// arrival order and never reused, so they double as table indices.
struct NodeId {
  std::uint32_t value{};

  constexpr std::size_t index() const noexcept { return value; }
  constexpr auto operator<=>(const NodeId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, NodeId id) { return os << id.value; }

/// Raised for invalid scenarios and configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the linkage sigmoid cannot be calibrated to a target mean.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sentinel for metrics whose denominator vanished. Serialized as an empty
/// CSV cell and skipped by aggregation.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

inline bool is_undefined(double x) noexcept { return x != x; }

}  // namespace netrec

template <>
struct std::hash<netrec::NodeId> {
  std::size_t operator()(netrec::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
