#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hypflow {

enum class BoundStatus { Pass, Fail, Inapplicable };

std::string to_string(BoundStatus status);

/// One checked inequality lhs <= rhs (or lhs >= rhs, folded into the sign of
/// the margin). Passing means margin >= -tol.
struct BoundEntry {
  std::string name;
  std::size_t k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  BoundStatus status = BoundStatus::Inapplicable;
  std::string note;
};

/// Builds an entry whose margin is `slack` and whose status follows from it.
BoundEntry make_entry(std::string name, std::size_t k, double lhs, double rhs, double slack, double tol);
BoundEntry inapplicable_entry(std::string name, std::size_t k, std::string note);

struct BoundCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inapplicable = 0;
};

class BoundReport {
 public:
  void add(BoundEntry entry) { entries_.push_back(std::move(entry)); }
  void append(const BoundReport& other);

  const std::vector<BoundEntry>& entries() const { return entries_; }
  bool all_pass() const;
  BoundCounts counts() const;
  BoundCounts counts(const std::string& name) const;
  /// Names in order of first appearance.
  std::vector<std::string> names() const;
  /// Entry with the given name and k, if recorded.
  const BoundEntry* find(const std::string& name, std::size_t k) const;

 private:
  std::vector<BoundEntry> entries_;
};

// Names of the recorded inequalities.
namespace bound_names {
inline constexpr const char* kStepUpper = "step_upper";            // d(x, x_tau) <= 2 tau L
inline constexpr const char* kStepLower = "step_lower";            // d(x, x_tau) >= (L - sqrt(L^2 - a^2)) tau
inline constexpr const char* kStepLowerWeak = "step_lower_weak";   // d(x, x_tau) >= a^2 tau / (2L)
inline constexpr const char* kDecrease = "decrease";               // f(x) - f(x_tau) >= a^4 tau / (8 L^2)
inline constexpr const char* kContraction = "contraction";         // d(p, x_tau) <= d(p, x) - d(x, x_tau) + 4 sqrt(2 tau L delta)
inline constexpr const char* kDisplacementUpper = "displacement_upper";  // d(x0, xk) <= 2 k tau L
inline constexpr const char* kDisplacementLower = "displacement_lower";  // d(x0, xk) >= k a^4 tau / (8 L^3)
inline constexpr const char* kSlopeRatio = "slope_ratio";          // (f(xk) - f(x0)) / d(x0, xk) <= -a^4 / (16 L^3)
inline constexpr const char* kRayDistance = "ray_distance";        // d(xi(t), xk) >= t + k a^4 tau / (8 L^3) - 2 (xi(t)|xk)
inline constexpr const char* kTelescoped = "telescoped";           // d(xi(t), xk) <= t - k (a^2 tau / 2L - 4 sqrt(2 tau L delta))
inline constexpr const char* kDivergence = "divergence";           // (xi(t)|xk) >= k sqrt(tau) {...}
inline constexpr const char* kSandwichLower = "sandwich_lower";    // d(x0, [xi(t), xk]) - 2 delta <= (xi(t)|xk)
inline constexpr const char* kSandwichUpper = "sandwich_upper";    // (xi(t)|xk) <= d(x0, [xi(t), xk])
}  // namespace bound_names

}  // namespace hypflow
