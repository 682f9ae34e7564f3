#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bhattbayes {

/// Library version string, e.g. "0.1.0".
const char* version() noexcept;

/// A point of the probability simplex: K >= 2 nonnegative entries summing
/// to one.
///
/// Construction tolerates round-off: entries in (-1e-12, 0) are clamped to
/// zero and a sum within 1e-9 of one is renormalized. Anything worse is
/// rejected with std::invalid_argument.
class ProbVector {
 public:
  static constexpr double kNegativeClamp = 1e-12;
  static constexpr double kSumTolerance = 1e-9;

  explicit ProbVector(std::vector<double> entries);

  /// (p0, 1 - p0) for a binary experiment.
  static ProbVector binary(double p0);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t k) const noexcept { return entries_[k]; }
  std::span<const double> values() const noexcept { return entries_; }
  const std::vector<double>& vector() const noexcept { return entries_; }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> entries_;
};

enum class LossKind { OneMinusB, OneMinusBSquared };

std::string_view to_string(LossKind kind) noexcept;
/// Accepts "b" / "1-b" and "b2" / "1-b2".
LossKind parse_loss_kind(std::string_view text);

/// Bhattacharyya coefficient sum_k sqrt(p_k q_k), clamped to [0, 1].
double bhattacharyya(const ProbVector& p, const ProbVector& q);

/// 1 - B or 1 - B^2 depending on kind.
double loss(LossKind kind, const ProbVector& p, const ProbVector& q);

/// Loss expressed through an already computed coefficient.
inline double loss_from_coefficient(LossKind kind, double b) noexcept {
  return kind == LossKind::OneMinusB ? 1.0 - b : 1.0 - b * b;
}

/// Element-wise square root. sqrt(0) is exactly 0.
std::vector<double> elementwise_sqrt(const ProbVector& p);

}  // namespace bhattbayes
