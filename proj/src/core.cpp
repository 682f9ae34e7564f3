#include "bhattbayes/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bhattbayes {

const char* version() noexcept { return BHATTBAYES_VERSION; }

ProbVector::ProbVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.size() < 2) {
    throw std::invalid_argument("ProbVector needs at least 2 entries, got " +
                                std::to_string(entries_.size()));
  }
  for (double& e : entries_) {
    if (!std::isfinite(e)) throw std::invalid_argument("ProbVector entry is not finite");
    if (e < 0.0) {
      if (e <= -kNegativeClamp) {
        throw std::invalid_argument("ProbVector entry is negative: " + std::to_string(e));
      }
      e = 0.0;
    }
  }
  const double sum = std::accumulate(entries_.begin(), entries_.end(), 0.0);
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("ProbVector entries sum to " + std::to_string(sum));
  }
  for (double& e : entries_) e /= sum;
}

ProbVector ProbVector::binary(double p0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw std::invalid_argument("binary probability outside [0, 1]: " + std::to_string(p0));
  }
  return ProbVector({p0, 1.0 - p0});
}

std::string_view to_string(LossKind kind) noexcept {
  return kind == LossKind::OneMinusB ? "1-B" : "1-B^2";
}

LossKind parse_loss_kind(std::string_view text) {
  if (text == "b" || text == "1-b" || text == "1-B") return LossKind::OneMinusB;
  if (text == "b2" || text == "1-b2" || text == "1-B^2") return LossKind::OneMinusBSquared;
  throw std::invalid_argument("unknown loss '" + std::string(text) + "' (expected b or b2)");
}

double bhattacharyya(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("bhattacharyya: dimension mismatch (" + std::to_string(p.size()) +
                                " vs " + std::to_string(q.size()) + ")");
  }
  double b = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) b += std::sqrt(p[k] * q[k]);
  return std::min(b, 1.0);
}

double loss(LossKind kind, const ProbVector& p, const ProbVector& q) {
  return loss_from_coefficient(kind, bhattacharyya(p, q));
}

std::vector<double> elementwise_sqrt(const ProbVector& p) {
  std::vector<double> out(p.size());
  std::transform(p.begin(), p.end(), out.begin(), [](double x) { return std::sqrt(x); });
  return out;
}

}  // namespace bhattbayes
