#include "semireg/grid_space.hpp"

#include <cmath>
#include <string>

#include "semireg/errors.hpp"

namespace semireg {

GridSpace::GridSpace(std::vector<double> weights, double p)
    : weights_(std::move(weights)), p_(p) {
  if (weights_.empty()) throw ValidationError("GridSpace: dim must be positive");
  if (!(p_ >= 1.0)) {
    throw ValidationError("GridSpace: p must be >= 1, got " + std::to_string(p_));
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError("GridSpace: weights must be positive and finite");
    }
  }
}

GridSpace GridSpace::unit(std::size_t dim, double p) {
  return GridSpace(std::vector<double>(dim, 1.0), p);
}

bool GridSpace::uniform_weights() const {
  for (double w : weights_) {
    if (w != weights_.front()) return false;
  }
  return true;
}

double GridSpace::norm(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw ValidationError("GridSpace::norm: dimension mismatch");
  }
  if (is_infinite()) return x.cwiseAbs().maxCoeff();
  if (p_ == 2.0) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) s += weights_[i] * std::norm(x[i]);
    return std::sqrt(s);
  }
  if (p_ == 1.0) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) s += weights_[i] * std::abs(x[i]);
    return s;
  }
  // Scale by the largest modulus so large p cannot overflow.
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    s += weights_[i] * std::pow(std::abs(x[i]) / m, p_);
  }
  return m * std::pow(s, 1.0 / p_);
}

}  // namespace semireg
