#pragma once

#include <cstddef>
#include <vector>

#include "semireg/types.hpp"

namespace semireg {

/// Weighted discrete L^p space over `dim` atoms.
///
/// norm(x) = (sum_i w_i |x_i|^p)^(1/p) for finite p and max_i |x_i| for
/// p = infinity (weights do not enter the sup norm).
class GridSpace {
 public:
  GridSpace(std::vector<double> weights, double p);

  static GridSpace unit(std::size_t dim, double p);

  std::size_t dim() const { return weights_.size(); }
  double p() const { return p_; }
  const std::vector<double>& weights() const { return weights_; }

  bool is_infinite() const { return p_ == kInf; }
  // All weights equal, so p = 2 norms are unitarily invariant.
  bool uniform_weights() const;

  double norm(const Vector& x) const;
  GridSpace with_p(double p) const { return GridSpace(weights_, p); }

 private:
  std::vector<double> weights_;
  double p_;
};

}  // namespace semireg
