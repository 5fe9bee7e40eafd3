#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's numerical routines.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "semireg/types.hpp"

namespace oracle {

using semireg::Complex;
using semireg::Index;
using semireg::Matrix;
using semireg::Vector;

inline Matrix random_matrix(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(u(rng), u(rng));
  return a;
}

inline Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

/// Taylor series of e^{tA}; terms are added until the partial sum stops moving.
inline Matrix exp_series(const Matrix& a, double t) {
  const Index n = a.rows();
  Matrix sum = Matrix::Identity(n, n), term = Matrix::Identity(n, n);
  for (int k = 1; k < 400; ++k) {
    term = term * (t * a) / static_cast<double>(k);
    sum += term;
    if (term.norm() < 1e-18 * sum.norm()) break;
  }
  return sum;
}

/// Weighted l^p norm written out from the definition.
inline double lp_norm(const Vector& x, const std::vector<double>& w, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += w[static_cast<std::size_t>(i)] * std::pow(std::abs(x(i)), p);
  return std::pow(s, 1.0 / p);
}

/// Weighted l^2 operator norm as the top generalized eigenvalue of A* W A v = mu W v.
inline double weighted_two_norm(const Matrix& a, const std::vector<double>& w) {
  const Index n = a.rows();
  Matrix wm = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) wm(i, i) = w[static_cast<std::size_t>(i)];
  // Real symmetric embedding of the Hermitian pencil.
  auto embed = [n](const Matrix& h) {
    Eigen::MatrixXd r(2 * n, 2 * n);
    r << h.real(), -h.imag(), h.imag(), h.real();
    return r;
  };
  const Matrix lhs = a.adjoint() * wm * a;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(embed(lhs), embed(wm));
  return std::sqrt(es.eigenvalues().maxCoeff());
}

/// Induced weighted l^1 norm: max_j sum_i w_i |a_ij| / w_j.
inline double weighted_one_norm(const Matrix& a, const std::vector<double>& w) {
  double best = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (Index i = 0; i < a.rows(); ++i) s += w[static_cast<std::size_t>(i)] * std::abs(a(i, j));
    best = std::max(best, s / w[static_cast<std::size_t>(j)]);
  }
  return best;
}

inline double max_row_sum(const Matrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

/// Largest ||Ax||_p / ||x||_p over `samples` random complex vectors.
inline double random_vector_norm(const Matrix& a, const std::vector<double>& w, double p,
                                 int samples, std::mt19937_64& rng) {
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector x = random_vector(a.cols(), rng);
    best = std::max(best, lp_norm(a * x, w, p) / lp_norm(x, w, p));
  }
  return best;
}

/// (2^{-n} sum over signs ||sum eps_k x_k||^p)^{1/p} by plain binary counting.
inline double rademacher_bruteforce(const std::vector<Vector>& xs, const std::vector<double>& w,
                                    double p) {
  const std::size_t n = xs.size();
  double acc = 0.0;
  const unsigned long patterns = 1UL << n;
  for (unsigned long m = 0; m < patterns; ++m) {
    Vector s = Vector::Zero(xs[0].size());
    for (std::size_t k = 0; k < n; ++k) s += ((m >> k) & 1UL) ? xs[k] : Vector(-xs[k]);
    const double v = lp_norm(s, w, p);
    acc += std::isinf(p) ? 0.0 : std::pow(v, p);
  }
  return std::pow(acc / static_cast<double>(patterns), 1.0 / p);
}

inline std::vector<double> unit(Index n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0); }

}  // namespace oracle
