#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semireg/grid_space.hpp"
#include "semireg/linalg.hpp"
#include "semireg/semigroup.hpp"

namespace semireg {

struct CosineSample {
  Matrix c;  // C(t)
  Matrix s;  // S(t) = int_0^t C
};

/// Cosine family generated by A, sampled from the exponential of the block
/// matrix [[0, I], [A, 0]]. When built from a group generator B the cosine
/// is (e^{tB} + e^{-tB}) / 2 and A = B^2.
class CosineFamily {
 public:
  static CosineFamily from_generator(Matrix a);
  static CosineFamily from_group(Matrix b);

  const Matrix& generator() const { return a_; }
  const std::optional<Matrix>& group_generator() const { return b_; }
  Index dim() const { return a_.rows(); }

  CosineSample sample(double t) const;
  Matrix cosine(double t) const;
  /// U(t) = e^{tB}; only for families built from a group.
  Matrix group(double t) const;

 private:
  Matrix a_;
  std::optional<Matrix> b_;
};

CosineFamily cosine_from_generator(const Matrix& a);
CosineFamily cosine_from_group(const Matrix& b);

/// || (C(t+h) - 2C(t) + C(t-h)) / h^2 - A C(t) ||_2 / (1 + ||A C(t)||_2) with
/// h = 1e-4 (1 + ||A||_2)^{-1/2}.
double generator_fd_residual(const CosineFamily& fam, double t);

struct DalembertResult {
  double residual = 0.0;  // ||2C(t)C(s) - C(t+s) - C(t-s)||_2
  double bound = 0.0;     // 1e-8 (1 + ||C(t)|| ||C(s)||)
  bool ok = false;
};

DalembertResult dalembert_residual(const CosineFamily& fam, double t, double s);

struct LaplaceCheck {
  double residual = 0.0;
  double horizon = 0.0;
  double growth = 0.0;  // omega measured from ||C(t)|| samples
};

/// lambda R(lambda^2, A) against int_0^H e^{-lambda t} C(t) dt with H chosen
/// so the integrand is below 1e-12 past it. Throws TailTooFat if no H <=
/// horizon_cap qualifies.
LaplaceCheck laplace_transform_check(const CosineFamily& fam, double lambda,
                                     double horizon_cap = 1e3);

struct ZeroTwoReport {
  std::vector<int> dims;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> profiles;  // ||C(t) - I|| per truncation
  std::vector<double> plateaus;
  DichotomyFit fit;
  std::string verdict;  // uniformly_continuous | hypothesis_fails_in_limit | undetermined
};

ZeroTwoReport zero_two_profile(const std::vector<CosineFamily>& families,
                               const std::vector<double>& t_grid, double p = 2.0);

struct ZeroTwoWitness {
  std::vector<double> t_grid;
  std::vector<double> values;      // ||f^N(U(t))||, f = (z - 1)^2 / 2
  std::vector<double> factorized;  // ||U(Nt) (C(t) - I)^N||
  std::vector<double> gaps;        // relative gap between the two orders
  std::vector<double> bounds;      // M e^{omega N t} ||C(t) - I||^N
  double disc_value = 0.0;         // 2^N
  bool chain_ok = true;
};

ZeroTwoWitness zero_two_polynomial_witness(const Matrix& b, const Growth& growth,
                                           const std::vector<double>& t_grid,
                                           const GridSpace& space, int n);

struct FattoriniResult {
  std::vector<Matrix> partial_sums;  // sum_{n <= m} (-omega)^n C_n(t)
  std::vector<double> term_norms;    // ||C_n(t)||_2
  std::vector<double> term_bounds;   // M e^{omega t} t^{2n} / (2n)!
  double M = 0.0;
  bool bound_ok = true;
  double target_gap = 0.0;  // ||final - C_{A - omega}(t)||_2
  int nodes = 0;
};

/// C_0 = C, C_n(t) = int_0^t S(t - s) C_{n-1}(s) ds on a shared uniform grid
/// (composite Simpson / 3-8 weights), doubled until the final partial sum
/// moves by less than 1e-6.
FattoriniResult fattorini_series(const CosineFamily& fam, double omega, int n_max, double t,
                                 int quad_nodes = 64);

}  // namespace semireg
