#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semireg/discpoly.hpp"
#include "semireg/grid_space.hpp"
#include "semireg/linalg.hpp"
#include "semireg/semigroup.hpp"

namespace semireg {

/// Endpoints p1, p2 and 1/p = (1 - theta)/p1 + theta/p2 (theta weights p2).
struct InterpolationTriple {
  double p1 = 1.0;
  double p2 = kInf;
  double theta = 0.5;
  double p = 2.0;

  static InterpolationTriple from_theta(double p1, double p2, double theta);
  static InterpolationTriple from_p(double p1, double p2, double p);

  /// The same triple with theta weighting p1 instead.
  double theta_weighting_p1() const { return 1.0 - theta; }
  void validate() const;
};

struct InterpCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// ||x||_p <= ||x||_{p1}^{1-theta} ||x||_{p2}^theta.
InterpCheck lp_logconvexity_check(const Vector& x, const InterpolationTriple& tr,
                                  const std::vector<double>& weights);

/// Lower bound for ||T||_p against ||T||_{p1}^{1-theta} ||T||_{p2}^theta.
/// Endpoints must be in {1, 2, inf}.
InterpCheck riesz_thorin_check(const Matrix& t, const InterpolationTriple& tr,
                               const std::vector<double>& weights);

struct ExtrapolationRow {
  int n = 0;
  double t = 0.0;
  double measured = 0.0;  // lower bound for ||f^N(T_p(t))||
  double chain = 0.0;     // M^{1-tp} (Nn + 1)^{1-tp} rho^{tp N}, tp = theta_weighting_p1
  bool ok = false;
};

struct ExtrapolationReport {
  std::string status;  // ok | chain_violated | chain_inapplicable
  InterpolationTriple triple;
  double rho = 0.0;  // plateau of ||f(T_{p1}(t))|| for the normalized f
  double M = 0.0;    // sup_{[0,1]} ||T_{p2}(t)||
  std::vector<ExtrapolationRow> rows;
  int smallest_n = -1;  // smallest N in range with chain < 1, -1 if none
};

ExtrapolationReport extrapolation_bench(const GeneratorSpec& gen, const Polynomial& f,
                                        const InterpolationTriple& tr,
                                        const std::vector<double>& t_grid,
                                        const std::vector<int>& n_range,
                                        const std::vector<double>& weights);

// ---------------------------------------------------------------------------
// Gaussian route
// ---------------------------------------------------------------------------

struct KernelSpec {
  int dim_ambient = 1;  // N
  double a = 1.0;
  double C = 1.0;
  int points = 64;  // per axis
  double period = 8.0;

  double cell() const { return period / points; }
  std::size_t size() const;
  void validate() const;
  KernelSpec refined() const;
  GridSpace space(double p) const;
};

/// (4 pi t)^{-N/2} exp(-|x|^2 / 4t).
double gaussian_kernel(double t, const std::vector<double>& x, int n);

/// Periodized, unit-mass sampled kernel convolved with f along each axis.
Vector gaussian_apply(const KernelSpec& spec, double t, const Vector& f);

/// Matrix of gaussian_apply on the grid (columns are images of unit vectors).
Matrix gaussian_matrix(const KernelSpec& spec, double t);

using OperatorFamilyBuilder = std::function<std::function<Matrix(double)>(const KernelSpec&)>;
using ProbeBuilder = std::function<std::vector<Vector>(const KernelSpec&)>;

struct FittedConstant {
  double coarse = 0.0;
  double fine = 0.0;
  double value = 0.0;  // coarse-grid constant
  bool ok = false;     // finite and within 10% under refinement
};

/// max |T(t) f| / (G(a t) |f|) over t, probes and grid points, on the grid
/// of `spec` and on its refinement.
FittedConstant gaussian_estimate_check(const OperatorFamilyBuilder& family,
                                       const KernelSpec& spec,
                                       const std::vector<double>& t_grid,
                                       const ProbeBuilder& probes);

/// Centered maximal function over grid-aligned periodic balls.
Vector maximal_function(const Vector& f, const KernelSpec& spec);

using FunctionBuilder = std::function<Vector(const KernelSpec&)>;

/// max_x sup_t |G(t) f|(x) / (Mf)(x), coarse and refined.
FittedConstant maximal_domination_check(const KernelSpec& spec, const FunctionBuilder& f,
                                        const std::vector<double>& t_grid);

/// max over trials of ||(sum |G(t_k) f_k|^2)^{1/2}||_p / ||(sum |f_k|^2)^{1/2}||_p.
FittedConstant gaussian_square_function_bench(const KernelSpec& spec, double p, int trials,
                                              std::uint64_t seed);

/// Sampled smooth random function: random Fourier modes |k| <= 8 per axis.
Vector smooth_random_function(const KernelSpec& spec, std::uint64_t seed, bool nonnegative);

}  // namespace semireg
