#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "semireg/grid_space.hpp"
#include "semireg/types.hpp"

namespace semireg {

// ---------------------------------------------------------------------------
// Validation helpers
// ---------------------------------------------------------------------------

/// Throws ValidationError unless `a` is square, non-empty and finite.
void require_square_finite(const Matrix& a, std::string_view what);

bool is_diagonal(const Matrix& a);
bool all_finite(const Matrix& a);

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

/// e^{tA} by scaling and squaring with the diagonal [13/13] Pade approximant.
/// Diagonal inputs are exponentiated entrywise.
Matrix mat_exp(const Matrix& a, double t);
Matrix mat_exp(const Matrix& a, Complex t);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Largest singular value.
double spectral_norm(const Matrix& a);

struct NormResult {
  double value = 0.0;
  // true when `value` is a lower bound from power iteration rather than the
  // exact induced norm.
  bool estimate = false;
  // x with ||A x|| / ||x|| == value (in the space's own coordinates).
  Vector maximizer;
};

struct PowerIterationOptions {
  int random_restarts = 8;
  int max_iterations = 200;
  std::uint64_t seed = kDefaultSeed;
};

/// Induced operator norm of `a` on the weighted l^p space.
///
/// Exact for p in {1, 2, inf}. Any other p gives a certified lower bound from
/// the duality-map power iteration (random restarts plus one start from the
/// p = 2 maximizer), flagged `estimate`.
NormResult op_norm(const Matrix& a, const GridSpace& space,
                   const PowerIterationOptions& options = {});

/// ||A x|| / ||x|| in the given space.
double norm_ratio(const Matrix& a, const Vector& x, const GridSpace& space);

// ---------------------------------------------------------------------------
// Resolvents
// ---------------------------------------------------------------------------

inline constexpr double kConditionCap = 1e12;

/// (lambda - A)^{-1}. Throws SpectrumHit when the LU condition estimate of
/// lambda - A exceeds kConditionCap.
Matrix resolvent(const Matrix& a, Complex lambda);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

inline constexpr int kPanelNodes = 16;
inline constexpr long kNodeCap = 1L << 14;

/// A smooth arc z(s), s in [0, 1].
struct ContourSegment {
  std::function<Complex(double)> z;
  std::function<Complex(double)> dz;
  int nodes = kPanelNodes;
};

struct ContourSpec {
  std::vector<ContourSegment> segments;
  bool counterclockwise = true;

  static ContourSpec circle(Complex center, double radius, int nodes = 64);
  /// Axis-aligned rectangle with corners lo (bottom-left) and hi (top-right).
  static ContourSpec rectangle(Complex lo, Complex hi, int nodes_per_side = 32);

  /// Checks node counts and positive finite length; throws ValidationError.
  void validate() const;
};

struct QuadratureResult {
  Matrix value;
  bool converged = true;
  long nodes = 0;
  double last_change = 0.0;
};

using ComplexMatrixFn = std::function<Matrix(Complex)>;
using RealMatrixFn = std::function<Matrix(double)>;

/// (1 / 2 pi i) times the contour integral of F over gamma by composite
/// Gauss-Legendre panels with panel doubling. Successive estimates must agree
/// to 1e-8 (Frobenius, relative once the integral exceeds 1 in size).
QuadratureResult contour_integral(const ComplexMatrixFn& f,
                                  const ContourSpec& gamma);

/// Adaptive composite Gauss-Legendre integral of G over [a, b] with absolute
/// tolerance `abs_tol` per entry.
QuadratureResult quad_strong_integral(const RealMatrixFn& g, double a,
                                      double b, double abs_tol = 1e-9);

}  // namespace semireg
