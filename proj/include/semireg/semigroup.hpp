#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semireg/discpoly.hpp"
#include "semireg/grid_space.hpp"
#include "semireg/linalg.hpp"

namespace semireg {

struct Growth {
  double M = 1.0;
  double omega = 0.0;
};

/// A bounded generator A together with what is known about it.
struct GeneratorSpec {
  Matrix a;
  std::string label;
  std::optional<int> family_index;
  std::optional<Growth> growth;  // ||T(t)|| <= M e^{omega t} on [0, horizon]
  double horizon = 1.0;

  Index dim() const { return a.rows(); }
};

GeneratorSpec make_generator(Matrix a, std::string label = "matrix");

/// Checks the growth certificate at 64 log-spaced t in (0, horizon] on l^2.
bool growth_certificate_holds(const GeneratorSpec& gen);

/// Reads "dim" followed by dim^2 "re im" pairs (row-major).
Matrix read_matrix_file(const std::string& path);

/// When A is normal and the space is unweighted l^2, every norm computed
/// below is invariant under the unitary that diagonalizes A. Returns the
/// diagonal generator in that case and `gen` unchanged otherwise.
GeneratorSpec reduce_for_space(const GeneratorSpec& gen, const GridSpace& space);

bool is_normal(const Matrix& a, double rel_tol = 1e-12);

/// f(T(t)) T(s) by Horner's scheme on T(t).
Matrix poly_of_semigroup(const Polynomial& f, const GeneratorSpec& gen, double t,
                         double s = 0.0);

/// sum_k a_k T(s + k t), each term exponentiated separately.
Matrix poly_of_semigroup_direct(const Polynomial& f, const GeneratorSpec& gen,
                                double t, double s = 0.0);

/// Relative gap ||F - D||_F / max(1, ||F||_F) between two evaluation orders.
double evaluation_gap(const Matrix& factorized, const Matrix& direct);

struct BeurlingProfile {
  std::vector<double> t_grid;
  std::vector<double> values;
  std::vector<double> evaluation_gaps;
  double disc_value = 0.0;
  double empirical_limsup = 0.0;
  double margin = 0.0;
  bool estimate = false;  // some value is a power-iteration lower bound
};

/// Throws ValidationError unless t_grid is positive, strictly decreasing and
/// spans at least two decades.
void validate_t_grid(const std::vector<double>& t_grid);

/// n log-spaced points from hi down to lo (inclusive).
std::vector<double> log_grid(double hi, double lo, int n);

/// Maximum over the lowest decade of the grid: t <= 10 min(t).
double empirical_limsup(const std::vector<double>& t_grid,
                        const std::vector<double>& values);

BeurlingProfile beurling_profile(const GeneratorSpec& gen, const Polynomial& f,
                                 const std::vector<double>& t_grid,
                                 const GridSpace& space);

/// Profile of ||f^N(T(t)) T(K t)|| against ||f||_D^N.
BeurlingProfile converse_profile(const GeneratorSpec& gen, const Polynomial& f, int n,
                                 double k, const std::vector<double>& t_grid,
                                 const GridSpace& space);

struct PhasePair {
  double positive;  // arg zeta in (0, 2 pi]
  double negative;  // positive - 2 pi, in (-2 pi, 0]
};

PhasePair phases(Complex zeta);

struct KatoCheck {
  Matrix lhs;  // (A - i alpha)^{-1}
  Matrix rhs;  // -e^{i t alpha} (zeta - T(t))^{-1} int_0^t e^{-i s alpha} T(s) ds
  double residual = 0.0;
  double theta = 0.0;
};

/// Throws PhaseMismatch unless t alpha equals the phase of zeta of the same
/// sign as alpha (tolerance 1e-10).
KatoCheck kato_resolvent_identity_check(const GeneratorSpec& gen, Complex zeta,
                                        double t, double alpha);

struct SectorReport {
  Complex zeta;
  double t0 = 0.0;
  PhasePair theta{};
  double K = 0.0;
  double M = 0.0;
  std::vector<double> t_samples;
  std::vector<double> alpha_grid;      // entries that met |alpha| > |theta|/t0
  std::vector<double> resolvent_sups;  // ||alpha (A - i alpha)^{-1}||
  std::vector<double> bounds;          // K M |theta|
  double C = 0.0;
  double alpha0 = 0.0;
  bool holds = true;
  bool estimate = false;
};

SectorReport sector_report(const GeneratorSpec& gen, Complex zeta, double t0,
                           const GridSpace& space, const std::vector<double>& alpha_grid);

using Forcing = std::function<Vector(double)>;

struct MildSolution {
  std::vector<double> times;
  std::vector<Vector> x;
  double maxreg_ratio = 0.0;
  int n_time = 0;
};

/// x(t) = int_0^t T(t - s) f(s) ds on a uniform grid, with f interpolated
/// linearly between grid points (exponential integrator, exact for such f).
/// The grid is doubled until the maximal-regularity ratio
/// ||A x||_{L^p(0,tau; X)} / ||f||_{L^p(0,tau; X)} moves by less than 1%.
MildSolution mild_solution(const GeneratorSpec& gen, const Forcing& forcing, double tau,
                           double p, int n_time, const GridSpace& x_space);

/// Piecewise-linear interpolant of `knots` random complex Gaussian vectors on
/// [0, tau].
Forcing white_noise_forcing(Index dim, double tau, int knots, std::uint64_t seed);

struct DichotomyFit {
  std::vector<int> dims;
  std::vector<double> plateaus;
  double intercept = 0.0;  // plateau ~ intercept + slope / dim
  double slope = 0.0;
  std::string verdict;     // criterion_fails_in_limit | criterion_holds | inconclusive
};

DichotomyFit fit_plateau(const std::vector<int>& dims, const std::vector<double>& plateaus,
                         double disc_value);

}  // namespace semireg
