#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semireg/discpoly.hpp"
#include "semireg/grid_space.hpp"
#include "semireg/linalg.hpp"
#include "semireg/semigroup.hpp"

namespace semireg {

enum class RadMode { exact, monte_carlo };

struct RademacherConfig {
  double p = 2.0;  // exponent of the average over signs
  RadMode mode = RadMode::exact;
  int mc_samples = 4096;
  std::uint64_t seed = kDefaultSeed;
  int exact_cap = 14;
};

struct RademacherResult {
  double value = 0.0;
  double std_error = 0.0;  // zero in exact mode
  bool exact = true;
  bool converged = true;   // MC: SE / value <= 2%
  long patterns = 0;
};

/// (E ||sum_k eps_k x_k||_X^p)^{1/p} over independent uniform signs.
RademacherResult rademacher_norm(const std::vector<Vector>& vectors, const GridSpace& space,
                                 const RademacherConfig& cfg);

struct KahaneCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;  // 1 for real multipliers, 2 otherwise
  bool ok = false;
};

/// Contraction principle: Rad(a_k x_k) <= c max|a_k| Rad(x_k).
KahaneCheck kahane_contraction_check(const std::vector<Vector>& vectors,
                                     const std::vector<Complex>& scalars,
                                     const GridSpace& space, const RademacherConfig& cfg);

/// || (sum_k |f_k|^2)^{1/2} ||_X with the modulus taken pointwise.
double square_function_norm(const std::vector<Vector>& functions, const GridSpace& space);

struct RBoundWitness {
  std::vector<int> selection;  // indices into the family, repetition allowed
  std::vector<Vector> x;
};

struct RBoundEstimate {
  double value = 0.0;  // lower bound for the R_p-bound
  RBoundWitness witness;
  double singleton_max = 0.0;
  bool converged = true;  // false when a singleton norm is itself an estimate
  int trials = 0;
};

/// Rad(T_{j_k} x_k) / Rad(x_k) for the witness selection, exact enumeration.
double witness_ratio(const std::vector<Matrix>& family, const RBoundWitness& w,
                     const GridSpace& space, const RademacherConfig& cfg);

/// Lower bound for R_p(family): singletons at their norm maximizers,
/// `budget` random selections, then block-coordinate ascent on the best
/// small selection.
RBoundEstimate rbound_estimate(const std::vector<Matrix>& family, const GridSpace& space,
                               const RademacherConfig& cfg, int budget);

struct CalculusReport {
  RBoundEstimate sum;      // {T_k + S_k}
  RBoundEstimate product;  // {T_k S_k}
  int trials = 0;
  int sum_violations = 0;      // ratio_{T+S}(x) > ratio_T(x) + ratio_S(x)
  int product_violations = 0;  // ratio_{TS}(x) != ratio_T(Sx) ratio_S(x)
  double worst_sum_slack = 0.0;
  double worst_product_gap = 0.0;
  bool ok = true;
};

CalculusReport rbound_calculus_check(const std::vector<Matrix>& fam_t,
                                     const std::vector<Matrix>& fam_s, const GridSpace& space,
                                     const RademacherConfig& cfg, int budget);

struct RSectorReport {
  PhasePair theta{};
  std::vector<double> t_grid;
  std::vector<double> alpha_pos;
  std::vector<double> alpha_neg;
  RBoundEstimate semigroup;   // {T(t)}
  RBoundEstimate resolvent;   // {(zeta - T(t))^{-1}}
  RBoundEstimate alpha_plus;  // {alpha (A - i alpha)^{-1}: alpha > theta+/t0}
  RBoundEstimate alpha_minus; // same for alpha < theta-/t0
  double sup_semigroup = 0.0;
  double sup_resolvent = 0.0;
  double sup_alpha_plus = 0.0;
  double sup_alpha_minus = 0.0;
  double chain_plus = 0.0;   // K |theta+| R{T(t)}
  double chain_minus = 0.0;
  bool holds = true;
};

RSectorReport r_sector_report(const GeneratorSpec& gen, Complex zeta, double t0,
                              const GridSpace& space, const RademacherConfig& cfg, int budget);

struct BtCheck {
  double residual = 0.0;
  double d_min = 0.0;
  double radius = 0.0;  // default circle radius, 0 for a supplied contour
  long nodes = 0;
  bool converged = true;
};

/// Compares R(zeta, T(t)) with zeta^{-1}(I - B(t)), where B(t) is the contour
/// integral of e^z / (e^z - zeta) (z - tA)^{-1}. Without a contour, a circle
/// about 0 between the spectrum of tA and the nearest pole of e^z = zeta is used.
BtCheck bt_contour_check(const GeneratorSpec& gen, Complex zeta, double t,
                         const std::optional<ContourSpec>& gamma = std::nullopt);

struct RBeurlingProfile {
  std::vector<double> ladder;     // decreasing epsilons
  std::vector<double> estimates;  // R{f(T(t)): t in grid, t <= eps}, running max
  std::vector<double> sup_norms;  // sup ||f(T(t))|| over the same windows
  double disc_value = 0.0;
  double final_value = 0.0;
  double margin = 0.0;
};

RBeurlingProfile r_beurling_profile(const GeneratorSpec& gen, const Polynomial& f,
                                    const std::vector<double>& t_grid,
                                    const GridSpace& space, const RademacherConfig& cfg,
                                    int budget, int ladder_points = 6);

/// Closed-form upper bound for R{f^N(T(t)) T(Kt): t <= 1/K} from the sector
/// R-bound R.
double r_converse_bound_eval(const Polynomial& f, int n, double k, double delta, double r);

struct RConverseCheck {
  double family_estimate = 0.0;
  double sector_estimate = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Measures R{T(z): z = r e^{i phi}, |phi| <= delta, 1e-4 <= r <= 2} and
/// R{f^N(T(t)) T(Kt): t <= 1/K}, and compares the latter with the bound.
RConverseCheck r_converse_check(const GeneratorSpec& gen, const Polynomial& f, int n,
                                double k, double delta, const GridSpace& space,
                                const RademacherConfig& cfg, int budget);

}  // namespace semireg
