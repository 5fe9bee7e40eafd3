#include "semireg/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "semireg/errors.hpp"

namespace semireg {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

Matrix product(const Matrix& a, const Matrix& b) {
  if (is_diagonal(a) && is_diagonal(b)) {
    return a.diagonal().cwiseProduct(b.diagonal()).asDiagonal();
  }
  return a * b;
}

Matrix diagonal_of(const Vector& d) { return d.asDiagonal(); }

}  // namespace

GeneratorSpec make_generator(Matrix a, std::string label) {
  require_square_finite(a, "generator");
  GeneratorSpec g;
  g.a = std::move(a);
  g.label = std::move(label);
  return g;
}

bool growth_certificate_holds(const GeneratorSpec& gen) {
  if (!gen.growth) return true;
  const GeneratorSpec r = reduce_for_space(gen, GridSpace::unit(gen.dim(), 2.0));
  for (double t : log_grid(gen.horizon, gen.horizon * 1e-4, 64)) {
    const double bound = gen.growth->M * std::exp(gen.growth->omega * t) + 1e-6;
    if (spectral_norm(mat_exp(r.a, t)) > bound) return false;
  }
  return true;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("matrix file: cannot open " + path);
  long dim = 0;
  if (!(in >> dim) || dim <= 0) throw ValidationError("matrix file: bad dimension in " + path);
  Matrix a(dim, dim);
  for (long i = 0; i < dim; ++i) {
    for (long j = 0; j < dim; ++j) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) {
        throw ValidationError("matrix file: missing entry (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") in " + path);
      }
      a(i, j) = Complex(re, im);
    }
  }
  require_square_finite(a, "matrix file");
  return a;
}

bool is_normal(const Matrix& a, double rel_tol) {
  const double scale = a.squaredNorm();
  if (scale == 0.0) return true;
  return (a * a.adjoint() - a.adjoint() * a).norm() <= rel_tol * scale;
}

GeneratorSpec reduce_for_space(const GeneratorSpec& gen, const GridSpace& space) {
  if (space.p() != 2.0 || !space.uniform_weights() || is_diagonal(gen.a) ||
      !is_normal(gen.a)) {
    return gen;
  }
  GeneratorSpec out = gen;
  if (gen.a.isApprox(gen.a.adjoint(), 1e-14)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gen.a, Eigen::EigenvaluesOnly);
    out.a = diagonal_of(es.eigenvalues().cast<Complex>());
  } else if (gen.a.isApprox(-gen.a.adjoint(), 1e-14)) {
    const Matrix h = Complex(0.0, -1.0) * gen.a;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    out.a = diagonal_of(Complex(0.0, 1.0) * es.eigenvalues().cast<Complex>());
  } else {
    Eigen::ComplexSchur<Matrix> schur(gen.a, false);
    out.a = diagonal_of(schur.matrixT().diagonal());
  }
  return out;
}

Matrix poly_of_semigroup(const Polynomial& f, const GeneratorSpec& gen, double t,
                         double s) {
  if (!(t >= 0.0) || !(s >= 0.0)) throw ValidationError("poly_of_semigroup: need t, s >= 0");
  const Index n = gen.dim();
  if (is_diagonal(gen.a)) {
    Vector d(n);
    for (Index i = 0; i < n; ++i) {
      const Complex lam = gen.a(i, i);
      d[i] = f(std::exp(t * lam)) * std::exp(s * lam);
    }
    return diagonal_of(d);
  }
  const Matrix tt = mat_exp(gen.a, t);
  const auto& c = f.coeffs();
  Matrix acc = c.back() * Matrix::Identity(n, n);
  for (int k = f.degree() - 1; k >= 0; --k) {
    acc = acc * tt;
    acc.diagonal().array() += c[k];
  }
  if (s != 0.0) acc = acc * mat_exp(gen.a, s);
  return acc;
}

Matrix poly_of_semigroup_direct(const Polynomial& f, const GeneratorSpec& gen, double t,
                                double s) {
  const Index n = gen.dim();
  Matrix sum = Matrix::Zero(n, n);
  for (int k = 0; k <= f.degree(); ++k) {
    if (f.coeff(k) == Complex(0.0)) continue;
    sum += f.coeff(k) * mat_exp(gen.a, s + k * t);
  }
  return sum;
}

double evaluation_gap(const Matrix& factorized, const Matrix& direct) {
  return (factorized - direct).norm() / std::max(1.0, factorized.norm());
}

void validate_t_grid(const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw ValidationError("t_grid: need at least two points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) {
      throw ValidationError("t_grid: entry " + std::to_string(i) + " is not positive");
    }
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) {
      throw ValidationError("t_grid: not strictly decreasing at entry " + std::to_string(i));
    }
  }
  if (t_grid.front() < 100.0 * t_grid.back() * (1.0 - 1e-12)) {
    throw ValidationError("t_grid: must span at least two decades");
  }
}

std::vector<double> log_grid(double hi, double lo, int n) {
  if (n < 2 || !(hi > lo) || !(lo > 0.0)) {
    throw ValidationError("log_grid: need hi > lo > 0 and n >= 2");
  }
  std::vector<double> g(static_cast<std::size_t>(n));
  const double step = std::log(lo / hi) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = hi * std::exp(step * i);
  g.front() = hi;
  g.back() = lo;
  return g;
}

double empirical_limsup(const std::vector<double>& t_grid, const std::vector<double>& values) {
  const double t_min = *std::min_element(t_grid.begin(), t_grid.end());
  double m = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] <= 10.0 * t_min * (1.0 + 1e-12)) m = std::max(m, values[i]);
  }
  return m;
}

namespace {

BeurlingProfile finish_profile(BeurlingProfile p) {
  p.empirical_limsup = empirical_limsup(p.t_grid, p.values);
  p.margin = p.disc_value - p.empirical_limsup;
  return p;
}

void check_space(const GeneratorSpec& gen, const GridSpace& space, const char* what) {
  if (static_cast<std::size_t>(gen.dim()) != space.dim()) {
    throw ValidationError(std::string(what) + ": space dimension " +
                          std::to_string(space.dim()) + " != generator dimension " +
                          std::to_string(gen.dim()));
  }
}

}  // namespace

BeurlingProfile beurling_profile(const GeneratorSpec& gen_in, const Polynomial& f,
                                 const std::vector<double>& t_grid,
                                 const GridSpace& space) {
  validate_t_grid(t_grid);
  check_space(gen_in, space, "beurling_profile");
  const GeneratorSpec gen = reduce_for_space(gen_in, space);
  BeurlingProfile out;
  out.t_grid = t_grid;
  out.disc_value = disc_norm(f).value;
  for (double t : t_grid) {
    const Matrix fac = poly_of_semigroup(f, gen, t);
    out.evaluation_gaps.push_back(evaluation_gap(fac, poly_of_semigroup_direct(f, gen, t)));
    const NormResult nr = op_norm(fac, space);
    out.values.push_back(nr.value);
    out.estimate = out.estimate || nr.estimate;
  }
  return finish_profile(std::move(out));
}

BeurlingProfile converse_profile(const GeneratorSpec& gen_in, const Polynomial& f, int n,
                                 double k, const std::vector<double>& t_grid,
                                 const GridSpace& space) {
  validate_t_grid(t_grid);
  check_space(gen_in, space, "converse_profile");
  if (n < 1) throw ValidationError("converse_profile: N must be >= 1");
  if (!(k >= 0.0) || !std::isfinite(k)) throw ValidationError("converse_profile: K must be >= 0");
  if (!in_C1(f)) throw ValidationError("converse_profile: f is not in C1 (|f(1)| >= ||f||_D)");
  const GeneratorSpec gen = reduce_for_space(gen_in, space);
  const Polynomial fn = power_expand(f, n);
  BeurlingProfile out;
  out.t_grid = t_grid;
  out.disc_value = std::pow(disc_norm(f).value, n);
  for (double t : t_grid) {
    const Matrix base = poly_of_semigroup(f, gen, t);
    Matrix fac = base;
    for (int j = 1; j < n; ++j) fac = product(fac, base);
    fac = product(fac, mat_exp(gen.a, k * t));
    out.evaluation_gaps.push_back(
        evaluation_gap(fac, poly_of_semigroup_direct(fn, gen, t, k * t)));
    const NormResult nr = op_norm(fac, space);
    out.values.push_back(nr.value);
    out.estimate = out.estimate || nr.estimate;
  }
  return finish_profile(std::move(out));
}

PhasePair phases(Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-9) {
    throw ValidationError("zeta must lie on the unit circle, |zeta| = " +
                          fmt(std::abs(zeta)));
  }
  double theta = std::arg(zeta);
  if (theta <= 0.0) theta += 2.0 * kPi;
  return {theta, theta - 2.0 * kPi};
}

KatoCheck kato_resolvent_identity_check(const GeneratorSpec& gen, Complex zeta, double t,
                                        double alpha) {
  require_square_finite(gen.a, "kato_resolvent_identity_check");
  if (!(t > 0.0)) throw ValidationError("kato check: t must be positive");
  const PhasePair ph = phases(zeta);
  if (alpha == 0.0) throw PhaseMismatch("alpha = 0 has no matching phase");
  const double theta = alpha > 0.0 ? ph.positive : ph.negative;
  if (std::abs(t * alpha - theta) > 1e-10 * std::max(1.0, std::abs(theta))) {
    throw PhaseMismatch("t alpha = " + fmt(t * alpha) + " but the phase is " + fmt(theta));
  }
  KatoCheck out;
  out.theta = theta;
  out.lhs = -resolvent(gen.a, Complex(0.0, alpha));
  const Matrix tt = mat_exp(gen.a, t);
  const Matrix inv = resolvent(tt, zeta);
  const QuadratureResult q = quad_strong_integral(
      [&](double s) -> Matrix {
        return std::polar(1.0, -s * alpha) * mat_exp(gen.a, s);
      },
      0.0, t);
  out.rhs = -std::polar(1.0, t * alpha) * inv * q.value;
  out.residual = spectral_norm(out.lhs - out.rhs) / spectral_norm(out.lhs);
  return out;
}

SectorReport sector_report(const GeneratorSpec& gen_in, Complex zeta, double t0,
                           const GridSpace& space, const std::vector<double>& alpha_grid) {
  check_space(gen_in, space, "sector_report");
  if (!(t0 > 0.0)) throw ValidationError("sector_report: t0 must be positive");
  const PhasePair ph = phases(zeta);
  if (std::abs(zeta - Complex(1.0)) < 1e-12) {
    throw ValidationError("sector_report: zeta = 1 lies in the spectrum of T(0)");
  }
  const GeneratorSpec gen = reduce_for_space(gen_in, space);
  SectorReport out;
  out.zeta = zeta;
  out.t0 = t0;
  out.theta = ph;
  out.alpha0 = std::max(std::abs(ph.positive), std::abs(ph.negative)) / t0;

  std::vector<double> samples = log_grid(t0, t0 * 1e-4, 64);
  std::vector<double> signed_alphas;
  for (double a : alpha_grid) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ValidationError("sector_report: alpha grid entries must be positive");
    }
    for (double sa : {a, -a}) {
      const double th = sa > 0.0 ? ph.positive : ph.negative;
      if (std::abs(sa) * t0 > std::abs(th) && th != 0.0) {
        signed_alphas.push_back(sa);
        samples.push_back(th / sa);
      }
    }
  }
  std::sort(samples.begin(), samples.end(), std::greater<>());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  out.t_samples = samples;

  out.M = 1.0;
  for (double t : samples) {
    const Matrix tt = mat_exp(gen.a, t);
    Matrix inv;
    try {
      inv = resolvent(tt, zeta);
    } catch (const SpectrumHit& e) {
      throw SpectrumHit("zeta in the spectrum of T(t) at t = " + fmt(t) + " (" + e.what() + ")");
    }
    const NormResult k = op_norm(inv, space);
    const NormResult m = op_norm(tt, space);
    out.K = std::max(out.K, k.value);
    out.M = std::max(out.M, m.value);
    out.estimate = out.estimate || k.estimate || m.estimate;
  }

  for (double a : signed_alphas) {
    const double th = a > 0.0 ? ph.positive : ph.negative;
    Matrix r;
    try {
      r = resolvent(gen.a, Complex(0.0, a));
    } catch (const SpectrumHit& e) {
      throw SpectrumHit("i alpha in the spectrum of A at alpha = " + fmt(a) + " (" + e.what() +
                        ")");
    }
    const NormResult nr = op_norm(r, space);
    const double v = std::abs(a) * nr.value;
    const double bound = out.K * out.M * std::abs(th);
    out.alpha_grid.push_back(a);
    out.resolvent_sups.push_back(v);
    out.bounds.push_back(bound);
    out.C = std::max(out.C, v);
    out.estimate = out.estimate || nr.estimate;
    if (v > bound + 1e-6) out.holds = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mild solutions
// ---------------------------------------------------------------------------

namespace {

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> x;
  double ratio = 0.0;
};

double time_norm(const std::vector<double>& v, double h, double p) {
  if (p == kInf) return *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = (i == 0 || i + 1 == v.size()) ? 0.5 * h : h;
    s += w * std::pow(v[i], p);
  }
  return std::pow(s, 1.0 / p);
}

Trajectory integrate(const GeneratorSpec& gen, const Forcing& forcing, double tau, double p,
                     int n_time, const GridSpace& x_space) {
  const Index d = gen.dim();
  const double h = tau / n_time;
  Matrix aug = Matrix::Zero(3 * d, 3 * d);
  aug.topLeftCorner(d, d) = h * gen.a;
  aug.block(0, d, d, d) = Matrix::Identity(d, d);
  aug.block(d, 2 * d, d, d) = Matrix::Identity(d, d);
  const Matrix big = mat_exp(aug, 1.0);
  const Matrix e = big.topLeftCorner(d, d);
  const Matrix phi1 = h * big.block(0, d, d, d);
  const Matrix phi2 = h * big.block(0, 2 * d, d, d);

  Trajectory tr;
  tr.times.resize(static_cast<std::size_t>(n_time) + 1);
  tr.x.resize(tr.times.size());
  std::vector<double> ax_norm(tr.times.size()), f_norm(tr.times.size());
  Vector x = Vector::Zero(d);
  Vector f_prev = forcing(0.0);
  if (f_prev.size() != d) throw ValidationError("mild_solution: forcing has wrong dimension");
  for (int i = 0; i <= n_time; ++i) {
    const double t = i * h;
    tr.times[i] = t;
    tr.x[i] = x;
    ax_norm[i] = x_space.norm(gen.a * x);
    f_norm[i] = x_space.norm(f_prev);
    if (!std::isfinite(ax_norm[i]) || !std::isfinite(f_norm[i])) {
      throw ValidationError("mild_solution: non-finite value at t = " + fmt(t));
    }
    if (i == n_time) break;
    const Vector f_next = forcing((i + 1) * h);
    x = e * x + phi1 * f_prev + phi2 * (f_next - f_prev);
    f_prev = f_next;
  }
  const double denom = time_norm(f_norm, h, p);
  tr.ratio = denom > 0.0 ? time_norm(ax_norm, h, p) / denom : 0.0;
  return tr;
}

}  // namespace

MildSolution mild_solution(const GeneratorSpec& gen, const Forcing& forcing, double tau,
                           double p, int n_time, const GridSpace& x_space) {
  require_square_finite(gen.a, "mild_solution");
  check_space(gen, x_space, "mild_solution");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("mild_solution: tau must be > 0");
  if (n_time < 16) throw ValidationError("mild_solution: n_time must be >= 16");
  if (!(p >= 1.0)) throw ValidationError("mild_solution: p must be >= 1");
  constexpr int kMaxTime = 1 << 16;
  Trajectory coarse = integrate(gen, forcing, tau, p, n_time, x_space);
  int n = n_time;
  while (true) {
    if (2 * n > kMaxTime) {
      throw QuadratureDivergence("mild_solution: ratio not stable at n_time = " +
                                 std::to_string(n));
    }
    Trajectory fine = integrate(gen, forcing, tau, p, 2 * n, x_space);
    n *= 2;
    const double change = std::abs(fine.ratio - coarse.ratio);
    const bool stable = change <= 0.01 * std::max(fine.ratio, 1e-300) ||
                        (fine.ratio == 0.0 && coarse.ratio == 0.0);
    coarse = std::move(fine);
    if (stable) break;
  }
  MildSolution out;
  out.times = std::move(coarse.times);
  out.x = std::move(coarse.x);
  out.maxreg_ratio = coarse.ratio;
  out.n_time = n;
  return out;
}

Forcing white_noise_forcing(Index dim, double tau, int knots, std::uint64_t seed) {
  if (knots < 1) throw ValidationError("white_noise_forcing: need at least one interval");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Vector> values(static_cast<std::size_t>(knots) + 1, Vector(dim));
  for (auto& v : values) {
    for (Index i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  }
  return [values = std::move(values), tau, knots](double t) -> Vector {
    const double u = std::clamp(t / tau, 0.0, 1.0) * knots;
    const int k = std::min(static_cast<int>(std::floor(u)), knots - 1);
    const double w = u - k;
    return (1.0 - w) * values[k] + w * values[k + 1];
  };
}

DichotomyFit fit_plateau(const std::vector<int>& dims, const std::vector<double>& plateaus,
                         double disc_value) {
  if (dims.empty() || dims.size() != plateaus.size()) {
    throw ValidationError("fit_plateau: need matching nonempty dims and plateaus");
  }
  DichotomyFit fit;
  fit.dims = dims;
  fit.plateaus = plateaus;
  const double n = static_cast<double>(dims.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const double x = 1.0 / dims[i];
    sx += x;
    sy += plateaus[i];
    sxx += x * x;
    sxy += x * plateaus[i];
  }
  const double det = n * sxx - sx * sx;
  if (dims.size() >= 2 && det > 0.0) {
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
  } else {
    fit.intercept = sy / n;
  }
  const std::size_t largest =
      static_cast<std::size_t>(std::max_element(dims.begin(), dims.end()) - dims.begin());
  const double threshold = disc_value - 0.05;
  if (plateaus[largest] > threshold) {
    fit.verdict = "criterion_fails_in_limit";
  } else if (fit.intercept > threshold) {
    fit.verdict = "inconclusive";
  } else {
    fit.verdict = "criterion_holds";
  }
  return fit;
}

}  // namespace semireg
