#include "semireg/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "semireg/errors.hpp"
#include "semireg/rbound.hpp"

namespace semireg {

namespace {

double inv(double p) { return p == kInf ? 0.0 : 1.0 / p; }

bool exact_exponent(double p) { return p == 1.0 || p == 2.0 || p == kInf; }

}  // namespace

InterpolationTriple InterpolationTriple::from_theta(double p1, double p2, double theta) {
  InterpolationTriple t;
  t.p1 = p1;
  t.p2 = p2;
  t.theta = theta;
  const double ip = (1.0 - theta) * inv(p1) + theta * inv(p2);
  t.p = ip == 0.0 ? kInf : 1.0 / ip;
  t.validate();
  return t;
}

InterpolationTriple InterpolationTriple::from_p(double p1, double p2, double p) {
  if (inv(p1) == inv(p2)) throw ValidationError("interpolation triple: p1 == p2");
  return from_theta(p1, p2, (inv(p1) - inv(p)) / (inv(p1) - inv(p2)));
}

void InterpolationTriple::validate() const {
  if (!(p1 >= 1.0) || !(p2 >= 1.0) || !(p >= 1.0)) {
    throw ValidationError("interpolation triple: exponents must be >= 1");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ValidationError("interpolation triple: theta must lie in (0, 1)");
  }
  const double ip = (1.0 - theta) * inv(p1) + theta * inv(p2);
  if (std::abs(ip - inv(p)) > 1e-12) {
    throw ValidationError("interpolation triple: p inconsistent with (p1, p2, theta)");
  }
}

InterpCheck lp_logconvexity_check(const Vector& x, const InterpolationTriple& tr,
                                  const std::vector<double>& weights) {
  tr.validate();
  const GridSpace s1(weights, tr.p1), s2(weights, tr.p2), s(weights, tr.p);
  InterpCheck out;
  out.lhs = s.norm(x);
  out.rhs = std::pow(s1.norm(x), 1.0 - tr.theta) * std::pow(s2.norm(x), tr.theta);
  out.ok = out.lhs <= out.rhs + 1e-9;
  return out;
}

InterpCheck riesz_thorin_check(const Matrix& t, const InterpolationTriple& tr,
                               const std::vector<double>& weights) {
  tr.validate();
  if (!exact_exponent(tr.p1) || !exact_exponent(tr.p2)) {
    throw ValidationError("riesz_thorin_check: endpoints must be 1, 2 or inf");
  }
  InterpCheck out;
  out.lhs = op_norm(t, GridSpace(weights, tr.p)).value;
  out.rhs = std::pow(op_norm(t, GridSpace(weights, tr.p1)).value, 1.0 - tr.theta) *
            std::pow(op_norm(t, GridSpace(weights, tr.p2)).value, tr.theta);
  out.ok = out.lhs <= out.rhs + 1e-9;
  return out;
}

ExtrapolationReport extrapolation_bench(const GeneratorSpec& gen, const Polynomial& f,
                                        const InterpolationTriple& tr,
                                        const std::vector<double>& t_grid,
                                        const std::vector<int>& n_range,
                                        const std::vector<double>& weights) {
  tr.validate();
  validate_t_grid(t_grid);
  if (!exact_exponent(tr.p1) || !exact_exponent(tr.p2)) {
    throw ValidationError("extrapolation_bench: endpoints must be 1, 2 or inf");
  }
  if (n_range.empty()) throw ValidationError("extrapolation_bench: empty N range");
  if (weights.size() != static_cast<std::size_t>(gen.dim())) {
    throw ValidationError("extrapolation_bench: weights do not match the generator");
  }
  const Polynomial g = normalize_peak(f).f;
  const GridSpace s1(weights, tr.p1), s2(weights, tr.p2), sp(weights, tr.p);
  ExtrapolationReport out;
  out.triple = tr;

  std::vector<double> endpoint;
  for (double t : t_grid) endpoint.push_back(op_norm(poly_of_semigroup(g, gen, t), s1).value);
  out.rho = empirical_limsup(t_grid, endpoint);
  if (out.rho >= 1.0 - 0.05) {
    out.status = "chain_inapplicable";
    return out;
  }

  const double t_min = t_grid.back();
  std::vector<double> low;
  for (double t : t_grid) {
    if (t <= 10.0 * t_min * (1.0 + 1e-12)) low.push_back(t);
  }
  std::vector<double> m_points;
  for (int j = 0; j <= 64; ++j) m_points.push_back(j / 64.0);
  const int n_max = *std::max_element(n_range.begin(), n_range.end());
  for (double t : low) {
    for (int k = 1; k <= n_max * g.degree() && k * t <= 1.0; ++k) m_points.push_back(k * t);
  }
  out.M = 0.0;
  for (double t : m_points) out.M = std::max(out.M, op_norm(mat_exp(gen.a, t), s2).value);

  const double tp = tr.theta_weighting_p1();
  const int deg = g.degree();
  out.status = "ok";
  for (int n : n_range) {
    if (n < 1) throw ValidationError("extrapolation_bench: N must be >= 1");
    const double chain = std::pow(out.M, 1.0 - tp) *
                         std::pow(static_cast<double>(n) * deg + 1.0, 1.0 - tp) *
                         std::pow(out.rho, tp * n);
    if (chain < 1.0 && (out.smallest_n < 0 || n < out.smallest_n)) out.smallest_n = n;
    const Polynomial gn = power_expand(g, n);
    for (double t : low) {
      if (t * n * deg > 1.0) continue;
      ExtrapolationRow row;
      row.n = n;
      row.t = t;
      row.chain = chain;
      row.measured = op_norm(poly_of_semigroup(gn, gen, t), sp).value;
      row.ok = row.measured <= chain + 1e-6;
      if (!row.ok) out.status = "chain_violated";
      out.rows.push_back(row);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian kernels on periodic grids
// ---------------------------------------------------------------------------

std::size_t KernelSpec::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dim_ambient; ++i) s *= static_cast<std::size_t>(points);
  return s;
}

void KernelSpec::validate() const {
  if (dim_ambient < 1 || dim_ambient > 3) throw ValidationError("kernel: N must be 1, 2 or 3");
  if (points < 2) throw ValidationError("kernel: need at least 2 points per axis");
  if (!(period > 0.0) || !(a > 0.0) || !(C > 0.0)) {
    throw ValidationError("kernel: period, a and C must be positive");
  }
}

KernelSpec KernelSpec::refined() const {
  KernelSpec k = *this;
  k.points *= 2;
  return k;
}

GridSpace KernelSpec::space(double p) const {
  return GridSpace(std::vector<double>(size(), std::pow(cell(), dim_ambient)), p);
}

double gaussian_kernel(double t, const std::vector<double>& x, int n) {
  if (!(t > 0.0)) throw ValidationError("gaussian_kernel: t must be positive");
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  return std::pow(4.0 * kPi * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
}

namespace {

// Periodized 1-D kernel at displacements j h, j = 0..n-1, scaled to unit
// mass on the grid.
std::vector<double> periodic_kernel(const KernelSpec& spec, double t) {
  constexpr int kMaxImages = 1000;
  const int n = spec.points;
  const double h = spec.cell(), period = spec.period;
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const double d = j * h;
    double sum = gaussian_kernel(t, {d}, 1);
    int m = 1;
    for (; m <= kMaxImages; ++m) {
      const double add = gaussian_kernel(t, {d + m * period}, 1) +
                         gaussian_kernel(t, {d - m * period}, 1);
      sum += add;
      if (add <= 1e-17 * sum) break;
    }
    if (m > kMaxImages) {
      throw PeriodizationError("image sum for t = " + std::to_string(t) +
                               " did not converge within " + std::to_string(kMaxImages) +
                               " periods");
    }
    g[static_cast<std::size_t>(j)] = sum;
  }
  const double mass = std::accumulate(g.begin(), g.end(), 0.0) * h;
  if (!(mass > 0.0)) throw PeriodizationError("sampled kernel has no mass at t = " + std::to_string(t));
  for (auto& v : g) v /= mass;
  return g;
}

}  // namespace

Vector gaussian_apply(const KernelSpec& spec, double t, const Vector& f) {
  spec.validate();
  if (static_cast<std::size_t>(f.size()) != spec.size()) {
    throw ValidationError("gaussian_apply: grid vector has wrong size");
  }
  if (!(t >= 0.0)) throw ValidationError("gaussian_apply: t must be >= 0");
  if (t == 0.0) return f;
  const std::vector<double> g = periodic_kernel(spec, t);
  const long n = spec.points;
  const double h = spec.cell();
  Vector cur = f;
  long stride = 1;
  for (int axis = 0; axis < spec.dim_ambient; ++axis) {
    Vector next = Vector::Zero(cur.size());
    for (long base = 0; base < cur.size(); ++base) {
      if ((base / stride) % n != 0) continue;  // first point of each line
      for (long i = 0; i < n; ++i) {
        Complex acc = 0.0;
        for (long j = 0; j < n; ++j) {
          acc += g[static_cast<std::size_t>(((i - j) % n + n) % n)] * cur[base + j * stride];
        }
        next[base + i * stride] = acc * h;
      }
    }
    cur = std::move(next);
    stride *= n;
  }
  return cur;
}

Matrix gaussian_matrix(const KernelSpec& spec, double t) {
  const long n = static_cast<long>(spec.size());
  Matrix m(n, n);
  for (long j = 0; j < n; ++j) m.col(j) = gaussian_apply(spec, t, Vector::Unit(n, j));
  return m;
}

FittedConstant gaussian_estimate_check(const OperatorFamilyBuilder& family,
                                       const KernelSpec& spec,
                                       const std::vector<double>& t_grid,
                                       const ProbeBuilder& probes) {
  if (t_grid.empty()) throw ValidationError("gaussian_estimate_check: empty t grid");
  auto fit = [&](const KernelSpec& ks) {
    ks.validate();
    const auto fam = family(ks);
    const std::vector<Vector> fs = probes(ks);
    double c = 1.0;
    for (double t : t_grid) {
      const Matrix tt = fam(t);
      for (std::size_t pi = 0; pi < fs.size(); ++pi) {
        const Vector& f = fs[pi];
        for (Index i = 0; i < f.size(); ++i) {
          if (f[i].real() < 0.0 || f[i].imag() != 0.0) {
            throw ValidationError("gaussian_estimate_check: probes must be nonnegative");
          }
        }
        const Vector num = tt * f;
        const Vector den = gaussian_apply(ks, ks.a * t, f.cwiseAbs().cast<Complex>());
        const double floor = 1e-12 * f.cwiseAbs().maxCoeff();
        for (Index i = 0; i < num.size(); ++i) {
          const double a = std::abs(num[i]);
          if (a <= floor) continue;
          const double b = std::abs(den[i]);
          const double r = b > 1e-300 ? a / b : kInf;
          if (!(r <= 1e12)) {
            std::ostringstream os;
            os << "|T(t)f| / G(at)|f| = " << r << " at t = " << t << ", grid point " << i
               << ", probe " << pi << ", " << ks.points << " points per axis";
            throw DominationFailure(os.str());
          }
          c = std::max(c, r);
        }
      }
    }
    return c;
  };
  FittedConstant out;
  out.coarse = fit(spec);
  out.fine = fit(spec.refined());
  out.value = out.coarse;
  out.ok = std::isfinite(out.coarse) && std::abs(out.fine - out.coarse) < 0.1 * out.coarse;
  return out;
}

Vector maximal_function(const Vector& f, const KernelSpec& spec) {
  spec.validate();
  if (static_cast<std::size_t>(f.size()) != spec.size()) {
    throw ValidationError("maximal_function: grid vector has wrong size");
  }
  const long n = spec.points;
  const long size = static_cast<long>(spec.size());
  const int dims = spec.dim_ambient;
  // Offsets sorted by periodic distance, measured in cells.
  std::vector<std::pair<long, long>> offsets;  // (squared distance, flat offset)
  for (long o = 0; o < size; ++o) {
    long r2 = 0, rem = o;
    for (int d = 0; d < dims; ++d) {
      const long c = rem % n;
      rem /= n;
      const long w = std::min(c, n - c);
      r2 += w * w;
    }
    offsets.emplace_back(r2, o);
  }
  std::stable_sort(offsets.begin(), offsets.end());
  const long max_radius = n / 2;
  Vector out = Vector::Zero(size);
  for (long x = 0; x < size; ++x) {
    double sum = 0.0, best = 0.0;
    std::size_t k = 0;
    for (long r = 0; r <= max_radius; ++r) {
      while (k < offsets.size() && offsets[k].first <= r * r) {
        // x + offset with per-axis wraparound.
        long idx = 0, mul = 1, xo = x, oo = offsets[k].second;
        for (int d = 0; d < dims; ++d) {
          idx += ((xo % n + oo % n) % n) * mul;
          xo /= n;
          oo /= n;
          mul *= n;
        }
        sum += std::abs(f[idx]);
        ++k;
      }
      if (k > 0) best = std::max(best, sum / static_cast<double>(k));
    }
    out[x] = best;
  }
  return out;
}

FittedConstant maximal_domination_check(const KernelSpec& spec, const FunctionBuilder& f,
                                        const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw ValidationError("maximal_domination_check: empty t grid");
  auto fit = [&](const KernelSpec& ks) {
    const Vector v = f(ks);
    const Vector mf = maximal_function(v, ks);
    Eigen::VectorXd sup = Eigen::VectorXd::Zero(v.size());
    for (double t : t_grid) sup = sup.cwiseMax(gaussian_apply(ks, t, v).cwiseAbs());
    double c = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      const double a = sup[i], b = std::abs(mf[i]);
      double r = 1.0;
      if (b > 0.0) {
        r = a / b;
      } else if (a > 0.0) {
        r = kInf;
      }
      c = std::max(c, r);
    }
    return c;
  };
  FittedConstant out;
  out.coarse = fit(spec);
  out.fine = fit(spec.refined());
  out.value = out.coarse;
  out.ok = std::isfinite(out.coarse) && std::abs(out.fine - out.coarse) < 0.1 * out.coarse;
  return out;
}

FittedConstant gaussian_square_function_bench(const KernelSpec& spec, double p, int trials,
                                              std::uint64_t seed) {
  if (!(p > 1.0) || p == kInf) throw ValidationError("square function bench: p must be in (1, inf)");
  if (trials < 1) throw ValidationError("square function bench: trials must be >= 1");
  auto fit = [&](const KernelSpec& ks) {
    const GridSpace space = ks.space(p);
    double c = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(trial) * 7919u);
      const int n = std::uniform_int_distribution<int>(1, 8)(rng);
      std::uniform_real_distribution<double> ut(1e-3, 1.0);
      std::vector<Vector> fs, gs;
      for (int k = 0; k < n; ++k) {
        const double t = ut(rng);
        fs.push_back(smooth_random_function(ks, rng(), false));
        gs.push_back(gaussian_apply(ks, t, fs.back()));
      }
      const double den = square_function_norm(fs, space);
      if (den > 0.0) c = std::max(c, square_function_norm(gs, space) / den);
    }
    return c;
  };
  FittedConstant out;
  out.coarse = fit(spec);
  out.fine = fit(spec.refined());
  out.value = out.coarse;
  out.ok = std::isfinite(out.coarse) && std::abs(out.fine - out.coarse) < 0.1 * out.coarse;
  return out;
}

Vector smooth_random_function(const KernelSpec& spec, std::uint64_t seed, bool nonnegative) {
  spec.validate();
  const int kmax = spec.dim_ambient == 1 ? 8 : 4;
  const int width = 2 * kmax + 1;
  long modes = 1;
  for (int d = 0; d < spec.dim_ambient; ++d) modes *= width;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> c(static_cast<std::size_t>(modes));
  for (auto& v : c) v = Complex(g(rng), g(rng));
  const long n = spec.points;
  const long size = static_cast<long>(spec.size());
  Vector out(size);
  for (long x = 0; x < size; ++x) {
    Complex acc = 0.0;
    for (long m = 0; m < modes; ++m) {
      double phase = 0.0;
      long xr = x, mr = m;
      for (int d = 0; d < spec.dim_ambient; ++d) {
        const long k = mr % width - kmax;
        phase += 2.0 * kPi * k * static_cast<double>(xr % n) / n;
        xr /= n;
        mr /= width;
      }
      acc += c[static_cast<std::size_t>(m)] * std::polar(1.0, phase);
    }
    out[x] = nonnegative ? Complex(std::abs(acc)) : acc;
  }
  return out;
}

}  // namespace semireg
