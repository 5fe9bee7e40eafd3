#include "semireg/rbound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "semireg/errors.hpp"

namespace semireg {

namespace {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

void check_vectors(const std::vector<Vector>& vs, const GridSpace& space, const char* what) {
  for (const auto& v : vs) {
    if (static_cast<std::size_t>(v.size()) != space.dim()) {
      throw ValidationError(std::string(what) + ": vector dimension " +
                            std::to_string(v.size()) + " != space dimension " +
                            std::to_string(space.dim()));
    }
  }
}

// Mean of ||sum eps_k y_k||^q over all sign patterns (q < inf) or the max
// (q = inf), with eps_1 = +1 fixed by the symmetry s -> -s.
double exact_mean_power(const std::vector<Vector>& ys, const GridSpace& space, double q) {
  const std::size_t n = ys.size();
  const long count = 1L << (n - 1);
  std::vector<double> vals(static_cast<std::size_t>(count));
  std::vector<int> eps(n, 1);
  Vector s = ys[0];
  for (std::size_t k = 1; k < n; ++k) s += ys[k];
  for (long i = 0; i < count; ++i) {
    if (i > 0) {
      const int j = std::countr_zero(static_cast<unsigned long>(i)) + 1;
      s -= (2.0 * eps[j]) * ys[j];
      eps[j] = -eps[j];
    }
    const double nrm = space.norm(s);
    vals[static_cast<std::size_t>(i)] = q == kInf ? nrm : std::pow(nrm, q);
  }
  if (q == kInf) return *std::max_element(vals.begin(), vals.end());
  return pairwise_sum(vals.data(), vals.size()) / static_cast<double>(count);
}

double rad_exact(const std::vector<Vector>& vs, const GridSpace& space, double q) {
  double scale = 0.0;
  for (const auto& v : vs) scale = std::max(scale, space.norm(v));
  if (scale == 0.0) return 0.0;
  std::vector<Vector> ys;
  ys.reserve(vs.size());
  for (const auto& v : vs) ys.push_back(v / scale);
  const double m = exact_mean_power(ys, space, q);
  return scale * (q == kInf ? m : std::pow(m, 1.0 / q));
}

RademacherResult rad_monte_carlo(const std::vector<Vector>& vs, const GridSpace& space,
                                 const RademacherConfig& cfg) {
  constexpr int kBatches = 32;
  RademacherResult out;
  out.exact = false;
  double scale = 0.0;
  for (const auto& v : vs) scale = std::max(scale, space.norm(v));
  if (scale == 0.0) return out;
  const int per_batch = std::max(1, cfg.mc_samples / kBatches);
  std::mt19937_64 rng(cfg.seed);
  const double q = cfg.p;
  std::vector<double> means(kBatches);
  std::vector<double> vals(static_cast<std::size_t>(per_batch));
  double sup = 0.0;
  for (int b = 0; b < kBatches; ++b) {
    for (int i = 0; i < per_batch; ++i) {
      Vector s = Vector::Zero(vs[0].size());
      std::uint64_t bits = 0;
      for (std::size_t k = 0; k < vs.size(); ++k) {
        if (k % 64 == 0) bits = rng();
        s += (((bits >> (k % 64)) & 1u) ? 1.0 / scale : -1.0 / scale) * vs[k];
      }
      const double nrm = space.norm(s);
      sup = std::max(sup, nrm);
      vals[static_cast<std::size_t>(i)] = q == kInf ? nrm : std::pow(nrm, q);
    }
    means[b] = pairwise_sum(vals.data(), vals.size()) / per_batch;
  }
  out.patterns = static_cast<long>(per_batch) * kBatches;
  if (q == kInf) {
    out.value = scale * sup;
    return out;
  }
  const double mu = pairwise_sum(means.data(), means.size()) / kBatches;
  double var = 0.0;
  for (double m : means) var += (m - mu) * (m - mu);
  var /= (kBatches - 1);
  const double se_mu = std::sqrt(var / kBatches);
  out.value = scale * std::pow(mu, 1.0 / q);
  out.std_error = mu > 0.0 ? scale * std::pow(mu, 1.0 / q - 1.0) * se_mu / q : 0.0;
  out.converged = out.value > 0.0 && out.std_error <= 0.02 * out.value;
  return out;
}

}  // namespace

RademacherResult rademacher_norm(const std::vector<Vector>& vectors, const GridSpace& space,
                                 const RademacherConfig& cfg) {
  check_vectors(vectors, space, "rademacher_norm");
  if (!(cfg.p >= 1.0)) throw ValidationError("rademacher_norm: p must be >= 1");
  RademacherResult out;
  if (vectors.empty()) return out;
  if (cfg.mode == RadMode::monte_carlo) {
    if (cfg.mc_samples < 1) throw ValidationError("rademacher_norm: mc_samples must be >= 1");
    return rad_monte_carlo(vectors, space, cfg);
  }
  if (static_cast<int>(vectors.size()) > cfg.exact_cap) {
    throw EnumerationTooLarge(std::to_string(vectors.size()) + " vectors exceed the cap of " +
                              std::to_string(cfg.exact_cap));
  }
  out.value = rad_exact(vectors, space, cfg.p);
  out.patterns = 1L << (vectors.size() - 1);
  return out;
}

KahaneCheck kahane_contraction_check(const std::vector<Vector>& vectors,
                                     const std::vector<Complex>& scalars,
                                     const GridSpace& space, const RademacherConfig& cfg) {
  if (vectors.size() != scalars.size()) {
    throw ValidationError("kahane_contraction_check: need one scalar per vector");
  }
  RademacherConfig exact = cfg;
  exact.mode = RadMode::exact;
  bool real = true;
  double amax = 0.0;
  std::vector<Vector> scaled;
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (!(std::abs(scalars[k]) <= 1.0 + 1e-15)) {
      throw ValidationError("kahane_contraction_check: |a_k| must be <= 1");
    }
    real = real && scalars[k].imag() == 0.0;
    amax = std::max(amax, std::abs(scalars[k]));
    scaled.push_back(scalars[k] * vectors[k]);
  }
  KahaneCheck out;
  out.constant = real ? 1.0 : 2.0;
  out.lhs = rademacher_norm(scaled, space, exact).value;
  out.rhs = out.constant * amax * rademacher_norm(vectors, space, exact).value;
  out.ok = out.lhs <= out.rhs + 1e-9;
  return out;
}

double square_function_norm(const std::vector<Vector>& functions, const GridSpace& space) {
  check_vectors(functions, space, "square_function_norm");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Index>(space.dim()));
  for (const auto& f : functions) acc += f.cwiseAbs2();
  return space.norm(acc.cwiseSqrt().cast<Complex>());
}

// ---------------------------------------------------------------------------
// R-bound estimation
// ---------------------------------------------------------------------------

namespace {

double selection_ratio(const std::vector<Matrix>& family, const std::vector<int>& sel,
                       const std::vector<Vector>& x, const GridSpace& space, double q) {
  std::vector<Vector> tx;
  tx.reserve(sel.size());
  for (std::size_t k = 0; k < sel.size(); ++k) tx.push_back(family[sel[k]] * x[k]);
  const double den = rad_exact(x, space, q);
  if (den == 0.0) return 0.0;
  return rad_exact(tx, space, q) / den;
}

Vector gaussian_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

void check_family(const std::vector<Matrix>& family, const GridSpace& space, const char* what) {
  if (family.empty()) throw ValidationError(std::string(what) + ": empty family");
  for (const auto& t : family) {
    if (t.rows() != t.cols() || static_cast<std::size_t>(t.rows()) != space.dim()) {
      throw ValidationError(std::string(what) + ": operator does not act on the space");
    }
  }
}

// Block-coordinate ascent of the ratio with forward differences. The step
// count shrinks for large selections so one call stays within a fixed budget
// of vector operations.
void ascend(const std::vector<Matrix>& family, RBoundWitness& w, double& value,
            const GridSpace& space, double q) {
  const std::size_t m = w.selection.size();
  const Index dim = static_cast<Index>(space.dim());
  const double per_eval = 2.0 * std::ldexp(1.0, static_cast<int>(m) - 1) *
                          static_cast<double>(dim) * static_cast<double>(m);
  const double per_step = per_eval * (2.0 * dim + 12.0);
  const int steps = static_cast<int>(std::min(100.0, 4e8 / per_step));
  std::vector<double> eta(m, 0.1);
  for (int step = 0; step < steps; ++step) {
    const std::size_t k = static_cast<std::size_t>(step) % m;
    Vector& xk = w.x[k];
    const double scale = xk.cwiseAbs().maxCoeff();
    if (scale == 0.0) continue;
    Vector grad(dim);
    for (Index j = 0; j < dim; ++j) {
      for (int part = 0; part < 2; ++part) {
        const Complex dir = part == 0 ? Complex(1.0) : Complex(0.0, 1.0);
        const double h = 1e-6 * std::max(std::abs(xk[j]), 1e-3 * scale);
        const Complex saved = xk[j];
        xk[j] += h * dir;
        const double v = selection_ratio(family, w.selection, w.x, space, q);
        xk[j] = saved;
        const double g = (v - value) / h;
        if (part == 0) {
          grad[j] = Complex(g, 0.0);
        } else {
          grad[j] += Complex(0.0, g);
        }
      }
    }
    const double gnorm = grad.cwiseAbs().maxCoeff();
    if (!(gnorm > 0.0) || !std::isfinite(gnorm)) continue;
    const Vector saved = xk;
    bool improved = false;
    double lr = eta[k];
    for (int bt = 0; bt < 12; ++bt) {
      xk = saved + (lr * scale / gnorm) * grad;
      const double v = selection_ratio(family, w.selection, w.x, space, q);
      if (v > value) {
        value = v;
        improved = true;
        break;
      }
      lr *= 0.5;
    }
    if (improved) {
      eta[k] = std::min(1.0, 2.0 * lr);
    } else {
      xk = saved;
      eta[k] = lr;
    }
    // Projection back to Rad(x) = 1; the ratio is invariant under this.
    const double den = rad_exact(w.x, space, q);
    if (den > 0.0) {
      for (auto& v : w.x) v /= den;
    }
  }
}

}  // namespace

double witness_ratio(const std::vector<Matrix>& family, const RBoundWitness& w,
                     const GridSpace& space, const RademacherConfig& cfg) {
  if (w.selection.size() != w.x.size() || w.selection.empty()) {
    throw ValidationError("witness_ratio: malformed witness");
  }
  if (static_cast<int>(w.selection.size()) > cfg.exact_cap) {
    throw EnumerationTooLarge("witness selection exceeds the cap");
  }
  return selection_ratio(family, w.selection, w.x, space, cfg.p);
}

RBoundEstimate rbound_estimate(const std::vector<Matrix>& family, const GridSpace& space,
                               const RademacherConfig& cfg, int budget) {
  check_family(family, space, "rbound_estimate");
  if (budget < 1) throw ValidationError("rbound_estimate: budget must be >= 1");
  if (cfg.exact_cap < 1) throw ValidationError("rbound_estimate: exact_cap must be >= 1");
  const double q = cfg.p;
  const Index dim = static_cast<Index>(space.dim());
  RBoundEstimate out;
  PowerIterationOptions po;
  po.seed = cfg.seed;
  std::vector<Vector> maximizers;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const NormResult nr = op_norm(family[k], space, po);
    maximizers.push_back(nr.maximizer);
    const RBoundWitness w{{static_cast<int>(k)}, {nr.maximizer}};
    const double v = selection_ratio(family, w.selection, w.x, space, q);
    if (nr.estimate) out.converged = false;
    out.singleton_max = std::max(out.singleton_max, v);
    if (v > out.value || out.witness.selection.empty()) {
      out.value = v;
      out.witness = w;
    }
  }

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const int max_size = std::max(1, std::min(cfg.exact_cap, 10));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(family.size()) - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RBoundWitness best_small;
  double best_small_value = -1.0;
  for (int trial = 0; trial < budget; ++trial) {
    const int m = std::uniform_int_distribution<int>(std::min(2, max_size), max_size)(rng);
    RBoundWitness w;
    for (int k = 0; k < m; ++k) {
      const int j = pick(rng);
      w.selection.push_back(j);
      if (unif(rng) < 0.5 && maximizers[j].size() == dim) {
        w.x.push_back(std::polar(0.5 + unif(rng), 2.0 * kPi * unif(rng)) * maximizers[j]);
      } else {
        w.x.push_back(gaussian_vector(dim, rng));
      }
    }
    const double v = selection_ratio(family, w.selection, w.x, space, q);
    ++out.trials;
    if (v > out.value) {
      out.value = v;
      out.witness = w;
    }
    if (m <= 6 && v > best_small_value) {
      best_small_value = v;
      best_small = w;
    }
  }

  if (best_small_value >= 0.0) {
    double v = best_small_value;
    ascend(family, best_small, v, space, q);
    // Re-evaluate so the reported value is exactly the witness ratio.
    v = selection_ratio(family, best_small.selection, best_small.x, space, q);
    if (v > out.value) {
      out.value = v;
      out.witness = best_small;
    }
  }
  return out;
}

CalculusReport rbound_calculus_check(const std::vector<Matrix>& fam_t,
                                     const std::vector<Matrix>& fam_s, const GridSpace& space,
                                     const RademacherConfig& cfg, int budget) {
  check_family(fam_t, space, "rbound_calculus_check");
  check_family(fam_s, space, "rbound_calculus_check");
  const std::size_t n = std::max(fam_t.size(), fam_s.size());
  if (!(fam_t.size() == fam_s.size() || fam_t.size() == 1 || fam_s.size() == 1)) {
    throw ValidationError("rbound_calculus_check: families must pair index by index");
  }
  std::vector<Matrix> t(n), s(n), sum(n), prod(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = fam_t[fam_t.size() == 1 ? 0 : k];
    s[k] = fam_s[fam_s.size() == 1 ? 0 : k];
    sum[k] = t[k] + s[k];
    prod[k] = t[k] * s[k];
  }
  CalculusReport out;
  out.sum = rbound_estimate(sum, space, cfg, budget);
  out.product = rbound_estimate(prod, space, cfg, budget);
  const double q = cfg.p;

  auto check = [&](const RBoundWitness& w) {
    const double r_sum = selection_ratio(sum, w.selection, w.x, space, q);
    const double r_t = selection_ratio(t, w.selection, w.x, space, q);
    const double r_s = selection_ratio(s, w.selection, w.x, space, q);
    const double slack = r_sum - (r_t + r_s);
    out.worst_sum_slack = std::max(out.worst_sum_slack, slack);
    if (slack > 1e-9 * std::max(1.0, r_t + r_s)) ++out.sum_violations;

    std::vector<Vector> sx;
    for (std::size_t k = 0; k < w.selection.size(); ++k) sx.push_back(s[w.selection[k]] * w.x[k]);
    const double r_prod = selection_ratio(prod, w.selection, w.x, space, q);
    const double r_t_on_sx = selection_ratio(t, w.selection, sx, space, q);
    const double chained = rad_exact(sx, space, q) == 0.0 ? 0.0 : r_t_on_sx * r_s;
    const double gap = std::abs(r_prod - chained);
    out.worst_product_gap = std::max(out.worst_product_gap, gap);
    if (gap > 1e-9 * std::max(1.0, r_prod)) ++out.product_violations;
    ++out.trials;
  };
  check(out.sum.witness);
  check(out.product.witness);

  std::mt19937_64 rng(cfg.seed + 17);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::uniform_int_distribution<int> size(1, std::max(1, std::min(cfg.exact_cap, 6)));
  for (int trial = 0; trial < budget; ++trial) {
    RBoundWitness w;
    const int m = size(rng);
    for (int k = 0; k < m; ++k) {
      w.selection.push_back(pick(rng));
      w.x.push_back(gaussian_vector(static_cast<Index>(space.dim()), rng));
    }
    check(w);
  }
  out.ok = out.sum_violations == 0 && out.product_violations == 0;
  return out;
}

// ---------------------------------------------------------------------------
// R-sectoriality
// ---------------------------------------------------------------------------

RSectorReport r_sector_report(const GeneratorSpec& gen_in, Complex zeta, double t0,
                              const GridSpace& space, const RademacherConfig& cfg, int budget) {
  if (static_cast<std::size_t>(gen_in.dim()) != space.dim()) {
    throw ValidationError("r_sector_report: space and generator dimensions differ");
  }
  if (!(t0 > 0.0)) throw ValidationError("r_sector_report: t0 must be positive");
  if (std::abs(zeta - Complex(1.0)) < 1e-12) {
    throw ValidationError("r_sector_report: zeta = 1 is excluded");
  }
  const GeneratorSpec gen = reduce_for_space(gen_in, space);
  RSectorReport out;
  out.theta = phases(zeta);
  out.t_grid = log_grid(t0, t0 * 1e-3, 12);

  std::vector<Matrix> semigroup, resolvents;
  for (double t : out.t_grid) {
    const Matrix tt = mat_exp(gen.a, t);
    semigroup.push_back(tt);
    try {
      resolvents.push_back(resolvent(tt, zeta));
    } catch (const SpectrumHit& e) {
      throw SpectrumHit("zeta in the spectrum of T(t) at t = " + std::to_string(t) + " (" +
                        e.what() + ")");
    }
  }
  auto alpha_family = [&](double theta, std::vector<double>& grid) {
    std::vector<Matrix> fam;
    if (theta == 0.0) return fam;
    const double lo = 1.05 * std::abs(theta) / t0;
    for (double a : log_grid(100.0 * lo, lo, 12)) {
      const double sa = theta > 0.0 ? a : -a;
      grid.push_back(sa);
      fam.push_back(std::abs(sa) * resolvent(gen.a, Complex(0.0, sa)));
    }
    return fam;
  };
  const std::vector<Matrix> plus = alpha_family(out.theta.positive, out.alpha_pos);
  const std::vector<Matrix> minus = alpha_family(out.theta.negative, out.alpha_neg);

  auto sup_norm = [&](const std::vector<Matrix>& fam) {
    double m = 0.0;
    for (const auto& op : fam) m = std::max(m, op_norm(op, space).value);
    return m;
  };
  out.semigroup = rbound_estimate(semigroup, space, cfg, budget);
  out.resolvent = rbound_estimate(resolvents, space, cfg, budget);
  out.sup_semigroup = sup_norm(semigroup);
  out.sup_resolvent = sup_norm(resolvents);
  const double k = out.resolvent.value;
  if (!plus.empty()) {
    out.alpha_plus = rbound_estimate(plus, space, cfg, budget);
    out.sup_alpha_plus = sup_norm(plus);
    out.chain_plus = k * std::abs(out.theta.positive) * out.semigroup.value;
    out.holds = out.holds && out.alpha_plus.value <= out.chain_plus + 1e-4;
  }
  if (!minus.empty()) {
    out.alpha_minus = rbound_estimate(minus, space, cfg, budget);
    out.sup_alpha_minus = sup_norm(minus);
    out.chain_minus = k * std::abs(out.theta.negative) * out.semigroup.value;
    out.holds = out.holds && out.alpha_minus.value <= out.chain_minus + 1e-4;
  }
  return out;
}

BtCheck bt_contour_check(const GeneratorSpec& gen, Complex zeta, double t,
                         const std::optional<ContourSpec>& gamma) {
  require_square_finite(gen.a, "bt_contour_check");
  if (!(t > 0.0)) throw ValidationError("bt_contour_check: t must be positive");
  if (std::abs(zeta) < 1.0 - 1e-12) throw ValidationError("bt_contour_check: need |zeta| >= 1");
  if (std::abs(zeta - Complex(1.0)) < 1e-12) {
    throw ValidationError("bt_contour_check: zeta = 1 is excluded");
  }
  const Index n = gen.dim();
  const Matrix ta = t * gen.a;
  BtCheck out;
  ContourSpec contour;
  if (gamma) {
    contour = *gamma;
  } else {
    const Complex log_zeta = std::log(zeta);
    double d_pole = kInf;
    for (int k = -3; k <= 3; ++k) {
      d_pole = std::min(d_pole, std::abs(log_zeta + Complex(0.0, 2.0 * kPi * k)));
    }
    const double spec = spectral_norm(ta);
    if (!(spec < d_pole)) {
      throw ContourTooClose("t ||A|| = " + std::to_string(spec) +
                            " reaches the pole of e^z = zeta at distance " +
                            std::to_string(d_pole));
    }
    out.radius = 0.5 * (spec + d_pole);
    contour = ContourSpec::circle(0.0, out.radius);
  }
  contour.validate();

  out.d_min = kInf;
  for (const auto& seg : contour.segments) {
    for (int i = 0; i <= 512; ++i) {
      const Complex z = seg.z(i / 512.0);
      out.d_min = std::min(out.d_min, std::abs(std::exp(z) - zeta));
    }
  }
  if (out.d_min < 1e-3) {
    throw ContourTooClose("inf |e^z - zeta| on the contour is " + std::to_string(out.d_min));
  }

  const QuadratureResult enclosed =
      contour_integral([&](Complex z) { return resolvent(ta, z); }, contour);
  if ((enclosed.value - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-6) {
    throw ValidationError("bt_contour_check: contour does not enclose the spectrum of tA");
  }
  const QuadratureResult poles = contour_integral(
      [&](Complex z) {
        Matrix m(1, 1);
        m(0, 0) = std::exp(z) / (std::exp(z) - zeta);
        return m;
      },
      contour);
  if (std::abs(poles.value(0, 0)) > 1e-6) {
    throw ValidationError("bt_contour_check: contour encloses a solution of e^z = zeta");
  }

  const QuadratureResult b = contour_integral(
      [&](Complex z) -> Matrix {
        const Complex ez = std::exp(z);
        return (ez / (ez - zeta)) * resolvent(ta, z);
      },
      contour);
  out.nodes = b.nodes;
  out.converged = b.converged;
  const Matrix r = resolvent(mat_exp(gen.a, t), zeta);
  const Matrix via_b = (Matrix::Identity(n, n) - b.value) / zeta;
  out.residual = spectral_norm(r - via_b) / spectral_norm(r);
  return out;
}

// ---------------------------------------------------------------------------
// R-analytic Kato-Beurling
// ---------------------------------------------------------------------------

RBeurlingProfile r_beurling_profile(const GeneratorSpec& gen_in, const Polynomial& f,
                                    const std::vector<double>& t_grid,
                                    const GridSpace& space, const RademacherConfig& cfg,
                                    int budget, int ladder_points) {
  validate_t_grid(t_grid);
  if (static_cast<std::size_t>(gen_in.dim()) != space.dim()) {
    throw ValidationError("r_beurling_profile: space and generator dimensions differ");
  }
  if (ladder_points < 1) throw ValidationError("r_beurling_profile: ladder_points must be >= 1");
  const GeneratorSpec gen = reduce_for_space(gen_in, space);
  std::vector<Matrix> ops;
  std::vector<double> norms;
  for (double t : t_grid) {
    ops.push_back(poly_of_semigroup(f, gen, t));
    norms.push_back(op_norm(ops.back(), space).value);
  }
  RBeurlingProfile out;
  out.disc_value = disc_norm(f).value;
  const int count = std::min<int>(ladder_points, static_cast<int>(t_grid.size()) - 1);
  std::vector<std::size_t> starts;
  for (int j = 0; j < count; ++j) {
    starts.push_back(static_cast<std::size_t>(
        std::llround(static_cast<double>(j) * (t_grid.size() - 2) / std::max(1, count - 1))));
  }
  std::vector<double> raw;
  for (std::size_t start : starts) {
    std::vector<Matrix> window(ops.begin() + static_cast<long>(start), ops.end());
    out.ladder.push_back(t_grid[start]);
    raw.push_back(rbound_estimate(window, space, cfg, budget).value);
    out.sup_norms.push_back(*std::max_element(norms.begin() + static_cast<long>(start), norms.end()));
  }
  // Windows are nested, so a lower bound for a small window also bounds
  // every larger one.
  out.estimates.assign(raw.size(), 0.0);
  double running = 0.0;
  for (std::size_t j = raw.size(); j-- > 0;) {
    running = std::max(running, raw[j]);
    out.estimates[j] = running;
  }
  out.final_value = out.estimates.back();
  out.margin = out.disc_value - out.final_value;
  return out;
}

double r_converse_bound_eval(const Polynomial& f, int n, double k, double delta, double r) {
  if (n < 1) throw ParameterOutOfRange("N must be >= 1");
  if (!(delta > 0.0 && delta < kPi / 2.0)) throw ParameterOutOfRange("delta must lie in (0, pi/2)");
  if (!(k > 0.0)) throw ParameterOutOfRange("K must be positive");
  if (!(r >= 0.0)) throw ParameterOutOfRange("R must be nonnegative");
  const double nn = static_cast<double>(n) * f.degree();
  const double c2 = nn / (k * std::sin(delta));
  if (!(c2 < 1.0)) {
    throw ParameterOutOfRange("C2 = " + std::to_string(c2) + " >= 1; need K > Nn / sin(delta)");
  }
  const double f1 = std::abs(f(1.0));
  double first = 0.0;
  if (f1 > 0.0) {
    const double c1 = nn / (f1 * k * std::sin(delta));
    double geo = 0.0, pw = 1.0;
    for (int l = 0; l <= n; ++l) {
      geo += pw;
      pw *= c1;
    }
    first = std::pow(f1, n) * geo;
  }
  const double second = std::pow(c2, n + 1) / (1.0 - c2);
  return r * (first + second);
}

RConverseCheck r_converse_check(const GeneratorSpec& gen_in, const Polynomial& f, int n,
                                double k, double delta, const GridSpace& space,
                                const RademacherConfig& cfg, int budget) {
  if (static_cast<std::size_t>(gen_in.dim()) != space.dim()) {
    throw ValidationError("r_converse_check: space and generator dimensions differ");
  }
  if (!in_C1(f)) throw ValidationError("r_converse_check: f is not in C1");
  const Polynomial g = normalize_peak(f).f;
  const GeneratorSpec gen = reduce_for_space(gen_in, space);
  RConverseCheck out;

  std::vector<Matrix> sector;
  for (double rad : log_grid(2.0, 1e-4, 8)) {
    for (int j = 0; j < 9; ++j) {
      const double phi = -delta + 2.0 * delta * j / 8.0;
      sector.push_back(mat_exp(gen.a, std::polar(rad, phi)));
    }
  }
  out.sector_estimate = rbound_estimate(sector, space, cfg, budget).value;

  std::vector<Matrix> fam;
  for (double t : log_grid(1.0 / k, 1e-3 / k, 12)) {
    const Matrix base = poly_of_semigroup(g, gen, t);
    Matrix acc = base;
    for (int j = 1; j < n; ++j) acc = acc * base;
    fam.push_back(acc * mat_exp(gen.a, k * t));
  }
  out.family_estimate = rbound_estimate(fam, space, cfg, budget).value;
  out.bound = r_converse_bound_eval(g, n, k, delta, out.sector_estimate);
  out.holds = out.family_estimate <= out.bound + 1e-9;
  return out;
}

}  // namespace semireg
