#include "semireg/cosine.hpp"

#include <algorithm>
#include <cmath>

#include "semireg/discpoly.hpp"
#include "semireg/errors.hpp"

namespace semireg {

namespace {

Matrix block_generator(const Matrix& a) {
  const Index n = a.rows();
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = Matrix::Identity(n, n);
  g.bottomLeftCorner(n, n) = a;
  return g;
}

CosineSample diagonal_sample(const Matrix& a, double t) {
  const Index n = a.rows();
  CosineSample out{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  for (Index i = 0; i < n; ++i) {
    const Complex r = std::sqrt(a(i, i));
    out.c(i, i) = std::cosh(t * r);
    out.s(i, i) = std::abs(r) * std::abs(t) < 1e-8 ? Complex(t) * (1.0 + a(i, i) * t * t / 6.0)
                                                   : std::sinh(t * r) / r;
  }
  return out;
}

}  // namespace

CosineFamily CosineFamily::from_generator(Matrix a) {
  require_square_finite(a, "cosine_from_generator");
  CosineFamily f;
  f.a_ = std::move(a);
  return f;
}

CosineFamily CosineFamily::from_group(Matrix b) {
  require_square_finite(b, "cosine_from_group");
  CosineFamily f;
  f.a_ = b * b;
  f.b_ = std::move(b);
  return f;
}

CosineSample CosineFamily::sample(double t) const {
  if (!std::isfinite(t)) throw ValidationError("cosine family: t must be finite");
  const Index n = dim();
  if (t == 0.0) return {Matrix::Identity(n, n), Matrix::Zero(n, n)};
  if (is_diagonal(a_)) return diagonal_sample(a_, t);
  const Matrix e = mat_exp(block_generator(a_), t);
  CosineSample out{e.topLeftCorner(n, n), e.topRightCorner(n, n)};
  if (b_) out.c = 0.5 * (mat_exp(*b_, t) + mat_exp(*b_, -t));
  return out;
}

Matrix CosineFamily::cosine(double t) const {
  const Index n = dim();
  if (t == 0.0) return Matrix::Identity(n, n);
  if (b_) return 0.5 * (mat_exp(*b_, t) + mat_exp(*b_, -t));
  if (is_diagonal(a_)) return diagonal_sample(a_, t).c;
  return mat_exp(block_generator(a_), t).topLeftCorner(n, n);
}

Matrix CosineFamily::group(double t) const {
  if (!b_) throw ValidationError("cosine family was not built from a group");
  return mat_exp(*b_, t);
}

CosineFamily cosine_from_generator(const Matrix& a) { return CosineFamily::from_generator(a); }
CosineFamily cosine_from_group(const Matrix& b) { return CosineFamily::from_group(b); }

double generator_fd_residual(const CosineFamily& fam, double t) {
  const double h = 1e-4 / std::sqrt(1.0 + spectral_norm(fam.generator()));
  const Matrix c = fam.cosine(t);
  const Matrix second = (fam.cosine(t + h) - 2.0 * c + fam.cosine(t - h)) / (h * h);
  const Matrix ac = fam.generator() * c;
  return spectral_norm(second - ac) / (1.0 + spectral_norm(ac));
}

DalembertResult dalembert_residual(const CosineFamily& fam, double t, double s) {
  const Matrix ct = fam.cosine(t);
  const Matrix cs = fam.cosine(s);
  DalembertResult out;
  out.residual = spectral_norm(2.0 * ct * cs - fam.cosine(t + s) - fam.cosine(t - s));
  out.bound = 1e-8 * (1.0 + spectral_norm(ct) * spectral_norm(cs));
  out.ok = out.residual <= out.bound;
  return out;
}

LaplaceCheck laplace_transform_check(const CosineFamily& fam, double lambda,
                                     double horizon_cap) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("laplace_transform_check: lambda must be positive");
  }
  LaplaceCheck out;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    out.growth = std::max(out.growth, std::log(spectral_norm(fam.cosine(t))) / t);
  }
  const Index n = fam.dim();
  const Matrix target = lambda * resolvent(fam.generator(), lambda * lambda);

  double horizon = 1.0;
  while (true) {
    const double tail = std::exp(-lambda * horizon) * spectral_norm(fam.cosine(horizon));
    if (tail < 1e-12) break;
    horizon *= 2.0;
    if (horizon > horizon_cap) {
      throw TailTooFat("e^{-lambda t} ||C(t)|| stays above 1e-12 up to t = " +
                       std::to_string(horizon_cap) + " (lambda = " + std::to_string(lambda) +
                       ", measured growth " + std::to_string(out.growth) + ")");
    }
  }
  out.horizon = horizon;
  Matrix integral = Matrix::Zero(n, n);
  const int pieces = static_cast<int>(std::ceil(horizon));
  for (int k = 0; k < pieces; ++k) {
    const double lo = horizon * k / pieces, hi = horizon * (k + 1) / pieces;
    integral += quad_strong_integral(
                    [&](double t) -> Matrix { return std::exp(-lambda * t) * fam.cosine(t); },
                    lo, hi, 1e-10)
                    .value;
  }
  out.residual = spectral_norm(target - integral);
  return out;
}

ZeroTwoReport zero_two_profile(const std::vector<CosineFamily>& families,
                               const std::vector<double>& t_grid, double p) {
  validate_t_grid(t_grid);
  if (families.empty()) throw ValidationError("zero_two_profile: no families");
  ZeroTwoReport out;
  out.t_grid = t_grid;
  for (const auto& fam_in : families) {
    const GridSpace space = GridSpace::unit(static_cast<std::size_t>(fam_in.dim()), p);
    const GeneratorSpec reduced =
        reduce_for_space(make_generator(fam_in.generator(), "cosine"), space);
    const CosineFamily fam = cosine_from_generator(reduced.a);
    const Matrix id = Matrix::Identity(fam.dim(), fam.dim());
    std::vector<double> values;
    for (double t : t_grid) values.push_back(op_norm(fam.cosine(t) - id, space).value);
    out.dims.push_back(static_cast<int>(fam.dim()));
    out.plateaus.push_back(empirical_limsup(t_grid, values));
    out.profiles.push_back(std::move(values));
  }
  out.fit = fit_plateau(out.dims, out.plateaus, 2.0);
  const std::size_t largest = static_cast<std::size_t>(
      std::max_element(out.dims.begin(), out.dims.end()) - out.dims.begin());
  const double last = out.plateaus[largest];
  if (last >= 2.0 - 0.05) {
    out.verdict = "hypothesis_fails_in_limit";
  } else if (last <= 0.05) {
    out.verdict = "uniformly_continuous";
  } else {
    out.verdict = "undetermined";
  }
  return out;
}

ZeroTwoWitness zero_two_polynomial_witness(const Matrix& b, const Growth& growth,
                                           const std::vector<double>& t_grid,
                                           const GridSpace& space, int n) {
  require_square_finite(b, "zero_two_polynomial_witness");
  validate_t_grid(t_grid);
  if (n < 1) throw ValidationError("zero_two_polynomial_witness: N must be >= 1");
  if (static_cast<std::size_t>(b.rows()) != space.dim()) {
    throw ValidationError("zero_two_polynomial_witness: dimension mismatch");
  }
  const GeneratorSpec gen = reduce_for_space(make_generator(b, "group"), space);
  const Polynomial f({0.5, -1.0, 0.5});
  const Polynomial fn = power_expand(f, n);
  const Index d = gen.dim();
  const Matrix id = Matrix::Identity(d, d);
  ZeroTwoWitness out;
  out.t_grid = t_grid;
  out.disc_value = std::pow(2.0, n);
  for (double t : t_grid) {
    const Matrix poly = poly_of_semigroup(fn, gen, t);
    const Matrix cm = 0.5 * (mat_exp(gen.a, t) + mat_exp(gen.a, -t)) - id;
    Matrix pw = cm;
    for (int k = 1; k < n; ++k) pw = pw * cm;
    const Matrix fac = mat_exp(gen.a, n * t) * pw;
    const double v = op_norm(poly, space).value;
    out.values.push_back(v);
    out.factorized.push_back(op_norm(fac, space).value);
    out.gaps.push_back(evaluation_gap(poly, fac));
    const double bound =
        growth.M * std::exp(growth.omega * n * t) * std::pow(op_norm(cm, space).value, n);
    out.bounds.push_back(bound);
    if (v > bound * (1.0 + 1e-9) + 1e-12) out.chain_ok = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fattorini iteration
// ---------------------------------------------------------------------------

namespace {

// Weights of the composite rule for int_0^{j h} g on the nodes 0..j.
std::vector<double> cumulative_weights(int j, double h) {
  std::vector<double> w(static_cast<std::size_t>(j) + 1, 0.0);
  if (j == 0) return w;
  if (j == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const int simpson_end = (j % 2 == 0) ? j : j - 3;
  for (int i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (j % 2 == 1) {
    const int b = j - 3;
    w[b] += 3.0 * h / 8.0;
    w[b + 1] += 9.0 * h / 8.0;
    w[b + 2] += 9.0 * h / 8.0;
    w[b + 3] += 3.0 * h / 8.0;
  }
  return w;
}

struct FattoriniTerms {
  std::vector<Matrix> at_t;  // C_n(t), n = 0..n_max
  double sup_c = 0.0;
};

FattoriniTerms fattorini_terms(const CosineFamily& fam, int n_max, double t, int q) {
  const double h = t / q;
  std::vector<Matrix> c(static_cast<std::size_t>(q) + 1), s(c.size());
  FattoriniTerms out;
  for (int j = 0; j <= q; ++j) {
    const CosineSample smp = fam.sample(j * h);
    c[j] = smp.c;
    s[j] = smp.s;
    out.sup_c = std::max(out.sup_c, spectral_norm(smp.c));
  }
  std::vector<std::vector<double>> weights(c.size());
  for (int j = 0; j <= q; ++j) weights[j] = cumulative_weights(j, h);
  out.at_t.push_back(c[q]);
  std::vector<Matrix> prev = c;
  const Index d = fam.dim();
  for (int n = 1; n <= n_max; ++n) {
    std::vector<Matrix> next(prev.size(), Matrix::Zero(d, d));
    for (int j = 1; j <= q; ++j) {
      Matrix acc = Matrix::Zero(d, d);
      for (int i = 0; i <= j; ++i) acc += weights[j][i] * (s[j - i] * prev[i]);
      next[j] = std::move(acc);
    }
    out.at_t.push_back(next[q]);
    prev = std::move(next);
  }
  return out;
}

Matrix partial_sum(const std::vector<Matrix>& terms, double omega, std::size_t upto) {
  Matrix sum = terms[0];
  double coef = 1.0;
  for (std::size_t n = 1; n <= upto; ++n) {
    coef *= -omega;
    sum += coef * terms[n];
  }
  return sum;
}

}  // namespace

FattoriniResult fattorini_series(const CosineFamily& fam, double omega, int n_max, double t,
                                 int quad_nodes) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) {
    throw ValidationError("fattorini_series: omega must be >= 0");
  }
  if (n_max < 1) throw ValidationError("fattorini_series: n_max must be >= 1");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("fattorini_series: t must be >= 0");
  if (quad_nodes < 2) throw ValidationError("fattorini_series: quad_nodes must be >= 2");
  const Index d = fam.dim();
  FattoriniResult out;
  const Matrix target = cosine_from_generator(fam.generator() - omega * Matrix::Identity(d, d))
                            .cosine(t);
  if (t == 0.0) {
    out.partial_sums.assign(static_cast<std::size_t>(n_max) + 1, Matrix::Identity(d, d));
    out.term_norms.assign(out.partial_sums.size(), 0.0);
    out.term_norms[0] = 1.0;
    out.M = 1.0 + 1e-6;
    for (int n = 0; n <= n_max; ++n) out.term_bounds.push_back(n == 0 ? out.M : 0.0);
    return out;
  }

  constexpr int kMaxNodes = 1 << 12;
  int q = quad_nodes + (quad_nodes % 2);
  FattoriniTerms terms = fattorini_terms(fam, n_max, t, q);
  Matrix last = partial_sum(terms.at_t, omega, static_cast<std::size_t>(n_max));
  while (true) {
    if (2 * q > kMaxNodes) {
      throw QuadratureDivergence("fattorini_series: final partial sum not stable at " +
                                 std::to_string(q) + " nodes (t = " + std::to_string(t) + ")");
    }
    q *= 2;
    FattoriniTerms finer = fattorini_terms(fam, n_max, t, q);
    const Matrix next = partial_sum(finer.at_t, omega, static_cast<std::size_t>(n_max));
    const double change = spectral_norm(next - last);
    terms = std::move(finer);
    last = next;
    if (change < 1e-6) break;
  }
  out.nodes = q;
  out.M = terms.sup_c * (1.0 + 1e-6);
  double fact = 1.0;  // (2n)!
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) fact *= (2.0 * n - 1.0) * (2.0 * n);
    out.partial_sums.push_back(partial_sum(terms.at_t, omega, static_cast<std::size_t>(n)));
    const double norm = spectral_norm(terms.at_t[n]);
    const double bound = out.M * std::exp(omega * t) * std::pow(t, 2 * n) / fact;
    out.term_norms.push_back(norm);
    out.term_bounds.push_back(bound);
    if (norm > bound + 1e-8) out.bound_ok = false;
  }
  const double last_term = std::pow(omega, n_max) * out.term_norms.back();
  const double size = std::max(spectral_norm(out.partial_sums.back()), 1e-300);
  if (last_term / size > 1e-4) {
    throw SeriesNotConverged("last term is " + std::to_string(last_term / size) +
                             " of the partial sum after " + std::to_string(n_max) + " terms");
  }
  out.target_gap = spectral_norm(out.partial_sums.back() - target);
  return out;
}

}  // namespace semireg
