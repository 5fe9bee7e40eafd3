#include "semireg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "semireg/errors.hpp"

namespace semireg {

void require_square_finite(const Matrix& a, std::string_view what) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw ValidationError(std::string(what) + ": matrix dimension must be positive");
  }
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square");
  }
  if (!all_finite(a)) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

bool all_finite(const Matrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

bool is_diagonal(const Matrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (i != j && a(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// mat_exp
// ---------------------------------------------------------------------------

namespace {

constexpr double kPade13[] = {64764752532480000.0,
                              32382376266240000.0,
                              7771770303897600.0,
                              1187353796428800.0,
                              129060195264000.0,
                              10559470521600.0,
                              670442572800.0,
                              33522128640.0,
                              1323241920.0,
                              40840800.0,
                              960960.0,
                              16380.0,
                              182.0,
                              1.0};

// Largest ||A||_1 for which the [13/13] approximant is accurate to unit
// roundoff in double precision.
constexpr double kTheta13 = 5.371920351148152;

Matrix pade13(const Matrix& a) {
  const auto& b = kPade13;
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                         b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

Matrix exp_scaled(const Matrix& ta) {
  const Index n = ta.rows();
  if (is_diagonal(ta)) {
    Matrix e = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) e(i, i) = std::exp(ta(i, i));
    return e;
  }
  const double norm1 = ta.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta13)));
  }
  Matrix e = pade13(ta / std::ldexp(1.0, squarings));
  for (int k = 0; k < squarings; ++k) e = (e * e).eval();
  return e;
}

}  // namespace

Matrix mat_exp(const Matrix& a, double t) {
  return mat_exp(a, Complex(t, 0.0));
}

Matrix mat_exp(const Matrix& a, Complex t) {
  require_square_finite(a, "mat_exp");
  if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
    throw ValidationError("mat_exp: t must be finite");
  }
  if (t == Complex(0.0)) return Matrix::Identity(a.rows(), a.cols());
  return exp_scaled(t * a);
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (is_diagonal(a)) return a.diagonal().cwiseAbs().maxCoeff();
  if (a.rows() <= 16) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

namespace {

double lp_norm(const Vector& v, double p) {
  if (p == kInf) return v.cwiseAbs().maxCoeff();
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

// Dual vector of y in l^p: ||d||_q = 1 and <d, y> = ||y||_p.
Vector duality_map(const Vector& y, double p) {
  Vector d = Vector::Zero(y.size());
  const double m = y.cwiseAbs().maxCoeff();
  if (m == 0.0) return d;
  const double ny = lp_norm(y / m, p);
  for (Index i = 0; i < y.size(); ++i) {
    const double r = std::abs(y[i]);
    if (r == 0.0) continue;
    d[i] = std::pow(r / m / ny, p - 1.0) * (y[i] / r);
  }
  return d;
}

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

// Lower bound for ||B||_p (unweighted) by the duality-map power iteration
// started from x0. Returns the best ratio seen and its vector.
std::pair<double, Vector> power_iteration(const Matrix& b, double p, Vector x,
                                          int max_iterations) {
  const double q = p / (p - 1.0);
  double best = 0.0;
  Vector best_x = x;
  double previous = -1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const double nx = lp_norm(x, p);
    if (!(nx > 0.0) || !std::isfinite(nx)) break;
    x /= nx;
    const Vector y = b * x;
    const double est = lp_norm(y, p);
    if (est > best) {
      best = est;
      best_x = x;
    }
    if (est == 0.0) break;
    if (previous >= 0.0 && est <= previous * (1.0 + 1e-13)) break;
    previous = est;
    const Vector z = b.adjoint() * duality_map(y, p);
    x = duality_map(z, q);
  }
  return {best, best_x};
}

}  // namespace

NormResult op_norm(const Matrix& a, const GridSpace& space,
                   const PowerIterationOptions& options) {
  require_square_finite(a, "op_norm");
  const Index n = a.rows();
  if (static_cast<std::size_t>(n) != space.dim()) {
    throw ValidationError("op_norm: dimension mismatch between operator (" +
                          std::to_string(n) + ") and space (" +
                          std::to_string(space.dim()) + ")");
  }
  const double p = space.p();
  NormResult out;

  if (is_diagonal(a)) {
    Index k = 0;
    out.value = a.diagonal().cwiseAbs().maxCoeff(&k);
    out.maximizer = Vector::Unit(n, k);
    return out;
  }

  // Isometry x -> D x with D = diag(w^{1/p}) maps the weighted space onto
  // plain l^p, so ||A|| = ||D A D^{-1}||_p.
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  if (!space.is_infinite()) {
    for (Index i = 0; i < n; ++i) d[i] = std::pow(space.weights()[i], 1.0 / p);
  }
  const Matrix b = d.cast<Complex>().asDiagonal() * a *
                   d.cwiseInverse().cast<Complex>().asDiagonal();
  auto to_space = [&](const Vector& y) -> Vector {
    return d.cwiseInverse().cast<Complex>().asDiagonal() * y;
  };

  if (p == 1.0) {
    Index j = 0;
    out.value = b.cwiseAbs().colwise().sum().maxCoeff(&j);
    out.maximizer = Vector::Unit(n, j);
    return out;
  }
  if (p == kInf) {
    Index i = 0;
    out.value = b.cwiseAbs().rowwise().sum().maxCoeff(&i);
    Vector x(n);
    for (Index j = 0; j < n; ++j) {
      const double r = std::abs(b(i, j));
      x[j] = r > 0.0 ? std::conj(b(i, j)) / r : Complex(1.0);
    }
    out.maximizer = x;
    return out;
  }

  Eigen::JacobiSVD<Matrix> svd;
  Eigen::BDCSVD<Matrix> bdc;
  Vector top_right;
  double sigma = 0.0;
  if (n <= 16) {
    svd.compute(b, Eigen::ComputeThinV);
    sigma = svd.singularValues()(0);
    top_right = svd.matrixV().col(0);
  } else {
    bdc.compute(b, Eigen::ComputeThinV);
    sigma = bdc.singularValues()(0);
    top_right = bdc.matrixV().col(0);
  }
  if (p == 2.0) {
    out.value = sigma;
    out.maximizer = to_space(top_right);
    return out;
  }

  std::mt19937_64 rng(options.seed);
  out.estimate = true;
  auto [best, best_x] = power_iteration(b, p, top_right, options.max_iterations);
  for (int r = 0; r < options.random_restarts; ++r) {
    auto [v, x] = power_iteration(b, p, random_vector(n, rng), options.max_iterations);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  out.value = best;
  out.maximizer = to_space(best_x);
  return out;
}

double norm_ratio(const Matrix& a, const Vector& x, const GridSpace& space) {
  const double nx = space.norm(x);
  if (nx == 0.0) return 0.0;
  return space.norm(a * x) / nx;
}

// ---------------------------------------------------------------------------
// Resolvent
// ---------------------------------------------------------------------------

Matrix resolvent(const Matrix& a, Complex lambda) {
  require_square_finite(a, "resolvent");
  const Index n = a.rows();
  const Matrix m = lambda * Matrix::Identity(n, n) - a;
  Eigen::PartialPivLU<Matrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond * kConditionCap > 1.0)) {
    throw SpectrumHit("lambda = (" + std::to_string(lambda.real()) + ", " +
                      std::to_string(lambda.imag()) +
                      ") is numerically in the spectrum (rcond " +
                      std::to_string(rcond) + ")");
  }
  Matrix r = lu.inverse();
  if (!all_finite(r)) throw SpectrumHit("resolvent has non-finite entries");
  return r;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

namespace {

const GaussRule& panel_rule() {
  static const GaussRule rule = gauss_legendre(kPanelNodes);
  return rule;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

ContourSpec ContourSpec::circle(Complex center, double radius, int nodes) {
  ContourSpec c;
  ContourSegment s;
  s.z = [=](double u) { return center + radius * std::polar(1.0, 2.0 * kPi * u); };
  s.dz = [=](double u) {
    return Complex(0.0, 2.0 * kPi) * radius * std::polar(1.0, 2.0 * kPi * u);
  };
  s.nodes = nodes;
  c.segments.push_back(std::move(s));
  return c;
}

ContourSpec ContourSpec::rectangle(Complex lo, Complex hi, int nodes_per_side) {
  ContourSpec c;
  const Complex corners[] = {lo, Complex(hi.real(), lo.imag()), hi,
                             Complex(lo.real(), hi.imag())};
  for (int k = 0; k < 4; ++k) {
    const Complex a = corners[k];
    const Complex b = corners[(k + 1) % 4];
    ContourSegment s;
    s.z = [=](double u) { return a + u * (b - a); };
    s.dz = [=](double) { return b - a; };
    s.nodes = nodes_per_side;
    c.segments.push_back(std::move(s));
  }
  return c;
}

void ContourSpec::validate() const {
  if (segments.empty()) throw ValidationError("ContourSpec: no segments");
  double length = 0.0;
  const auto& rule = panel_rule();
  for (const auto& s : segments) {
    if (s.nodes < 2) throw ValidationError("ContourSpec: segment needs >= 2 nodes");
    if (!s.z || !s.dz) throw ValidationError("ContourSpec: segment without parametrization");
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      length += 0.5 * rule.weights[i] * std::abs(s.dz(0.5 * (rule.nodes[i] + 1.0)));
    }
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("ContourSpec: arc length must be finite and positive");
  }
}

QuadratureResult contour_integral(const ComplexMatrixFn& f, const ContourSpec& gamma) {
  gamma.validate();
  const auto& rule = panel_rule();
  std::vector<long> panels;
  for (const auto& s : gamma.segments) {
    panels.push_back(std::max<long>(1, (s.nodes + kPanelNodes - 1) / kPanelNodes));
  }

  auto estimate = [&](long& nodes) {
    Matrix sum;
    nodes = 0;
    for (std::size_t si = 0; si < gamma.segments.size(); ++si) {
      const auto& seg = gamma.segments[si];
      const double h = 1.0 / static_cast<double>(panels[si]);
      for (long pi = 0; pi < panels[si]; ++pi) {
        const double a = pi * h;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
          const double u = a + 0.5 * h * (rule.nodes[k] + 1.0);
          const Complex w = 0.5 * h * rule.weights[k] * seg.dz(u);
          Matrix val = f(seg.z(u));
          if (!all_finite(val)) {
            throw ValidationError("contour_integral: integrand not finite on the contour");
          }
          if (sum.size() == 0) {
            sum = w * val;
          } else {
            sum += w * val;
          }
          ++nodes;
        }
      }
    }
    return sum;
  };

  const Complex scale = (gamma.counterclockwise ? 1.0 : -1.0) / Complex(0.0, 2.0 * kPi);
  QuadratureResult out;
  long nodes = 0;
  Matrix prev = estimate(nodes);
  while (true) {
    long total = 0;
    for (std::size_t si = 0; si < panels.size(); ++si) total += 2 * panels[si] * kPanelNodes;
    if (total > kNodeCap) {
      out.value = scale * prev;
      out.nodes = nodes;
      out.converged = false;
      if (out.last_change > 1e-4) {
        throw QuadratureDivergence("contour_integral: node cap reached with relative change " +
                                   std::to_string(out.last_change));
      }
      return out;
    }
    for (auto& p : panels) p *= 2;
    Matrix next = estimate(nodes);
    const double size = std::max(1.0, next.norm());
    const double change = (next - prev).norm() / size;
    out.last_change = change;
    prev = std::move(next);
    if (change < 1e-8) break;
  }
  out.value = scale * prev;
  out.nodes = nodes;
  out.converged = true;
  return out;
}

QuadratureResult quad_strong_integral(const RealMatrixFn& g, double a, double b,
                                      double abs_tol) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("quad_strong_integral: need finite a <= b");
  }
  const auto& rule = panel_rule();
  long nodes = 0;
  auto gl = [&](double lo, double hi) {
    Matrix sum;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      Matrix val = g(mid + half * rule.nodes[k]);
      if (!all_finite(val)) {
        throw ValidationError("quad_strong_integral: integrand not finite at s = " +
                              std::to_string(mid + half * rule.nodes[k]));
      }
      if (sum.size() == 0) {
        sum = (half * rule.weights[k]) * val;
      } else {
        sum += (half * rule.weights[k]) * val;
      }
      ++nodes;
    }
    return sum;
  };

  QuadratureResult out;
  if (a == b) {
    const Matrix g0 = g(a);
    out.value = Matrix::Zero(g0.rows(), g0.cols());
    out.nodes = 1;
    return out;
  }

  struct Panel {
    double lo, hi;
    Matrix left, right;
    double err;
  };
  auto make_panel = [&](double lo, double hi, const Matrix& whole) {
    const double mid = 0.5 * (lo + hi);
    Panel p{lo, hi, gl(lo, mid), gl(mid, hi), 0.0};
    p.err = max_abs(whole - p.left - p.right);
    return p;
  };

  std::vector<Panel> panels;
  panels.push_back(make_panel(a, b, gl(a, b)));
  while (true) {
    double total_err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total_err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    if (total_err <= abs_tol) break;
    if (nodes + 4 * kPanelNodes > kNodeCap) {
      Matrix sum = panels.front().left + panels.front().right;
      for (std::size_t i = 1; i < panels.size(); ++i) sum += panels[i].left + panels[i].right;
      const double rel = total_err / std::max(max_abs(sum), 1e-300);
      out.last_change = rel;
      if (rel > 1e-4) {
        throw QuadratureDivergence("quad_strong_integral: node cap reached on [" +
                                   std::to_string(a) + ", " + std::to_string(b) +
                                   "] with relative error " + std::to_string(rel));
      }
      out.converged = false;
      break;
    }
    Panel p = std::move(panels[worst]);
    panels.erase(panels.begin() + static_cast<long>(worst));
    const double mid = 0.5 * (p.lo + p.hi);
    panels.push_back(make_panel(p.lo, mid, p.left));
    panels.push_back(make_panel(mid, p.hi, p.right));
  }

  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  Matrix sum = panels.front().left + panels.front().right;
  for (std::size_t i = 1; i < panels.size(); ++i) sum += panels[i].left + panels[i].right;
  out.value = std::move(sum);
  out.nodes = nodes;
  return out;
}

}  // namespace semireg
