#include "semireg/zoo.hpp"

#include <cmath>
#include <sstream>

#include "semireg/errors.hpp"

namespace semireg {

namespace {

double param(const ZooParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size() || !std::isfinite(v)) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw BadParams("parameter " + key + " = '" + it->second + "' is not a finite number");
  }
}

void check_keys(const ZooParams& p, std::initializer_list<const char*> allowed,
                const std::string& entry) {
  for (const auto& [key, value] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw BadParams(entry + " does not take parameter '" + key + "'");
  }
}

GeneratorSpec diagonal(const Vector& d, std::string label, int dim, std::optional<Growth> g) {
  GeneratorSpec s = make_generator(d.asDiagonal().toDenseMatrix(), std::move(label));
  s.family_index = dim;
  s.growth = g;
  return s;
}

GeneratorSpec diag_ray(int dim, const ZooParams& p) {
  check_keys(p, {"phi"}, "diag_ray");
  const double phi = param(p, "phi", kPi / 4.0);
  if (!(std::abs(phi) < kPi / 2.0)) throw BadParams("diag_ray needs |phi| < pi/2");
  Vector d(dim);
  for (int k = 0; k < dim; ++k) d[k] = -std::polar(1.0, phi) * static_cast<double>(k + 1);
  return diagonal(d, "diag_ray", dim, Growth{1.0, 0.0});
}

GeneratorSpec skew_diag(int dim, const ZooParams& p) {
  check_keys(p, {}, "skew_diag");
  Vector d(dim);
  for (int k = 0; k < dim; ++k) d[k] = Complex(0.0, k + 1);
  return diagonal(d, "skew_diag", dim, Growth{1.0, 0.0});
}

GeneratorSpec jordan(int dim, const ZooParams& p) {
  check_keys(p, {"lambda", "lambda_im"}, "jordan");
  const Complex lambda(param(p, "lambda", -1.0), param(p, "lambda_im", 0.0));
  Matrix a = lambda * Matrix::Identity(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) a(i, i + 1) = 1.0;
  GeneratorSpec s = make_generator(std::move(a), "jordan");
  s.family_index = dim;
  // ||e^{tJ}|| <= e^{t Re(lambda)} e^{t ||N||} with ||N|| <= 1.
  s.growth = Growth{1.0, lambda.real() + (dim > 1 ? 1.0 : 0.0)};
  return s;
}

GeneratorSpec tridiag_laplacian(int dim, const ZooParams& p) {
  check_keys(p, {"h"}, "tridiag_laplacian");
  const double h = param(p, "h", 1.0 / (dim + 1));
  if (!(h > 0.0)) throw BadParams("tridiag_laplacian needs h > 0");
  const double s = 1.0 / (h * h);
  Matrix a = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    a(i, i) = -2.0 * s;
    if (i > 0) a(i, i - 1) = s;
    if (i + 1 < dim) a(i, i + 1) = s;
  }
  GeneratorSpec g = make_generator(std::move(a), "tridiag_laplacian");
  g.family_index = dim;
  g.growth = Growth{1.0, 0.0};
  return g;
}

// F^H diag(symbol(k)) F on the periodic grid, k = -n/2 .. n/2 - 1.
Matrix fourier_multiplier(int n, const std::function<Complex(int)>& symbol) {
  // Circulant: the entry depends on (j - l) mod n only.
  std::vector<Complex> column(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    Complex acc = 0.0;
    for (int k = -n / 2; k < n - n / 2; ++k) {
      acc += symbol(k) * std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * m / n);
    }
    column[static_cast<std::size_t>(m)] = acc / static_cast<double>(n);
  }
  Matrix a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) a(j, l) = column[static_cast<std::size_t>(((j - l) % n + n) % n)];
  }
  return a;
}

GeneratorSpec shift_periodic(int dim, const ZooParams& p) {
  check_keys(p, {}, "shift_periodic");
  Matrix a = fourier_multiplier(dim, [](int k) { return Complex(0.0, 2.0 * kPi * k); });
  GeneratorSpec g = make_generator(std::move(a), "shift_periodic");
  g.family_index = dim;
  g.growth = Growth{1.0, 0.0};
  return g;
}

GeneratorSpec heat_conv(int dim, const ZooParams& p) {
  check_keys(p, {"period"}, "heat_conv");
  const double period = param(p, "period", 8.0);
  if (!(period > 0.0)) throw BadParams("heat_conv needs period > 0");
  Matrix a = fourier_multiplier(dim, [&](int k) {
    const double w = 2.0 * kPi * k / period;
    return Complex(-w * w, 0.0);
  });
  // Exact Hermitian symmetry; the Fourier sums leave rounding-level asymmetry.
  a = 0.5 * (a + a.adjoint()).eval();
  GeneratorSpec g = make_generator(std::move(a), "heat_conv");
  g.family_index = dim;
  g.growth = Growth{1.0, 0.0};
  return g;
}

GeneratorSpec mult_symbol(int dim, const ZooParams& p) {
  check_keys(p, {"symbol", "values"}, "mult_symbol");
  const auto it = p.find("symbol");
  const std::string symbol = it == p.end() ? "neg_square" : it->second;
  Vector d(dim);
  if (symbol == "neg_square") {
    for (int k = 0; k < dim; ++k) d[k] = -static_cast<double>(k + 1) * (k + 1);
  } else if (symbol == "neg_linear") {
    for (int k = 0; k < dim; ++k) d[k] = -static_cast<double>(k + 1);
  } else if (symbol == "imag_linear") {
    for (int k = 0; k < dim; ++k) d[k] = Complex(0.0, k + 1);
  } else if (symbol == "bounded_partial_sums") {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
      s += 1.0 / ((k + 1.0) * (k + 1.0));
      d[k] = -s;
    }
  } else if (symbol == "values") {
    const auto v = p.find("values");
    if (v == p.end()) throw BadParams("mult_symbol with symbol=values needs 'values'");
    std::stringstream ss(v->second);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
      if (k >= dim) throw BadParams("mult_symbol: more values than dim");
      d[k++] = param({{"value", item}}, "value", 0.0);
    }
    if (k != dim) throw BadParams("mult_symbol: need exactly dim values");
  } else {
    throw BadParams("mult_symbol: unknown symbol '" + symbol + "'");
  }
  std::optional<Growth> g;
  double omega = -kInf;
  for (int k = 0; k < dim; ++k) omega = std::max(omega, d[k].real());
  g = Growth{1.0, std::max(omega, 0.0)};
  return diagonal(d, "mult_symbol:" + symbol, dim, g);
}

}  // namespace

const std::vector<ZooEntry>& zoo_catalog() {
  static const std::vector<ZooEntry> catalog = {
      {"diag_ray", "holomorphic_in_limit",
       "eigenvalues -e^{i phi} k, |phi| < pi/2 (default pi/4); normal, ||T(t)||_2 = e^{-t cos phi}",
       diag_ray},
      {"skew_diag", "group", "eigenvalues i k; unitary group on l^2, not holomorphic", skew_diag},
      {"jordan", "holomorphic_in_limit",
       "single Jordan block at lambda (default -1); bounded in the limit", jordan},
      {"tridiag_laplacian", "holomorphic_in_limit",
       "Dirichlet second difference (1, -2, 1) / h^2, h = 1/(dim+1) by default; self-adjoint, "
       "negative",
       tridiag_laplacian},
      {"shift_periodic", "not_holomorphic_in_limit",
       "spectral derivative on the unit circle, eigenvalues 2 pi i k; generates translations",
       shift_periodic},
      {"heat_conv", "holomorphic_in_limit",
       "spectral periodic Laplacian, eigenvalues -(2 pi k / period)^2 (period 8); "
       "e^{tA} is convolution with the periodic heat kernel",
       heat_conv},
      {"mult_symbol", "cosine_source",
       "diagonal multiplier: symbol = neg_square | neg_linear | imag_linear | "
       "bounded_partial_sums | values (comma list)",
       mult_symbol},
  };
  return catalog;
}

const ZooEntry& zoo_entry(const std::string& name) {
  for (const auto& e : zoo_catalog()) {
    if (e.name == name) return e;
  }
  throw UnknownEntry("no zoo entry named '" + name + "'");
}

GeneratorSpec build(const std::string& name, int dim, const ZooParams& params) {
  const ZooEntry& e = zoo_entry(name);
  if (dim < 1 || dim > 4096) throw BadParams("dim must lie in [1, 4096], got " + std::to_string(dim));
  return e.builder(dim, params);
}

}  // namespace semireg
