#include "semireg/discpoly.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "semireg/errors.hpp"

namespace semireg {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

double golden_max(const Polynomial& f, double lo, double hi, double& arg) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  auto g = [&](double th) { return std::abs(f(std::polar(1.0, th))); };
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = g(c), fd = g(d);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = g(d);
    }
  }
  arg = 0.5 * (a + b);
  return g(arg);
}

}  // namespace

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) {
    if (!finite(c)) throw ValidationError("Polynomial: non-finite coefficient");
  }
  while (coeffs_.size() > 1 && coeffs_.back() == Complex(0.0)) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::monomial(int degree, Complex c) {
  std::vector<Complex> a(static_cast<std::size_t>(degree) + 1, 0.0);
  a.back() = c;
  return Polynomial(std::move(a));
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex Polynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + Complex(-1.0) * b;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  for (const auto& x : c) {
    if (!finite(x)) throw CoefficientOverflow("product has non-finite coefficients");
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(Complex s, const Polynomial& a) {
  std::vector<Complex> c = a.coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

DiscNormResult disc_norm(const Polynomial& f) {
  DiscNormResult out;
  if (f.is_zero()) return out;
  if (f.is_constant()) {
    out.value = std::abs(f.coeff(0));
    out.resolution = 1;
    return out;
  }
  const int m = 4096 * (1 + f.degree() / 64);
  out.resolution = m;
  const double h = 2.0 * kPi / m;
  std::vector<double> mod(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) mod[j] = std::abs(f(std::polar(1.0, j * h)));

  std::vector<int> maxima;
  for (int j = 0; j < m; ++j) {
    const double prev = mod[(j + m - 1) % m], next = mod[(j + 1) % m];
    if (mod[j] >= prev && mod[j] >= next) maxima.push_back(j);
  }
  std::sort(maxima.begin(), maxima.end(), [&](int a, int b) { return mod[a] > mod[b]; });
  if (maxima.size() > 8) maxima.resize(8);

  double best = -1.0, best_arg = 0.0;
  for (int j = 0; j < m; ++j) {
    if (mod[j] > best) {
      best = mod[j];
      best_arg = j * h;
    }
  }
  for (int j : maxima) {
    double arg = 0.0;
    const double v = golden_max(f, j * h - h, j * h + h, arg);
    if (v > best) {
      best = v;
      best_arg = arg;
    }
  }
  out.value = best;
  out.peak = std::polar(1.0, best_arg);
  return out;
}

NormalizedPolynomial normalize_peak(const Polynomial& f) {
  if (f.is_constant()) throw ConstantPolynomial("normalization needs a nonconstant polynomial");
  const DiscNormResult dn = disc_norm(f);
  const Complex at_peak = f(dn.peak);
  const Complex scale = std::conj(at_peak) / (std::abs(at_peak) * dn.value);
  return {scale * f, dn.peak, dn.value};
}

Polynomial power_expand(const Polynomial& f, int n) {
  if (n < 1) throw ValidationError("power_expand: N must be >= 1");
  Polynomial out = f;
  for (int k = 1; k < n; ++k) out = out * f;
  return out;
}

BoundCheck coeff_sum_bound_check(const Polynomial& f, int n) {
  const Polynomial fn = power_expand(f, n);
  BoundCheck out;
  for (const auto& a : fn.coeffs()) out.lhs += std::abs(a);
  out.rhs = (static_cast<double>(n) * f.degree() + 1.0) * std::pow(disc_norm(f).value, n);
  out.ok = out.lhs <= out.rhs + 1e-9;
  return out;
}

bool in_C1(const Polynomial& f) {
  return std::abs(f(1.0)) < disc_norm(f).value - 1e-9;
}

RootFactor factor_out_root(const Polynomial& g, Complex zeta) {
  if (g.is_zero()) return {Polynomial(), 0.0};
  // Horner division by (z - zeta): g = (z - zeta) h + r, then q = -h.
  const auto& a = g.coeffs();
  const int n = g.degree();
  if (n == 0) {
    if (std::abs(a[0]) > 1e-6) throw NotARoot("nonzero constant has no root");
    return {Polynomial(), a[0]};
  }
  std::vector<Complex> h(static_cast<std::size_t>(n), 0.0);
  Complex carry = a[n];
  for (int k = n - 1; k >= 0; --k) {
    h[k] = carry;
    carry = a[k] + zeta * carry;
  }
  if (std::abs(carry) > 1e-6) {
    throw NotARoot("|remainder| = " + std::to_string(std::abs(carry)) + " at zeta = (" +
                   std::to_string(zeta.real()) + ", " + std::to_string(zeta.imag()) + ")");
  }
  for (auto& c : h) c = -c;
  return {Polynomial(std::move(h)), carry};
}

BoundCheck bernstein_check(const Polynomial& f, int n, int l, double x) {
  const Polynomial fn = power_expand(f, n);
  Complex deriv = 0.0;
  for (int k = 0; k <= fn.degree(); ++k) {
    deriv += fn.coeff(k) * std::pow(Complex(0.0, k), l) * std::polar(1.0, k * x);
  }
  BoundCheck out;
  out.lhs = std::abs(deriv);
  const double nd = static_cast<double>(n) * f.degree();
  out.rhs = std::pow(nd, l);
  if (l <= n) out.rhs *= std::pow(std::abs(f(std::polar(1.0, x))), n - l);
  out.ok = out.lhs <= out.rhs + 1e-7;
  return out;
}

Polynomial parse_polynomial(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("polynomial: invalid JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty()) {
    throw ValidationError("polynomial: expected a non-empty coefficient list");
  }
  std::vector<Complex> c;
  for (const auto& e : j) {
    if (e.is_number()) {
      c.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      c.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ValidationError("polynomial: coefficients must be numbers or [re, im] pairs");
    }
  }
  return Polynomial(std::move(c));
}

}  // namespace semireg
