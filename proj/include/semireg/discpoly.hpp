#pragma once

#include <string>
#include <vector>

#include "semireg/types.hpp"

namespace semireg {

/// Complex polynomial a_0 + a_1 z + ... + a_n z^n, lowest degree first.
/// Trailing zero coefficients are dropped on construction; the zero
/// polynomial is stored as {0} with degree 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{Complex(0.0)} {}
  explicit Polynomial(std::vector<Complex> coeffs);

  static Polynomial monomial(int degree, Complex c = 1.0);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex(0.0); }
  bool is_constant() const { return coeffs_.size() == 1; }

  Complex operator()(Complex z) const;
  Complex coeff(int k) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Complex c, const Polynomial& a);

 private:
  std::vector<Complex> coeffs_;
};

struct DiscNormResult {
  double value = 0.0;
  Complex peak{1.0, 0.0};
  int resolution = 0;
};

/// sup_{|z|<=1} |f(z)|, taken on the unit circle.
DiscNormResult disc_norm(const Polynomial& f);

struct NormalizedPolynomial {
  Polynomial f;   // peak value 1 at `peak`, disc norm 1
  Complex peak;
  double scale;   // disc norm of the input
};

/// f / (||f||_D e^{i arg f(zeta)}) where zeta is the peak of |f| on the circle.
NormalizedPolynomial normalize_peak(const Polynomial& f);

/// f^N by repeated convolution.
Polynomial power_expand(const Polynomial& f, int n);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// sum_k |a_{k,N}| against (N deg f + 1) ||f||_D^N.
BoundCheck coeff_sum_bound_check(const Polynomial& f, int n);

/// |f(1)| < ||f||_D with margin 1e-9.
bool in_C1(const Polynomial& f);

struct RootFactor {
  Polynomial q;
  Complex residual;
};

/// Divides g by (zeta - z): g(z) = (zeta - z) q(z) + residual.
/// Throws NotARoot when |residual| > 1e-6.
RootFactor factor_out_root(const Polynomial& g, Complex zeta);

/// |(d/dx)^l f(e^{ix})^N| against (N deg f)^l |f(e^{ix})|^{N-l}.
BoundCheck bernstein_check(const Polynomial& f, int n, int l, double x);

/// Parses [[re, im], ...] or [re, ...] (lowest degree first).
Polynomial parse_polynomial(const std::string& json_text);

}  // namespace semireg
