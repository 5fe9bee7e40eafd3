#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "semireg/discpoly.hpp"
#include "semireg/errors.hpp"
#include "support.hpp"

using namespace semireg;

namespace {

Polynomial random_poly(int deg, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(static_cast<std::size_t>(deg + 1));
  for (auto& x : c) x = Complex(g(rng), g(rng));
  if (std::abs(c.back()) < 1e-3) c.back() = 1.0;
  return Polynomial(c);
}

// max |f| over a dense circle sample; a lower bound for the disc norm that
// converges from below.
double dense_circle_max(const Polynomial& f, int samples) {
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    best = std::max(best, std::abs(f(std::polar(1.0, 2.0 * kPi * k / samples))));
  }
  return best;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const Polynomial kHalfSquare({0.5, -1.0, 0.5});  // (z - 1)^2 / 2

}  // namespace

TEST_CASE("polynomial basics") {
  const Polynomial p({1.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 1);
  CHECK(Polynomial().is_zero());
  CHECK(Polynomial({3.0}).is_constant());
  CHECK(std::abs(p(Complex(0.0, 1.0)) - Complex(1.0, 2.0)) < 1e-15);
  CHECK(Polynomial::monomial(3).degree() == 3);
  CHECK((p - p).is_zero());
}

TEST_CASE("disc_norm examples") {
  const DiscNormResult a = disc_norm(Polynomial({-1.0, 1.0}));
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(a.peak + 1.0) < 1e-6);
  for (int n = 1; n <= 5; ++n) {
    const DiscNormResult r = disc_norm(power_expand(kHalfSquare, n));
    CHECK(r.value == doctest::Approx(std::pow(2.0, n)).epsilon(1e-10));
    CHECK(std::abs(r.peak + 1.0) < 1e-5);
  }
  CHECK(disc_norm(Polynomial({Complex(3.0, -4.0)})).value == doctest::Approx(5.0));
  CHECK(disc_norm(Polynomial()).value == 0.0);
}

TEST_CASE("disc_norm against dense sampling and z^m invariance") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> deg(1, 12), mm(0, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const Polynomial g = random_poly(deg(rng), rng);
    const DiscNormResult r = disc_norm(g);
    const double dense = dense_circle_max(g, 1 << 16);
    CHECK(r.value >= dense - 1e-9);
    CHECK(r.value <= dense + 1e-6 * r.value);  // dense grid spacing bound
    CHECK(std::abs(g(r.peak)) >= r.value - 1e-9);
    const Polynomial shifted = Polynomial::monomial(mm(rng)) * g;
    CHECK(disc_norm(shifted).value == doctest::Approx(r.value).epsilon(1e-8));
  }
}

TEST_CASE("disc_norm homogeneity and power multiplicativity (property)") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const Polynomial f = random_poly(1 + trial % 5, rng);
    const Complex c(0.3 * trial - 2.0, 1.1);
    CHECK(std::abs(disc_norm(c * f).value - std::abs(c) * disc_norm(f).value) < 1e-9 * std::abs(c) * disc_norm(f).value + 1e-9);
    const int n = 1 + trial % 6;
    const double base = disc_norm(f).value;
    CHECK(disc_norm(power_expand(f, n)).value == doctest::Approx(std::pow(base, n)).epsilon(1e-7));
    const Polynomial g = random_poly(2, rng);
    CHECK(disc_norm(f * g).value <= base * disc_norm(g).value * (1.0 + 1e-9));
  }
}

TEST_CASE("normalize_peak") {
  const NormalizedPolynomial a = normalize_peak(Polynomial({-2.0, 2.0}));
  CHECK(std::abs(a.f.coeff(0) - 0.5) < 1e-9);
  CHECK(std::abs(a.f.coeff(1) + 0.5) < 1e-9);
  CHECK(a.scale == doctest::Approx(4.0));

  const NormalizedPolynomial z = normalize_peak(Polynomial({0.0, 1.0}));
  CHECK(std::abs(z.f.coeff(1) - std::conj(z.peak)) < 1e-9);
  CHECK(std::abs(z.f(z.peak) - 1.0) < 1e-9);

  // The normalized (z - 1)^2 / 2 is (z - 1)^2 / 4 with peak -1.
  const NormalizedPolynomial h = normalize_peak(kHalfSquare);
  CHECK(std::abs(h.peak + 1.0) < 1e-6);
  CHECK(std::abs(h.f(-1.0) - 1.0) < 1e-9);
  CHECK(std::abs(h.f.coeff(0) - 0.25) < 1e-9);

  CHECK_THROWS_AS(normalize_peak(Polynomial({2.0})), ConstantPolynomial);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Polynomial f = random_poly(1 + trial % 6, rng);
    const NormalizedPolynomial nf = normalize_peak(f);
    CHECK(disc_norm(nf.f).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(nf.f(nf.peak) - 1.0) < 1e-8);
    CHECK(in_C1(nf.f) == in_C1(f));
  }
}

TEST_CASE("power_expand") {
  const Polynomial sq = power_expand(Polynomial({-1.0, 1.0}), 2);
  CHECK(sq.degree() == 2);
  CHECK(std::abs(sq.coeff(0) - 1.0) < 1e-15);
  CHECK(std::abs(sq.coeff(1) + 2.0) < 1e-15);
  CHECK(std::abs(sq.coeff(2) - 1.0) < 1e-15);

  const Polynomial cube = power_expand(kHalfSquare, 3);
  for (int k = 0; k <= 6; ++k) {
    const double expect = binom(6, k) * ((6 - k) % 2 ? -1.0 : 1.0) / 8.0;
    CHECK(std::abs(cube.coeff(k) - expect) < 1e-14);
  }

  std::mt19937_64 rng(14);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial f = random_poly(3, rng);
    const Polynomial f5 = power_expand(f, 5);
    CHECK(f5.degree() == 15);
    for (int s = 0; s < 50; ++s) {
      const Complex z(0.7 * g(rng), 0.7 * g(rng));
      const Complex ref = std::pow(f(z), 5);
      CHECK(std::abs(f5(z) - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
  CHECK_THROWS_AS(power_expand(Polynomial({1e200, 1e200}), 4), CoefficientOverflow);
  CHECK_THROWS_AS(power_expand(kHalfSquare, 0), ValidationError);
}

TEST_CASE("coeff_sum_bound_check") {
  const BoundCheck z = coeff_sum_bound_check(Polynomial({0.0, 1.0}), 7);
  CHECK(z.lhs == doctest::Approx(1.0));
  CHECK(z.rhs == doctest::Approx(8.0));
  CHECK(z.ok);
  const BoundCheck h = coeff_sum_bound_check(kHalfSquare, 4);
  double abs_sum = 0.0;
  for (int k = 0; k <= 8; ++k) abs_sum += binom(8, k) / 16.0;
  CHECK(h.lhs == doctest::Approx(abs_sum));
  CHECK(h.lhs == doctest::Approx(16.0));
  CHECK(h.rhs == doctest::Approx(9.0 * 16.0).epsilon(1e-9));
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const Polynomial f = random_poly(1 + trial % 6, rng);
    CHECK(coeff_sum_bound_check(f, 1 + trial % 8).ok);
  }
}

TEST_CASE("in_C1") {
  CHECK(in_C1(Polynomial({-1.0, 1.0})));
  CHECK_FALSE(in_C1(Polynomial({0.0, 1.0})));
  CHECK(in_C1(kHalfSquare));
  CHECK_FALSE(in_C1(Polynomial({1.0})));
}

TEST_CASE("factor_out_root") {
  const RootFactor a = factor_out_root(Polynomial({1.0, -1.0}), 1.0);
  CHECK(a.q.degree() == 0);
  CHECK(std::abs(a.q.coeff(0) - 1.0) < 1e-15);

  const Polynomial ft = normalize_peak(kHalfSquare).f;
  const Polynomial g = Polynomial({1.0}) - ft;
  const RootFactor b = factor_out_root(g, -1.0);
  for (int k = 0; k < 20; ++k) {
    const Complex z = std::polar(0.9, 0.31 * k);
    CHECK(std::abs((-1.0 - z) * b.q(z) - g(z)) < 1e-10);
  }
  CHECK_THROWS_AS(factor_out_root(Polynomial({1.0, -1.0}), Complex(0.0, 1.0)), NotARoot);

  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const NormalizedPolynomial nf = normalize_peak(random_poly(1 + trial % 7, rng));
    const Polynomial one_minus = Polynomial({1.0}) - nf.f;
    const RootFactor r = factor_out_root(one_minus, nf.peak);
    const Polynomial back = Polynomial({nf.peak, -1.0}) * r.q;
    for (int k = 0; k <= one_minus.degree(); ++k) {
      CHECK(std::abs(back.coeff(k) - one_minus.coeff(k)) < 1e-9);
    }
  }
}

TEST_CASE("bernstein_check") {
  const BoundCheck a = bernstein_check(Polynomial({0.0, 1.0}), 1, 1, 0.0);
  CHECK(a.lhs == doctest::Approx(1.0));
  CHECK(a.rhs == doctest::Approx(1.0));
  CHECK(a.ok);
  const BoundCheck b = bernstein_check(Polynomial({0.5, 0.5}), 2, 1, 0.0);
  CHECK(b.lhs == doctest::Approx(1.0));
  CHECK(b.rhs == doctest::Approx(2.0));

  // Symbolic derivative oracle: f^N = sum c_k e^{ikx}, l-th derivative sum c_k (ik)^l e^{ikx}.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> xs(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial f = normalize_peak(random_poly(1 + trial % 4, rng)).f;
    const int n = 1 + trial % 3, l = trial % 5;
    const double x = xs(rng);
    std::vector<Complex> c{1.0};
    for (int r = 0; r < n; ++r) {
      std::vector<Complex> next(c.size() + f.coeffs().size() - 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < f.coeffs().size(); ++j) next[i + j] += c[i] * f.coeffs()[j];
      c = next;
    }
    Complex d = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      d += c[k] * std::pow(Complex(0.0, static_cast<double>(k)), l) *
           std::exp(Complex(0.0, static_cast<double>(k) * x));
    }
    const BoundCheck r = bernstein_check(f, n, l, x);
    CHECK(r.lhs == doctest::Approx(std::abs(d)).epsilon(1e-10));
    CHECK(r.ok);
  }
}

TEST_CASE("parse_polynomial") {
  const Polynomial p = parse_polynomial("[-1, 1]");
  CHECK(p.degree() == 1);
  CHECK(std::abs(p.coeff(0) + 1.0) < 1e-15);
  const Polynomial q = parse_polynomial("[[0.5, 0], [-1, 0.25], 0.5]");
  CHECK(std::abs(q.coeff(1) - Complex(-1.0, 0.25)) < 1e-15);
  CHECK_THROWS_AS(parse_polynomial("[1, "), ValidationError);
  CHECK_THROWS_AS(parse_polynomial("{\"a\": 1}"), ValidationError);
}
