#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "semireg/errors.hpp"
#include "semireg/zoo.hpp"
#include "support.hpp"

using namespace semireg;

TEST_CASE("catalog contents") {
  const std::vector<std::string> names{"diag_ray",   "skew_diag", "jordan",     "tridiag_laplacian",
                                       "shift_periodic", "heat_conv", "mult_symbol"};
  REQUIRE(zoo_catalog().size() == names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const ZooEntry& e = zoo_catalog()[i];
    CHECK(e.name == names[i]);
    CHECK(!e.notes.empty());
    CHECK((e.expected == "holomorphic_in_limit" || e.expected == "not_holomorphic_in_limit" ||
           e.expected == "group" || e.expected == "cosine_source"));
    for (int dim : {1, 5, 16}) CHECK(build(e.name, dim).dim() == dim);
  }
  CHECK(zoo_entry("skew_diag").expected == "group");
  CHECK(zoo_entry("shift_periodic").expected == "not_holomorphic_in_limit");
}

TEST_CASE("documented matrices") {
  const GeneratorSpec s = build("skew_diag", 4);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      CHECK(s.a(i, j) == (i == j ? Complex(0.0, i + 1.0) : Complex(0.0)));
    }
  }
  REQUIRE(s.growth.has_value());
  CHECK(s.growth->M == 1.0);
  CHECK(s.growth->omega == 0.0);

  const GeneratorSpec l = build("tridiag_laplacian", 3, {{"h", "1"}});
  Matrix ref(3, 3);
  ref << -2, 1, 0, 1, -2, 1, 0, 1, -2;
  CHECK((l.a - ref).norm() == 0.0);

  const GeneratorSpec j = build("jordan", 3, {{"lambda", "-2"}});
  Matrix jr(3, 3);
  jr << -2, 1, 0, 0, -2, 1, 0, 0, -2;
  CHECK((j.a - jr).norm() == 0.0);

  const GeneratorSpec m = build("mult_symbol", 3, {{"symbol", "values"}, {"values", "-1,0.5,-3"}});
  CHECK(m.a(1, 1) == Complex(0.5));
  CHECK(m.a(2, 2) == Complex(-3.0));

  // The spectral derivative and Laplacian act on e^{2 pi i k x / L} by their symbols.
  const int n = 16;
  const GeneratorSpec sh = build("shift_periodic", n);
  const GeneratorSpec hc = build("heat_conv", n, {{"period", "2"}});
  for (int k : {-3, 0, 5}) {
    Vector e(n);
    for (int x = 0; x < n; ++x) e[x] = std::polar(1.0, 2.0 * kPi * k * x / n);
    CHECK((sh.a * e - Complex(0.0, 2.0 * kPi * k) * e).norm() < 1e-10 * (1.0 + std::abs(k)));
    const double w = 2.0 * kPi * k / 2.0;
    CHECK((hc.a * e + w * w * e).norm() < 1e-10 * (1.0 + w * w));
  }
}

TEST_CASE("diag_ray contracts at rate cos(phi)") {
  for (double phi : {kPi / 4.0, 0.0, -1.2}) {
    const GeneratorSpec g = build("diag_ray", 12, {{"phi", std::to_string(phi)}});
    for (double t : {0.01, 0.3, 2.0}) {
      const double norm = op_norm(mat_exp(g.a, t), GridSpace::unit(12, 2.0)).value;
      CHECK(norm == doctest::Approx(std::exp(-t * std::cos(std::stod(std::to_string(phi))))).epsilon(1e-12));
      CHECK(norm < 1.0);
    }
  }
}

TEST_CASE("growth certificates hold") {
  for (const auto& e : zoo_catalog()) {
    for (int dim : {4, 16}) CHECK_MESSAGE(growth_certificate_holds(build(e.name, dim)), e.name);
  }
}

TEST_CASE("skew_diag is isometric on l2") {
  std::mt19937_64 rng(71);
  const GeneratorSpec g = build("skew_diag", 32);
  for (double t : {0.001, 0.7, 5.0}) {
    const Matrix u = mat_exp(g.a, t);
    for (int k = 0; k < 5; ++k) {
      const Vector x = oracle::random_vector(32, rng);
      CHECK(std::abs((u * x).norm() - x.norm()) <= 1e-12 * x.norm());
    }
  }
}

TEST_CASE("Kato-Beurling margins match the labels") {
  const Polynomial f({-1.0, 1.0});
  // Only the lowest decade enters the margin; t = 1e-3 resolves the top of a 512 spectrum.
  const auto grid = log_grid(0.1, 1e-3, 9);
  for (const auto& e : zoo_catalog()) {
    if (e.expected != "holomorphic_in_limit" && e.expected != "not_holomorphic_in_limit") continue;
    for (int dim = 8; dim <= 512; dim *= 2) {
      if (e.expected == "not_holomorphic_in_limit" && dim != 512) continue;
      const BeurlingProfile b = beurling_profile(build(e.name, dim), f, grid, GridSpace::unit(dim, 2.0));
      INFO(e.name << " dim " << dim << " margin " << b.margin);
      if (e.expected == "holomorphic_in_limit") {
        CHECK(b.margin >= 0.1);
      } else {
        CHECK(b.margin <= 0.1);
      }
    }
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(build("nope", 4), UnknownEntry);
  CHECK_THROWS_AS(zoo_entry("nope"), UnknownEntry);
  CHECK_THROWS_AS(build("skew_diag", 0), BadParams);
  CHECK_THROWS_AS(build("skew_diag", 4, {{"phi", "1"}}), BadParams);
  CHECK_THROWS_AS(build("diag_ray", 4, {{"phi", "2"}}), BadParams);
  CHECK_THROWS_AS(build("diag_ray", 4, {{"phi", "abc"}}), BadParams);
  CHECK_THROWS_AS(build("tridiag_laplacian", 4, {{"h", "-1"}}), BadParams);
  CHECK_THROWS_AS(build("mult_symbol", 4, {{"symbol", "bogus"}}), BadParams);
  CHECK_THROWS_AS(build("mult_symbol", 2, {{"symbol", "values"}, {"values", "1,2,3"}}), BadParams);
  CHECK_THROWS_AS(build("mult_symbol", 4, {{"symbol", "values"}, {"values", "1,2"}}), BadParams);
}
