// Acceptance gate: one PASS/FAIL line per criterion, with runtime against
// its budget. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "semireg/cli.hpp"
#include "semireg/cosine.hpp"
#include "semireg/errors.hpp"
#include "semireg/interp.hpp"
#include "semireg/rbound.hpp"
#include "semireg/zoo.hpp"
#include "support.hpp"

using namespace semireg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> body;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const Polynomial kZm1({-1.0, 1.0});

RademacherConfig exact_cfg(double p) {
  RademacherConfig c;
  c.p = p;
  return c;
}

// Largest |e^{t lambda_k} - 1| over the lowest decade of the grid.
double scalar_plateau(const std::vector<Complex>& lambdas, const std::vector<double>& grid) {
  double best = 0.0;
  const double t_min = grid.back();
  for (double t : grid) {
    if (t > 10.0 * t_min * (1.0 + 1e-12)) continue;
    for (Complex l : lambdas) best = std::max(best, std::abs(std::exp(t * l) - 1.0));
  }
  return best;
}

Outcome kato_identity() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GeneratorSpec> gens;
  for (int dim : {4, 8, 16}) {
    for (const auto& e : zoo_catalog()) gens.push_back(build(e.name, dim));
  }
  gens.resize(20);
  double worst = 0.0;
  int checks = 0;
  for (const auto& g : gens) {
    for (int j = 0; j < 5; ++j) {
      const Complex zeta = std::polar(1.0, 0.2 + (2.0 * kPi - 0.4) * u(rng));
      const double t = 0.05 + 0.95 * u(rng);
      const PhasePair ph = phases(zeta);
      const double theta = j % 2 ? ph.negative : ph.positive;
      worst = std::max(worst, kato_resolvent_identity_check(g, zeta, t, theta / t).residual);
      ++checks;
    }
  }
  return {worst <= 1e-6, std::to_string(checks) + " checks, worst residual " + sci(worst)};
}

Outcome beurling_direction_a() {
  const int n = 512;
  const auto grid = log_grid(1.0, 1.0 / n, 28);
  const GridSpace s = GridSpace::unit(n, 2.0);
  const BeurlingProfile ray = beurling_profile(build("diag_ray", n), kZm1, grid, s);
  const BeurlingProfile skew = beurling_profile(build("skew_diag", n), kZm1, grid, s);
  std::vector<Complex> ray_l, skew_l;
  for (int k = 1; k <= n; ++k) {
    ray_l.push_back(-std::polar(1.0, kPi / 4.0) * static_cast<double>(k));
    skew_l.push_back(Complex(0.0, k));
  }
  const double ray_ref = scalar_plateau(ray_l, grid), skew_ref = scalar_plateau(skew_l, grid);
  const bool oracle_ok = std::abs(ray.empirical_limsup - ray_ref) <= 1e-10 &&
                         std::abs(skew.empirical_limsup - skew_ref) <= 1e-10;
  const bool pass = ray.margin >= 0.9 && skew.empirical_limsup >= 2.0 - 0.05 && oracle_ok;
  return {pass, "diag_ray margin " + sci(ray.margin) + " (max value " + sci(ray.empirical_limsup) +
                    "), skew plateau " + sci(skew.empirical_limsup) +
                    (oracle_ok ? ", scalar oracle agrees" : ", scalar oracle DISAGREES")};
}

Outcome converse_b() {
  const int n = 128;
  const GeneratorSpec gen = build("tridiag_laplacian", n);
  const auto grid = log_grid(1.0, 1e-4, 25);
  const GridSpace s = GridSpace::unit(n, 2.0);
  std::vector<BeurlingProfile> profiles;
  for (double k : {0.0, 10.0, 40.0}) profiles.push_back(converse_profile(gen, kZm1, 4, k, grid, s));
  bool pass = true;
  double worst_gap = 0.0, min_margin = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double prev = -kInf;
    for (const auto& p : profiles) {
      const double m = p.disc_value - p.values[i];
      min_margin = std::min(min_margin, m);
      pass = pass && m > 0.0 && m >= prev - 1e-12;
      prev = m;
      worst_gap = std::max(worst_gap, p.evaluation_gaps[i]);
    }
  }
  pass = pass && worst_gap <= 1e-8;
  return {pass, "min pointwise margin " + sci(min_margin) + ", worst evaluation gap " + sci(worst_gap)};
}

Outcome extrapolation_chain() {
  constexpr int kFrozenSmallestN = 2;
  std::vector<int> ns;
  for (int n = 1; n <= 12; ++n) ns.push_back(n);
  const ExtrapolationReport r =
      extrapolation_bench(build("heat_conv", 64), kZm1, InterpolationTriple::from_p(2.0, kInf, 4.0),
                          log_grid(1.0, 1e-3, 25), ns, std::vector<double>(64, 1.0));
  bool pass = r.status == "ok" && !r.rows.empty();
  double worst = -kInf;
  for (const auto& row : r.rows) {
    worst = std::max(worst, row.measured - row.chain);
    pass = pass && row.measured <= row.chain + 1e-6;
  }
  pass = pass && r.smallest_n == kFrozenSmallestN;
  return {pass, std::to_string(r.rows.size()) + " rows, rho " + sci(r.rho) + ", M " + sci(r.M) +
                    ", smallest N " + std::to_string(r.smallest_n) + " (frozen " +
                    std::to_string(kFrozenSmallestN) + "), worst measured - bound " + sci(worst)};
}

Outcome zero_two() {
  const int n = 512;
  const ZeroTwoReport skew =
      zero_two_profile({cosine_from_group(build("skew_diag", n).a)}, log_grid(1.0, 1.0 / n, 28));
  std::mt19937_64 rng(1005);
  const ZeroTwoReport bounded = zero_two_profile({cosine_from_generator(oracle::random_matrix(6, rng))},
                                                 log_grid(1.0, 1e-6, 25));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int bad = 0;
  for (const auto& e : zoo_catalog()) {
    const Matrix a = build(e.name, 8).a;
    const CosineFamily fam = e.expected == "group" ? cosine_from_group(a) : cosine_from_generator(a);
    for (int k = 0; k < 100; ++k) {
      const DalembertResult d = dalembert_residual(fam, u(rng), u(rng));
      const double rel = d.residual * 1e-8 / d.bound;
      worst = std::max(worst, rel);
      if (!d.ok) ++bad;
    }
  }
  const bool pass = skew.plateaus[0] >= 1.95 && bounded.plateaus[0] <= 0.05 && bad == 0;
  return {pass, "skew plateau " + sci(skew.plateaus[0]) + ", bounded plateau " + sci(bounded.plateaus[0]) +
                    ", worst relative d'Alembert residual " + sci(worst)};
}

Outcome fattorini() {
  std::mt19937_64 rng(1006);
  double worst_gap = 0.0;
  int bound_bad = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = oracle::random_matrix(3, rng);
    const CosineFamily fam = cosine_from_generator(a);
    for (double omega : {0.25, 0.5, 1.0}) {
      const CosineFamily target = cosine_from_generator(a - omega * Matrix::Identity(3, 3));
      for (double t : {0.4, 0.8}) {
        const FattoriniResult r = fattorini_series(fam, omega, 16, t);
        worst_gap = std::max(worst_gap, (r.partial_sums.back() - target.cosine(t)).norm());
        for (std::size_t k = 0; k < r.term_norms.size(); ++k) {
          if (r.term_norms[k] > r.term_bounds[k] + 1e-12) ++bound_bad;
        }
      }
    }
  }
  return {worst_gap <= 1e-4 && bound_bad == 0,
          "worst partial-sum gap " + sci(worst_gap) + ", term bound violations " + std::to_string(bound_bad)};
}

Outcome rbound_anchors() {
  std::mt19937_64 rng(1007);
  double worst_hilbert = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index dim = 1 + trial % 8;
    std::vector<Matrix> fam;
    double sup = 0.0;
    for (int k = 0; k < 1 + trial % 6; ++k) {
      fam.push_back(oracle::random_matrix(dim, rng));
      sup = std::max(sup, oracle::weighted_two_norm(fam.back(), oracle::unit(dim)));
    }
    const RBoundEstimate e = rbound_estimate(fam, GridSpace::unit(dim, 2.0), exact_cfg(2.0), 16);
    worst_hilbert = std::max(worst_hilbert, std::abs(e.value - sup));
  }

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g;
  int violations = 0, wrong_constant = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double p = std::vector<double>{1.0, 2.0, 3.0, 4.0}[static_cast<std::size_t>(trial % 4)];
    const int n = 1 + trial % 8;
    std::vector<Vector> xs;
    for (int k = 0; k < n; ++k) xs.push_back(oracle::random_vector(4, rng));
    std::vector<Complex> a;
    const bool real = trial % 2 == 1;
    for (int k = 0; k < n; ++k) {
      const Complex z = real ? Complex(u(rng), 0.0) : Complex(u(rng), u(rng));
      a.push_back(std::abs(z) > 1.0 ? z / std::abs(z) : z);
    }
    const KahaneCheck kc = kahane_contraction_check(xs, a, GridSpace::unit(4, p), exact_cfg(p));
    if (!kc.ok) ++violations;
    if (kc.constant != (real ? 1.0 : 2.0)) ++wrong_constant;
  }

  double worst_square = 0.0;
  std::uniform_real_distribution<double> wd(0.3, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(6);
    for (auto& x : w) x = wd(rng);
    const GridSpace s(w, 2.0);
    std::vector<Vector> fs;
    for (int k = 0; k < 1 + trial % 8; ++k) fs.push_back(oracle::random_vector(6, rng));
    const double sq = square_function_norm(fs, s);
    worst_square = std::max(worst_square, std::abs(sq - rademacher_norm(fs, s, exact_cfg(2.0)).value) / sq);
  }
  const bool pass = worst_hilbert <= 1e-6 && violations == 0 && wrong_constant == 0 && worst_square <= 1e-10;
  return {pass, "Hilbert gap " + sci(worst_hilbert) + ", Kahane violations " + std::to_string(violations) +
                    ", square-function gap " + sci(worst_square)};
}

Outcome r_sectoriality() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> analytic{"diag_ray", "jordan", "tridiag_laplacian", "heat_conv"};
  double worst = 0.0;
  int cases = 0;
  for (int k = 0; k < 20; ++k) {
    const GeneratorSpec gen = build(analytic[static_cast<std::size_t>(k % 4)], 4 + 4 * (k / 8));
    const Complex zeta = std::polar(1.0 + u(rng), 0.3 + (2.0 * kPi - 0.6) * u(rng));
    const Complex lz = std::log(zeta);
    double d_pole = kInf;
    for (int j = -3; j <= 3; ++j) d_pole = std::min(d_pole, std::abs(lz + Complex(0.0, 2.0 * kPi * j)));
    const double t = (0.2 + 0.6 * u(rng)) * d_pole / spectral_norm(gen.a);
    worst = std::max(worst, bt_contour_check(gen, zeta, t).residual);
    ++cases;
  }
  bool chain = true;
  std::string chains;
  for (double p : {2.0, 4.0}) {
    const RSectorReport r =
        r_sector_report(build("diag_ray", 32), -1.0, 1.0, GridSpace::unit(32, p), exact_cfg(p), 8);
    chain = chain && r.holds;
    chains += ", p=" + sci(p) + " R+ " + sci(r.alpha_plus.value) + " <= " + sci(r.chain_plus);
  }
  return {worst <= 1e-4 && chain, std::to_string(cases) + " contour checks, worst residual " + sci(worst) + chains};
}

Outcome bernstein() {
  std::mt19937_64 rng(1009);
  std::uniform_real_distribution<double> u(-1.0, 1.0), xs(-kPi, kPi);
  int violations = 0;
  double worst = -kInf;
  for (int trial = 0; trial < 500; ++trial) {
    const int deg = 1 + trial % 5;
    std::vector<Complex> c;
    for (int k = 0; k <= deg; ++k) c.push_back(Complex(u(rng), u(rng)));
    const Polynomial f = normalize_peak(Polynomial(c)).f;
    const BoundCheck r = bernstein_check(f, 1 + trial % 4, trial % 6, xs(rng));
    worst = std::max(worst, r.lhs - r.rhs);
    if (!r.ok) ++violations;
  }
  return {violations == 0, "500 cases, violations " + std::to_string(violations) + ", worst lhs - rhs " + sci(worst)};
}

Outcome r_converse() {
  // f(1) != 0 keeps the first term of the bound in play.
  const Polynomial f({-0.5, 1.0});
  struct Config {
    std::string name;
    int dim;
    double p;
  };
  const std::vector<Config> configs{{"diag_ray", 4, 2.0},          {"diag_ray", 6, 3.0},
                                    {"jordan", 3, 2.0},            {"jordan", 4, 3.0},
                                    {"tridiag_laplacian", 4, 2.0}, {"tridiag_laplacian", 6, 3.0},
                                    {"heat_conv", 4, 2.0},         {"heat_conv", 6, 3.0},
                                    {"mult_symbol", 4, 2.0},       {"mult_symbol", 5, 3.0}};
  int bad = 0;
  double worst_ratio = 0.0;
  for (const auto& c : configs) {
    const RConverseCheck r = r_converse_check(build(c.name, c.dim), f, 2, 8.0, kPi / 6.0,
                                              GridSpace::unit(c.dim, c.p), exact_cfg(c.p), 6);
    if (!r.holds) ++bad;
    worst_ratio = std::max(worst_ratio, r.family_estimate / r.bound);
  }
  return {bad == 0, "10 configurations, violations " + std::to_string(bad) + ", worst estimate / bound " +
                        sci(worst_ratio)};
}

Outcome interpolation() {
  std::mt19937_64 rng(1011);
  std::uniform_real_distribution<double> th(0.05, 0.95), pe(1.0, 8.0), wd(0.1, 3.0);
  int log_bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + trial % 32;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& v : w) v = wd(rng);
    const double p1 = pe(rng);
    const double p2 = trial % 3 == 0 ? kInf : pe(rng);
    const auto tr = InterpolationTriple::from_theta(p1, p2, th(rng));
    if (!lp_logconvexity_check(oracle::random_vector(n, rng), tr, w).ok) ++log_bad;
  }
  const std::vector<double> ends{1.0, 2.0, kInf};
  int rt_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    double p1 = ends[static_cast<std::size_t>(trial % 3)];
    double p2 = ends[static_cast<std::size_t>((trial / 3 + 1 + trial % 3) % 3)];
    if (p1 == p2) p2 = p1 == kInf ? 1.0 : kInf;
    const Index n = 2 + trial % 7;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& v : w) v = wd(rng);
    const auto tr = InterpolationTriple::from_theta(p1, p2, th(rng));
    if (!riesz_thorin_check(oracle::random_matrix(n, rng), tr, w).ok) ++rt_bad;
  }
  return {log_bad == 0 && rt_bad == 0,
          "log-convexity violations " + std::to_string(log_bad) + "/1000, Riesz-Thorin violations " +
              std::to_string(rt_bad) + "/200"};
}

Outcome gaussian_route() {
  const double k0 = gaussian_kernel(1.0, {0.0}, 1);
  const double kernel_err = std::abs(k0 - 1.0 / std::sqrt(4.0 * kPi));

  KernelSpec spec;
  double worst_law = 0.0, worst_mass = 0.0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const Vector f = smooth_random_function(spec, 40 + k, true);
    const Vector a = gaussian_apply(spec, 0.1, gaussian_apply(spec, 0.2, f));
    const Vector b = gaussian_apply(spec, 0.3, f);
    worst_law = std::max(worst_law, (a - b).norm() / b.norm());
    worst_mass = std::max(worst_mass, std::abs(b.real().sum() - f.real().sum()) / f.real().sum());
  }
  const FittedConstant dom = maximal_domination_check(
      spec, [](const KernelSpec& s) { return smooth_random_function(s, 77, false); }, log_grid(1.0, 1e-3, 13));
  const FittedConstant sq = gaussian_square_function_bench(spec, 3.0, 200, 78);
  const bool pass = kernel_err <= 1e-12 && worst_law <= 1e-6 && worst_mass <= 1e-6 && dom.ok && sq.ok;
  return {pass, "k1(0) error " + sci(kernel_err) + ", semigroup law " + sci(worst_law) + ", mass " +
                    sci(worst_mass) + ", domination " + sci(dom.coarse) + " -> " + sci(dom.fine) +
                    ", square function " + sci(sq.coarse) + " -> " + sci(sq.fine)};
}

std::vector<ExperimentConfig> determinism_configs() {
  auto make = [](const std::string& cmd, const std::string& zoo, int dim) {
    ExperimentConfig c;
    c.command = cmd;
    c.zoo = zoo;
    c.dim = dim;
    return c;
  };
  std::vector<ExperimentConfig> out{make("beurling", "diag_ray", 16), make("sector", "jordan", 6),
                                    make("rbound", "heat_conv", 8),   make("r-beurling", "diag_ray", 6),
                                    make("cosine", "skew_diag", 8),   make("zero-two", "skew_diag", 8),
                                    make("fattorini", "jordan", 3),   make("interpolate", "heat_conv", 8),
                                    make("extrapolate", "heat_conv", 16), make("gaussian", "", 8),
                                    make("maxreg", "diag_ray", 8),    make("zoo", "", 8)};
  ExperimentConfig mc = make("rbound", "diag_ray", 8);
  mc.mode = "monte_carlo";
  mc.p = 3.0;
  mc.mc_samples = 512;
  out.push_back(mc);
  for (auto& c : out) {
    c.points = 32;
    c.trials = 4;
  }
  return out;
}

Outcome determinism() {
  int differing = 0;
  const auto configs = determinism_configs();
  for (const auto& c : configs) {
    if (run(c).to_json(false).dump() != run(c).to_json(false).dump()) ++differing;
  }
  return {differing == 0,
          std::to_string(configs.size()) + " reports run twice, differing " + std::to_string(differing)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "kato_resolvent_identity", 10, kato_identity},
      {2, "kato_beurling_direction_a", 30, beurling_direction_a},
      {3, "converse_direction_b", 30, converse_b},
      {4, "extrapolation_chain", 60, extrapolation_chain},
      {5, "zero_two_law", 60, zero_two},
      {6, "fattorini_series", 60, fattorini},
      {7, "rbound_anchors", 60, rbound_anchors},
      {8, "r_sectoriality", 60, r_sectoriality},
      {9, "bernstein", 10, bernstein},
      {10, "r_converse_bound", 60, r_converse},
      {11, "interpolation_layer", 10, interpolation},
      {12, "gaussian_route", 60, gaussian_route},
      {13, "determinism", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("%s %2d %-26s %7.2fs / %3.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.budget_s, o.detail.c_str(), in_budget ? "" : " [over runtime budget]");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
