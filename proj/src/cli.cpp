#include "semireg/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "semireg/cosine.hpp"
#include "semireg/discpoly.hpp"
#include "semireg/errors.hpp"
#include "semireg/interp.hpp"
#include "semireg/rbound.hpp"
#include "semireg/semigroup.hpp"

namespace semireg {

namespace {

const std::vector<std::string> kCommands = {
    "beurling", "sector",      "rbound",      "r-beurling", "cosine",  "zero-two",
    "fattorini", "interpolate", "extrapolate", "gaussian",   "maxreg",  "zoo"};

double parse_exponent(const std::string& s) {
  std::string low = s;
  std::transform(low.begin(), low.end(), low.begin(), ::tolower);
  if (low == "inf" || low == "infinity") return kInf;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

double json_double(const Json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  if (!j.is_number()) throw ValidationError("config: expected a number, got " + j.dump());
  return j.get<double>();
}

// One entry per config key: how to write it and how to read it back.
struct Field {
  std::string key;
  std::function<Json(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const Json&)> set;
};

template <class T>
Field plain(std::string key, T ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return Json(c.*member); },
          [member](ExperimentConfig& c, const Json& j) { c.*member = j.get<T>(); }};
}

Field real(std::string key, double ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return number(c.*member); },
          [member](ExperimentConfig& c, const Json& j) { c.*member = json_double(j); }};
}

Field reals(std::string key, std::vector<double> ExperimentConfig::*member) {
  return {key,
          [member](const ExperimentConfig& c) {
            Json a = Json::array();
            for (double v : c.*member) a.push_back(number(v));
            return a;
          },
          [member](ExperimentConfig& c, const Json& j) {
            (c.*member).clear();
            for (const auto& v : j) (c.*member).push_back(json_double(v));
          }};
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> f = {
      plain("command", &C::command),
      plain("zoo", &C::zoo),
      plain("params", &C::params),
      plain("matrix", &C::matrix_path),
      plain("dim", &C::dim),
      plain("poly", &C::poly),
      real("p", &C::p),
      plain("weights", &C::weights),
      real("t_max", &C::t_max),
      plain("decades", &C::decades),
      plain("points_per_decade", &C::points_per_decade),
      reals("zeta", &C::zeta),
      real("t0", &C::t0),
      reals("alpha_grid", &C::alpha_grid),
      plain("N", &C::N),
      reals("K", &C::K),
      plain("n_range", &C::n_range),
      plain("mode", &C::mode),
      plain("mc_samples", &C::mc_samples),
      plain("exact_cap", &C::exact_cap),
      plain("budget", &C::budget),
      plain("dims", &C::dims),
      real("lambda", &C::lambda),
      real("omega", &C::omega),
      plain("n_max", &C::n_max),
      real("t", &C::t),
      real("p1", &C::p1),
      real("p2", &C::p2),
      plain("ambient_dim", &C::ambient_dim),
      plain("points", &C::points),
      real("period", &C::period),
      real("kernel_a", &C::kernel_a),
      plain("kernel_family", &C::kernel_family),
      plain("trials", &C::trials),
      real("tau", &C::tau),
      plain("n_time", &C::n_time),
      plain("seed", &C::seed),
      plain("output", &C::output),
      plain("format", &C::format),
  };
  return f;
}

void validate(const ExperimentConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    throw ValidationError("unknown command '" + c.command + "'");
  }
  if (c.format != "json" && c.format != "csv") {
    throw ValidationError("format must be json or csv, got '" + c.format + "'");
  }
  if (c.mode != "exact" && c.mode != "monte_carlo") {
    throw ValidationError("mode must be exact or monte_carlo, got '" + c.mode + "'");
  }
  if (!(c.p >= 1.0)) throw ValidationError("p must be >= 1");
  if (c.decades < 2) throw ValidationError("the t grid must span at least two decades");
  if (c.points_per_decade < 1) throw ValidationError("points per decade must be >= 1");
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ValidationError("t_max must be positive");
  if (c.zeta.size() != 2) throw ValidationError("zeta must be [re, im]");
  if (c.K.empty()) throw ValidationError("K list is empty");
  if (c.n_range.empty()) throw ValidationError("N range is empty");
  if (c.dims.empty()) throw ValidationError("dims list is empty");
  if (c.N < 1) throw ValidationError("N must be >= 1");
  if (c.budget < 0) throw ValidationError("budget must be >= 0");
}

std::vector<double> read_weights(const std::string& spec, Index dim) {
  if (spec == "unit") return std::vector<double>(static_cast<std::size_t>(dim), 1.0);
  std::ifstream is(spec);
  if (!is) throw ValidationError("cannot read weights file '" + spec + "'");
  std::vector<double> w;
  double v;
  while (is >> v) w.push_back(v);
  if (static_cast<Index>(w.size()) != dim) {
    throw ValidationError("weights file has " + std::to_string(w.size()) + " entries, dimension is " +
                          std::to_string(dim));
  }
  return w;
}

GeneratorSpec generator_of(const ExperimentConfig& c) {
  if (!c.matrix_path.empty() && !c.zoo.empty()) {
    throw ValidationError("give either --zoo or --matrix, not both");
  }
  if (!c.matrix_path.empty()) return make_generator(read_matrix_file(c.matrix_path), c.matrix_path);
  if (c.zoo.empty()) throw ValidationError("command '" + c.command + "' needs --zoo or --matrix");
  return build(c.zoo, c.dim, c.params);
}

GridSpace space_of(const ExperimentConfig& c, Index dim, double p) {
  return GridSpace(read_weights(c.weights, dim), p);
}

RademacherConfig rad_of(const ExperimentConfig& c) {
  RademacherConfig r;
  r.p = c.p;
  r.mode = c.mode == "exact" ? RadMode::exact : RadMode::monte_carlo;
  r.mc_samples = c.mc_samples;
  r.seed = c.seed;
  r.exact_cap = c.exact_cap;
  return r;
}

Provenance norm_provenance(double p) {
  return (p == 1.0 || p == 2.0 || p == kInf) ? Provenance::exact : Provenance::lower_bound;
}

Provenance rbound_provenance(const ExperimentConfig& c) {
  return c.mode == "exact" ? Provenance::lower_bound : Provenance::monte_carlo;
}

Json rbound_json(const RBoundEstimate& e, Provenance prov) {
  Json j;
  j["estimate"] = tagged(e.value, prov);
  j["singleton_max"] = tagged(e.singleton_max, Provenance::lower_bound);
  j["witness_selection"] = e.witness.selection;
  j["trials"] = e.trials;
  j["converged"] = e.converged;
  return j;
}

Complex zeta_of(const ExperimentConfig& c) { return {c.zeta[0], c.zeta[1]}; }

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void cmd_beurling(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const GridSpace space = space_of(c, gen.dim(), c.p);
  const Polynomial f = parse_polynomial(c.poly);
  const auto grid = t_grid_of(c);
  const bool converse = c.N != 1 || c.K.size() != 1 || c.K[0] != 0.0;
  r.table = CsvTable({"K", "t", "value", "evaluation_gap"});
  Json runs = Json::array();
  bool all_positive = true;
  for (double k : c.K) {
    const BeurlingProfile prof = converse ? converse_profile(gen, f, c.N, k, grid, space)
                                          : beurling_profile(gen, f, grid, space);
    const Provenance prov = prof.estimate ? Provenance::lower_bound : Provenance::exact;
    for (std::size_t i = 0; i < prof.t_grid.size(); ++i) {
      r.table.add_row(std::vector<double>{k, prof.t_grid[i], prof.values[i], prof.evaluation_gaps[i]});
    }
    Json run;
    run["K"] = number(k);
    run["disc_value"] = tagged(prof.disc_value, Provenance::measured);
    run["empirical_limsup"] = tagged(prof.empirical_limsup, prov);
    run["margin"] = tagged(prof.margin, prov);
    run["max_evaluation_gap"] =
        number(*std::max_element(prof.evaluation_gaps.begin(), prof.evaluation_gaps.end()));
    runs.push_back(run);
    all_positive = all_positive && prof.margin >= 0.1;
  }
  r.results["runs"] = runs;
  r.results["margin_threshold"] = tagged(0.1, Provenance::input);
  r.verdicts.push_back(all_positive ? "margin_positive" : "margin_vanishing");
}

std::vector<double> default_alpha_grid(const ExperimentConfig& c) {
  if (!c.alpha_grid.empty()) return c.alpha_grid;
  const PhasePair ph = phases(zeta_of(c));
  const double theta = std::max(std::abs(ph.positive), std::abs(ph.negative));
  return log_grid(1.05 * theta / c.t0 * 100.0, 1.05 * theta / c.t0, 12);
}

void cmd_sector(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const GridSpace space = space_of(c, gen.dim(), c.p);
  const SectorReport s = sector_report(gen, zeta_of(c), c.t0, space, default_alpha_grid(c));
  const Provenance prov = s.estimate ? Provenance::lower_bound : norm_provenance(c.p);
  r.table = CsvTable({"alpha", "resolvent_sup", "bound"});
  for (std::size_t i = 0; i < s.alpha_grid.size(); ++i) {
    r.table.add_row(std::vector<double>{s.alpha_grid[i], s.resolvent_sups[i], s.bounds[i]});
  }
  r.results["zeta"] = tagged(s.zeta, Provenance::input);
  r.results["t0"] = tagged(s.t0, Provenance::input);
  r.results["theta"] = {{"positive", number(s.theta.positive)}, {"negative", number(s.theta.negative)}};
  r.results["K"] = tagged(s.K, prov);
  r.results["M"] = tagged(s.M, prov);
  r.results["C"] = tagged(s.C, prov);
  r.results["alpha0"] = tagged(s.alpha0, Provenance::measured);
  r.results["holds"] = s.holds;
  r.verdicts.push_back(s.holds ? "sector_bound_holds" : "sector_bound_violated");
}

void cmd_rbound(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const GridSpace space = space_of(c, gen.dim(), c.p);
  const GeneratorSpec red = reduce_for_space(gen, space);
  const auto grid = t_grid_of(c);
  std::vector<Matrix> family;
  r.table = CsvTable({"t", "norm"});
  double sup = 0.0;
  for (double t : grid) {
    family.push_back(mat_exp(red.a, t));
    const double n = op_norm(family.back(), space).value;
    sup = std::max(sup, n);
    r.table.add_row(std::vector<double>{t, n});
  }
  const RBoundEstimate e = rbound_estimate(family, space, rad_of(c), c.budget);
  r.results["rbound"] = rbound_json(e, rbound_provenance(c));
  r.results["sup_norm"] = tagged(sup, norm_provenance(c.p));
  r.verdicts.push_back(e.value <= sup * (1.0 + 1e-6) ? "rbound_matches_sup" : "rbound_exceeds_sup");
}

void cmd_r_beurling(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const GridSpace space = space_of(c, gen.dim(), c.p);
  const Polynomial f = parse_polynomial(c.poly);
  const RBeurlingProfile prof =
      r_beurling_profile(gen, f, t_grid_of(c), space, rad_of(c), c.budget);
  r.table = CsvTable({"epsilon", "r_estimate", "sup_norm"});
  for (std::size_t i = 0; i < prof.ladder.size(); ++i) {
    r.table.add_row(std::vector<double>{prof.ladder[i], prof.estimates[i], prof.sup_norms[i]});
  }
  r.results["disc_value"] = tagged(prof.disc_value, Provenance::measured);
  r.results["final_estimate"] = tagged(prof.final_value, rbound_provenance(c));
  r.results["margin"] = tagged(prof.margin, rbound_provenance(c));
  r.verdicts.push_back(prof.margin >= 0.1 ? "r_margin_positive" : "r_margin_vanishing");
}

CosineFamily family_of(const GeneratorSpec& gen, const std::string& zoo_name) {
  if (!zoo_name.empty() && zoo_entry(zoo_name).expected == "group") return cosine_from_group(gen.a);
  return cosine_from_generator(gen.a);
}

void cmd_cosine(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const CosineFamily fam = family_of(gen, c.zoo);
  const auto grid = t_grid_of(c);
  r.table = CsvTable({"t", "cosine_norm", "dalembert_residual", "fd_residual"});
  bool ok = true;
  double worst = 0.0;
  for (double t : grid) {
    const DalembertResult d = dalembert_residual(fam, t, 0.5 * t);
    ok = ok && d.ok;
    worst = std::max(worst, d.residual);
    r.table.add_row(std::vector<double>{t, spectral_norm(fam.cosine(t)), d.residual,
                                        generator_fd_residual(fam, t)});
  }
  const double lambda =
      c.lambda > 0.0 ? c.lambda : 1.0 + std::sqrt(spectral_norm(fam.generator()));
  const LaplaceCheck lc = laplace_transform_check(fam, lambda);
  r.results["worst_dalembert_residual"] = tagged(worst, Provenance::measured);
  r.results["laplace"] = {{"lambda", number(lambda)},
                          {"residual", tagged(lc.residual, Provenance::measured)},
                          {"horizon", number(lc.horizon)},
                          {"growth", tagged(lc.growth, Provenance::measured)}};
  r.verdicts.push_back(ok ? "cosine_axioms_hold" : "cosine_axioms_violated");
}

void cmd_zero_two(const ExperimentConfig& c, Report& r) {
  if (c.zoo.empty()) throw ValidationError("zero-two needs --zoo");
  std::vector<CosineFamily> fams;
  for (int d : c.dims) fams.push_back(family_of(build(c.zoo, d, c.params), c.zoo));
  const ZeroTwoReport z = zero_two_profile(fams, t_grid_of(c), c.p);
  r.table = CsvTable({"dim", "t", "value"});
  for (std::size_t i = 0; i < z.dims.size(); ++i) {
    for (std::size_t j = 0; j < z.t_grid.size(); ++j) {
      r.table.add_row(std::vector<double>{static_cast<double>(z.dims[i]), z.t_grid[j],
                                          z.profiles[i][j]});
    }
  }
  Json plateaus = Json::array();
  for (double v : z.plateaus) plateaus.push_back(tagged(v, norm_provenance(c.p)));
  r.results["dims"] = z.dims;
  r.results["plateaus"] = plateaus;
  r.results["fit"] = {{"intercept", tagged(z.fit.intercept, Provenance::fitted)},
                      {"slope", tagged(z.fit.slope, Provenance::fitted)},
                      {"verdict", z.fit.verdict}};
  r.verdicts.push_back(z.verdict);
}

void cmd_fattorini(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const FattoriniResult f = fattorini_series(cosine_from_generator(gen.a), c.omega, c.n_max, c.t);
  r.table = CsvTable({"n", "term_norm", "term_bound"});
  for (std::size_t n = 0; n < f.term_norms.size(); ++n) {
    r.table.add_row(std::vector<double>{static_cast<double>(n), f.term_norms[n], f.term_bounds[n]});
  }
  r.results["M"] = tagged(f.M, Provenance::measured);
  r.results["target_gap"] = tagged(f.target_gap, Provenance::measured);
  r.results["nodes"] = f.nodes;
  r.results["bound_ok"] = f.bound_ok;
  r.verdicts.push_back(f.bound_ok ? "term_bounds_hold" : "term_bounds_violated");
}

void cmd_interpolate(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const InterpolationTriple tr = InterpolationTriple::from_p(c.p1, c.p2, c.p);
  const auto w = read_weights(c.weights, gen.dim());
  r.table = CsvTable({"t", "lhs", "rhs"});
  bool ok = true;
  for (double t : t_grid_of(c)) {
    const InterpCheck ic = riesz_thorin_check(mat_exp(gen.a, t), tr, w);
    ok = ok && ic.ok;
    r.table.add_row(std::vector<double>{t, ic.lhs, ic.rhs});
  }
  r.results["triple"] = {{"p1", number(tr.p1)}, {"p2", number(tr.p2)}, {"theta", number(tr.theta)},
                         {"p", number(tr.p)}};
  r.verdicts.push_back(ok ? "riesz_thorin_holds" : "riesz_thorin_violated");
}

void cmd_extrapolate(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const InterpolationTriple tr = InterpolationTriple::from_p(c.p1, c.p2, c.p);
  const ExtrapolationReport e =
      extrapolation_bench(gen, parse_polynomial(c.poly), tr, t_grid_of(c), c.n_range,
                          read_weights(c.weights, gen.dim()));
  r.table = CsvTable({"N", "t", "measured", "chain"});
  for (const auto& row : e.rows) {
    r.table.add_row(std::vector<double>{static_cast<double>(row.n), row.t, row.measured, row.chain});
  }
  r.results["rho"] = tagged(e.rho, Provenance::measured);
  r.results["M"] = tagged(e.M, Provenance::measured);
  r.results["smallest_N"] = e.smallest_n;
  r.verdicts.push_back(e.status);
}

// Periodic second difference plus the potential 1 + cos(2 pi x / L), 1-D only.
Matrix potential_generator(const KernelSpec& s) {
  if (s.dim_ambient != 1) throw BadParams("potential family is one-dimensional");
  const int n = s.points;
  const double h = s.cell();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = -2.0 / (h * h) - (1.0 + std::cos(2.0 * kPi * i * h / s.period));
    a(i, (i + 1) % n) += 1.0 / (h * h);
    a(i, (i + n - 1) % n) += 1.0 / (h * h);
  }
  return a;
}

void cmd_gaussian(const ExperimentConfig& c, Report& r) {
  KernelSpec spec;
  spec.dim_ambient = c.ambient_dim;
  spec.a = c.kernel_a;
  spec.points = c.points;
  spec.period = c.period;
  spec.validate();
  std::vector<double> grid = t_grid_of(c);

  OperatorFamilyBuilder family;
  if (c.kernel_family == "heat") {
    family = [](const KernelSpec& s) {
      return std::function<Matrix(double)>([s](double t) { return gaussian_matrix(s, t); });
    };
  } else if (c.kernel_family == "potential") {
    family = [](const KernelSpec& s) {
      const Matrix a = potential_generator(s);
      return std::function<Matrix(double)>([a](double t) { return mat_exp(a, t); });
    };
  } else {
    throw ValidationError("kernel family must be heat or potential, got '" + c.kernel_family + "'");
  }
  const std::uint64_t seed = c.seed;
  const ProbeBuilder probes = [seed](const KernelSpec& s) {
    std::vector<Vector> out;
    for (std::uint64_t k = 0; k < 4; ++k) out.push_back(smooth_random_function(s, seed + k, true));
    return out;
  };
  const FittedConstant est = gaussian_estimate_check(family, spec, grid, probes);
  const FittedConstant dom = maximal_domination_check(
      spec, [seed](const KernelSpec& s) { return smooth_random_function(s, seed, true); }, grid);
  const FittedConstant sq = gaussian_square_function_bench(spec, c.p, c.trials, c.seed);

  r.table = CsvTable({"quantity", "coarse", "fine"});
  r.table.add_row(std::vector<std::string>{"gaussian_estimate", format_double(est.coarse),
                                           format_double(est.fine)});
  r.table.add_row(std::vector<std::string>{"maximal_domination", format_double(dom.coarse),
                                           format_double(dom.fine)});
  r.table.add_row(std::vector<std::string>{"square_function", format_double(sq.coarse),
                                           format_double(sq.fine)});
  auto fitted = [](const FittedConstant& f) {
    return Json{{"value", tagged(f.value, Provenance::fitted)},
                {"coarse", number(f.coarse)},
                {"fine", number(f.fine)},
                {"stable", f.ok}};
  };
  r.results["kernel_at_origin"] =
      tagged(gaussian_kernel(1.0, std::vector<double>(static_cast<std::size_t>(spec.dim_ambient), 0.0),
                             spec.dim_ambient),
             Provenance::exact);
  r.results["gaussian_estimate"] = fitted(est);
  r.results["maximal_domination"] = fitted(dom);
  r.results["square_function"] = fitted(sq);
  const bool stable = est.ok && dom.ok && sq.ok;
  r.verdicts.push_back(stable ? "constants_stable" : "constants_unstable");
}

void cmd_maxreg(const ExperimentConfig& c, Report& r) {
  const GeneratorSpec gen = generator_of(c);
  const GridSpace space = space_of(c, gen.dim(), c.p);
  const Forcing f = white_noise_forcing(gen.dim(), c.tau, 16, c.seed);
  const MildSolution m = mild_solution(gen, f, c.tau, c.p, c.n_time, space);
  r.table = CsvTable({"time", "norm_x"});
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    r.table.add_row(std::vector<double>{m.times[i], space.norm(m.x[i])});
  }
  r.results["maxreg_ratio"] = tagged(m.maxreg_ratio, Provenance::measured);
  r.results["n_time"] = m.n_time;
  r.verdicts.push_back("measured");
}

void cmd_zoo(const ExperimentConfig&, Report& r) {
  r.table = CsvTable({"name", "expected", "notes"});
  Json entries = Json::array();
  for (const auto& e : zoo_catalog()) {
    r.table.add_row(std::vector<std::string>{e.name, e.expected, e.notes});
    entries.push_back({{"name", e.name}, {"expected", e.expected}, {"notes", e.notes}});
  }
  r.results["entries"] = entries;
}

std::string render(const Report& r, const std::string& format) {
  return format == "csv" ? r.table.str() : r.to_json().dump(2) + "\n";
}

}  // namespace

Json config_to_json(const ExperimentConfig& cfg) {
  Json j = Json::object();
  for (const auto& f : fields()) j[f.key] = f.get(cfg);
  return j;
}

void apply_config_json(ExperimentConfig& cfg, const Json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto& fs = fields();
    auto it = std::find_if(fs.begin(), fs.end(), [&](const Field& f) { return f.key == key; });
    if (it == fs.end()) throw ValidationError("config: unknown key '" + key + "'");
    try {
      it->set(cfg, value);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config: bad value for '" + key + "': " + e.what());
    }
  }
}

std::vector<double> t_grid_of(const ExperimentConfig& cfg) {
  return log_grid(cfg.t_max, cfg.t_max * std::pow(10.0, -cfg.decades),
                  cfg.decades * cfg.points_per_decade + 1);
}

Report run(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.command = cfg.command;
  r.config = config_to_json(cfg);
  static const std::map<std::string, std::function<void(const ExperimentConfig&, Report&)>>
      dispatch = {{"beurling", cmd_beurling},       {"sector", cmd_sector},
                  {"rbound", cmd_rbound},           {"r-beurling", cmd_r_beurling},
                  {"cosine", cmd_cosine},           {"zero-two", cmd_zero_two},
                  {"fattorini", cmd_fattorini},     {"interpolate", cmd_interpolate},
                  {"extrapolate", cmd_extrapolate}, {"gaussian", cmd_gaussian},
                  {"maxreg", cmd_maxreg},           {"zoo", cmd_zoo}};
  dispatch.at(cfg.command)(cfg, r);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!cfg.output.empty()) write_atomic(cfg.output, render(r, cfg.format));
  return r;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  CLI::App app{"Numerical regularity checks for matrix semigroups and cosine families"};
  app.set_help_flag("-h,--help", "Print help");

  std::string config_path, p_text, p2_text, p1_text;
  std::vector<std::string> param_items;
  std::vector<std::string> positional;
  app.add_option("command", positional, "Command, e.g. beurling or 'zoo list'")->required();
  app.add_option("--config", config_path, "JSON config file (flags win on conflict)");
  app.add_option("--zoo", cfg.zoo, "Zoo entry name");
  app.add_option("--dim", cfg.dim, "Truncation dimension");
  app.add_option("--param", param_items, "Zoo parameter key=value (repeatable)");
  app.add_option("--matrix", cfg.matrix_path, "Matrix file (dim then re im pairs, row-major)");
  app.add_option("--poly", cfg.poly, "Polynomial coefficients, lowest degree first (JSON)");
  app.add_option("--p", p_text, "Exponent p (inf allowed)");
  app.add_option("--p1", p1_text, "Interpolation endpoint p1");
  app.add_option("--p2", p2_text, "Interpolation endpoint p2");
  app.add_option("--weights", cfg.weights, "'unit' or weights file");
  app.add_option("--t-max", cfg.t_max, "Largest t of the grid");
  app.add_option("--decades", cfg.decades, "Decades spanned by the t grid");
  app.add_option("--points-per-decade", cfg.points_per_decade, "t grid density");
  app.add_option("--zeta", cfg.zeta, "zeta as re im")->expected(2);
  app.add_option("--t0", cfg.t0, "Sector horizon t0");
  app.add_option("--alpha", cfg.alpha_grid, "alpha grid (positive values)");
  app.add_option("--N", cfg.N, "Power N");
  app.add_option("--K", cfg.K, "Shift list K");
  app.add_option("--N-range", cfg.n_range, "N values for extrapolation");
  app.add_option("--mode", cfg.mode, "exact | monte_carlo");
  app.add_option("--mc-samples", cfg.mc_samples, "Monte Carlo sign patterns");
  app.add_option("--exact-cap", cfg.exact_cap, "Largest selection enumerated exactly");
  app.add_option("--budget", cfg.budget, "Random R-bound selections");
  app.add_option("--dims", cfg.dims, "Truncation dims for zero-two");
  app.add_option("--lambda", cfg.lambda, "Laplace parameter (0: automatic)");
  app.add_option("--omega", cfg.omega, "Fattorini shift");
  app.add_option("--n-max", cfg.n_max, "Fattorini terms");
  app.add_option("--t", cfg.t, "Fattorini time");
  app.add_option("--ambient-dim", cfg.ambient_dim, "Spatial dimension of the kernel grid");
  app.add_option("--points", cfg.points, "Kernel grid points per axis");
  app.add_option("--period", cfg.period, "Kernel grid period");
  app.add_option("--kernel-a", cfg.kernel_a, "Gaussian dilation a");
  app.add_option("--kernel-family", cfg.kernel_family, "heat | potential");
  app.add_option("--trials", cfg.trials, "Square-function trials");
  app.add_option("--tau", cfg.tau, "Maximal-regularity horizon");
  app.add_option("--n-time", cfg.n_time, "Initial time steps");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--output", cfg.output, "Output file");
  app.add_option("--format", cfg.format, "json | csv");

  // --config is applied first so that explicit flags overwrite it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ValidationError("cannot read config '" + config_path + "'");
      Json j;
      try {
        j = Json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config '" + config_path + "' is not JSON: " + e.what());
      }
      apply_config_json(cfg, j);
    }
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
    cfg.command = positional.at(0);
    if (cfg.command == "zoo" && positional.size() > 1 && positional[1] != "list") {
      throw ValidationError("unknown zoo subcommand '" + positional[1] + "'");
    }
    if (cfg.command != "zoo" && positional.size() > 1) {
      throw ValidationError("unexpected argument '" + positional[1] + "'");
    }
    for (const auto& item : param_items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw BadParams("expected key=value, got '" + item + "'");
      cfg.params[item.substr(0, eq)] = item.substr(eq + 1);
    }
    if (!p_text.empty()) cfg.p = parse_exponent(p_text);
    if (!p1_text.empty()) cfg.p1 = parse_exponent(p1_text);
    if (!p2_text.empty()) cfg.p2 = parse_exponent(p2_text);

    const Report r = run(cfg);
    if (cfg.output.empty()) {
      if (cfg.command == "zoo") {
        for (const auto& row : r.table.rows()) {
          out << std::left << std::setw(20) << row[0] << std::setw(28) << row[1] << row[2] << "\n";
        }
      } else {
        out << render(r, cfg.format);
      }
    } else {
      out << "wrote " << cfg.output << "\n";
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace semireg
