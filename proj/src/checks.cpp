// Named verification checks behind the `verify` CLI subcommand. Each check
// runs one theory routine at desk-scale parameters and emits report rows;
// `pass` is the one-sided criterion stated with the routine. Acceptance-level
// parameter sets live in the test suite.

#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "maxscore/theory.hpp"

namespace maxscore {

namespace {

DgpSpec reference_spec(int p, std::uint64_t master) {
  DgpSpec spec;
  spec.p = p;
  spec.beta0 = sample_unit_sphere(p, SeedSpec{master, 7});
  spec.covariate_law = CovariateLaw::IsotropicGaussian;
  spec.error_law = ErrorLaw::Gaussian;
  spec.sigma = 1.0;
  return spec;
}

std::string fmt_params(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) out << ";";
    first = false;
    out << k << "=";
    if (v == std::floor(v) && std::abs(v) < 1e15)
      out << static_cast<long long>(v);
    else
      out << v;
  }
  return out.str();
}

std::vector<CheckRow> check_kl_bound(std::uint64_t) {
  const SweepCheck sweep = kl_bound_check();
  return {{"kl-bound", fmt_params({{"grid", 0.005}, {"points", double(sweep.points)}}),
           sweep.worst_margin, 0.0, 0.0, sweep.pass}};
}

std::vector<CheckRow> check_hellinger_bound(std::uint64_t) {
  const SweepCheck sweep = hellinger_bound_check();
  return {{"hellinger-bound", fmt_params({{"grid", 0.005}, {"points", double(sweep.points)}}),
           sweep.worst_margin, 0.0, 0.0, sweep.pass}};
}

std::vector<CheckRow> check_transition_constant(std::uint64_t master) {
  const DgpSpec spec = reference_spec(5, master);
  const std::vector<double> t_grid = {0.02, 0.05, 0.1, 0.15, 0.2};
  const MarginEstimate est = transition_constant_estimate(spec, t_grid, 200000, {master, 1});
  const bool pass = est.fitted_C >= 1.8 && est.fitted_C <= 2.2;
  return {{"transition-constant", fmt_params({{"p", 5}, {"mc", 200000}}), est.fitted_C, 2.0, 0.0,
           pass}};
}

std::vector<CheckRow> check_minimax_margin(std::uint64_t master) {
  std::vector<CheckRow> rows;
  for (double C : {0.5, 1.0}) {
    const MinimaxFamily fam = build_minimax_family_sparse(1000, 65, 8, C, {master, 2});
    const DgpSpec& spec = fam.specs.front();
    const std::vector<double> t_grid = {0.05, 0.1, 0.2};
    const MarginEstimate est = transition_constant_estimate(spec, t_grid, 400000, {master, 3});
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double bound = minimax_margin_constant() * C * t_grid[i];
      rows.push_back({"minimax-margin",
                      fmt_params({{"C", C}, {"t", t_grid[i]}, {"mc", 400000}}), est.prob[i], bound,
                      est.stderr_[i], est.prob[i] <= bound + 3.0 * est.stderr_[i]});
    }
  }
  return rows;
}

std::vector<CheckRow> check_minimax_packing(std::uint64_t master) {
  std::vector<CheckRow> rows;
  const double C = 1.0;
  const MinimaxFamily fam = build_minimax_family_sparse(1000, 65, 8, C, {master, 4});
  double min_dist = 2.0, max_norm_err = 0.0;
  for (std::size_t a = 0; a < fam.betas.size(); ++a) {
    max_norm_err = std::max(max_norm_err, std::abs(fam.betas[a].coords().norm() - 1.0));
    for (std::size_t b = a + 1; b < fam.betas.size(); ++b)
      min_dist = std::min(min_dist, (fam.betas[a].coords() - fam.betas[b].coords()).norm());
  }
  rows.push_back({"minimax-packing", "kind=distance", min_dist, fam.delta / 2.0, 0.0,
                  min_dist >= fam.delta / 2.0});
  rows.push_back({"minimax-packing", "kind=unit-norm", max_norm_err, 1e-12, 0.0,
                  max_norm_err <= 1e-12});
  const double kl_bound = minimax_kl_constant() * std::pow(fam.delta, 3) / (C * C);
  double worst = 0.0, worst_se = 0.0;
  bool pass = true;
  for (std::size_t a = 0; a < fam.betas.size() && a < 5; ++a)
    for (std::size_t b = a + 1; b < fam.betas.size() && b < 5; ++b) {
      const McValue kl = minimax_pairwise_kl_mc(fam.specs[a], fam.specs[b], 100000,
                                                {master, 5 + a * 16 + b});
      if (kl.value > worst) {
        worst = kl.value;
        worst_se = kl.stderr_;
      }
      if (kl.value > kl_bound + 3.0 * kl.stderr_) pass = false;
    }
  rows.push_back({"minimax-packing", "kind=pairwise-kl;mc=100000", worst, kl_bound, worst_se, pass});
  return rows;
}

std::vector<CheckRow> check_cap_bounds(std::uint64_t master) {
  std::vector<CheckRow> rows;
  const std::pair<int, double> combos[] = {{8, 1.0}, {8, 0.5}, {16, 0.5}};
  int k = 0;
  for (const auto& [p, r] : combos) {
    const CapCheck cap = spherical_cap_bounds_check(p, r, 1000000, {master, 6u + k++});
    rows.push_back({"cap-bounds", fmt_params({{"p", double(p)}, {"r", r}, {"mc", 1000000}}),
                    cap.estimate, cap.upper, cap.stderr_, cap.pass});
  }
  return rows;
}

std::vector<CheckRow> check_gv_packing(std::uint64_t master) {
  std::vector<CheckRow> rows;
  const std::pair<int, int> combos[] = {{8, 1}, {64, 8}};
  int k = 0;
  for (const auto& [d, s] : combos) {
    const PackingSet pack = gv_packing(d, s, 1000000, {master, 10u + k++});
    bool weights_ok = true;
    for (const auto& w : pack.codewords) {
      int weight = 0;
      for (auto b : w) weight += b;
      if (weight != s) weights_ok = false;
    }
    const long target = gv_target_cardinality(d, s);
    const bool pass = weights_ok && static_cast<long>(pack.codewords.size()) >= target &&
                      pack.min_pairwise_distance >= s / 2.0;
    rows.push_back({"gv-packing", fmt_params({{"d", double(d)}, {"s", double(s)}}),
                    static_cast<double>(pack.codewords.size()), static_cast<double>(target), 0.0,
                    pass});
  }
  return rows;
}

std::vector<CheckRow> check_wedge_closed_form(std::uint64_t master) {
  std::vector<CheckRow> rows;
  const int p = 5;
  for (int k = 0; k < 3; ++k) {
    const UnitVector b1 = sample_unit_sphere(p, SeedSpec{master, 20u + 2 * k});
    const UnitVector b2 = sample_unit_sphere(p, SeedSpec{master, 21u + 2 * k});
    const double exact = gaussian_wedge_probability(b1, b2);
    const McValue mc = gaussian_wedge_probability_mc(b1, b2, 100000, {master, 30u + k});
    rows.push_back({"wedge-closed-form", fmt_params({{"p", double(p)}, {"pair", double(k)}}),
                    mc.value, exact, mc.stderr_, std::abs(mc.value - exact) <= 3.0 * mc.stderr_});
  }
  return rows;
}

std::vector<CheckRow> check_wedge_lower_bound(std::uint64_t) {
  // arccos(1 - d^2/2)/pi >= d/pi on d in (0, 2]
  double worst = std::numeric_limits<double>::infinity();
  long points = 0;
  for (double d = 0.01; d <= 2.0 + 1e-12; d += 0.01) {
    const double dd = std::min(d, 2.0);
    const double lhs = std::acos(std::clamp(1.0 - dd * dd / 2.0, -1.0, 1.0)) / M_PI;
    worst = std::min(worst, lhs - dd / M_PI);
    ++points;
  }
  return {{"wedge-lower-bound", fmt_params({{"points", double(points)}}), worst, 0.0, 0.0,
           worst >= -1e-12}};
}

std::vector<CheckRow> check_curvature(std::uint64_t master) {
  const DgpSpec spec = reference_spec(5, master);
  const UnitVector orth = orthogonal_direction(spec.beta0, {master, 40});
  std::vector<UnitVector> dirs;
  const std::vector<double> dists = {0.1, 0.2, 0.4, 0.8};
  for (double d : dists) dirs.push_back(direction_at_distance(spec.beta0, orth, d));
  const CurvatureReport report = curvature_check(spec, dirs, 200000, {master, 41});
  std::vector<CheckRow> rows;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    rows.push_back({"curvature", fmt_params({{"dist", dists[i]}, {"mc", 200000}}), e.excess.value,
                    0.0, e.excess.stderr_, e.excess.value > 3.0 * e.excess.stderr_});
  }
  return rows;
}

std::vector<CheckRow> check_rank_ordering(std::uint64_t master) {
  const DgpSpec spec = reference_spec(4, master);
  const RankOrderingReport report = rank_ordering_check(spec, 3, 50, 10000, {master, 50});
  return {{"rank-ordering", fmt_params({{"m", 3}, {"matrices", 50}, {"inner", 10000}}),
           report.concordance_rate, 0.95, 0.0, report.pass}};
}

std::vector<CheckRow> check_multinomial_curvature(std::uint64_t master) {
  const DgpSpec spec = reference_spec(4, master);
  const UnitVector orth = orthogonal_direction(spec.beta0, {master, 60});
  std::vector<UnitVector> dirs;
  const std::vector<double> dists = {0.3, 0.6};
  for (double d : dists) dirs.push_back(direction_at_distance(spec.beta0, orth, d));
  const auto entries = multinomial_curvature_check(spec, 3, dirs, 200000, {master, 61});
  std::vector<CheckRow> rows;
  for (std::size_t i = 0; i < entries.size(); ++i)
    rows.push_back({"multinomial-curvature", fmt_params({{"m", 3}, {"dist", dists[i]}}),
                    entries[i].excess.value, 0.0, entries[i].excess.stderr_,
                    entries[i].excess.value > 3.0 * entries[i].excess.stderr_});
  return rows;
}

using CheckFn = std::function<std::vector<CheckRow>(std::uint64_t)>;

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> table = {
      {"kl-bound", check_kl_bound},
      {"hellinger-bound", check_hellinger_bound},
      {"transition-constant", check_transition_constant},
      {"minimax-margin", check_minimax_margin},
      {"minimax-packing", check_minimax_packing},
      {"cap-bounds", check_cap_bounds},
      {"gv-packing", check_gv_packing},
      {"wedge-closed-form", check_wedge_closed_form},
      {"wedge-lower-bound", check_wedge_lower_bound},
      {"curvature", check_curvature},
      {"rank-ordering", check_rank_ordering},
      {"multinomial-curvature", check_multinomial_curvature},
  };
  return table;
}

}  // namespace

std::vector<std::string> list_checks() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

std::vector<CheckRow> run_check(const std::string& name, std::uint64_t master_seed) {
  for (const auto& [nm, fn] : registry())
    if (nm == name) return fn(master_seed);
  throw std::invalid_argument("unknown check '" + name + "'");
}

std::vector<CheckRow> run_all_checks(std::uint64_t master_seed) {
  std::vector<CheckRow> rows;
  for (const auto& [name, fn] : registry()) {
    auto part = fn(master_seed);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace maxscore
