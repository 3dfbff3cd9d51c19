#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "condlab/experiments.hpp"
#include "condlab/nnqp.hpp"
#include "condlab/scenario.hpp"

using namespace condlab;

namespace {

int failures = 0;

void report(int idx, bool ok, const std::string& what) {
  std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", idx, what.c_str());
  if (!ok) ++failures;
}

Eigen::Vector3d v3(double x, double y, double z) { return Eigen::Vector3d(x, y, z); }

// coarse-to-fine pairwise mass-transfer descent over the feasible polytope
double brute_force(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, const Eigen::VectorXd& u) {
  const int n = (int)u.size();
  auto eval = [&](const Eigen::VectorXd& w) { return w.dot(g * w) + 2.0 * b.dot(w); };
  Eigen::VectorXd best = project_box_simplex(Eigen::VectorXd::Constant(n, 1.0 / n), u);
  double bv = eval(best);
  double step = 0.25;
  while (step > 5e-4) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          for (double s : {step, step / 3.0}) {
            Eigen::VectorXd w = best;
            const double t = std::min({s, u[i] - w[i], w[j]});
            if (t <= 0) continue;
            w[i] += t;
            w[j] -= t;
            const double v = eval(w);
            if (v < bv - 1e-15) {
              bv = v;
              best = w;
              improved = true;
            }
          }
        }
    }
    step *= 0.5;
  }
  return bv;
}

void criterion_1_balayage(const KernelSpec& spec) {
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  PointCloud f = ball.f_carrier_cloud(spec, 500, 19, v3(0, 0, 0));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    Eigen::Vector3d y;
    do {
      y = Eigen::Vector3d(u(rng), u(rng), u(rng));
    } while (y.norm() > 0.9);
    BalayageResult r = balayage_closed_form(spec, ball, y, 1.0, f);
    worst = std::max(worst, r.potential_residual);
  }
  BalayageResult center = balayage_closed_form(spec, ball, v3(0, 0, 0), 1.0, f);
  const bool ok = worst < 0.02 && std::abs(center.swept.total_mass() - 1.0) < 0.01;
  std::ostringstream msg;
  msg << "balayage matches potentials on the complement (worst residual " << worst
      << ", center swept mass " << center.swept.total_mass() << ")";
  report(1, ok, msg.str());
}

void criterion_2_mass_dichotomy(const KernelSpec& spec) {
  DomainGeometry ext = DomainGeometry::make_ball_exterior(v3(0, 0, 0), 1.0);
  PointCloud f_ext = ext.f_carrier_cloud(spec, 280, 19, v3(2, 0, 0));
  BalayageResult onto_ball = balayage_closed_form(spec, ext, v3(2, 0, 0), 1.0, f_ext);

  DomainGeometry hs = DomainGeometry::make_half_space(v3(0, 0, 1), 0.0);
  PointCloud f_hs = hs.f_carrier_cloud(spec, 280, 19, v3(0, 0, 1));
  BalayageResult onto_plane = balayage_closed_form(spec, hs, v3(0, 0, 1), 1.0, f_hs);

  const double compact_mass = onto_ball.swept.total_mass();
  const double plane_mass = onto_plane.swept.total_mass();
  const bool ok = std::abs(compact_mass - 0.5) < 0.01 && std::abs(plane_mass - 1.0) < 0.01;
  std::ostringstream msg;
  msg << "mass dichotomy: compact target keeps " << compact_mass
      << " of the charge, unbounded target keeps " << plane_mass;
  report(2, ok, msg.str());
}

void criterion_3_green_identity(const KernelSpec& spec) {
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  GreenKernelEngine engine(spec, ball);
  PointCloud c = sample_sphere_surface(3, v3(0, 0, 0), 0.5, 260, 13);
  DiscreteMeasure nu = DiscreteMeasure::from_weights(c, 1.0);
  EnergyReport e_green = green_energy(engine, nu, DiagonalPolicy::patch());
  BalayageResult swept = engine.sweep(nu);
  SignedCondenserMeasure pair{nu, swept.swept};
  EnergyReport e_pair = standard_energy(spec, pair, DiagonalPolicy::patch());
  const double rel = std::abs(e_green.value - e_pair.value) / e_green.value;
  const bool ok = rel < 0.05;
  std::ostringstream msg;
  msg << "domain energy equals the whole-space energy of the charge minus its sweep (E_g "
      << e_green.value << " vs " << e_pair.value << ", rel diff " << rel << ")";
  report(3, ok, msg.str());
}

void criterion_4_capacity(const KernelSpec& spec) {
  bool ok = true;
  std::ostringstream msg;
  msg << "sphere capacities:";
  const double unit = riesz_capacity(spec, sample_sphere_surface(3, v3(0, 0, 0), 1.0, 260, 3));
  ok = ok && std::abs(unit - 1.0) < 0.02;
  msg << " c(S_1) = " << unit;
  for (double r : {0.5, 2.0}) {
    const double c = riesz_capacity(spec, sample_sphere_surface(3, v3(0, 0, 0), r, 260, 3));
    ok = ok && std::abs(c / (r * unit) - 1.0) < 0.02;
    msg << ", c(S_" << r << ") = " << c;
  }
  report(4, ok, msg.str() + " (linear scaling)");
}

void criterion_5_wiener(const KernelSpec& spec) {
  ThinnessVerdict power =
      wiener_thinness_diagnostic(spec, RotationProfile{false, 1.0}, 2.0, 10, 200, 77, 2);
  ThinnessVerdict exp1 =
      wiener_thinness_diagnostic(spec, RotationProfile{true, 1.0}, 2.0, 10, 200, 77, 2);
  ThinnessVerdict exp2 =
      wiener_thinness_diagnostic(spec, RotationProfile{true, 2.0}, 2.0, 10, 200, 77, 2);
  const bool ok = power.classified && power.classification == ThinnessClass::not_thin &&
                  exp1.classified &&
                  exp1.classification == ThinnessClass::thin_infinite_capacity &&
                  exp2.classified && exp2.classification == ThinnessClass::finite_capacity;
  std::ostringstream msg;
  msg << "rotation-body thinness classes: power horn not thin (slope " << power.wiener_slope
      << "), exponential horn thin with infinite capacity (" << exp1.wiener_slope
      << "), squared-exponential horn finite capacity (" << exp2.capacity_slope << ")";
  report(5, ok, msg.str());
}

void criterion_6_brute_force(const KernelSpec& spec) {
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  GreenKernelEngine engine(spec, ball);
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_obj = 0.0, worst_kkt = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int m = 2 + (int)(u(rng) * 3);
    PointCloud c;
    c.points.resize(m, 3);
    c.weights = Eigen::VectorXd::Ones(m);
    for (int i = 0; i < m; ++i) {
      Eigen::Vector3d x;
      do {
        x = Eigen::Vector3d(2 * u(rng) - 1, 2 * u(rng) - 1, 2 * u(rng) - 1);
      } while (x.norm() > 0.85);
      c.points.row(i) = x.transpose();
    }
    if (c.min_separation() < 0.05) {
      --t;
      continue;
    }
    CondenserProblem p;
    p.spec = spec;
    p.geometry = ball;
    p.a_cloud = c;
    Eigen::VectorXd bound = Eigen::VectorXd::Constant(m, 2.0);
    if (u(rng) < 0.5) {
      Eigen::VectorXd sm(m);
      for (int i = 0; i < m; ++i) sm[i] = 0.3 + u(rng);
      if (sm.sum() <= 1.1) sm *= 1.2 / sm.sum();
      p.sigma = Constraint::from_measure(DiscreteMeasure(c, sm));
      bound = sm;
    }
    SolveReport rep = solve_green_gauss(p, engine);
    const Eigen::MatrixXd g = engine.matrix(c, surface_mollifier(c));
    const double bv = brute_force(g, Eigen::VectorXd::Zero(m), bound);
    worst_obj = std::max(worst_obj, std::abs(rep.objective_green - bv));
    worst_kkt = std::max({worst_kkt, rep.kkt_lower_violation, rep.kkt_upper_violation});
  }
  const bool ok = worst_obj < 1e-4 && worst_kkt < 1e-6;
  std::ostringstream msg;
  msg << "solver vs exhaustive transfer search on 50 small instances (worst objective gap "
      << worst_obj << ", worst KKT violation " << worst_kkt << ")";
  report(6, ok, msg.str());
}

void criterion_7_reduction(const KernelSpec& spec) {
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  GreenKernelEngine engine(spec, ball);
  PointCloud a = sample_sphere_surface(3, v3(0, 0, 0), 0.5, 220, 1);
  CondenserProblem p;
  p.spec = spec;
  p.geometry = ball;
  p.a_cloud = a;
  SolveReport rep = solve_green_gauss(p, engine);
  EquilibriumResult eq = green_equilibrium(engine, a);
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double ref = eq.gamma.masses[i] / eq.capacity;
    if (ref > 1e-8)
      worst = std::max(worst, std::abs(rep.lambda_plus.masses[i] - ref) / ref);
  }
  assemble_condenser_solution(p, engine, rep);
  const double bridge = std::abs(rep.objective_weak - rep.objective_green) / rep.objective_green;
  const bool ok = worst < 0.02 && bridge < 0.05;
  std::ostringstream msg;
  msg << "unconstrained field-free minimizer is the normalized equilibrium measure (worst "
         "atomwise "
      << worst << ", objective bridge " << bridge << ")";
  report(7, ok, msg.str());
}

void criterion_8_lebesgue(const KernelSpec& spec) {
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  PointCloud a = sample_ball_volume(3, v3(0, 0, 0), 1.0, 240, 7);
  CondenserProblem p;
  p.spec = spec;
  p.geometry = ball;
  p.a_cloud = a;
  p.sigma = Constraint::from_measure(DiscreteMeasure(a, a.weights));
  GreenKernelEngine engine(spec, ball);
  SolveReport rep = solve_green_gauss(p, engine);
  OptimalityCertificate cert = verify_optimality(p, engine, rep);
  const bool ok = rep.converged && cert.passed && is_dominated(rep.lambda_plus, p.sigma, 1e-9);
  std::ostringstream msg;
  msg << "volume-bounded plate touching the boundary everywhere still solves (objective "
      << rep.objective_green << ", certificate " << (cert.passed ? "passed" : "failed") << ")";
  report(8, ok, msg.str());
}

void criterion_9_unsolvability(const KernelSpec& spec) {
  DomainGeometry hs = DomainGeometry::make_half_space(v3(0, 0, 1), 0.0);
  UnsolvabilityRecord rec = unsolvability_demo(spec, hs, 1.0, 0.3, 6, 240, 5);
  bool bound = rec.bound_satisfied;
  const double final_weak = rec.steps.empty() ? 1e9 : rec.steps.back().weak_objective;
  const bool ok = bound && rec.monotone && final_weak < 0.2;
  std::ostringstream msg;
  msg << "receding-cylinder family drives the objective down (norms below 1/k: "
      << (bound ? "yes" : "no") << ", monotone: " << (rec.monotone ? "yes" : "no")
      << ", final value " << final_weak << ")";
  report(9, ok, msg.str());
}

void criterion_10_continuity(const KernelSpec& spec) {
  DomainGeometry ball = DomainGeometry::make_ball(v3(0, 0, 0), 1.0);
  CondenserProblem limit;
  limit.spec = spec;
  limit.geometry = ball;
  limit.a_cloud = sample_ball_volume(3, v3(0, 0, 0), 1.0, 240, 4);
  limit.seed = 4;
  limit.sigma = Constraint::from_measure(DiscreteMeasure::from_weights(limit.a_cloud, 3.0));
  std::vector<Constraint> sigmas;
  for (int k = 1; k <= 8; ++k) {
    DiscreteMeasure s = limit.sigma.sigma();
    s.masses *= 1.0 + 1.0 / k;
    sigmas.push_back(Constraint::from_measure(std::move(s)));
  }
  ContinuityRecord rec = continuity_experiment(limit, {}, sigmas);
  const ContinuityStep& last = rec.steps.back();
  const double gap_rel = last.gap / rec.limit_objective;
  const double dist_rel = last.lambda_distance / rec.limit_norm;
  const bool ok =
      rec.all_converged && rec.monotone && gap_rel < 0.02 && dist_rel < 0.05;
  std::ostringstream msg;
  msg << "loosened constraints converge to the limit problem (final gap " << gap_rel * 100
      << "% of the objective, minimizer distance " << dist_rel * 100 << "% of its norm)";
  report(10, ok, msg.str());
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

void criterion_11_reproducibility() {
  const std::filesystem::path scenario_path =
      std::filesystem::path(CONDLAB_SCENARIO_DIR) / "ball_condenser.scenario";
  const auto base = std::filesystem::temp_directory_path() / "condlab_acceptance_repro";
  std::filesystem::remove_all(base);
  RunOptions opt_a, opt_b;
  opt_a.out_dir = (base / "a").string();
  opt_b.out_dir = (base / "b").string();
  const int code_a = run_scenario(parse_scenario_file(scenario_path), opt_a);
  const int code_b = run_scenario(parse_scenario_file(scenario_path), opt_b);

  bool identical = code_a == 0 && code_b == 0;
  int compared = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), base / "a");
    if (rel.filename() == "manifest.json") continue;  // carries wall-clock timing
    identical = identical && same_bytes(entry.path(), base / "b" / rel);
    ++compared;
  }
  const bool ok = identical && compared >= 3;
  std::ostringstream msg;
  msg << "two runs with the same seed give byte-identical artifacts (" << compared
      << " files compared)";
  report(11, ok, msg.str());
  std::filesystem::remove_all(base);
}

}  // namespace

int main() {
  KernelSpec spec(2.0, 3);
  criterion_1_balayage(spec);
  criterion_2_mass_dichotomy(spec);
  criterion_3_green_identity(spec);
  criterion_4_capacity(spec);
  criterion_5_wiener(spec);
  criterion_6_brute_force(spec);
  criterion_7_reduction(spec);
  criterion_8_lebesgue(spec);
  criterion_9_unsolvability(spec);
  criterion_10_continuity(spec);
  criterion_11_reproducibility();
  return failures == 0 ? 0 : 1;
}
