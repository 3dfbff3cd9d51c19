#include "condlab/experiments.hpp"

#include <cmath>

namespace condlab {

namespace {

Eigen::VectorXd plane_tangent(const DomainGeometry& g) {
  // any unit vector orthogonal to the half-space normal
  Eigen::MatrixXd m(g.n, g.n);
  m.col(0) = g.normal;
  for (int j = 1; j < g.n; ++j) m.col(j) = Eigen::VectorXd::Unit(g.n, j % g.n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd basis = qr.householderQ();
  return basis.col(1);
}

}  // namespace

UnsolvabilityRecord unsolvability_demo(const KernelSpec& spec, const DomainGeometry& half_space,
                                       double depth, double radius, int k_max, int resolution,
                                       std::uint64_t seed) {
  if (half_space.kind != GeometryKind::half_space)
    throw input_error("unsolvability_demo: geometry must be a half-space");
  if (!(depth > 0.0) || !(radius > 0.0) || radius >= depth)
    throw input_error("unsolvability_demo: need 0 < radius < depth");
  if (k_max < 1) throw input_error("unsolvability_demo: k_max must be >= 1");

  GreenKernelEngine engine(spec, half_space, 400, seed + 11);
  const Eigen::VectorXd axis = plane_tangent(half_space);
  const Eigen::VectorXd foot = half_space.offset * half_space.normal;
  const Eigen::VectorXd lift = (half_space.offset + depth) * half_space.normal - foot;

  UnsolvabilityRecord rec;
  double start = 0.0;
  double per_unit = 2.0 * (std::log(2.0 * depth / radius) + 1.0);  // capacity cost guess
  double prev_weak = std::numeric_limits<double>::infinity();
  bool bound_ok = true;
  bool monotone = true;

  for (int k = 1; k <= k_max; ++k) {
    double length = std::max(1.05 * k * per_unit, 2.0 * depth);
    EquilibriumResult eq;
    PointCloud cloud;
    double capacity = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      CylinderSet cyl{foot + lift + start * axis, axis, length, radius};
      cloud = sample_set(AnalyticSet{cyl}, resolution, seed + 97 * k + attempt);
      eq = green_equilibrium(engine, cloud);
      capacity = eq.capacity;
      if (capacity >= 1.02 * k && capacity <= 1.6 * k) break;
      const double factor = std::clamp(1.1 * k / std::max(capacity, 1e-12), 0.5, 3.0);
      length *= factor;
    }
    if (capacity < static_cast<double>(k))
      throw convergence_error("unsolvability_demo: slice capacity below k", capacity);
    per_unit = length / capacity;

    DiscreteMeasure nu(eq.gamma.cloud, eq.gamma.masses / capacity);
    const double green_norm_sq = eq.energy / (capacity * capacity);
    // sweep onto an F-cloud focused under the receding slice; the shared
    // engine cloud is centered near the origin and too sparse out here
    const Eigen::VectorXd focus =
        foot + (start + 0.5 * length) * axis;
    const PointCloud f_local =
        half_space.f_carrier_cloud(spec, 2 * resolution, seed + 31 * k, focus);
    Eigen::VectorXd swept_masses = Eigen::VectorXd::Zero(f_local.size());
    for (int i = 0; i < nu.size(); ++i) {
      if (nu.masses[i] <= 0.0) continue;
      swept_masses += balayage_closed_form(spec, half_space, nu.cloud.point(i), nu.masses[i],
                                           f_local, seed + 3)
                          .swept.masses;
    }
    BalayageResult sweep;
    sweep.swept = DiscreteMeasure(f_local, std::move(swept_masses));
    sweep.mass_in = nu.total_mass();
    sweep.mass_out = sweep.swept.total_mass();
    const double weak_objective =
        standard_energy(spec, SignedCondenserMeasure{nu, sweep.swept},
                        DiagonalPolicy::patch()).value;

    rec.steps.push_back({k, start, length, capacity, green_norm_sq, weak_objective});
    if (green_norm_sq > 1.0 / k + 1e-9) bound_ok = false;
    if (weak_objective > prev_weak * 1.01) monotone = false;
    prev_weak = weak_objective;
    start += length + 2.0 * depth;
  }
  rec.bound_satisfied = bound_ok;
  rec.monotone = monotone;
  return rec;
}

ContinuityRecord continuity_experiment(const CondenserProblem& limit_problem,
                                       const std::vector<PointCloud>& a_clouds,
                                       const std::vector<Constraint>& sigmas) {
  const size_t steps = std::max(a_clouds.size(), sigmas.size());
  if (steps == 0) throw input_error("continuity_experiment: empty family");
  if (!a_clouds.empty() && !sigmas.empty() && a_clouds.size() != sigmas.size())
    throw input_error("continuity_experiment: family length mismatch");

  // nestedness: on a shared cloud the constraints must decrease toward
  // the limit constraint
  if (a_clouds.empty() && !sigmas.empty() && !limit_problem.sigma.is_infinite()) {
    const Eigen::VectorXd& limit_masses = limit_problem.sigma.sigma().masses;
    const Eigen::VectorXd* prev = nullptr;
    for (const Constraint& c : sigmas) {
      if (c.is_infinite()) continue;
      const Eigen::VectorXd& m = c.sigma().masses;
      if (m.size() != limit_masses.size() || (m.array() < limit_masses.array() - 1e-9).any())
        throw input_error("continuity_experiment: family not nested above the limit");
      if (prev && (m.array() > prev->array() + 1e-9).any())
        throw input_error("continuity_experiment: family not decreasing");
      prev = &m;
    }
  }

  GreenKernelEngine engine(limit_problem.spec, limit_problem.geometry,
                           limit_problem.f_resolution, limit_problem.seed + 101);
  SolveReport limit_report = solve_green_gauss(limit_problem, engine);
  const Eigen::MatrixXd g_limit =
      engine.matrix(limit_problem.a_cloud, surface_mollifier(limit_problem.a_cloud));
  const double limit_norm_sq =
      limit_report.lambda_plus.masses.dot(g_limit * limit_report.lambda_plus.masses);

  ContinuityRecord rec;
  rec.limit_objective = limit_report.objective_green;
  rec.limit_norm = std::sqrt(std::max(limit_norm_sq, 0.0));

  double prev_obj = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  bool all_converged = limit_report.converged;
  for (size_t i = 0; i < steps; ++i) {
    CondenserProblem p = limit_problem;
    if (!a_clouds.empty()) p.a_cloud = a_clouds[i];
    if (!sigmas.empty()) p.sigma = sigmas[i];
    SolveReport rep = solve_green_gauss(p, engine);

    double dist_sq;
    if (p.a_cloud.points == limit_problem.a_cloud.points) {
      const Eigen::VectorXd diff = rep.lambda_plus.masses - limit_report.lambda_plus.masses;
      dist_sq = diff.dot(g_limit * diff);
    } else {
      const Eigen::MatrixXd g_k = engine.matrix(p.a_cloud, surface_mollifier(p.a_cloud));
      const Eigen::MatrixXd cross = engine.matrix(p.a_cloud, limit_problem.a_cloud);
      dist_sq = rep.lambda_plus.masses.dot(g_k * rep.lambda_plus.masses) + limit_norm_sq -
                2.0 * rep.lambda_plus.masses.dot(cross * limit_report.lambda_plus.masses);
    }

    ContinuityStep step;
    step.k = static_cast<int>(i) + 1;
    step.objective = rep.objective_green;
    step.gap = std::abs(rep.objective_green - rec.limit_objective);
    step.lambda_distance = std::sqrt(std::max(dist_sq, 0.0));
    step.converged = rep.converged;
    rec.steps.push_back(step);

    if (rep.objective_green < prev_obj - 1e-9 * std::max(1.0, std::abs(prev_obj)))
      monotone = false;
    all_converged = all_converged && rep.converged;
    prev_obj = rep.objective_green;
  }
  rec.monotone = monotone;
  rec.all_converged = all_converged;
  return rec;
}

RefinementRecord weak_vs_standard_refinement_study(
    const std::function<CondenserProblem(int)>& make_problem,
    const std::vector<int>& resolutions) {
  if (resolutions.empty())
    throw input_error("weak_vs_standard_refinement_study: no resolutions given");
  RefinementRecord rec;
  for (int res : resolutions) {
    CondenserProblem p = make_problem(res);
    GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed + 101);
    SolveReport rep = solve_green_gauss(p, engine);
    SignedCondenserMeasure lambda_dot = assemble_condenser_solution(p, engine, rep);

    RefinementRow row;
    row.resolution = res;
    row.e_green = green_energy(engine, rep.lambda_plus, DiagonalPolicy::patch()).value;
    row.e_alpha_plus = standard_energy(p.spec, rep.lambda_plus, DiagonalPolicy::patch()).value;
    row.e_alpha_dot = standard_energy(p.spec, lambda_dot, DiagonalPolicy::patch()).value;
    rec.rows.push_back(row);
  }
  return rec;
}

}  // namespace condlab
