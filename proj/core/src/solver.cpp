#include "condlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "condlab/nnqp.hpp"

namespace condlab {

namespace {

bool measure_empty(const DiscreteMeasure& m) { return m.size() == 0 || m.is_zero(); }

bool field_free(const SignedCondenserMeasure& theta) {
  return measure_empty(theta.plus) && measure_empty(theta.minus);
}

struct KktLevels {
  double level = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

KktLevels extract_levels(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& d) {
  const int n = static_cast<int>(w.size());
  KktLevels out;

  std::vector<int> free_atoms;
  for (int i = 0; i < n; ++i) {
    const double eps = 1e-9 * std::max(1.0, u[i]);
    if (w[i] > eps && w[i] < u[i] - eps) free_atoms.push_back(i);
  }

  if (!free_atoms.empty()) {
    // mass-weighted median of the potential over free atoms
    std::sort(free_atoms.begin(), free_atoms.end(),
              [&](int a, int b) { return d[a] < d[b]; });
    double total = 0.0;
    for (int i : free_atoms) total += w[i];
    double acc = 0.0;
    out.level = d[free_atoms.back()];
    for (int i : free_atoms) {
      acc += w[i];
      if (acc >= 0.5 * total) {
        out.level = d[i];
        break;
      }
    }
  } else {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double eps = 1e-9 * std::max(1.0, u[i]);
      if (w[i] >= u[i] - eps) hi = std::max(hi, d[i]);
      if (w[i] <= eps) lo = std::min(lo, d[i]);
    }
    if (std::isfinite(hi) && std::isfinite(lo))
      out.level = 0.5 * (hi + lo);
    else if (std::isfinite(hi))
      out.level = hi;
    else if (std::isfinite(lo))
      out.level = lo;
    else
      out.level = d.mean();
  }

  const double scale = std::max(1.0, std::abs(out.level));
  for (int i = 0; i < n; ++i) {
    const double eps = 1e-9 * std::max(1.0, u[i]);
    if (w[i] < u[i] - eps) out.lower = std::max(out.lower, (out.level - d[i]) / scale);
    if (w[i] > eps) out.upper = std::max(out.upper, (d[i] - out.level) / scale);
  }
  out.lower = std::max(out.lower, 0.0);
  out.upper = std::max(out.upper, 0.0);
  return out;
}

Eigen::VectorXd box_bounds(const CondenserProblem& p) {
  if (p.sigma.is_infinite()) return Eigen::VectorXd::Constant(p.a_cloud.size(), 2.0);
  return p.sigma.sigma().masses;
}

}  // namespace

void CondenserProblem::validate() const {
  if (a_cloud.size() == 0) throw input_error("CondenserProblem: empty A-cloud");
  if (!(tol > 0.0)) throw input_error("CondenserProblem: tolerance must be positive");
  if (f_resolution <= 0) throw input_error("CondenserProblem: f_resolution must be positive");
  if (a_cloud.dim() != spec.n) throw input_error("CondenserProblem: A-cloud dimension mismatch");
  if (geometry.n != spec.n) throw input_error("CondenserProblem: geometry dimension mismatch");
  for (int i = 0; i < a_cloud.size(); ++i)
    if (!geometry.contains(a_cloud.point(i)))
      throw input_error("CondenserProblem: A-atom outside the domain");
  if (!sigma.is_infinite()) {
    const DiscreteMeasure& s = sigma.sigma();
    if (s.size() != a_cloud.size() || s.cloud.points != a_cloud.points)
      throw input_error("CondenserProblem: sigma must live on the A-cloud");
    if (!(s.total_mass() > 1.0))
      throw input_error("CondenserProblem: infeasible constraint, sigma total mass <= 1");
  }
  for (const DiscreteMeasure* part : {&theta.plus, &theta.minus}) {
    for (int i = 0; i < part->size(); ++i)
      if (part->masses[i] > 0.0 && !geometry.contains(part->cloud.point(i)))
        throw input_error("CondenserProblem: field atom outside the domain");
  }
}

Eigen::VectorXd green_field_vector(const CondenserProblem& p, const GreenKernelEngine& engine,
                                   const PointCloud& at) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(at.size());
  if (!measure_empty(p.theta.plus))
    b += engine.matrix(at, p.theta.plus.cloud) * p.theta.plus.masses;
  if (!measure_empty(p.theta.minus))
    b -= engine.matrix(at, p.theta.minus.cloud) * p.theta.minus.masses;
  return b;
}

SolveReport solve_green_gauss(const CondenserProblem& p, const GreenKernelEngine& engine) {
  p.validate();
  const Eigen::MatrixXd g = engine.matrix(p.a_cloud, surface_mollifier(p.a_cloud));
  const Eigen::VectorXd b = green_field_vector(p, engine, p.a_cloud);
  const Eigen::VectorXd u = box_bounds(p);
  if (u.sum() < 1.0)
    throw input_error("solve_green_gauss: infeasible constraint, sigma total mass < 1");

  QpResult qp = box_simplex_qp(g, b, u, 1e-10, 4000);
  const Eigen::VectorXd d = g * qp.x + b;
  const KktLevels levels = extract_levels(qp.x, u, d);

  SolveReport rep;
  rep.lambda_plus = DiscreteMeasure(p.a_cloud, qp.x);
  rep.objective_green = qp.x.dot(g * qp.x) + 2.0 * b.dot(qp.x);
  rep.w = levels.level;
  rep.kkt_lower_violation = levels.lower;
  rep.kkt_upper_violation = levels.upper;
  rep.iterations = qp.iterations;
  rep.qp_converged = qp.converged;
  rep.converged = qp.converged && levels.lower <= p.tol && levels.upper <= p.tol;
  return rep;
}

SolveReport solve_green_gauss(const CondenserProblem& p) {
  GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed + 101);
  return solve_green_gauss(p, engine);
}

SignedCondenserMeasure assemble_condenser_solution(const CondenserProblem& p,
                                                   const GreenKernelEngine& engine,
                                                   SolveReport& report) {
  BalayageResult sweep = engine.sweep(report.lambda_plus);
  report.lambda_minus = sweep.swept;

  SignedCondenserMeasure lambda_dot{report.lambda_plus, report.lambda_minus};
  SignedCondenserMeasure field;
  if (!field_free(p.theta)) {
    DiscreteMeasure plus_swept = engine.sweep(p.theta.plus).swept;
    DiscreteMeasure minus_swept = engine.sweep(p.theta.minus).swept;
    field.plus = concat_measures(p.theta.plus, minus_swept);
    field.minus = concat_measures(p.theta.minus, plus_swept);
  }
  report.objective_weak = gauss_integral_standard(p.spec, lambda_dot, field);
  return lambda_dot;
}

OptimalityCertificate verify_optimality(const CondenserProblem& p,
                                        const GreenKernelEngine& engine,
                                        const SolveReport& report, int exterior_checks) {
  OptimalityCertificate cert;
  const Eigen::MatrixXd g = engine.matrix(p.a_cloud, surface_mollifier(p.a_cloud));
  const Eigen::VectorXd b = green_field_vector(p, engine, p.a_cloud);
  const Eigen::VectorXd u = box_bounds(p);
  const Eigen::VectorXd d = g * report.lambda_plus.masses + b;
  const KktLevels levels = extract_levels(report.lambda_plus.masses, u, d);
  cert.w = levels.level;
  cert.lower_violation = levels.lower;
  cert.upper_violation = levels.upper;

  if (field_free(p.theta) && report.lambda_minus.size() > 0 && cert.w > 0.0) {
    // field-free global bound: the signed potential stays below the level
    // everywhere, checked in F, at far-field points and inside D
    SignedCondenserMeasure lambda_dot{report.lambda_plus, report.lambda_minus};
    Eigen::VectorXd focus = Eigen::VectorXd::Zero(p.spec.n);
    double total = report.lambda_plus.total_mass();
    for (int i = 0; i < report.lambda_plus.size(); ++i)
      focus += report.lambda_plus.masses[i] * report.lambda_plus.cloud.point(i);
    if (total > 0.0) focus /= total;

    PointCloud checks = f_check_points(p.geometry, focus, exterior_checks / 2, p.seed + 5);
    std::mt19937_64 rng(p.seed + 6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    PointCloud far;
    far.points.resize(exterior_checks - checks.size(), p.spec.n);
    far.weights = Eigen::VectorXd::Ones(far.points.rows());
    const double scale = std::max(p.geometry.scale(), 1.0);
    for (int i = 0; i < far.points.rows(); ++i) {
      Eigen::VectorXd dir(p.spec.n);
      do {
        for (int c = 0; c < p.spec.n; ++c) dir[c] = gauss(rng);
      } while (dir.norm() < 1e-12);
      dir.normalize();
      const double r = scale * (5.0 + 45.0 * unif(rng));
      far.points.row(i) = (focus + r * dir).transpose();
    }
    checks = PointCloud::concat(checks, far);

    double worst = 0.0;
    for (int i = 0; i < checks.size(); ++i) {
      double pot = 0.0;
      try {
        pot = potential_at(p.spec, lambda_dot, checks.point(i));
      } catch (const singular_evaluation&) {
        continue;
      }
      worst = std::max(worst, (pot - cert.w) / cert.w);
    }
    cert.exterior_violation = worst;
  }

  double min_clearance = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p.a_cloud.size(); ++i)
    min_clearance =
        std::min(min_clearance, p.geometry.signed_boundary_distance(p.a_cloud.point(i)));
  cert.sufficient = min_clearance > 0.02 * p.geometry.scale();

  cert.passed = cert.lower_violation <= p.tol && cert.upper_violation <= p.tol &&
                cert.exterior_violation <= 0.02;
  return cert;
}

SupportCheckResult support_identity_check(const CondenserProblem& p, const SolveReport& report) {
  SupportCheckResult res;
  if (!field_free(p.theta) || p.spec.is_newtonian() || p.sigma.is_infinite()) return res;
  const DiscreteMeasure& s = p.sigma.sigma();
  const double threshold = 1e-8 * report.lambda_plus.masses.maxCoeff();
  for (int i = 0; i < s.size(); ++i)
    if (s.masses[i] > 0.0 && report.lambda_plus.masses[i] <= threshold)
      res.offending.push_back(i);
  res.status = res.offending.empty() ? SupportCheckStatus::passed : SupportCheckStatus::failed;
  return res;
}

}  // namespace condlab
