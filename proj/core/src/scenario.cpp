#include "condlab/scenario.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace condlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& value, const std::string& key) {
  std::istringstream in(value);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.empty() || !in.eof())
    throw scenario_error("input_error", "scenario: cannot parse numbers for key " + key);
  return out;
}

double parse_one(const std::string& value, const std::string& key) {
  const std::vector<double> v = parse_doubles(value, key);
  if (v.size() != 1)
    throw scenario_error("input_error", "scenario: key " + key + " expects one number");
  return v[0];
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<int>(v.size()));
}

void apply_key(Scenario& s, const std::string& section, const std::string& key,
               const std::string& value) {
  auto bad = [&]() -> scenario_error {
    return scenario_error("input_error",
                          "scenario: unknown key '" + key + "' in section [" + section + "]");
  };
  if (section.empty()) {
    if (key == "name")
      s.name = value;
    else if (key == "seed")
      s.seed = static_cast<std::uint64_t>(parse_one(value, key));
    else if (key == "tol")
      s.tol = parse_one(value, key);
    else
      throw bad();
  } else if (section == "kernel") {
    if (key == "alpha")
      s.alpha = parse_one(value, key);
    else if (key == "n")
      s.n = static_cast<int>(parse_one(value, key));
    else
      throw bad();
  } else if (section == "geometry") {
    if (key == "kind")
      s.geometry_kind = value;
    else if (key == "center")
      s.center = to_vector(parse_doubles(value, key));
    else if (key == "radius")
      s.radius = parse_one(value, key);
    else if (key == "normal")
      s.normal = to_vector(parse_doubles(value, key));
    else if (key == "offset")
      s.offset = parse_one(value, key);
    else if (key == "family")
      s.profile_family = value;
    else if (key == "s")
      s.profile_s = parse_one(value, key);
    else
      throw bad();
  } else if (section == "plate") {
    if (key == "sampler")
      s.plate_sampler = value;
    else if (key == "center")
      s.plate_center = to_vector(parse_doubles(value, key));
    else if (key == "radius")
      s.plate_radius = parse_one(value, key);
    else if (key == "resolution")
      s.plate_resolution = static_cast<int>(parse_one(value, key));
    else
      throw bad();
  } else if (section == "constraint") {
    if (key == "kind")
      s.constraint_kind = value;
    else if (key == "total")
      s.constraint_total = parse_one(value, key);
    else
      throw bad();
  } else if (section == "field") {
    if (key == "atom") {
      const std::vector<double> v = parse_doubles(value, key);
      if (static_cast<int>(v.size()) != s.n + 1)
        throw scenario_error("input_error", "scenario: field atom expects n coords plus a mass");
      s.field_atoms.emplace_back(to_vector({v.begin(), v.end() - 1}), v.back());
    } else {
      throw bad();
    }
  } else if (section == "experiment") {
    if (key == "kind")
      s.experiment = value;
    else if (key == "q")
      s.q = parse_one(value, key);
    else if (key == "k_max")
      s.k_max = static_cast<int>(parse_one(value, key));
    else if (key == "slice_resolution")
      s.slice_resolution = static_cast<int>(parse_one(value, key));
    else if (key == "steps")
      s.continuity_steps = static_cast<int>(parse_one(value, key));
    else if (key == "resolutions") {
      s.resolutions.clear();
      for (double v : parse_doubles(value, key)) s.resolutions.push_back(static_cast<int>(v));
    } else if (key == "depth")
      s.depth = parse_one(value, key);
    else if (key == "radius")
      s.cylinder_radius = parse_one(value, key);
    else if (key == "f_resolution")
      s.f_resolution = static_cast<int>(parse_one(value, key));
    else
      throw bad();
  } else {
    throw scenario_error("input_error", "scenario: unknown section [" + section + "]");
  }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw scenario_error("input_error", "scenario: expected key = value, got: " + line);
    apply_key(s, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return s;
}

Scenario parse_scenario_json(const nlohmann::json& j) {
  Scenario s;
  auto get = [](const nlohmann::json& obj, const char* key, auto fallback) {
    using T = decltype(fallback);
    return obj.contains(key) ? obj.at(key).get<T>() : fallback;
  };
  try {
    s.name = get(j, "name", s.name);
    s.seed = get(j, "seed", s.seed);
    s.tol = get(j, "tol", s.tol);
    if (j.contains("kernel")) {
      s.alpha = get(j.at("kernel"), "alpha", s.alpha);
      s.n = get(j.at("kernel"), "n", s.n);
    }
    if (j.contains("geometry")) {
      const auto& g = j.at("geometry");
      s.geometry_kind = get(g, "kind", s.geometry_kind);
      if (g.contains("center")) s.center = to_vector(g.at("center").get<std::vector<double>>());
      s.radius = get(g, "radius", s.radius);
      if (g.contains("normal")) s.normal = to_vector(g.at("normal").get<std::vector<double>>());
      s.offset = get(g, "offset", s.offset);
      s.profile_family = get(g, "family", s.profile_family);
      s.profile_s = get(g, "s", s.profile_s);
    }
    if (j.contains("plate")) {
      const auto& p = j.at("plate");
      s.plate_sampler = get(p, "sampler", s.plate_sampler);
      if (p.contains("center"))
        s.plate_center = to_vector(p.at("center").get<std::vector<double>>());
      s.plate_radius = get(p, "radius", s.plate_radius);
      s.plate_resolution = get(p, "resolution", s.plate_resolution);
    }
    if (j.contains("constraint")) {
      s.constraint_kind = get(j.at("constraint"), "kind", s.constraint_kind);
      s.constraint_total = get(j.at("constraint"), "total", s.constraint_total);
    }
    if (j.contains("field") && j.at("field").contains("atoms")) {
      for (const auto& row : j.at("field").at("atoms")) {
        const auto v = row.get<std::vector<double>>();
        if (static_cast<int>(v.size()) != s.n + 1)
          throw scenario_error("input_error", "scenario: field atom expects n coords plus a mass");
        s.field_atoms.emplace_back(to_vector({v.begin(), v.end() - 1}), v.back());
      }
    }
    if (j.contains("experiment")) {
      const auto& e = j.at("experiment");
      s.experiment = get(e, "kind", s.experiment);
      s.q = get(e, "q", s.q);
      s.k_max = get(e, "k_max", s.k_max);
      s.slice_resolution = get(e, "slice_resolution", s.slice_resolution);
      s.continuity_steps = get(e, "steps", s.continuity_steps);
      s.resolutions = get(e, "resolutions", s.resolutions);
      s.depth = get(e, "depth", s.depth);
      s.cylinder_radius = get(e, "radius", s.cylinder_radius);
      s.f_resolution = get(e, "f_resolution", s.f_resolution);
    }
  } catch (const nlohmann::json::exception& e) {
    throw scenario_error("input_error", std::string("scenario json: ") + e.what());
  }
  return s;
}

Scenario parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw scenario_error("input_error", "cannot read scenario file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw scenario_error("input_error", std::string("scenario json: ") + e.what());
    }
    return parse_scenario_json(j);
  }
  return parse_scenario_text(text);
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& [x, mass] : s.field_atoms) {
    std::vector<double> row(x.data(), x.data() + x.size());
    row.push_back(mass);
    atoms.push_back(row);
  }
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  return {{"name", s.name},
          {"seed", s.seed},
          {"tol", s.tol},
          {"kernel", {{"alpha", s.alpha}, {"n", s.n}}},
          {"geometry",
           {{"kind", s.geometry_kind},
            {"center", vec(s.center.size() ? s.center : Eigen::VectorXd::Zero(s.n))},
            {"radius", s.radius},
            {"normal", vec(s.normal.size() ? s.normal : Eigen::VectorXd::Unit(s.n, 0))},
            {"offset", s.offset},
            {"family", s.profile_family},
            {"s", s.profile_s}}},
          {"plate",
           {{"sampler", s.plate_sampler},
            {"center", vec(s.plate_center.size() ? s.plate_center : Eigen::VectorXd::Zero(s.n))},
            {"radius", s.plate_radius},
            {"resolution", s.plate_resolution}}},
          {"constraint", {{"kind", s.constraint_kind}, {"total", s.constraint_total}}},
          {"field", {{"atoms", atoms}}},
          {"experiment",
           {{"kind", s.experiment},
            {"q", s.q},
            {"k_max", s.k_max},
            {"slice_resolution", s.slice_resolution},
            {"steps", s.continuity_steps},
            {"resolutions", s.resolutions},
            {"depth", s.depth},
            {"radius", s.cylinder_radius},
            {"f_resolution", s.f_resolution}}}};
}

DomainGeometry Scenario::build_geometry() const {
  const Eigen::VectorXd c = center.size() ? center : Eigen::VectorXd::Zero(n);
  if (geometry_kind == "ball") return DomainGeometry::make_ball(c, radius);
  if (geometry_kind == "ball_exterior") return DomainGeometry::make_ball_exterior(c, radius);
  if (geometry_kind == "half_space") {
    const Eigen::VectorXd nv = normal.size() ? normal : Eigen::VectorXd::Unit(n, 0);
    return DomainGeometry::make_half_space(nv, offset);
  }
  if (geometry_kind == "rotation_body") {
    if (n != 3)
      throw scenario_error("input_error", "scenario: rotation_body geometry requires n = 3");
    return DomainGeometry::make_rotation_body_complement(build_profile());
  }
  throw scenario_error("input_error", "scenario: unknown geometry kind " + geometry_kind);
}

RotationProfile Scenario::build_profile() const {
  if (profile_family == "power") return RotationProfile{false, profile_s};
  if (profile_family == "exp") return RotationProfile{true, profile_s};
  throw scenario_error("input_error", "scenario: unknown profile family " + profile_family);
}

PointCloud Scenario::build_plate(int resolution) const {
  const Eigen::VectorXd c = plate_center.size() ? plate_center : Eigen::VectorXd::Zero(n);
  if (plate_sampler == "sphere")
    return sample_sphere_surface(n, c, plate_radius, resolution, seed + 3);
  if (plate_sampler == "ball") return sample_ball_volume(n, c, plate_radius, resolution, seed + 3);
  throw scenario_error("input_error", "scenario: unknown plate sampler " + plate_sampler);
}

Constraint Scenario::build_constraint(const PointCloud& plate) const {
  if (constraint_kind == "infinite") return Constraint::unconstrained();
  DiscreteMeasure sigma;
  if (constraint_kind == "uniform") {
    if (!(constraint_total > 1.0))
      throw scenario_error("infeasible_constraint",
                           "scenario: constraint total mass must exceed 1");
    sigma = DiscreteMeasure::from_weights(plate, constraint_total);
  } else if (constraint_kind == "lebesgue") {
    sigma = DiscreteMeasure(plate, plate.weights);
    if (!(sigma.total_mass() > 1.0))
      throw scenario_error("infeasible_constraint",
                           "scenario: discretized volume constraint has mass <= 1");
  } else {
    throw scenario_error("input_error", "scenario: unknown constraint kind " + constraint_kind);
  }
  return Constraint::from_measure(std::move(sigma));
}

SignedCondenserMeasure Scenario::build_field() const {
  std::vector<std::pair<Eigen::VectorXd, double>> plus, minus;
  for (const auto& [x, mass] : field_atoms) {
    if (mass > 0.0)
      plus.emplace_back(x, mass);
    else if (mass < 0.0)
      minus.emplace_back(x, -mass);
  }
  auto build = [this](const std::vector<std::pair<Eigen::VectorXd, double>>& atoms) {
    DiscreteMeasure m;
    if (atoms.empty()) return m;
    PointCloud cloud;
    cloud.points.resize(static_cast<int>(atoms.size()), n);
    cloud.weights = Eigen::VectorXd::Ones(static_cast<int>(atoms.size()));
    Eigen::VectorXd masses(static_cast<int>(atoms.size()));
    for (size_t i = 0; i < atoms.size(); ++i) {
      cloud.points.row(static_cast<int>(i)) = atoms[i].first.transpose();
      masses[static_cast<int>(i)] = atoms[i].second;
    }
    return DiscreteMeasure(std::move(cloud), std::move(masses));
  };
  return {build(plus), build(minus)};
}

CondenserProblem Scenario::build_problem() const { return build_problem(plate_resolution); }

CondenserProblem Scenario::build_problem(int resolution) const {
  CondenserProblem p;
  p.spec = kernel();
  p.geometry = build_geometry();
  p.a_cloud = build_plate(resolution);
  p.sigma = build_constraint(p.a_cloud);
  p.theta = build_field();
  p.tol = tol;
  p.f_resolution = f_resolution;
  p.seed = seed;
  return p;
}

namespace {

std::vector<PotentialProfileRow> potential_profile(const Scenario& s,
                                                   const CondenserProblem& p,
                                                   const GreenKernelEngine& engine,
                                                   const SolveReport& rep) {
  std::vector<PotentialProfileRow> rows;
  Eigen::VectorXd dir(s.n);
  for (int i = 0; i < s.n; ++i) dir[i] = 1.0 / (1.0 + 0.37 * i);
  dir.normalize();
  const Eigen::VectorXd origin =
      s.plate_center.size() ? s.plate_center : Eigen::VectorXd::Zero(s.n);
  const double reach = 4.0 * std::max(p.geometry.scale(), s.plate_radius);
  SignedCondenserMeasure lambda_dot{rep.lambda_plus, rep.lambda_minus};

  for (int i = 1; i <= 200; ++i) {
    PotentialProfileRow row;
    row.t = reach * i / 200.0;
    const Eigen::VectorXd x = origin + row.t * dir;
    try {
      row.kappa_potential = potential_at(p.spec, lambda_dot, x);
    } catch (const singular_evaluation&) {
      continue;
    }
    if (p.geometry.contains(x)) {
      double g = 0.0;
      for (int j = 0; j < rep.lambda_plus.size(); ++j) {
        if (rep.lambda_plus.masses[j] <= 0.0) continue;
        const double d = (rep.lambda_plus.cloud.point(j) - x).norm();
        if (d < 1e-9) continue;
        g += rep.lambda_plus.masses[j] *
             (riesz_kernel_distance(p.spec, d) -
              engine.image_potential(x, rep.lambda_plus.cloud.point(j)));
      }
      row.green_potential = g;
    }
    row.level_w = rep.w;
    rows.push_back(row);
  }
  return rows;
}

int run_solve(const Scenario& s, const RunOptions& options,
              const std::filesystem::path& out, nlohmann::json& report) {
  CondenserProblem p = s.build_problem();
  p.validate();
  if (options.check_only) return kExitOk;

  GreenKernelEngine engine(p.spec, p.geometry, p.f_resolution, p.seed + 101);
  SolveReport rep = solve_green_gauss(p, engine);
  SignedCondenserMeasure lambda_dot = assemble_condenser_solution(p, engine, rep);
  OptimalityCertificate cert = verify_optimality(p, engine, rep);
  SupportCheckResult support = support_identity_check(p, rep);

  report["solve"] = solve_report_to_json(rep);
  report["certificate"] = certificate_to_json(cert);
  report["f_thin_warning"] = p.f_thin_warning();
  report["energies"] = {
      {"green",
       energy_report_to_json(green_energy(engine, rep.lambda_plus, DiagonalPolicy::patch()))},
      {"standard_plus",
       energy_report_to_json(standard_energy(p.spec, rep.lambda_plus, DiagonalPolicy::patch()))},
      {"standard_dot",
       energy_report_to_json(standard_energy(p.spec, lambda_dot, DiagonalPolicy::patch()))}};
  const char* support_name = support.status == SupportCheckStatus::passed ? "passed"
                             : support.status == SupportCheckStatus::failed ? "failed"
                                                                            : "not_applicable";
  report["support_identity"] = support_name;

  write_measure_csv(out / "measures" / "lambda_plus.csv", rep.lambda_plus);
  write_measure_csv(out / "measures" / "lambda_minus.csv", rep.lambda_minus);
  write_potential_profile_csv(out / "plotdata" / "potential_profile.csv",
                              potential_profile(s, p, engine, rep));

  if (!rep.qp_converged) {
    report["error"] = {{"code", "non_convergence"}, {"message", "QP failed to converge"}};
    return kExitNonConvergence;
  }
  if (!cert.passed) {
    report["error"] = {{"code", "certificate_failure"},
                       {"message", "KKT violation above tolerance"}};
    return kExitCertificateFailure;
  }
  return kExitOk;
}

int run_thinness(const Scenario& s, const RunOptions& options,
                 const std::filesystem::path& out, nlohmann::json& report) {
  if (s.geometry_kind != "rotation_body")
    throw scenario_error("input_error", "thinness experiment requires a rotation_body geometry");
  const RotationProfile profile = s.build_profile();
  if (options.check_only) {
    if (!(s.q > 1.0) || s.k_max < 8)
      throw scenario_error("input_error", "thinness experiment needs q > 1 and k_max >= 8");
    return kExitOk;
  }
  ThinnessVerdict verdict = wiener_thinness_diagnostic(s.kernel(), profile, s.q, s.k_max,
                                                       s.slice_resolution, s.seed, options.jobs);
  report["thinness"] = thinness_to_json(verdict);
  report["expected"] = thinness_class_name(s.build_geometry().f_thinness());
  write_wiener_series_csv(out / "plotdata" / "wiener_series.csv", verdict);
  return kExitOk;
}

int run_continuity(const Scenario& s, const RunOptions& options,
                   const std::filesystem::path& out, nlohmann::json& report) {
  CondenserProblem p = s.build_problem();
  p.validate();
  if (p.sigma.is_infinite())
    throw scenario_error("input_error", "continuity experiment requires a finite constraint");
  if (options.check_only) return kExitOk;

  std::vector<Constraint> sigmas;
  for (int k = 1; k <= s.continuity_steps; ++k) {
    DiscreteMeasure scaled = p.sigma.sigma();
    scaled.masses *= 1.0 + 1.0 / k;
    sigmas.push_back(Constraint::from_measure(std::move(scaled)));
  }
  ContinuityRecord rec = continuity_experiment(p, {}, sigmas);
  report["continuity"] = continuity_to_json(rec);
  write_continuity_trace_csv(out / "plotdata" / "continuity_trace.csv", rec);
  return rec.all_converged ? kExitOk : kExitNonConvergence;
}

int run_unsolvability(const Scenario& s, const RunOptions& options,
                      const std::filesystem::path& out, nlohmann::json& report) {
  DomainGeometry geometry = s.build_geometry();
  if (geometry.kind != GeometryKind::half_space)
    throw scenario_error("input_error", "unsolvability experiment requires a half_space geometry");
  if (options.check_only) {
    if (!(s.depth > 0.0) || !(s.cylinder_radius > 0.0) || s.cylinder_radius >= s.depth)
      throw scenario_error("input_error", "unsolvability experiment needs 0 < radius < depth");
    return kExitOk;
  }
  UnsolvabilityRecord rec = unsolvability_demo(s.kernel(), geometry, s.depth, s.cylinder_radius,
                                               s.k_max, s.slice_resolution, s.seed);
  report["unsolvability"] = unsolvability_to_json(rec);
  write_unsolvability_csv(out / "plotdata" / "unsolvability_trace.csv", rec);
  return kExitOk;
}

int run_refinement(const Scenario& s, const RunOptions& options,
                   const std::filesystem::path& out, nlohmann::json& report) {
  if (s.constraint_kind != "infinite" || !s.field_atoms.empty())
    throw scenario_error("input_error",
                         "refinement experiment requires an infinite constraint and no field");
  std::vector<int> resolutions = s.resolutions;
  if (resolutions.empty()) resolutions = {120, 180, 260};
  if (options.check_only) {
    s.build_problem(resolutions.front()).validate();
    return kExitOk;
  }
  RefinementRecord rec = weak_vs_standard_refinement_study(
      [&](int r) { return s.build_problem(r); }, resolutions);
  report["refinement"] = refinement_to_json(rec);
  write_refinement_trend_csv(out / "plotdata" / "refinement_trend.csv", rec);
  return kExitOk;
}

}  // namespace

int run_scenario(Scenario scenario, const RunOptions& options) {
  if (options.tol) scenario.tol = *options.tol;
  if (options.seed) scenario.seed = *options.seed;
  const std::filesystem::path out =
      options.out_dir.empty() ? std::filesystem::path("out") / scenario.name
                              : std::filesystem::path(options.out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  nlohmann::json report;
  report["scenario"] = scenario.name;
  report["experiment"] = scenario.experiment;
  int code = kExitOk;

  try {
    if (scenario.experiment == "solve")
      code = run_solve(scenario, options, out, report);
    else if (scenario.experiment == "thinness")
      code = run_thinness(scenario, options, out, report);
    else if (scenario.experiment == "continuity")
      code = run_continuity(scenario, options, out, report);
    else if (scenario.experiment == "unsolvability")
      code = run_unsolvability(scenario, options, out, report);
    else if (scenario.experiment == "refinement")
      code = run_refinement(scenario, options, out, report);
    else
      throw scenario_error("input_error", "unknown experiment kind " + scenario.experiment);
  } catch (const scenario_error& e) {
    report["error"] = {{"code", e.code}, {"message", e.what()}};
    code = kExitInputError;
  } catch (const convergence_error& e) {
    report["error"] = {{"code", "non_convergence"},
                       {"message", e.what()},
                       {"residual", e.residual}};
    code = kExitNonConvergence;
  } catch (const singular_evaluation& e) {
    report["error"] = {{"code", "singular_evaluation"}, {"message", e.what()}};
    code = kExitInputError;
  } catch (const input_error& e) {
    report["error"] = {{"code", "input_error"}, {"message", e.what()}};
    code = kExitInputError;
  }

  if (options.check_only) return code;

  const auto t1 = std::chrono::steady_clock::now();
  write_json(out / "report.json", report);
  nlohmann::json manifest = {
      {"name", scenario.name},
      {"version", "0.1.0"},
      {"seed", scenario.seed},
      {"tol", scenario.tol},
      {"jobs", options.jobs},
      {"experiment", scenario.experiment},
      {"exit_code", code},
      {"wall_ms",
       std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};
  write_json(out / "manifest.json", manifest);
  return code;
}

}  // namespace condlab
