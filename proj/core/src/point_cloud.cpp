#include "condlab/point_cloud.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace condlab {

double PointCloud::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      best = std::min(best, (points.row(i) - points.row(j)).norm());
  return best;
}

double PointCloud::circumradius() const {
  double r = 0.0;
  for (int i = 0; i < size(); ++i) r = std::max(r, points.row(i).norm());
  return r;
}

void PointCloud::validate(double h_min) const {
  if (points.rows() != weights.size()) throw input_error("PointCloud: size mismatch");
  if ((weights.array() < 0.0).any()) throw input_error("PointCloud: negative weight");
  if (!points.allFinite()) throw input_error("PointCloud: non-finite coordinates");
  if (size() > 1 && min_separation() < h_min)
    throw input_error("PointCloud: points closer than the minimum separation");
}

PointCloud PointCloud::concat(const PointCloud& a, const PointCloud& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  if (a.dim() != b.dim()) throw input_error("PointCloud::concat: dimension mismatch");
  PointCloud out;
  out.points.resize(a.size() + b.size(), a.dim());
  out.points << a.points, b.points;
  out.weights.resize(a.size() + b.size());
  out.weights << a.weights, b.weights;
  return out;
}

namespace {

constexpr double kGoldenAngle = 2.39996322972865332;  // pi (3 - sqrt 5)

Eigen::MatrixXd seeded_rotation3(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  const double a = uni(rng), b = uni(rng);
  Eigen::Matrix3d rz, rx;
  rz << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  rx << 1, 0, 0, 0, std::cos(b), -std::sin(b), 0, std::sin(b), std::cos(b);
  return rz * rx;
}

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

// orthonormal basis of the hyperplane orthogonal to `normal`
Eigen::MatrixXd plane_basis(const Eigen::VectorXd& normal) {
  const int n = static_cast<int>(normal.size());
  Eigen::MatrixXd m(n, n);
  m.col(0) = normal.normalized();
  for (int j = 1; j < n; ++j) m.col(j) = Eigen::VectorXd::Unit(n, (j) % n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);  // columns span the plane
}

}  // namespace

PointCloud sample_sphere_surface(int n, const Eigen::VectorXd& center, double radius,
                                 int resolution, std::uint64_t seed) {
  if (resolution < 1) throw input_error("sample_sphere_surface: resolution must be >= 1");
  if (!(radius > 0.0)) throw input_error("sample_sphere_surface: radius must be positive");
  const int N = resolution;
  PointCloud out;
  out.points.resize(N, n);
  out.weights = Eigen::VectorXd::Constant(N, unit_sphere_area(n) * std::pow(radius, n - 1) / N);
  if (n == 3) {
    const Eigen::MatrixXd rot = seeded_rotation3(seed);
    for (int i = 0; i < N; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / N;
      const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = kGoldenAngle * i;
      Eigen::Vector3d p(rxy * std::cos(phi), rxy * std::sin(phi), z);
      out.points.row(i) = (center + radius * (rot * p)).transpose();
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const double min_sep = 0.3 * radius * std::pow(1.0 / N, 1.0 / (n - 1));
    for (int i = 0; i < N; ++i) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Eigen::VectorXd d(n);
        for (int k = 0; k < n; ++k) d[k] = gauss(rng);
        d.normalize();
        Eigen::VectorXd p = center + radius * d;
        bool ok = true;
        for (int j = 0; j < i && ok; ++j)
          if ((out.points.row(j).transpose() - p).norm() < min_sep) ok = false;
        if (ok) {
          out.points.row(i) = p.transpose();
          break;
        }
      }
    }
  }
  return out;
}

PointCloud sample_ball_volume(int n, const Eigen::VectorXd& center, double radius, int resolution,
                              std::uint64_t seed) {
  if (resolution < 1) throw input_error("sample_ball_volume: resolution must be >= 1");
  static const int bases[] = {2, 3, 5, 7, 11, 13};
  const std::uint64_t offset = 17 + (seed % 65536) * 31;
  PointCloud out;
  out.points.resize(resolution, n);
  int accepted = 0;
  std::uint64_t idx = offset;
  while (accepted < resolution) {
    Eigen::VectorXd p(n);
    for (int k = 0; k < n; ++k) p[k] = 2.0 * halton(idx, bases[k]) - 1.0;
    ++idx;
    if (p.norm() <= 1.0) {
      out.points.row(accepted++) = (center + radius * p).transpose();
    }
  }
  out.weights =
      Eigen::VectorXd::Constant(resolution, unit_ball_volume(n) * std::pow(radius, n) / resolution);
  return out;
}

PointCloud sample_rotation_surface(double a, double b, const std::function<double(double)>& rho,
                                   int resolution, std::uint64_t seed, bool end_disks) {
  if (!(b > a)) throw input_error("sample_rotation_surface: empty axial interval");
  if (resolution < 1) throw input_error("sample_rotation_surface: resolution must be >= 1");
  const int stations = std::max(4, static_cast<int>(std::round(std::sqrt(8.0 * resolution))));
  const double dx = (b - a) / stations;
  std::vector<double> xs(stations), radii(stations), areas(stations);
  double lateral_area = 0.0;
  for (int j = 0; j < stations; ++j) {
    xs[j] = a + (j + 0.5) * dx;
    radii[j] = std::max(rho(xs[j]), 0.0);
    areas[j] = 2.0 * M_PI * radii[j] * dx;
    lateral_area += areas[j];
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> wts;
  for (int j = 0; j < stations; ++j) {
    int m = 1;
    if (lateral_area > 0.0)
      m = std::max(1, static_cast<int>(std::round(resolution * areas[j] / lateral_area)));
    const double phase = uni(rng);
    for (int i = 0; i < m; ++i) {
      const double phi = phase + 2.0 * M_PI * i / m + kGoldenAngle * j;
      pts.emplace_back(xs[j], radii[j] * std::cos(phi), radii[j] * std::sin(phi));
      wts.push_back(areas[j] / m);
    }
  }
  if (end_disks) {
    for (double x_end : {a, b}) {
      const double r_end = std::max(rho(x_end), 0.0);
      if (r_end <= 0.0) continue;
      const double disk_area = M_PI * r_end * r_end;
      int m = std::max(1, static_cast<int>(std::round(resolution * disk_area /
                                                      std::max(lateral_area, disk_area) * 0.25)));
      const double phase = uni(rng);
      for (int i = 0; i < m; ++i) {
        const double rr = r_end * std::sqrt((i + 0.5) / m);
        const double phi = phase + kGoldenAngle * i;
        pts.emplace_back(x_end, rr * std::cos(phi), rr * std::sin(phi));
        wts.push_back(disk_area / m);
      }
    }
  }
  PointCloud out;
  out.points.resize(static_cast<int>(pts.size()), 3);
  out.weights.resize(static_cast<int>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    out.points.row(static_cast<int>(i)) = pts[i].transpose();
    out.weights[static_cast<int>(i)] = wts[i];
  }
  return out;
}

PointCloud sample_plane_disk(const Eigen::VectorXd& center, const Eigen::VectorXd& normal,
                             double radius, int resolution, std::uint64_t seed) {
  const int n = static_cast<int>(normal.size());
  if (n != 3)
    throw input_error("sample_plane_disk: only n=3 supported");
  const Eigen::MatrixXd basis = plane_basis(normal);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  const double phase = uni(rng);
  PointCloud out;
  out.points.resize(resolution, n);
  out.weights = Eigen::VectorXd::Constant(resolution, M_PI * radius * radius / resolution);
  for (int i = 0; i < resolution; ++i) {
    const double r = radius * std::sqrt((i + 0.5) / resolution);
    const double phi = phase + kGoldenAngle * i;
    Eigen::VectorXd p =
        center + r * (std::cos(phi) * basis.col(0) + std::sin(phi) * basis.col(1));
    out.points.row(i) = p.transpose();
  }
  return out;
}

PointCloud sample_plane_annulus(const Eigen::VectorXd& center, const Eigen::VectorXd& normal,
                                double r_inner, double r_outer, int resolution,
                                std::uint64_t seed) {
  if (!(r_outer > r_inner && r_inner > 0.0))
    throw input_error("sample_plane_annulus: need 0 < r_inner < r_outer");
  const int n = static_cast<int>(normal.size());
  const Eigen::MatrixXd basis = plane_basis(normal);
  const int shells = std::max(2, resolution / 8);
  const double ratio = std::pow(r_outer / r_inner, 1.0 / shells);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> wts;
  const int per_shell = std::max(1, resolution / shells);
  for (int s = 0; s < shells; ++s) {
    const double r0 = r_inner * std::pow(ratio, s);
    const double r1 = r0 * ratio;
    const double rm = std::sqrt(0.5 * (r0 * r0 + r1 * r1));
    const double area = M_PI * (r1 * r1 - r0 * r0);
    const double phase = uni(rng);
    for (int i = 0; i < per_shell; ++i) {
      const double phi = phase + 2.0 * M_PI * i / per_shell + kGoldenAngle * s;
      pts.push_back(center + rm * (std::cos(phi) * basis.col(0) + std::sin(phi) * basis.col(1)));
      wts.push_back(area / per_shell);
    }
  }
  PointCloud out;
  out.points.resize(static_cast<int>(pts.size()), n);
  out.weights.resize(static_cast<int>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    out.points.row(static_cast<int>(i)) = pts[i].transpose();
    out.weights[static_cast<int>(i)] = wts[i];
  }
  return out;
}

}  // namespace condlab
