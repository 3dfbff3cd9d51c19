#include "condlab/nnqp.hpp"

#include <algorithm>
#include <vector>

#include "condlab/kernel.hpp"

namespace condlab {

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<int>(idx.size()));
  for (int i = 0; i < out.size(); ++i) out[i] = v[idx[i]];
  return out;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& ri,
                       const std::vector<int>& ci) {
  Eigen::MatrixXd out(static_cast<int>(ri.size()), static_cast<int>(ci.size()));
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) = m(ri[i], ci[j]);
  return out;
}

}  // namespace

QpResult nnqp_solve(const Eigen::MatrixXd& q, const Eigen::VectorXd& b, double tol,
                    int max_iter) {
  const int n = static_cast<int>(b.size());
  if (q.rows() != n || q.cols() != n) throw input_error("nnqp_solve: dimension mismatch");
  QpResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    res.converged = true;
    return res;
  }

  const double eps = tol * (1.0 + b.cwiseAbs().maxCoeff());
  std::vector<char> free_set(n, 0);
  for (int i = 0; i < n; ++i) free_set[i] = b[i] > 0.0 ? 1 : 0;

  int ninf_prev = n + 1;
  int safeguard = 3;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = -b;

  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<int> f;
    for (int i = 0; i < n; ++i)
      if (free_set[i]) f.push_back(i);

    x.setZero();
    if (!f.empty()) {
      Eigen::MatrixXd qff = gather(q, f, f);
      Eigen::VectorXd xf = qff.ldlt().solve(gather(b, f));
      for (int i = 0; i < static_cast<int>(f.size()); ++i) x[f[i]] = xf[i];
    }
    y = q * x - b;

    std::vector<int> bad;
    for (int i = 0; i < n; ++i) {
      if (free_set[i] && x[i] < -eps) bad.push_back(i);
      if (!free_set[i] && y[i] < -eps) bad.push_back(i);
    }
    res.iterations = iter;
    if (bad.empty()) {
      res.converged = true;
      break;
    }
    const int ninf = static_cast<int>(bad.size());
    if (ninf < ninf_prev) {
      ninf_prev = ninf;
      safeguard = 3;
      for (int i : bad) free_set[i] = !free_set[i];
    } else if (safeguard > 0) {
      --safeguard;
      for (int i : bad) free_set[i] = !free_set[i];
    } else {
      const int i = *std::max_element(bad.begin(), bad.end());
      free_set[i] = !free_set[i];
    }
  }

  x = x.cwiseMax(0.0);
  res.x = x;
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] > 0.0)
      r = std::max(r, std::abs(y[i]));
    else
      r = std::max(r, std::max(0.0, -y[i]));
  }
  res.kkt_residual = r;
  return res;
}

Eigen::VectorXd project_box_simplex(const Eigen::VectorXd& v, const Eigen::VectorXd& u) {
  const int n = static_cast<int>(v.size());
  if (u.size() != n) throw input_error("project_box_simplex: dimension mismatch");
  if (u.minCoeff() < 0.0) throw input_error("project_box_simplex: negative upper bound");
  if (u.sum() < 1.0) throw input_error("project_box_simplex: box cannot reach the simplex");

  auto mass = [&](double tau) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::clamp(v[i] - tau, 0.0, u[i]);
    return s;
  };
  double lo = (v - u).minCoeff() - 1.0;
  double hi = v.maxCoeff();
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mass(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double tau = 0.5 * (lo + hi);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = std::clamp(v[i] - tau, 0.0, u[i]);
  const double s = w.sum();
  if (s > 0.0) w *= 1.0 / s;  // absorb bisection residue
  return w;
}

QpResult box_simplex_qp(const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                        const Eigen::VectorXd& u, double tol, int max_iter) {
  const int n = static_cast<int>(b.size());
  if (g.rows() != n || g.cols() != n || u.size() != n)
    throw input_error("box_simplex_qp: dimension mismatch");
  QpResult res;
  if (n == 0) throw input_error("box_simplex_qp: empty problem");

  Eigen::VectorXd w = project_box_simplex(Eigen::VectorXd::Constant(n, 1.0 / n), u);
  Eigen::VectorXd grad = 2.0 * (g * w + b);
  double step = 1.0 / std::max(1e-12, 2.0 * g.cwiseAbs().rowwise().sum().maxCoeff());

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    Eigen::VectorXd w_new = project_box_simplex(w - step * grad, u);
    Eigen::VectorXd grad_new = 2.0 * (g * w_new + b);
    const Eigen::VectorXd s = w_new - w;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-300) step = std::clamp(s.dot(s) / sy, 1e-12, 1e12);
    const double move = s.cwiseAbs().maxCoeff();
    w = w_new;
    grad = grad_new;
    if (move < 0.1 * tol * (1.0 + w.cwiseAbs().maxCoeff())) break;
  }
  res.iterations = iter;

  // active-set polish: pin bound atoms, solve the equality-constrained
  // problem on the free set, update the sets from the multipliers
  const double eb = 1e-10;
  double lambda = 0.0;
  for (int polish = 0; polish < 60; ++polish) {
    std::vector<int> f, lo, up;
    for (int i = 0; i < n; ++i) {
      if (w[i] <= eb * std::max(1.0, u[i]))
        lo.push_back(i);
      else if (w[i] >= u[i] - eb * std::max(1.0, u[i]))
        up.push_back(i);
      else
        f.push_back(i);
    }
    if (f.empty()) break;

    const int m = static_cast<int>(f.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    a.topLeftCorner(m, m) = 2.0 * gather(g, f, f);
    a.topRightCorner(m, 1).setOnes();
    a.bottomLeftCorner(1, m).setOnes();
    Eigen::VectorXd rhs(m + 1);
    double pinned = 0.0;
    Eigen::VectorXd bf = gather(b, f);
    if (!up.empty()) {
      Eigen::MatrixXd gfu = gather(g, f, up);
      Eigen::VectorXd uu = gather(u, up);
      bf += gfu * uu;
      pinned = uu.sum();
    }
    rhs.head(m) = -2.0 * bf;
    rhs[m] = 1.0 - pinned;
    Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
    if (!sol.allFinite()) break;

    Eigen::VectorXd w_cand = Eigen::VectorXd::Zero(n);
    for (int i : up) w_cand[i] = u[i];
    for (int i = 0; i < m; ++i) w_cand[f[i]] = sol[i];
    lambda = sol[m];

    bool inside = true;
    for (int i = 0; i < m; ++i)
      if (sol[i] < -eb || sol[i] > u[f[i]] + eb) inside = false;

    if (!inside) {
      // step toward the candidate until the first bound blocks
      double t = 1.0;
      for (int i = 0; i < m; ++i) {
        const double d = w_cand[f[i]] - w[f[i]];
        if (d < 0.0) t = std::min(t, (0.0 - w[f[i]]) / d);
        if (d > 0.0) t = std::min(t, (u[f[i]] - w[f[i]]) / d);
      }
      t = std::clamp(t, 0.0, 1.0);
      w += t * (w_cand - w);
      for (int i = 0; i < n; ++i) w[i] = std::clamp(w[i], 0.0, u[i]);
      continue;
    }

    w = w_cand;
    grad = 2.0 * (g * w + b);
    int worst = -1;
    double worst_v = tol * (1.0 + grad.cwiseAbs().maxCoeff());
    for (int i : lo) {
      const double v = -(grad[i] + lambda);
      if (v > worst_v) {
        worst_v = v;
        worst = i;
      }
    }
    for (int i : up) {
      const double v = grad[i] + lambda;
      if (v > worst_v) {
        worst_v = v;
        worst = i;
      }
    }
    if (worst < 0) {
      res.converged = true;
      break;
    }
    // release the most violating bound by nudging it into the interior
    const double nudge = 2.0 * eb * std::max(1.0, u[worst]);
    w[worst] = std::clamp(w[worst] <= eb ? nudge : u[worst] - nudge, 0.0, u[worst]);
    w = project_box_simplex(w, u);
  }

  grad = 2.0 * (g * w + b);
  // multiplier estimate for the mass constraint if the polish never set one
  if (!res.converged) {
    double acc = 0.0;
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (w[i] > eb && w[i] < u[i] - eb) {
        acc += -grad[i];
        ++cnt;
      }
    lambda = cnt > 0 ? acc / cnt : lambda;
  }
  double r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = grad[i] + lambda;
    if (w[i] <= eb * std::max(1.0, u[i]))
      r = std::max(r, std::max(0.0, -d));
    else if (w[i] >= u[i] - eb * std::max(1.0, u[i]))
      r = std::max(r, std::max(0.0, d));
    else
      r = std::max(r, std::abs(d));
  }
  res.kkt_residual = r;
  if (r <= 10.0 * tol * (1.0 + grad.cwiseAbs().maxCoeff())) res.converged = true;
  res.x = w;
  return res;
}

}  // namespace condlab
