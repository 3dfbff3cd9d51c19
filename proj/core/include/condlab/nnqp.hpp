#pragma once

#include <Eigen/Dense>

namespace condlab {

struct QpResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
};

// min x'Qx - 2b'x subject to x >= 0, Q symmetric positive definite.
// Block principal pivoting with a single-index safeguard.
QpResult nnqp_solve(const Eigen::MatrixXd& q, const Eigen::VectorXd& b, double tol = 1e-10,
                    int max_iter = 200);

// Euclidean projection of v onto { w : 0 <= w <= u, sum w = 1 },
// by bisection on the shift in w = clamp(v - tau, 0, u).
Eigen::VectorXd project_box_simplex(const Eigen::VectorXd& v, const Eigen::VectorXd& u);

// min w'Gw + 2b'w subject to sum w = 1, 0 <= w <= u.
// Projected gradient with Barzilai-Borwein steps, then an active-set
// polish through the bordered stationarity system.
QpResult box_simplex_qp(const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                        const Eigen::VectorXd& u, double tol = 1e-10, int max_iter = 4000);

}  // namespace condlab
