#pragma once

// Fully constrained least squares abundance estimation: sum-to-one by row
// augmentation (delta = 10 * max|E|), non-negativity by active-set NNLS
// (Lawson-Hanson). Shared by every method in the pipeline.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "unmix/types.hpp"

namespace unmix {

struct FclsResult {
  std::vector<double> abundances;
  bool converged = true;
  int iterations = 0;
};

namespace detail {

// Least squares over the passive-set columns via column-pivoted QR
// (rank-deficient safe).
inline void passive_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                          const std::vector<int>& passive, Eigen::VectorXd& z) {
  Eigen::MatrixXd Ap(A.rows(), passive.size());
  for (std::size_t j = 0; j < passive.size(); ++j) Ap.col(j) = A.col(passive[j]);
  z = Ap.colPivHouseholderQr().solve(y);
}

}  // namespace detail

/// Abundances of one pixel: minimizes ||y - E a|| subject to a >= 0, sum a = 1.
/// If the iteration budget (default 10*M) is exhausted, the best feasible
/// iterate seen is returned with converged = false. Ties in the active-set
/// selection go to the lowest endmember index.
inline FclsResult fcls(const std::vector<double>& y, const EndmemberSet& E,
                       double tol = 1e-10, int max_iter = -1) {
  const int bands = E.bands;
  const int M = E.count();
  if (static_cast<int>(y.size()) != bands)
    throw std::invalid_argument("fcls: spectrum length does not match endmember bands");
  if (max_iter < 0) max_iter = 10 * M;

  double emax = 0.0;
  for (double v : E.spectra) emax = std::max(emax, std::abs(v));
  const double delta = 10.0 * emax;

  // Augmented system: one extra row enforcing delta * sum(a) = delta.
  Eigen::MatrixXd A(bands + 1, M);
  Eigen::VectorXd b(bands + 1);
  for (int m = 0; m < M; ++m) {
    for (int bb = 0; bb < bands; ++bb) A(bb, m) = E.at(bb, m);
    A(bands, m) = delta;
  }
  for (int bb = 0; bb < bands; ++bb) b(bb) = y[bb];
  b(bands) = delta;

  Eigen::VectorXd a = Eigen::VectorXd::Zero(M);
  std::vector<bool> in_passive(M, false);
  std::vector<int> passive;

  Eigen::VectorXd best_a = a;
  double best_obj = (b - A * a).norm();

  FclsResult result;
  result.converged = false;
  int iter = 0;
  while (iter < max_iter) {
    Eigen::VectorXd w = A.transpose() * (b - A * a);
    int j_star = -1;
    double w_max = tol;
    for (int j = 0; j < M; ++j) {
      if (!in_passive[j] && w(j) > w_max) {  // strict > keeps the lowest index on ties
        w_max = w(j);
        j_star = j;
      }
    }
    if (j_star < 0) {
      result.converged = true;
      break;
    }
    ++iter;
    in_passive[j_star] = true;
    passive.push_back(j_star);
    std::sort(passive.begin(), passive.end());

    Eigen::VectorXd z;
    detail::passive_solve(A, b, passive, z);
    while (true) {
      double z_min = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < passive.size(); ++j) z_min = std::min(z_min, z(j));
      if (z_min > 0.0) break;
      // step toward z until the first passive coefficient hits zero
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < passive.size(); ++j) {
        if (z(j) <= 0.0) {
          double aj = a(passive[j]);
          alpha = std::min(alpha, aj / (aj - z(j)));
        }
      }
      for (std::size_t j = 0; j < passive.size(); ++j) {
        int col = passive[j];
        a(col) += alpha * (z(j) - a(col));
      }
      std::vector<int> keep;
      for (int col : passive) {
        if (a(col) <= tol) {
          a(col) = 0.0;
          in_passive[col] = false;
        } else {
          keep.push_back(col);
        }
      }
      passive = keep;
      if (passive.empty()) break;
      detail::passive_solve(A, b, passive, z);
    }
    for (std::size_t j = 0; j < passive.size(); ++j) a(passive[j]) = z(j);

    double obj = (b - A * a).norm();
    if (obj < best_obj) {
      best_obj = obj;
      best_a = a;
    }
  }
  if (!result.converged) a = best_a;
  result.iterations = iter;

  // clamp tiny negatives and renormalize to an exact unit sum
  double sum = 0.0;
  result.abundances.resize(M);
  for (int m = 0; m < M; ++m) {
    result.abundances[m] = std::max(0.0, a(m));
    sum += result.abundances[m];
  }
  if (sum > 0.0) {
    for (double& v : result.abundances) v /= sum;
  } else {
    std::fill(result.abundances.begin(), result.abundances.end(), 1.0 / M);
    result.converged = false;
  }
  return result;
}

/// FCLS applied per pixel. Pixels are independent, so any partition over rows
/// yields the same result as this sequential order.
inline AbundanceMap unmix_scene(const Cube& cube, const EndmemberSet& E) {
  if (cube.bands != E.bands)
    throw std::invalid_argument("unmix_scene: cube and endmember band counts differ");
  AbundanceMap out;
  out.rows = cube.rows;
  out.cols = cube.cols;
  out.endmembers = E.count();
  out.values.resize(static_cast<std::size_t>(E.count()) * cube.pixel_count());
  std::vector<double> y;
  for (int r = 0; r < cube.rows; ++r)
    for (int c = 0; c < cube.cols; ++c) {
      cube.spectrum(r, c, y);
      FclsResult res = fcls(y, E);
      std::size_t pixel = static_cast<std::size_t>(r) * cube.cols + c;
      for (int m = 0; m < E.count(); ++m) out.at(m, pixel) = res.abundances[m];
    }
  return out;
}

}  // namespace unmix
