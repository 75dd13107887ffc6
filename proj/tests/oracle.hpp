#pragma once

// Reference computations used to check the library independently of its own
// SVD-based routines.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "rollergrasp/grasp.hpp"

namespace oracle {

// Kernel basis by Gauss-Jordan elimination with partial pivoting. Columns
// without a pivot are free; each yields one basis vector.
inline Eigen::MatrixXd rref_null_space(Eigen::MatrixXd a, double tol = 1e-10) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    }
    if (std::abs(a(best, c)) <= tol * scale) continue;
    a.row(r).swap(a.row(best));
    a.row(r) /= a(r, c);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != r) a.row(i) -= a(i, c) * a.row(r);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0, p = 0; c < cols; ++c) {
    if (p < static_cast<Eigen::Index>(pivot_cols.size()) && pivot_cols[p] == c) {
      ++p;
    } else {
      free_cols.push_back(c);
    }
  }
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(cols, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Eigen::Index f = free_cols[k];
    basis(f, k) = 1.0;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) basis(pivot_cols[p], k) = -a(p, f);
  }
  return basis;
}

inline int rref_rank(const Eigen::MatrixXd& a, double tol = 1e-10) {
  return static_cast<int>(a.cols() - rref_null_space(a, tol).cols());
}

// True when every column of `a` lies in span(b): least-squares residual test.
inline double span_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  const Eigen::MatrixXd q = b.householderQr().householderQ() * Eigen::MatrixXd::Identity(b.rows(), b.cols());
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const Eigen::VectorXd col = a.col(c) / a.col(c).norm();
    worst = std::max(worst, (col - q * (q.transpose() * col)).norm());
  }
  return worst;
}

inline Eigen::Vector3d rotate(const Eigen::Vector3d& axis, double angle, const Eigen::Vector3d& v) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix() * v;
}

// Constraint rows written out component by component.
inline Eigen::Matrix<double, 1, 6> row(const Eigen::Vector3d& p, const Eigen::Vector3d& d) {
  Eigen::Matrix<double, 1, 6> r;
  r << p.y() * d.z() - p.z() * d.y(), p.z() * d.x() - p.x() * d.z(), p.x() * d.y() - p.y() * d.x(), d.x(), d.y(),
      d.z();
  return r;
}

struct GraspSample {
  Eigen::Vector3d p1, p2, n, ref;
  double theta1, theta2;

  rollergrasp::AntipodalGrasp grasp() const {
    rollergrasp::RollerFinger f1, f2;
    f1.contact_point = p1;
    f2.contact_point = p2;
    f1.pivot_angle = theta1;
    f2.pivot_angle = theta2;
    return rollergrasp::AntipodalGrasp(f1, f2, rollergrasp::UnitVec3(n), rollergrasp::UnitVec3(ref));
  }

  Eigen::Matrix<double, 4, 6> matrix() const {
    const Eigen::Vector3d w1 = rotate(n, theta1, ref);
    const Eigen::Vector3d w2 = rotate(n, theta2, ref);
    Eigen::Matrix<double, 4, 6> m;
    m.row(0) = row(p1, w1);
    m.row(1) = row(p2, w2);
    m.row(2) = row(0.5 * (p1 + p2), n);
    m.row(3) << n.transpose(), 0, 0, 0;
    return m;
  }
};

// Generic grasps: pivot difference kept away from 0 and pi.
class GraspGenerator {
 public:
  explicit GraspGenerator(unsigned seed) : rng_(seed) {}

  GraspSample next() {
    std::uniform_real_distribution<double> pos(-0.3, 0.3);
    std::uniform_real_distribution<double> gap(0.005, 0.2);
    std::uniform_real_distribution<double> ang(-std::numbers::pi + 1e-6, std::numbers::pi);
    for (;;) {
      const Eigen::Vector3d n = unit();
      Eigen::Vector3d ref = unit();
      ref -= ref.dot(n) * n;
      if (ref.norm() < 0.05) continue;
      ref.normalize();
      const double t1 = ang(rng_);
      const double t2 = ang(rng_);
      const double d = std::abs(std::remainder(t1 - t2, 2 * std::numbers::pi));
      if (d < 0.02 || std::numbers::pi - d < 0.02) continue;
      const Eigen::Vector3d q(pos(rng_), pos(rng_), pos(rng_));
      const double h = 0.5 * gap(rng_);
      return {q + h * n, q - h * n, n, ref, t1, t2};
    }
  }

  std::mt19937& rng() { return rng_; }

 private:
  Eigen::Vector3d unit() {
    std::normal_distribution<double> g;
    Eigen::Vector3d v;
    do {
      v = Eigen::Vector3d(g(rng_), g(rng_), g(rng_));
    } while (v.norm() < 1e-2);
    return v.normalized();
  }

  std::mt19937 rng_;
};

}  // namespace oracle
