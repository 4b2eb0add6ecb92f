#pragma once

// Dense polynomials in ascending-coefficient form, c(0) + c(1) t + ...
// Inside an inter-event interval every agent moves linearly, so detection
// products and uncertainty trajectories are exact polynomials in local time.

#include <Eigen/Core>

namespace persimon::poly {

using Poly = Eigen::VectorXd;

inline Poly constant(double c) { return Poly::Constant(1, c); }

template <typename Derived>
typename Derived::Scalar eval(const Eigen::MatrixBase<Derived>& c, typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  Scalar acc(0);
  for (Eigen::Index k = c.size(); k-- > 0;) acc = acc * t + c(k);
  return acc;
}

/// c(t) * (a + b t)
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> mul_linear(
    const Eigen::MatrixBase<Derived>& c, typename Derived::Scalar a, typename Derived::Scalar b) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(c.size() + 1);
  out.setZero();
  out.head(c.size()) += a * c;
  out.tail(c.size()) += b * c;
  return out;
}

/// Antiderivative vanishing at t = 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> integral(
    const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(c.size() + 1);
  out(0) = Scalar(0);
  for (Eigen::Index k = 0; k < c.size(); ++k) out(k + 1) = c(k) / Scalar(k + 1);
  return out;
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> derivative(
    const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  if (c.size() <= 1) return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(c.size() - 1);
  for (Eigen::Index k = 1; k < c.size(); ++k) out(k - 1) = Scalar(k) * c(k);
  return out;
}

}  // namespace persimon::poly
