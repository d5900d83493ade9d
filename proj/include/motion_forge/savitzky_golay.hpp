#pragma once

#include <Eigen/Core>
#include <Eigen/QR>

#include <stdexcept>

namespace motion_forge {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Least-squares projection for a window of `window` samples: maps the samples
/// to the coefficients of the degree-`order` polynomial in the normalized
/// abscissa u = (i - m) / m, m = (window - 1) / 2.
template <typename Scalar>
MatX<Scalar> savgolProjection(int window, int order) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("Savitzky-Golay window must be odd and at least 3");
  }
  if (order < 0 || window <= order) {
    throw std::invalid_argument("Savitzky-Golay window must exceed the polynomial order");
  }
  const int half = (window - 1) / 2;
  MatX<Scalar> vandermonde(window, order + 1);
  for (int i = 0; i < window; ++i) {
    const Scalar u = Scalar(i - half) / Scalar(half);
    Scalar power(1);
    for (int k = 0; k <= order; ++k) {
      vandermonde(i, k) = power;
      power *= u;
    }
  }
  return vandermonde.householderQr().solve(MatX<Scalar>::Identity(window, window));
}

/// Weights that evaluate the window's least-squares fit at sample `position`
/// (0-based inside the window). position = (window - 1) / 2 gives the classic
/// symmetric smoothing kernel.
template <typename Scalar>
VecX<Scalar> savgolWeights(int window, int order, int position) {
  const MatX<Scalar> projection = savgolProjection<Scalar>(window, order);
  const int half = (window - 1) / 2;
  const Scalar u = Scalar(position - half) / Scalar(half);
  VecX<Scalar> basis(order + 1);
  Scalar power(1);
  for (int k = 0; k <= order; ++k) {
    basis[k] = power;
    power *= u;
  }
  return projection.transpose() * basis;
}

/// Savitzky-Golay smoothing of a 1-D signal. Interior samples use the
/// symmetric kernel; the first and last (window - 1) / 2 samples evaluate the
/// fit over the first and last full window respectively.
///
/// Since the weights sum to one, each output is accumulated as
/// y[i] + sum_k w_k (y_k - y[i]); constant stretches therefore come back bit
/// for bit.
template <typename Derived>
VecX<typename Derived::Scalar> savgolFilter(const Eigen::MatrixBase<Derived>& series, int window,
                                            int order) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = series.size();
  if (n < window) {
    throw std::invalid_argument("series is shorter than the Savitzky-Golay window");
  }
  const MatX<Scalar> projection = savgolProjection<Scalar>(window, order);
  const int half = (window - 1) / 2;
  const auto weightsAt = [&](int position) {
    const Scalar u = Scalar(position - half) / Scalar(half);
    VecX<Scalar> basis(order + 1);
    Scalar power(1);
    for (int k = 0; k <= order; ++k) {
      basis[k] = power;
      power *= u;
    }
    return VecX<Scalar>(projection.transpose() * basis);
  };

  const auto fitAt = [&](const VecX<Scalar>& weights, Eigen::Index windowStart, Eigen::Index i) {
    const Scalar ref = series[i];
    Scalar acc(0);
    for (int k = 0; k < window; ++k) {
      acc += weights[k] * (series[windowStart + k] - ref);
    }
    return ref + acc;
  };

  VecX<Scalar> out(n);
  const VecX<Scalar> center = weightsAt(half);
  for (Eigen::Index i = half; i < n - half; ++i) {
    out[i] = fitAt(center, i - half, i);
  }
  for (int i = 0; i < half; ++i) {
    out[i] = fitAt(weightsAt(i), 0, i);
    out[n - half + i] = fitAt(weightsAt(half + 1 + i), n - window, n - half + i);
  }
  return out;
}

}  // namespace motion_forge
