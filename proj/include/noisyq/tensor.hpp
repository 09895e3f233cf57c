#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "noisyq/errors.hpp"

namespace noisyq {

using Index = Eigen::Index;

/// Weight-shaped storage, row-major so that `data()` walks rows in order.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;

/// A minibatch of column vectors: one sample per column.
using Batch = Eigen::MatrixXd;

/// Every stochastic component of a run draws from one of these.
using Rng = std::mt19937_64;

inline void require_shape(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace noisyq
