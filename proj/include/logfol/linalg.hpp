#pragma once

#include "logfol/rational.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace Eigen {

template <>
struct NumTraits<logfol::GaussianRational> : GenericNumTraits<logfol::GaussianRational> {
  typedef logfol::GaussianRational Real;
  typedef logfol::GaussianRational NonInteger;
  typedef logfol::GaussianRational Nested;
  typedef logfol::GaussianRational Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 60,
    MulCost = 100,
  };
  static inline Real epsilon() { return logfol::GaussianRational(0); }
  static inline Real dummy_precision() { return logfol::GaussianRational(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace logfol {

using ExactMatrix = Eigen::Matrix<GaussianRational, Eigen::Dynamic, Eigen::Dynamic>;
using ExactVector = Eigen::Matrix<GaussianRational, Eigen::Dynamic, 1>;

/// In-place reduced row echelon form. Pivot choice favours the entry of
/// largest floating magnitude to keep intermediate numerators small.
/// Returns the pivot column indices in order.
std::vector<int> rref_inplace(ExactMatrix& m);

int rank(ExactMatrix m);

/// Scales an exact vector so its first nonzero entry is 1.
ExactVector normalize_leading(ExactVector v);

/// Basis of the right null space {v : m v = 0}, each vector normalized so
/// its first nonzero entry is 1. Empty for full column rank.
std::vector<ExactVector> kernel_basis(const ExactMatrix& m);

/// A nonzero kernel vector (normalized), or nullopt when the kernel is {0}.
std::optional<ExactVector> solve_homogeneous(const ExactMatrix& m);

}  // namespace logfol
