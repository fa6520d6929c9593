#pragma once

namespace andrews3d {

/// The two singular values of a 2 x n matrix.
struct SingularPair {
  double s_max = 0.0;
  double s_min = 0.0;
};

}  // namespace andrews3d
