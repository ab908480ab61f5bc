#pragma once

#include <cstddef>
#include <vector>

namespace gsr::detail {

struct EigenPairs {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // column-major n x n, column k pairs with values[k]
};

// Cyclic Jacobi rotations on a dense symmetric n x n matrix (row-major).
EigenPairs symmetric_eigen(std::vector<double> a, std::size_t n);

}  // namespace gsr::detail
