#pragma once
// Helpers shared by the test binaries.

#include <Eigen/Dense>

namespace poisim::test {

/// Exact coefficient equality, the right check wherever determinism
/// promises bit-identical results.
inline bool same_vec(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a.array() == b.array()).all();
}

}  // namespace poisim::test
