#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "junctionlab/bdg.hpp"

namespace junctionlab {

struct NonHermitianInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Convergence failure from the dense solver. `failed` is LAPACK's info
/// count of off-diagonal elements that did not converge.
struct ConvergenceFailure : std::runtime_error {
  ConvergenceFailure(const std::string& msg, int failed) : std::runtime_error(msg), failed(failed) {}
  int failed;
};

struct EigenSolution {
  Eigen::VectorXd values;   // ascending, eV
  Eigen::MatrixXcd vectors; // column k pairs with values[k]
  double max_residual = 0.0;
};

/// Full decomposition. Degenerate clusters (|ΔE| < 1e-12 ‖H‖) get a basis
/// built by projecting unit vectors in index order, and every vector has its
/// largest component made real and positive, so the output is a function of
/// H alone.
EigenSolution eig_hermitian(const Eigen::MatrixXcd& h);
inline EigenSolution eig_hermitian(const BdgMatrix& m) { return eig_hermitian(m.h); }

/// Eigenpairs with lo < E <= hi only, with the same canonicalization. Much
/// cheaper than the full decomposition when few vectors are wanted.
EigenSolution eig_hermitian_window(const Eigen::MatrixXcd& h, double lo, double hi);

/// max_k |<v_j, v_k> - δ_jk|.
double orthogonality_defect(const Eigen::MatrixXcd& vectors);

}  // namespace junctionlab
