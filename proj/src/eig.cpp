#include "junctionlab/eig.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <Eigen/SparseCore>
#include <mutex>
#include <string>

extern "C" void openblas_set_num_threads(int num_threads);

namespace junctionlab {

namespace {

// One decomposition stays on one thread; callers parallelize across inputs.
void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

void canonicalize_cluster(Eigen::MatrixXcd& v, Eigen::Index start, Eigen::Index m) {
  const Eigen::MatrixXcd vc = v.middleCols(start, m);
  const Eigen::Index n = vc.rows();
  // Coefficients of P e_i in the cluster basis are conj(vc.row(i)); work in
  // that m-dimensional space, where the inner product is unchanged.
  Eigen::MatrixXcd basis(m, 0);
  for (Eigen::Index pick = 0; pick < m; ++pick) {
    Eigen::VectorXcd best;
    double best_norm = -1.0;
    Eigen::MatrixXcd residuals(m, n);
    Eigen::VectorXd norms(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::VectorXcd c = vc.row(i).adjoint();
      if (basis.cols() > 0) c -= basis * (basis.adjoint() * c);
      residuals.col(i) = c;
      norms[i] = c.norm();
    }
    const double cutoff = 0.5 * norms.maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i)
      if (norms[i] >= cutoff) {
        best = residuals.col(i);
        best_norm = norms[i];
        break;
      }
    best /= best_norm;
    // Second pass keeps the basis orthonormal to rounding.
    if (basis.cols() > 0) {
      best -= basis * (basis.adjoint() * best);
      best.normalize();
    }
    basis.conservativeResize(m, basis.cols() + 1);
    basis.col(basis.cols() - 1) = best;
  }
  v.middleCols(start, m) = vc * basis;
}

void fix_phase(Eigen::MatrixXcd& v) {
  for (Eigen::Index k = 0; k < v.cols(); ++k) {
    auto col = v.col(k);
    const double top = col.cwiseAbs().maxCoeff();
    Eigen::Index idx = 0;
    while (std::abs(col[idx]) < (1.0 - 1e-8) * top) ++idx;
    const cplx z = col[idx];
    col *= std::abs(z) / z;
    col[idx] = std::abs(z);
  }
}

void check_input(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw NonHermitianInput("matrix is not square");
  if (h.size() == 0) return;
  const double scale = h.cwiseAbs().maxCoeff();
  const double defect = hermiticity_defect(h);
  if (defect > 1e-12 * scale)
    throw NonHermitianInput("hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
}

void check_info(lapack_int info, const char* routine) {
  if (info > 0)
    throw ConvergenceFailure(std::string(routine) + " failed to converge (" + std::to_string(info) + ")", info);
  if (info < 0) throw std::logic_error(std::string(routine) + ": bad argument " + std::to_string(-info));
}

// Canonical cluster bases, phase fix and residuals for the computed pairs.
void finish(const Eigen::MatrixXcd& h, EigenSolution& sol, Eigen::MatrixXcd a) {
  const Eigen::Index n = h.rows(), m = a.cols();
  const double tol = 1e-12 * h.norm();
  for (Eigen::Index s = 0; s < m;) {
    Eigen::Index e = s + 1;
    while (e < m && sol.values[e] - sol.values[e - 1] < tol) ++e;
    if (e - s > 1) canonicalize_cluster(a, s, e - s);
    s = e;
  }
  fix_phase(a);

  Eigen::MatrixXcd hv(n, m);
  const Eigen::SparseMatrix<cplx> hs = h.sparseView();
  if (hs.nonZeros() * 8 < n * n) {
    hv.noalias() = hs * a;
  } else if (m > 0) {
    const cplx one(1.0), zero(0.0);
    cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, m, n, &one, h.data(), n, a.data(), n, &zero,
                hv.data(), n);
  }
  hv -= a * sol.values.asDiagonal();
  sol.max_residual = m > 0 ? hv.colwise().norm().maxCoeff() : 0.0;
  sol.vectors = std::move(a);
}

}  // namespace

EigenSolution eig_hermitian(const Eigen::MatrixXcd& h) {
  check_input(h);
  const Eigen::Index n = h.rows();
  EigenSolution sol;
  if (n == 0) return sol;
  pin_blas_threads();
  Eigen::MatrixXcd a = h;
  sol.values.resize(n);
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                            reinterpret_cast<lapack_complex_double*>(a.data()), static_cast<lapack_int>(n),
                            sol.values.data()),
             "zheevd");
  finish(h, sol, std::move(a));
  return sol;
}

EigenSolution eig_hermitian_window(const Eigen::MatrixXcd& h, double lo, double hi) {
  check_input(h);
  if (!(lo < hi)) throw std::invalid_argument("eig_hermitian_window: empty interval");
  const Eigen::Index n = h.rows();
  EigenSolution sol;
  if (n == 0) return sol;
  pin_blas_threads();
  Eigen::MatrixXcd a = h;
  Eigen::VectorXd w(n);
  Eigen::MatrixXcd z(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const auto ln = static_cast<lapack_int>(n);
  check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', ln, reinterpret_cast<lapack_complex_double*>(a.data()),
                            ln, lo, hi, 0, 0, LAPACKE_dlamch('S'), &found, w.data(),
                            reinterpret_cast<lapack_complex_double*>(z.data()), ln, support.data()),
             "zheevr");
  sol.values = w.head(found);
  finish(h, sol, z.leftCols(found));
  return sol;
}

double orthogonality_defect(const Eigen::MatrixXcd& vectors) {
  if (vectors.size() == 0) return 0.0;
  const Eigen::MatrixXcd g = vectors.adjoint() * vectors;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace junctionlab
