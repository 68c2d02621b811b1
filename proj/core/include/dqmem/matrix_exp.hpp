#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dqmem {

/// Dense matrix exponential by Pade scaling and squaring (orders 3..13,
/// Higham 2005 thresholds).
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

/// exp(a) * v for sparse a. a is split into its connected blocks (in the
/// undirected sparsity graph); only blocks on which v has support are
/// exponentiated, each densely via expm().
Eigen::VectorXd expm_times_vector(const Eigen::SparseMatrix<double>& a,
                                  const Eigen::VectorXd& v);

}  // namespace dqmem
