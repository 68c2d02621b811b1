#include "dqmem/matrix_exp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dqmem {
namespace {

using Eigen::MatrixXd;

struct PadeTerms {
  MatrixXd u;
  MatrixXd v;
};

template <std::size_t N>
PadeTerms pade_low(const MatrixXd& a, const std::array<double, N>& b) {
  // Orders 3, 5, 7, 9: U = A sum b_odd A^2j, V = sum b_even A^2j.
  const auto n = a.rows();
  const MatrixXd a2 = a * a;
  MatrixXd power = MatrixXd::Identity(n, n);
  MatrixXd odd = b[1] * power;
  MatrixXd even = b[0] * power;
  for (std::size_t j = 2; j < N; j += 2) {
    power = power * a2;
    even += b[j] * power;
    odd += b[j + 1] * power;
  }
  return {a * odd, even};
}

PadeTerms pade13(const MatrixXd& a) {
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const MatrixXd id = MatrixXd::Identity(n, n);
  const MatrixXd a2 = a * a;
  const MatrixXd a4 = a2 * a2;
  const MatrixXd a6 = a4 * a2;
  const MatrixXd inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                           b[5] * a4 + b[3] * a2 + b[1] * id;
  MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
               b[2] * a2 + b[0] * id;
  return {a * inner_u, std::move(v)};
}

MatrixXd solve_pade(const PadeTerms& t) {
  return (t.v - t.u).partialPivLu().solve(t.v + t.u);
}

}  // namespace

MatrixXd expm(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm needs a square matrix");
  if (a.rows() == 0) return a;

  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm <= 1.495585217958292e-2) {
    return solve_pade(pade_low<4>(a, {120.0, 60.0, 12.0, 1.0}));
  }
  if (norm <= 2.539398330063230e-1) {
    return solve_pade(pade_low<6>(a, {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}));
  }
  if (norm <= 9.504178996162932e-1) {
    return solve_pade(pade_low<8>(
        a, {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0}));
  }
  if (norm <= 2.097847961257068) {
    return solve_pade(pade_low<10>(
        a, {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
            2162160.0, 110880.0, 3960.0, 90.0, 1.0}));
  }
  constexpr double theta13 = 5.371920351148152;
  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
  MatrixXd result = solve_pade(pade13(a * std::ldexp(1.0, -squarings)));
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Eigen::VectorXd expm_times_vector(const Eigen::SparseMatrix<double>& a,
                                  const Eigen::VectorXd& v) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (a.rows() != a.cols() || static_cast<std::size_t>(v.size()) != n) {
    throw std::invalid_argument("expm_times_vector: dimension mismatch");
  }

  // Union-find over the sparsity pattern.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&parent](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int col = 0; col < a.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto r = find(static_cast<std::size_t>(it.row()));
      const auto c = find(static_cast<std::size_t>(it.col()));
      if (r != c) parent[std::max(r, c)] = std::min(r, c);
    }
  }

  std::vector<std::vector<std::size_t>> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[find(i)].push_back(i);

  // Position of each index inside its block.
  std::vector<Eigen::Index> local(n);
  for (const auto& block : blocks) {
    for (std::size_t j = 0; j < block.size(); ++j) local[block[j]] = static_cast<Eigen::Index>(j);
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    const bool touched = std::any_of(block.begin(), block.end(), [&](std::size_t i) {
      return v[static_cast<Eigen::Index>(i)] != 0.0;
    });
    if (!touched) continue;

    const auto m = static_cast<Eigen::Index>(block.size());
    MatrixXd dense = MatrixXd::Zero(m, m);
    Eigen::VectorXd sub(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto col = static_cast<Eigen::Index>(block[static_cast<std::size_t>(j)]);
      sub[j] = v[col];
      // SparseMatrix<double> is column-major: the outer index is the column.
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
        dense(local[static_cast<std::size_t>(it.row())], j) = it.value();
      }
    }
    const Eigen::VectorXd res = expm(dense) * sub;
    for (Eigen::Index j = 0; j < m; ++j) {
      out[static_cast<Eigen::Index>(block[static_cast<std::size_t>(j)])] = res[j];
    }
  }
  return out;
}

}  // namespace dqmem
