#pragma once

// Dense complex matrix kernel and the subspace calculus built on it.
//
// Matrices are plain Eigen::MatrixXcd values. Every rank decision goes
// through one singular value decomposition convention: a singular value
// counts when it exceeds tol * sigma_max, where tol defaults to
// max(rows, cols) * kRankTolPerDim.

#include <complex>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace drazin {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Per-dimension factor of the default relative rank tolerance. Chains of
/// ranges and kernels of similarity-transformed matrices carry rounding noise
/// of a few hundred epsilons, so the cutoff sits well above that floor.
inline constexpr double kRankTolPerDim = 1e-11;

/// Principal-angle cutoff used for intersections and sums of subspaces.
inline constexpr double kSubspaceTol = 1e-8;

/// Relative rank tolerance; std::nullopt selects the default rule.
using RankTol = std::optional<double>;

double default_rank_tol(const CMatrix& m);
double resolve_rank_tol(const CMatrix& m, RankTol tol);

/// Orthonormal spanning set of a subspace of C^ambient_dim, stored as the
/// columns of `vectors`.
struct SubspaceBasis {
  Index ambient_dim = 0;
  CMatrix vectors;
  double tol = kSubspaceTol;

  Index dim() const { return vectors.cols(); }
  bool empty() const { return vectors.cols() == 0; }

  /// Orthogonal projector onto the subspace.
  CMatrix projector() const;

  /// Max deviation of the Gram matrix from the identity.
  double orthonormality_defect() const;

  /// Distance of v from the subspace, relative to |v|.
  double distance(const CVector& v) const;

  static SubspaceBasis zero(Index n);
  static SubspaceBasis full(Index n);
  static SubspaceBasis span(const CMatrix& columns, double cutoff = kSubspaceTol);
};

void require_finite(const CMatrix& m, std::string_view what);
void require_square(const CMatrix& m, std::string_view what);
void require_same_shape(const CMatrix& a, const CMatrix& b, std::string_view what);

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const CMatrix& m);

/// Spectral norm (largest singular value).
double norm2(const CMatrix& m);

int rank(const CMatrix& m, RankTol tol = std::nullopt);

/// Rank with an absolute cutoff: counts singular values > cutoff.
int rank_above(const CMatrix& m, double cutoff);

SubspaceBasis null_basis(const CMatrix& m, RankTol tol = std::nullopt);
SubspaceBasis range_basis(const CMatrix& m, RankTol tol = std::nullopt);

/// Kernel/range with an absolute singular value cutoff.
SubspaceBasis null_basis_below(const CMatrix& m, double cutoff);
SubspaceBasis range_basis_above(const CMatrix& m, double cutoff);

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b);
SubspaceBasis subspace_sum(const SubspaceBasis& a, const SubspaceBasis& b);

/// Bases of R(A^k) for k = 0..k_max, built as R(A^{k+1}) = A R(A^k) so no
/// explicit power is ever formed. Rank cutoff is tol * sigma_max(A).
std::vector<SubspaceBasis> range_chain(const CMatrix& a, int k_max, RankTol tol = std::nullopt);

/// Bases of N(A^k) for k = 0..k_max, built as N(A^{k+1}) = {v : Av in N(A^k)}.
std::vector<SubspaceBasis> kernel_chain(const CMatrix& a, int k_max, RankTol tol = std::nullopt);

/// Moore-Penrose pseudoinverse by singular value truncation at tol * sigma_max.
CMatrix pinv(const CMatrix& m, RankTol tol = std::nullopt);

/// Pseudoinverse keeping exactly the `keep` largest singular values.
CMatrix pinv_truncated(const CMatrix& m, Index keep);

/// m^k by repeated squaring; m^0 is the identity.
CMatrix matrix_power(const CMatrix& m, int k);

CMatrix identity(Index n);

/// Frobenius-norm ratio |num| / scale, or |num| itself when scale is zero.
double relative(double num, double scale);

} // namespace drazin
