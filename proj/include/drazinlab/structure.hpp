#pragma once

// Kernel and range chains of a square matrix and what they determine:
// ascent, descent, the stable-iteration degree, the generalized null space
// and analytic core, the Kato-type splitting, the B-Fredholm index and
// finite-rank perturbation experiments.

#include <vector>

#include "drazinlab/engine.hpp"
#include "drazinlab/linalg.hpp"

namespace drazin {

/// Dimension tables for k = 0..k_max with k_max = n + 1.
struct ChainReport {
  int n = 0;
  /// dim N(A^k)
  std::vector<int> nullity;
  /// dim R(A^k)
  std::vector<int> rank;
  /// dim (N(A) ∩ R(A^k))
  std::vector<int> meet;
  /// dim (R(A) + N(A^k))
  std::vector<int> join;
  int asc = 0;
  int dsc = 0;
  /// Smallest k from which meet stays constant.
  int dis = 0;

  int k_max() const { return static_cast<int>(nullity.size()) - 1; }
  /// Number of k in 0..k_max-1 where nullity_{k+1} - nullity_k != meet_k
  /// or rank_k - rank_{k+1} != n - join_k.
  int kaashoek_violations() const;
};

ChainReport chain_report(const CMatrix& a, RankTol tol = std::nullopt);

/// N(A^d), d = drazin_index(A).
SubspaceBasis quasinilpotent_part(const CMatrix& a, RankTol tol = std::nullopt);

/// R(A^d), d = drazin_index(A).
SubspaceBasis analytic_core(const CMatrix& a, RankTol tol = std::nullopt);

inline constexpr double kInvarianceTol = 1e-8;

struct KatoDecomposition {
  SubspaceBasis core;
  SubspaceBasis nil;
  /// A restricted to the core and nil subspaces, in their orthonormal bases.
  CMatrix core_block;
  CMatrix nil_block;
  int index = 0;
  /// |(I - P_M) A M| / |A| for each subspace.
  double core_invariance = 0.0;
  double nil_invariance = 0.0;
  bool direct_sum = false;
  bool core_invertible = false;
  /// Nilpotency order of the nil block, 0 for an empty block.
  int nil_order = 0;
  /// dim N(A^j) + dim R(A^{j+1}) = n with trivial intersection.
  bool complemented = false;
  /// A maps R(A^j) onto itself.
  bool core_surjective = false;

  bool passed() const;
};

/// Throws ConditioningError when an invariance residual exceeds kInvarianceTol.
KatoDecomposition kato_decomposition(const CMatrix& a, RankTol tol = std::nullopt);

/// dim(N(A) ∩ R(A^n)) - codim(R(A) + N(A^n)). Requires n >= dis(A).
int bf_index(const CMatrix& a, int n, RankTol tol = std::nullopt);
int bf_index(const ChainReport& chain, int n);

inline constexpr double kExpansionTol = 1e-12;

struct PerturbReport {
  int n = 0;
  CMatrix f1;
  /// |(T+F)^n - T^n - F1| / (|T| + |F|)^n.
  double expansion_residual = 0.0;
  int rank_f = 0;
  int rank_f1 = 0;
  int index_before = 0;
  int index_after = 0;
  /// |rank (T+F)^n - rank T^n|
  int essential_dim_gap = 0;
  /// R(F1): R((T+F)^n) and R(T^n) agree up to this subspace.
  SubspaceBasis correction;
  bool correction_covers = false;
};

/// F1 = sum_{i<n} T^i F (T+F)^{n-1-i}, so (T+F)^n = T^n + F1.
PerturbReport perturb_expand(const CMatrix& t, const CMatrix& f, int n,
                             RankTol tol = std::nullopt);

struct IndexStability {
  ChainReport before;
  ChainReport after;
  int index_before = 0;
  int index_after = 0;
  bool equal = false;
};

/// B-Fredholm index of T and T + F, each at its own dis.
IndexStability index_stability(const CMatrix& t, const CMatrix& f, RankTol tol = std::nullopt);

struct DecompositionIndex {
  int whole = 0;
  /// dim N - codim R of A restricted to its analytic core.
  int core = 0;
  bool equal = false;
};

DecompositionIndex decomposition_index_equality(const CMatrix& a, RankTol tol = std::nullopt);

struct SpectrumSample {
  Complex lambda;
  int index = 0;
  AxiomResiduals residuals;
  /// Right axioms of X^* for conj(lambda) I - A^*.
  AxiomResiduals adjoint_right;
  bool passed = false;
};

struct SpectraScan {
  std::vector<SpectrumSample> samples;
  bool all_passed = false;
};

/// Drazin invertibility of lambda I - A at every eigenvalue of A and at the
/// extra samples.
SpectraScan spectra_scan(const CMatrix& a, const std::vector<Complex>& samples,
                         double tol = kAxiomTol, const DrazinOptions& options = {});

} // namespace drazin
