#pragma once

// Drazin, group and one-sided Drazin inverses of square complex matrices.
//
// The primary algorithm splits the spectrum into a core cluster and a zero
// cluster with a reordered Schur form, decouples the two blocks with a
// triangular Sylvester solve, inverts the core block and drops the nil block.
// The pseudoinverse formula A^k pinv(A^{2k+1}) A^k is kept as an independent
// oracle.
//
// All residuals are relative: each defect norm is divided by the product of
// the operand norms that bound it (Frobenius norms throughout).

#include <optional>
#include <vector>

#include "drazinlab/linalg.hpp"

namespace drazin {

/// Default pass threshold for relative axiom residuals.
inline constexpr double kAxiomTol = 1e-8;

enum class Side { left, right };

const char* to_string(Side side);

/// Residuals of one axiom triple. For the left variants the fields are
/// |axa - xa^2|, |x^2a - x|, |xa^{j+1} - a^j|; for the right variants
/// |aya - a^2y|, |ay^2 - y|, |a^{j+1}y - a^j|. For the two-sided relations
/// r_weak_commute holds |ax - xa| instead.
struct AxiomResiduals {
  double r_weak_commute = 0.0;
  double r_inner = 0.0;
  double r_index = 0.0;

  double max() const;
  bool passes(double tol = kAxiomTol) const { return max() <= tol; }
};

struct DrazinOptions {
  RankTol rank_tol;
  /// Explicit zero-cluster radius. When unset, the cluster size is taken
  /// from the rank count n - rank(A^index) and the smallest eigenvalues by
  /// modulus are assigned to it.
  std::optional<double> theta;
  /// The split is refused when the largest zero-cluster modulus exceeds
  /// gap_ratio times the smallest core modulus.
  double gap_ratio = 0.5;
};

struct DrazinResult {
  CMatrix inverse;
  int index = 0;
  /// I - XA, the projector onto the generalized null space along the core.
  CMatrix idempotent;
  /// Two-sided relations |AX - XA|, |X^2A - X|, |A^{j+1}X - A^j|.
  AxiomResiduals residuals;
  int core_dim = 0;
};

/// rank(A^k) for k = 0..k_max, computed through the range chain.
std::vector<int> power_ranks(const CMatrix& a, int k_max, RankTol tol = std::nullopt);

/// Smallest k >= 0 with rank(A^k) = rank(A^{k+1}).
int drazin_index(const CMatrix& a, RankTol tol = std::nullopt);

DrazinResult drazin_inverse(const CMatrix& a, const DrazinOptions& options = {});

/// A^k pinv(A^{2k+1}) A^k with k = index, keeping rank(A^k) singular values.
CMatrix drazin_oracle(const CMatrix& a, int index, RankTol tol = std::nullopt);

/// Projector onto N(A^d) along R(A^d), d = index, built from the two chain
/// bases. Independent of the Schur route.
CMatrix spectral_projector(const CMatrix& a, RankTol tol = std::nullopt);

/// Residuals are relative to products of |A| and |X|. `a_scale` raises the
/// norm used for A, for callers whose A is a power that may have
/// underflowed to rounding noise.
AxiomResiduals check_left_drazin(const CMatrix& a, const CMatrix& x, int j, double a_scale = 0.0);
AxiomResiduals check_right_drazin(const CMatrix& a, const CMatrix& y, int j, double a_scale = 0.0);
AxiomResiduals check_two_sided(const CMatrix& a, const CMatrix& x, int j, double a_scale = 0.0);
AxiomResiduals check_group(const CMatrix& a, const CMatrix& x, Side side, double a_scale = 0.0);

struct NilpotencyReport {
  /// |(A - AXA)^2 - A(A - AXA)|, relative.
  double r_square = 0.0;
  /// |(A - AXA)^j|, relative to |A|^j.
  double r_power = 0.0;
  bool passes(double tol = kAxiomTol) const { return r_square <= tol && r_power <= tol; }
};

NilpotencyReport residual_nilpotency(const CMatrix& a, const CMatrix& x, int j);

/// Smallest m >= 1 with |M^m| <= tol s^m, s = max(|M|, scale). Empty when M
/// is not nilpotent, i.e. no such m exists up to the dimension. Pass the norm
/// of the ambient matrix as `scale` when M is a block that may be pure noise.
std::optional<int> nilpotency_order(const CMatrix& m, double tol = kAxiomTol, double scale = 0.0);

/// Index attached to a commuting idempotent: 0 when P = 0, otherwise the
/// nilpotency order of AP, decided by the default rank cutoff relative to
/// |A|^m |P|. Empty when AP is not nilpotent.
std::optional<int> idempotent_index(const CMatrix& a, const CMatrix& p, double tol = kAxiomTol);

/// P = I - XA for a left Drazin inverse X (or I - AY for a right one).
/// Refuses with PreconditionError when X fails its axioms.
CMatrix spectral_idempotent(const CMatrix& a, const CMatrix& x, Side side,
                            double tol = kAxiomTol);
CMatrix spectral_idempotent_left(const CMatrix& a, const CMatrix& x, double tol = kAxiomTol);

/// Left: (A+P)^{-1}(I-P). Right: (I-P)(A+P)^{-1}.
CMatrix inverse_from_idempotent(const CMatrix& a, const CMatrix& p, Side side,
                                double tol = kAxiomTol);

/// Returns the common value of a left inverse X and a right inverse Y,
/// which must coincide.
CMatrix merge_two_sided(const CMatrix& a, const CMatrix& x, const CMatrix& y, int j,
                        double tol = kAxiomTol);

/// X^n as a left Drazin inverse of A^n; at n = j also a left group inverse.
CMatrix power_lift(const CMatrix& x, const CMatrix& a, int n, int j, double tol = kAxiomTol);

/// Z = X A^{n-1} from a left group inverse X of A^n with AXA = XA^2.
CMatrix group_lift(const CMatrix& a, const CMatrix& x, int n, double tol = kAxiomTol);

struct BcWitness {
  /// |x - x^{j+1} a^j|: x lies in S a^j.
  double r_membership = 0.0;
  /// |x a^{j+1} - a^j|: z a b = b with b = a^j.
  double r_defining = 0.0;
  bool passes(double tol = kAxiomTol) const { return r_membership <= tol && r_defining <= tol; }
};

BcWitness bc_witness(const CMatrix& a, const CMatrix& x, int j);

struct EquationEquivalence {
  CMatrix left_solution;
  CMatrix drazin_solution;
  int index = 0;
  double deviation = 0.0;
};

/// Solves the left system {ABA = BA^2, B^2A = B, BA^{j+1} = A^j} through the
/// idempotent construction and compares with the Drazin inverse.
EquationEquivalence matrix_equation_equivalence(const CMatrix& a, double tol = 1e-9,
                                                const DrazinOptions& options = {});

struct AdjointDuality {
  AxiomResiduals left;
  AxiomResiduals adjoint_right;
  bool passed = false;
};

AdjointDuality adjoint_duality(const CMatrix& a, const CMatrix& x, int j, double tol = kAxiomTol);

struct BlockInvertibility {
  bool whole = false;
  bool range_block = false;
  bool kernel_block = false;
  int range_dim = 0;
};

/// Invertibility of A, of A on R(P) and of A on N(P) for a commuting idempotent P.
BlockInvertibility idempotent_block_invertibility(const CMatrix& a, const CMatrix& p,
                                                  RankTol tol = std::nullopt);

} // namespace drazin
