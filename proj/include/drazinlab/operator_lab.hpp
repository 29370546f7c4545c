#pragma once

// One-sided generalized Drazin phenomena on banded operators: the shift
// bundle T = R (+) W with W the harmonic weighted shift, quasi-polar round
// trips, truncated left resolvent series, commutant invariance of the
// spectral idempotent, and adjoint duality.
//
// Every check is a window check on e_1..e_N (per component). Structural
// identities are expected to hold with deviation exactly 0; identities that
// involve truncated series are compared against their error budget plus
// kCoefficientTol.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "drazinlab/banded.hpp"

namespace drazin {

/// Residuals of the two algebraic one-sided axioms on a window. Left:
/// |TST - ST^2|, |S^2T - S|. Right: |TST - T^2S|, |TS^2 - S|.
struct WindowAxioms {
  double r_weak_commute = 0.0;
  double r_inner = 0.0;
  double max() const { return std::max(r_weak_commute, r_inner); }
  bool passes(double tol = kCoefficientTol) const { return max() <= tol; }
};

WindowAxioms check_left_gd_window(const BandedOp& t, const BandedOp& s, int n);
WindowAxioms check_right_gd_window(const BandedOp& t, const BandedOp& s, int n);

struct WindowAssertion {
  std::string name;
  double deviation = 0.0;
  double allowance = 0.0;
  bool passed = false;
};

inline constexpr int kQnilSamples = 60;
inline constexpr double kQnilThreshold = 0.05;

/// T = R (+) W with R the unilateral right shift and W e_k = e_{k+1} / k,
/// S = L (+) 0 with L the left shift, P = I - ST = 0 (+) I.
struct ShiftBundle {
  BandedOp right_shift;
  BandedOp weighted_shift;
  BandedOp left_shift;
  BandedOp t;
  BandedOp s;
  /// Canonical idempotent 0 (+) I.
  BandedOp p;
  /// I - ST as computed from the formula.
  BandedOp p_formula;
  /// TP built from the canonical idempotent.
  BandedOp tp;
  BandedOp t_plus_p;
  LeftInverseWitness left_inverse;
  QnilCertificate tp_certificate;
  /// e_1 of the first block annihilates the range of T + P.
  RangeAnnihilator non_invertibility;
  std::vector<WindowAssertion> assertions;
  int window = kDefaultWindow;

  bool passed() const;
};

ShiftBundle make_shift_bundle(int window = kDefaultWindow, int neumann_terms = kNeumannTerms);

/// The operator T e_k = e_{k+1} / k.
BandedOp harmonic_weighted_shift();

struct QuasipolarReport {
  WindowAxioms input;
  BandedOp q;
  BandedOp b;
  /// |q^2 - q| and |Tq - qT|.
  double q_idempotent = 0.0;
  double q_commutes = 0.0;
  /// |bT - q|, |TbT - bT^2|, |b^2T - b|.
  double b_recovers_q = 0.0;
  double b_weak_commute = 0.0;
  double b_inner = 0.0;
  /// |b - S|, informational.
  double b_minus_s = 0.0;
  bool passed = false;
};

/// q = ST and the reconstruction b = qSq.
QuasipolarReport quasipolar_left_witness(const BandedOp& t, const BandedOp& s, int n);

struct ResolventReport {
  Complex lambda;
  int terms = 0;
  BandedOp resolvent;
  /// |lambda| * |c| for the left inverse c of T + P.
  double contraction = 0.0;
  double remainder_bound = 0.0;
  /// max over the window of |L(lambda - T)e - e|.
  double residual = 0.0;
  bool passed = false;
};

/// Truncated left inverse of lambda - T:
///   L = -sum_{k<=K} lambda^k c^{k+1} (I - P) + sum_{k<=K} lambda^{-k-1} (TP)^k P
/// with c a left inverse of T + P (derived from the shift library unless
/// supplied). Requires lambda != 0 and |lambda| |c| < 1.
ResolventReport left_resolvent(const BandedOp& t, const BandedOp& p, Complex lambda, int terms,
                               int window = 64,
                               const std::optional<LeftInverseWitness>& c = std::nullopt);

/// left_resolvent at `count` points equally spaced on |lambda| = radius.
std::vector<ResolventReport> left_resolvent_ring(const BandedOp& t, const BandedOp& p,
                                                 double radius, int count, int terms,
                                                 int window = 64);

enum class WitnessSide { left, right };

struct CommutantReport {
  double commute_deviation = 0.0;
  /// |WP - PWP| (left) or |PW - PWP| (right) on the window.
  double deviation = 0.0;
  bool passed = false;
};

/// P = I - ST (left) or I - TS (right). W must commute with T.
CommutantReport commutant_invariance(const BandedOp& t, const BandedOp& s, const BandedOp& w,
                                     int n, WitnessSide side = WitnessSide::left);

struct OperatorDualityReport {
  WindowAxioms left;
  WindowAxioms adjoint_right;
  std::optional<QnilCertificate> adjoint_certificate;
  bool passed = false;
};

/// Checks that S* satisfies the right axioms for T*. When `qnil_part` (the
/// operator TP) is given, also certifies (TP)* quasi-nilpotent.
OperatorDualityReport operator_adjoint_duality(const BandedOp& t, const BandedOp& s, int n,
                                               const std::optional<BandedOp>& qnil_part =
                                                   std::nullopt);

inline constexpr double kUniquenessTol = 1e-10;

struct UniquenessReport {
  WindowAxioms left;
  WindowAxioms right;
  /// max over the window of |(S_l - S_r) e_k|.
  double gap = 0.0;
  bool passed = false;
};

/// A left and a right inverse of the same operator must coincide.
UniquenessReport gd_uniqueness(const BandedOp& t, const BandedOp& s_left, const BandedOp& s_right,
                               int n);

} // namespace drazin
