#include <doctest.h>

#include <cmath>

#include "drazinlab/errors.hpp"
#include "drazinlab/operator_lab.hpp"

using namespace drazin;

namespace {

BandedOp right() { return make_shift(ShiftKind::right); }
BandedOp left() { return make_shift(ShiftKind::left); }

} // namespace

TEST_SUITE("operator_lab") {

TEST_CASE("shift bundle identities are exact") {
  const ShiftBundle b = make_shift_bundle();
  CHECK(b.passed());
  REQUIRE_FALSE(b.assertions.empty());
  for (const auto& a : b.assertions) {
    INFO(a.name);
    CHECK(a.passed);
    CHECK(a.deviation <= a.allowance);
  }
  CHECK(verify_on_basis(b.p, b.p_formula, 128) == 0.0);
  CHECK(check_left_gd_window(b.t, b.s, 128).max() == 0.0);
  CHECK(b.non_invertibility.proven);
  CHECK(b.tp_certificate.verdict);
  CHECK(b.tp_certificate.samples.back().root < kQnilThreshold);
  // c = (I + W)^{-1} on the second block has norm sum 1/k! = e.
  CHECK(b.left_inverse.norm == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(verify_on_basis(b.left_inverse.inverse * b.t_plus_p, BandedOp::identity(2), 128) <=
        b.left_inverse.defect_bound + kCoefficientTol);
}

TEST_CASE("right shift is not right-invertible as an axiom witness") {
  // L satisfies the left axioms for R but not the right ones.
  CHECK(check_left_gd_window(right(), left(), 64).passes());
  CHECK_FALSE(check_right_gd_window(right(), left(), 64).passes());
  // And R satisfies the right axioms for L.
  CHECK(check_right_gd_window(left(), right(), 64).passes());
}

TEST_CASE("left resolvent of the unilateral shift") {
  const BandedOp t = right();
  const BandedOp p = BandedOp::zero();
  const ResolventReport r = left_resolvent(t, p, 0.25, 64, 64);
  CHECK(r.passed);
  CHECK(r.contraction == doctest::Approx(0.25));
  // Exact tail of the geometric series.
  const double budget = std::pow(0.25, 65) / 0.75;
  CHECK(r.remainder_bound <= budget * (1 + 1e-12));
  CHECK(r.residual <= budget + kCoefficientTol);
  // Truncation error is visible with few terms and shrinks with more.
  const ResolventReport few = left_resolvent(t, p, 0.25, 4, 64);
  CHECK(few.residual > 1e-4);
  CHECK(few.residual <= few.remainder_bound + kCoefficientTol);
}

TEST_CASE("left resolvent of the bundle on a ring") {
  const ShiftBundle b = make_shift_bundle(64);
  const auto ring = left_resolvent_ring(b.t, b.p, 0.2, 8, 40, 64);
  REQUIRE(ring.size() == 8);
  for (const auto& r : ring) {
    CHECK(std::abs(std::abs(r.lambda) - 0.2) < 1e-15);
    CHECK(r.passed);
    CHECK(r.contraction == doctest::Approx(0.2 * std::exp(1.0)).epsilon(1e-9));
    CHECK(r.residual <= r.remainder_bound + kCoefficientTol);
  }
}

TEST_CASE("left resolvent preconditions") {
  const ShiftBundle b = make_shift_bundle(32);
  CHECK_THROWS_AS(left_resolvent(b.t, b.p, 0.0, 10), InputError);
  CHECK_THROWS_AS(left_resolvent(b.t, b.p, 0.5, 10), OutOfDiskError);
  CHECK_THROWS_AS(left_resolvent(b.t, b.p, 0.1, -1), InputError);
  CHECK_THROWS_AS(left_resolvent(b.t, BandedOp::zero(), 0.1, 10), ShapeError);
  // P = R is not idempotent.
  CHECK_THROWS_AS(left_resolvent(right(), right(), 0.1, 10), PreconditionError);
  CHECK_THROWS_AS(left_resolvent_ring(b.t, b.p, 0.0, 4, 10), InputError);
}

TEST_CASE("commutant invariance") {
  const ShiftBundle b = make_shift_bundle(64);
  const BandedOp i2 = BandedOp::identity(2);
  const BandedOp t2 = b.t * b.t;
  const BandedOp poly = i2 - scale(Rational(2), b.t) + scale(Rational(3), t2);
  for (const BandedOp& w : {i2, b.t, t2, poly}) {
    const CommutantReport r = commutant_invariance(b.t, b.s, w, 64);
    CHECK(r.passed);
    CHECK(r.commute_deviation <= 1e-15);
    CHECK(r.deviation <= 1e-12);
  }
  // The right-side version for L with witness R.
  const CommutantReport r = commutant_invariance(left(), right(), left() * left(), 64,
                                                 WitnessSide::right);
  CHECK(r.passed);
  // S does not commute with T.
  CHECK_THROWS_AS(commutant_invariance(b.t, b.s, b.s, 64), PreconditionError);
  // A broken witness is refused.
  CHECK_THROWS_AS(commutant_invariance(right(), right(), right(), 64), PreconditionError);
}

TEST_CASE("quasipolar witness recovers the idempotent") {
  const ShiftBundle b = make_shift_bundle(64);
  const QuasipolarReport q = quasipolar_left_witness(b.t, b.s, 64);
  CHECK(q.passed);
  CHECK(q.q_idempotent == 0.0);
  CHECK(q.q_commutes == 0.0);
  CHECK(q.b_recovers_q == 0.0);
  CHECK(q.b_weak_commute == 0.0);
  CHECK(q.b_inner == 0.0);
  CHECK(q.b_minus_s == 0.0);
  CHECK_THROWS_AS(quasipolar_left_witness(right(), right(), 16), PreconditionError);
}

TEST_CASE("adjoint duality for banded operators") {
  const ShiftBundle b = make_shift_bundle(64);
  const OperatorDualityReport d = operator_adjoint_duality(b.t, b.s, 64, b.tp);
  CHECK(d.passed);
  CHECK(d.left.max() == 0.0);
  CHECK(d.adjoint_right.max() == 0.0);
  REQUIRE(d.adjoint_certificate);
  CHECK(d.adjoint_certificate->verdict);
  CHECK_THROWS_AS(operator_adjoint_duality(right(), right(), 16), PreconditionError);
}

TEST_CASE("one-sided witnesses coincide") {
  // T = (I + R/2) (+) W: both witnesses are c (+) 0.
  const BandedOp w = harmonic_weighted_shift();
  const BandedOp t = direct_sum({BandedOp::identity() + scale(Rational(1, 2), right()), w});
  const LeftInverseWitness c = derive_left_inverse(BandedOp::identity() + scale(Rational(1, 2), right()), 80);
  const BandedOp s = direct_sum({c.inverse, BandedOp::zero()});
  const UniquenessReport u = gd_uniqueness(t, s, s, 48);
  CHECK(u.gap == 0.0);
  CHECK(u.passed);
  // For T = I (+) 0, S = 0 meets the algebraic right axioms but not the
  // quasi-nilpotency condition, so the window check sees two witnesses.
  const BandedOp t2 = direct_sum({BandedOp::identity(), BandedOp::zero()});
  CHECK_THROWS_AS(gd_uniqueness(t2, t2, BandedOp::zero(2), 16), TheoremViolation);
}

}
