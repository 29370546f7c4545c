#include <doctest.h>

#include "drazinlab/corpus.hpp"
#include "drazinlab/engine.hpp"
#include "drazinlab/errors.hpp"
#include "helpers.hpp"

using namespace drazin;
using testing::diag;

namespace {

CMatrix idempotent_2x2() {
  CMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 0.0;
  return m;
}

// Index from explicit powers of the exact block matrix C (+) N, which the
// generator keeps alongside A.
int brute_force_index(const CorpusMatrix& m) {
  const CMatrix b = m.similarity.inverse() * m.a * m.similarity;
  const double cutoff = 1e-8 * std::max(b.norm(), 1.0);
  const Index n = b.rows();
  int prev = static_cast<int>(n);
  for (int k = 0; k <= n; ++k) {
    const int next = testing::svd_rank(matrix_power(b, k + 1), cutoff);
    if (next == prev) {
      return k;
    }
    prev = next;
  }
  return static_cast<int>(n);
}

double rel(const CMatrix& x, const CMatrix& y) {
  return (x - y).norm() / std::max({x.norm(), y.norm(), 1.0});
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("drazin index examples") {
  CHECK(drazin_index(identity(4)) == 0);
  CHECK(drazin_index(jordan_block(3)) == 3);
  CHECK(drazin_index(CMatrix::Zero(3, 3)) == 1);
  PortableRng rng(1);
  const CMatrix b = direct_sum({diag({1.0, 2.0}), jordan_block(2)});
  CHECK(drazin_index(random_similarity_transform(rng, b, 20.0)) == 2);
  CHECK_THROWS_AS(drazin_index(CMatrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("drazin inverse examples") {
  DrazinResult d = drazin_inverse(diag({2.0, 0.0}));
  CHECK(d.index == 1);
  CHECK(rel(d.inverse, diag({0.5, 0.0})) < 1e-14);
  CHECK(rel(d.idempotent, diag({0.0, 1.0})) < 1e-14);

  d = drazin_inverse(jordan_block(2));
  CHECK(d.index == 2);
  CHECK(d.inverse.norm() < 1e-14);

  d = drazin_inverse(idempotent_2x2());
  CHECK(d.index == 1);
  CHECK(rel(d.inverse, idempotent_2x2()) < 1e-14);

  d = drazin_inverse(CMatrix::Zero(2, 2));
  CHECK(d.index == 1);
  CHECK(d.inverse.norm() == 0.0);

  d = drazin_inverse(identity(3));
  CHECK(d.index == 0);
  CHECK(rel(d.inverse, identity(3)) < 1e-14);
}

TEST_CASE("axiom checker examples") {
  for (auto check : {check_left_drazin, check_right_drazin}) {
    CHECK(check(identity(2), identity(2), 0, 0.0).max() == 0.0);
    CHECK(check(diag({2.0, 0.0}), diag({0.5, 0.0}), 1, 0.0).max() == 0.0);
    CHECK(check(jordan_block(2), CMatrix::Zero(2, 2), 2, 0.0).max() == 0.0);
  }
  CHECK_THROWS_AS(check_left_drazin(identity(2), identity(3), 0), ShapeError);
  CHECK_THROWS_AS(check_right_drazin(identity(2), identity(2), -1), InputError);
  // A wrong candidate is detected.
  CHECK_FALSE(check_left_drazin(diag({2.0, 0.0}), diag({1.0, 0.0}), 1).passes());
}

TEST_CASE("residual nilpotency examples") {
  NilpotencyReport r = residual_nilpotency(identity(3), identity(3), 1);
  CHECK(r.r_square == 0.0);
  CHECK(r.r_power == 0.0);
  r = residual_nilpotency(diag({2.0, 0.0}), diag({0.5, 0.0}), 1);
  CHECK(r.passes());
  // A - AXA = J_3 for X = 0, whose cube vanishes but square does not.
  CHECK(residual_nilpotency(jordan_block(3), CMatrix::Zero(3, 3), 3).passes());
  CHECK_FALSE(residual_nilpotency(jordan_block(3), CMatrix::Zero(3, 3), 2).passes());
}

TEST_CASE("spectral idempotent examples") {
  CHECK(spectral_idempotent_left(diag({2.0, 3.0}), diag({0.5, 1.0 / 3.0})).norm() < 1e-15);
  CHECK(rel(spectral_idempotent_left(diag({2.0, 0.0}), diag({0.5, 0.0})), diag({0.0, 1.0})) ==
        0.0);
  CHECK(rel(spectral_idempotent_left(jordan_block(3), CMatrix::Zero(3, 3)), identity(3)) == 0.0);
  CHECK_THROWS_AS(spectral_idempotent_left(diag({2.0, 0.0}), diag({1.0, 0.0})),
                  PreconditionError);
}

TEST_CASE("inverse from idempotent examples") {
  CHECK(rel(inverse_from_idempotent(diag({2.0, 0.0}), diag({0.0, 1.0}), Side::left),
            diag({0.5, 0.0})) < 1e-15);
  CHECK(rel(inverse_from_idempotent(identity(2), CMatrix::Zero(2, 2), Side::right),
            identity(2)) < 1e-15);
  // P not idempotent, P not commuting, AP not nilpotent.
  CHECK_THROWS_AS(inverse_from_idempotent(diag({2.0, 0.0}), diag({0.0, 2.0}), Side::left),
                  PreconditionError);
  CHECK_THROWS_AS(inverse_from_idempotent(jordan_block(2), diag({1.0, 0.0}), Side::left),
                  PreconditionError);
  CHECK_THROWS_AS(inverse_from_idempotent(diag({2.0, 3.0}), diag({0.0, 1.0}), Side::left),
                  PreconditionError);
}

TEST_CASE("merge two sided") {
  CHECK(rel(merge_two_sided(identity(2), identity(2), identity(2), 0), identity(2)) == 0.0);
  CHECK(rel(merge_two_sided(diag({2.0, 0.0}), diag({0.5, 0.0}), diag({0.5, 0.0}), 1),
            diag({0.5, 0.0})) == 0.0);
  CHECK_THROWS_AS(merge_two_sided(diag({2.0, 0.0}), diag({1.0, 0.0}), diag({0.5, 0.0}), 1),
                  PreconditionError);
}

TEST_CASE("power and group lifts") {
  CHECK(rel(power_lift(identity(2), identity(2), 3, 0), identity(2)) == 0.0);
  const CMatrix x2 = power_lift(diag({0.5, 0.0}), diag({2.0, 0.0}), 2, 1);
  CHECK(rel(x2, diag({0.25, 0.0})) == 0.0);
  CHECK(check_left_drazin(diag({4.0, 0.0}), x2, 1).passes());
  CHECK_THROWS_AS(power_lift(diag({1.0, 0.0}), diag({2.0, 0.0}), 2, 1), PreconditionError);

  CHECK(rel(group_lift(diag({2.0, 4.0}), diag({0.5, 0.25}), 1), diag({0.5, 0.25})) < 1e-15);
  CHECK(rel(group_lift(diag({2.0, 0.0}), diag({0.25, 0.0}), 2), diag({0.5, 0.0})) < 1e-15);
  CHECK_THROWS_AS(group_lift(diag({2.0, 0.0}), diag({1.0, 0.0}), 2), PreconditionError);

  // Index-2 matrix: X^2 is a left group inverse of A^2, and the group lift of
  // (A^2)^D recovers A^D.
  PortableRng rng(2);
  const CMatrix a =
      random_similarity_transform(rng, direct_sum({diag({1.5, -0.8}), jordan_block(2)}), 10.0);
  const DrazinResult d = drazin_inverse(a);
  REQUIRE(d.index == 2);
  const CMatrix x2a = power_lift(d.inverse, a, 2, 2);
  CHECK(check_group(matrix_power(a, 2), x2a, Side::left).passes());
  CHECK(rel(group_lift(a, x2a, 2), d.inverse) < 1e-9);
}

TEST_CASE("group axioms") {
  CHECK(check_group(identity(2), identity(2), Side::left).max() == 0.0);
  CHECK(check_group(diag({2.0, 0.0}), diag({0.5, 0.0}), Side::left).max() == 0.0);
  // No candidate makes a nonzero nilpotent matrix group invertible:
  // X A^2 = 0 always, so |X A^2 - A| = |A|.
  PortableRng rng(3);
  const CMatrix j = jordan_block(2);
  for (int trial = 0; trial < 200; ++trial) {
    const CMatrix x = testing::random_matrix(rng, 2, 2) * rng.uniform(0.0, 10.0);
    const AxiomResiduals r = check_group(j, x, Side::left);
    CHECK(r.r_index * std::max(x.norm() * j.norm() * j.norm(), j.norm()) >= j.norm() * 0.999);
    CHECK_FALSE(r.passes());
  }
}

TEST_CASE("bc witness, equation equivalence and adjoint duality examples") {
  CHECK(bc_witness(identity(2), identity(2), 0).passes());
  const BcWitness w = bc_witness(diag({2.0, 0.0}), diag({0.5, 0.0}), 1);
  CHECK(w.r_membership == 0.0);
  CHECK(w.r_defining == 0.0);

  EquationEquivalence e = matrix_equation_equivalence(identity(3));
  CHECK(rel(e.left_solution, identity(3)) < 1e-15);
  e = matrix_equation_equivalence(jordan_block(3));
  CHECK(e.left_solution.norm() < 1e-15);
  CHECK(e.drazin_solution.norm() < 1e-15);

  CHECK(adjoint_duality(identity(2), identity(2), 0).passed);
  CHECK(adjoint_duality(diag({2.0, 0.0}), diag({0.5, 0.0}), 1).passed);
}

TEST_CASE("corpus properties") {
  const auto corpus = generate_corpus(31, 150);
  double worst_oracle = 0.0;
  double worst_equation = 0.0;
  for (const auto& m : corpus) {
    const DrazinResult d = drazin_inverse(m.a);
    CHECK(d.index == m.index);
    CHECK(d.index == brute_force_index(m));
    CHECK(d.index <= m.a.rows());
    CHECK(d.residuals.passes());
    CHECK(check_left_drazin(m.a, d.inverse, d.index).passes());
    CHECK(check_right_drazin(m.a, d.inverse, d.index).passes());
    CHECK(residual_nilpotency(m.a, d.inverse, d.index).passes());
    CHECK(bc_witness(m.a, d.inverse, d.index).passes());
    CHECK(adjoint_duality(m.a, d.inverse, d.index).passed);

    // Exact ground truth: A^D = S (C^{-1} (+) 0) S^{-1}.
    CMatrix core_inv = CMatrix::Zero(m.a.rows(), m.a.cols());
    const CMatrix b = m.similarity.inverse() * m.a * m.similarity;
    if (m.core_dim > 0) {
      core_inv.topLeftCorner(m.core_dim, m.core_dim) =
          b.topLeftCorner(m.core_dim, m.core_dim).inverse();
    }
    const CMatrix truth = m.similarity * core_inv * m.similarity.inverse();
    CHECK(rel(d.inverse, truth) < 1e-8);
    worst_oracle = std::max(worst_oracle, rel(d.inverse, drazin_oracle(m.a, d.index)));

    const CMatrix x = inverse_from_idempotent(m.a, d.idempotent, Side::left);
    const CMatrix y = inverse_from_idempotent(m.a, d.idempotent, Side::right);
    CHECK(rel(x, d.inverse) < 1e-9);
    CHECK(rel(merge_two_sided(m.a, x, y, d.index), d.inverse) < 1e-9);
    worst_equation = std::max(worst_equation, matrix_equation_equivalence(m.a).deviation);

    const BlockInvertibility blocks = idempotent_block_invertibility(m.a, d.idempotent);
    CHECK(blocks.whole == (blocks.range_block && blocks.kernel_block));
    CHECK(blocks.range_dim == m.nil_dim);
    CHECK(check_group(m.a, d.inverse, Side::left).passes() == (m.index <= 1));
  }
  CHECK(worst_oracle < 1e-8);
  CHECK(worst_equation < 1e-9);
}

TEST_CASE("explicit zero-cluster radius") {
  DrazinOptions opts;
  opts.theta = 1e-6;
  const DrazinResult d = drazin_inverse(diag({2.0, 0.0, 0.5}), opts);
  CHECK(d.core_dim == 2);
  CHECK(rel(d.inverse, diag({0.5, 0.0, 2.0})) < 1e-14);
  // A radius that swallows a core eigenvalue contradicts the rank count.
  opts.theta = 1.0;
  CHECK_THROWS_AS(drazin_inverse(diag({2.0, 0.0, 0.5}), opts), SpectralSplitError);
}

TEST_CASE("nilpotency order") {
  CHECK(nilpotency_order(jordan_block(4)) == 4);
  CHECK(nilpotency_order(CMatrix::Zero(2, 2)) == 1);
  CHECK_FALSE(nilpotency_order(identity(2)).has_value());
  CHECK(idempotent_index(diag({2.0, 0.0}), CMatrix::Zero(2, 2)) == 0);
  CHECK(idempotent_index(jordan_block(3), identity(3)) == 3);
}

}
