#include "drazinlab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "drazinlab/errors.hpp"

namespace drazin {

namespace {

double fro(const CMatrix& m) { return m.norm(); }

double pow_norm(double base, int k) { return std::pow(base, static_cast<double>(k)); }

// A nonzero idempotent has norm at least 1; a computed P = I - XA that
// should vanish is rounding noise and must not set its own scale.
double idempotent_scale(const CMatrix& p) { return std::max(fro(p), 1.0); }

// A nonzero Drazin inverse has |X| >= 1/|A| (from XAX = X), so a computed X
// below that is rounding noise and is measured against 1/|A|.
double inverse_scale(double nx, double na) { return na > 0.0 ? std::max(nx, 1.0 / na) : nx; }

std::string describe(const AxiomResiduals& r) {
  std::ostringstream os;
  os << "(" << r.r_weak_commute << ", " << r.r_inner << ", " << r.r_index << ")";
  return os.str();
}

void require_pair(const CMatrix& a, const CMatrix& x, const char* what) {
  require_square(a, what);
  require_same_shape(a, x, what);
  require_finite(a, what);
  require_finite(x, what);
}

// Exchanges the adjacent diagonal entries k, k+1 of the upper triangular
// Schur factor t, updating the unitary factor q.
void swap_schur_pair(CMatrix& t, CMatrix& q, Index k) {
  const Complex a = t(k, k);
  const Complex b = t(k + 1, k + 1);
  const Complex c = t(k, k + 1);
  // [c; b - a] is an eigenvector of the 2x2 block for eigenvalue b.
  Complex v1 = c;
  Complex v2 = b - a;
  const double len = std::hypot(std::abs(v1), std::abs(v2));
  if (len == 0.0) {
    return;
  }
  v1 /= len;
  v2 /= len;
  Eigen::Matrix2cd g;
  g << v1, -std::conj(v2), v2, std::conj(v1);
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  q.middleCols(k, 2) = q.middleCols(k, 2) * g;
  t(k + 1, k) = Complex(0.0, 0.0);
}

// Reorders the Schur form so the entries flagged in `core` come first,
// preserving the relative order within both groups.
void reorder_schur(CMatrix& t, CMatrix& q, std::vector<bool> core) {
  const Index n = t.rows();
  Index target = 0;
  for (Index i = 0; i < n; ++i) {
    if (!core[static_cast<std::size_t>(i)]) {
      continue;
    }
    for (Index k = i; k > target; --k) {
      swap_schur_pair(t, q, k - 1);
      std::swap(core[static_cast<std::size_t>(k - 1)], core[static_cast<std::size_t>(k)]);
    }
    ++target;
  }
}

// Solves t11 y - y t22 = rhs for upper triangular t11, t22 with disjoint spectra.
CMatrix solve_triangular_sylvester(const CMatrix& t11, const CMatrix& t22, const CMatrix& rhs) {
  const Index r = t11.rows();
  const Index m = t22.rows();
  CMatrix y(r, m);
  for (Index l = 0; l < m; ++l) {
    CVector col = rhs.col(l);
    for (Index i = 0; i < l; ++i) {
      col += y.col(i) * t22(i, l);
    }
    CMatrix shifted = t11;
    shifted.diagonal().array() -= t22(l, l);
    y.col(l) = shifted.triangularView<Eigen::Upper>().solve(col);
  }
  return y;
}

std::string format_modulus(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CMatrix schur_split_inverse(const CMatrix& a, int nil_dim, const DrazinOptions& options) {
  const Index n = a.rows();
  Eigen::ComplexSchur<CMatrix> schur(a);
  if (schur.info() != Eigen::Success) {
    throw SpectralSplitError("Schur decomposition did not converge");
  }
  CMatrix t = schur.matrixT();
  CMatrix q = schur.matrixU();

  std::vector<double> modulus(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    modulus[static_cast<std::size_t>(i)] = std::abs(t(i, i));
  }
  std::vector<bool> core(static_cast<std::size_t>(n), true);
  if (options.theta) {
    int count = 0;
    for (Index i = 0; i < n; ++i) {
      if (modulus[static_cast<std::size_t>(i)] <= *options.theta) {
        core[static_cast<std::size_t>(i)] = false;
        ++count;
      }
    }
    if (count != nil_dim) {
      throw SpectralSplitError("zero cluster |lambda| <= " + format_modulus(*options.theta) +
                               " holds " + std::to_string(count) +
                               " eigenvalues but the rank count requires " +
                               std::to_string(nil_dim));
    }
  } else {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
      return modulus[static_cast<std::size_t>(x)] < modulus[static_cast<std::size_t>(y)];
    });
    for (int i = 0; i < nil_dim; ++i) {
      core[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = false;
    }
  }

  double largest_nil = 0.0;
  double smallest_core = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double mod = modulus[static_cast<std::size_t>(i)];
    if (core[static_cast<std::size_t>(i)]) {
      smallest_core = std::min(smallest_core, mod);
    } else {
      largest_nil = std::max(largest_nil, mod);
    }
  }
  if (largest_nil > options.gap_ratio * smallest_core) {
    throw SpectralSplitError("eigenvalue gap too small: zero cluster reaches |lambda| = " +
                             format_modulus(largest_nil) + " while the core starts at |lambda| = " +
                             format_modulus(smallest_core));
  }

  reorder_schur(t, q, core);
  const Index r = n - nil_dim;
  const CMatrix t11 = t.topLeftCorner(r, r).triangularView<Eigen::Upper>();
  const CMatrix t22 = t.bottomRightCorner(nil_dim, nil_dim).triangularView<Eigen::Upper>();
  const CMatrix t12 = t.topRightCorner(r, nil_dim);

  // T = W diag(T11, T22) W^{-1} with W = [I Y; 0 I].
  const CMatrix y = solve_triangular_sylvester(t11, t22, -t12);
  const CMatrix t11_inv = t11.triangularView<Eigen::Upper>().solve(identity(r));

  CMatrix core_block = CMatrix::Zero(n, n);
  core_block.topLeftCorner(r, r) = t11_inv;
  core_block.topRightCorner(r, nil_dim) = -t11_inv * y;
  return q * core_block * q.adjoint();
}

} // namespace

const char* to_string(Side side) { return side == Side::left ? "left" : "right"; }

double AxiomResiduals::max() const { return std::max({r_weak_commute, r_inner, r_index}); }

std::vector<int> power_ranks(const CMatrix& a, int k_max, RankTol tol) {
  const auto chain = range_chain(a, k_max, tol);
  std::vector<int> ranks;
  ranks.reserve(chain.size());
  for (const auto& s : chain) {
    ranks.push_back(static_cast<int>(s.dim()));
  }
  return ranks;
}

int drazin_index(const CMatrix& a, RankTol tol) {
  require_square(a, "drazin_index");
  const int n = static_cast<int>(a.rows());
  const auto ranks = power_ranks(a, n + 1, tol);
  for (int k = 0; k <= n; ++k) {
    if (ranks[static_cast<std::size_t>(k)] == ranks[static_cast<std::size_t>(k) + 1]) {
      return k;
    }
  }
  throw TheoremViolation("rank(A^k) failed to stabilize by k = n");
}

DrazinResult drazin_inverse(const CMatrix& a, const DrazinOptions& options) {
  require_square(a, "drazin_inverse");
  require_finite(a, "drazin_inverse");
  const Index n = a.rows();
  const auto ranks = power_ranks(a, static_cast<int>(n) + 1, options.rank_tol);
  int index = -1;
  for (int k = 0; k <= n; ++k) {
    if (ranks[static_cast<std::size_t>(k)] == ranks[static_cast<std::size_t>(k) + 1]) {
      index = k;
      break;
    }
  }
  if (index < 0) {
    throw TheoremViolation("rank(A^k) failed to stabilize by k = n");
  }
  const int core_dim = ranks[static_cast<std::size_t>(index)];
  const int nil_dim = static_cast<int>(n) - core_dim;

  DrazinResult result;
  result.index = index;
  result.core_dim = core_dim;
  if (nil_dim == 0) {
    result.inverse = a.fullPivLu().inverse();
  } else if (core_dim == 0) {
    result.inverse = CMatrix::Zero(n, n);
  } else {
    result.inverse = schur_split_inverse(a, nil_dim, options);
  }
  result.idempotent = identity(n) - result.inverse * a;
  result.residuals = check_two_sided(a, result.inverse, index);
  return result;
}

CMatrix drazin_oracle(const CMatrix& a, int index, RankTol tol) {
  require_square(a, "drazin_oracle");
  require_finite(a, "drazin_oracle");
  if (index < 0) {
    throw InputError("drazin_oracle: negative index");
  }
  const auto ranks = power_ranks(a, index + 1, tol);
  const Index keep = ranks[static_cast<std::size_t>(index)];
  const CMatrix ak = matrix_power(a, index);
  const CMatrix big = matrix_power(a, 2 * index + 1);
  return ak * pinv_truncated(big, keep) * ak;
}

CMatrix spectral_projector(const CMatrix& a, RankTol tol) {
  require_square(a, "spectral_projector");
  const Index n = a.rows();
  const int d = drazin_index(a, tol);
  const SubspaceBasis range = range_chain(a, d, tol).back();
  const SubspaceBasis kernel = kernel_chain(a, d, tol).back();
  if (range.dim() + kernel.dim() != n) {
    throw TheoremViolation("dim R(A^d) + dim N(A^d) = " +
                           std::to_string(range.dim() + kernel.dim()) + " != " +
                           std::to_string(n));
  }
  if (kernel.empty()) {
    return CMatrix::Zero(n, n);
  }
  CMatrix w(n, n);
  w << range.vectors, kernel.vectors;
  const CMatrix w_inv = w.fullPivLu().inverse();
  return kernel.vectors * w_inv.bottomRows(kernel.dim());
}

AxiomResiduals check_left_drazin(const CMatrix& a, const CMatrix& x, int j, double a_scale) {
  require_pair(a, x, "check_left_drazin");
  if (j < 0) {
    throw InputError("check_left_drazin: negative index");
  }
  const double na = std::max(fro(a), a_scale);
  const double nx = inverse_scale(fro(x), na);
  const CMatrix aj = matrix_power(a, j);
  const CMatrix aj1 = aj * a;
  AxiomResiduals r;
  r.r_weak_commute = relative(fro(a * x * a - x * a * a), na * na * nx);
  r.r_inner = relative(fro(x * x * a - x), std::max(nx * nx * na, nx));
  r.r_index = relative(fro(x * aj1 - aj), std::max(nx * pow_norm(na, j + 1), pow_norm(na, j)));
  return r;
}

AxiomResiduals check_right_drazin(const CMatrix& a, const CMatrix& y, int j, double a_scale) {
  require_pair(a, y, "check_right_drazin");
  if (j < 0) {
    throw InputError("check_right_drazin: negative index");
  }
  const double na = std::max(fro(a), a_scale);
  const double ny = inverse_scale(fro(y), na);
  const CMatrix aj = matrix_power(a, j);
  const CMatrix aj1 = aj * a;
  AxiomResiduals r;
  r.r_weak_commute = relative(fro(a * y * a - a * a * y), na * na * ny);
  r.r_inner = relative(fro(a * y * y - y), std::max(ny * ny * na, ny));
  r.r_index = relative(fro(aj1 * y - aj), std::max(ny * pow_norm(na, j + 1), pow_norm(na, j)));
  return r;
}

AxiomResiduals check_two_sided(const CMatrix& a, const CMatrix& x, int j, double a_scale) {
  require_pair(a, x, "check_two_sided");
  if (j < 0) {
    throw InputError("check_two_sided: negative index");
  }
  const double na = std::max(fro(a), a_scale);
  const double nx = inverse_scale(fro(x), na);
  const CMatrix aj = matrix_power(a, j);
  const CMatrix aj1 = aj * a;
  AxiomResiduals r;
  r.r_weak_commute = relative(fro(a * x - x * a), na * nx);
  r.r_inner = relative(fro(x * x * a - x), std::max(nx * nx * na, nx));
  r.r_index = relative(fro(aj1 * x - aj), std::max(nx * pow_norm(na, j + 1), pow_norm(na, j)));
  return r;
}

AxiomResiduals check_group(const CMatrix& a, const CMatrix& x, Side side, double a_scale) {
  require_pair(a, x, "check_group");
  const double na = std::max(fro(a), a_scale);
  const double nx = inverse_scale(fro(x), na);
  const CMatrix a2 = a * a;
  AxiomResiduals r;
  if (side == Side::left) {
    r.r_weak_commute = relative(fro(a * x * a - x * a2), na * na * nx);
    r.r_inner = relative(fro(x * x * a - x), std::max(nx * nx * na, nx));
    r.r_index = relative(fro(x * a2 - a), std::max(nx * na * na, na));
  } else {
    r.r_weak_commute = relative(fro(a * x * a - a2 * x), na * na * nx);
    r.r_inner = relative(fro(a * x * x - x), std::max(nx * nx * na, nx));
    r.r_index = relative(fro(a2 * x - a), std::max(nx * na * na, na));
  }
  return r;
}

NilpotencyReport residual_nilpotency(const CMatrix& a, const CMatrix& x, int j) {
  require_pair(a, x, "residual_nilpotency");
  const double na = fro(a);
  const double nx = inverse_scale(fro(x), na);
  const CMatrix resid = a - a * x * a;
  const double scale = na * (1.0 + nx * na);
  NilpotencyReport out;
  out.r_square = relative(fro(resid * resid - a * resid), scale * (scale + na));
  const int power = std::max(j, 1);
  out.r_power = relative(fro(matrix_power(resid, power)), pow_norm(scale, power));
  return out;
}

std::optional<int> nilpotency_order(const CMatrix& m, double tol, double scale) {
  require_square(m, "nilpotency_order");
  const double nm = std::max(fro(m), scale);
  if (nm == 0.0) {
    return 1;
  }
  CMatrix p = m;
  const int n = static_cast<int>(m.rows());
  for (int k = 1; k <= n; ++k) {
    if (fro(p) <= tol * pow_norm(nm, k)) {
      return k;
    }
    p = p * m;
  }
  return std::nullopt;
}

std::optional<int> idempotent_index(const CMatrix& a, const CMatrix& p, double tol) {
  require_pair(a, p, "idempotent_index");
  if (fro(p) <= tol) {
    return 0;
  }
  // (AP)^m = A^m P, so the order is the first m where the largest singular
  // value of (AP)^m drops under the rank cutoff for |A|^m |P|. This keeps
  // the answer consistent with the rank-based index.
  const CMatrix ap = a * p;
  const double na = norm2(a);
  const double floor = default_rank_tol(a) * std::max(norm2(p), 1.0);
  CMatrix power = ap;
  for (int m = 1; m <= static_cast<int>(a.rows()); ++m) {
    if (norm2(power) <= floor * pow_norm(na, m)) {
      return m;
    }
    power = power * ap;
  }
  return std::nullopt;
}

CMatrix spectral_idempotent(const CMatrix& a, const CMatrix& x, Side side, double tol) {
  require_pair(a, x, "spectral_idempotent");
  const int n = static_cast<int>(a.rows());
  const AxiomResiduals axioms =
      side == Side::left ? check_left_drazin(a, x, n) : check_right_drazin(a, x, n);
  if (!axioms.passes(tol)) {
    throw PreconditionError(std::string("spectral_idempotent: X fails the ") + to_string(side) +
                            " Drazin axioms, residuals " + describe(axioms));
  }
  const CMatrix p = side == Side::left ? CMatrix(identity(n) - x * a) : CMatrix(identity(n) - a * x);
  const double np = idempotent_scale(p);
  std::vector<std::string> broken;
  if (relative(fro(p * p - p), np * np) > tol) {
    broken.push_back("P^2 = P");
  }
  if (relative(fro(a * p - p * a), fro(a) * np) > tol) {
    broken.push_back("AP = PA");
  }
  if (!idempotent_index(a, p, tol)) {
    broken.push_back("AP nilpotent");
  }
  if (rank(a + p) != n) {
    broken.push_back("A + P invertible");
  }
  if (!broken.empty()) {
    std::string msg = "spectral_idempotent: derived idempotent violates";
    for (const auto& b : broken) {
      msg += " [" + b + "]";
    }
    throw TheoremViolation(msg);
  }
  return p;
}

CMatrix spectral_idempotent_left(const CMatrix& a, const CMatrix& x, double tol) {
  return spectral_idempotent(a, x, Side::left, tol);
}

CMatrix inverse_from_idempotent(const CMatrix& a, const CMatrix& p, Side side, double tol) {
  require_pair(a, p, "inverse_from_idempotent");
  const Index n = a.rows();
  const double np = idempotent_scale(p);
  std::vector<std::string> broken;
  if (relative(fro(p * p - p), np * np) > tol) {
    broken.push_back("P^2 = P");
  }
  if (relative(fro(a * p - p * a), fro(a) * np) > tol) {
    broken.push_back("AP = PA");
  }
  const auto j = idempotent_index(a, p, tol);
  if (!j) {
    broken.push_back("AP nilpotent");
  }
  const CMatrix shifted = a + p;
  if (rank(shifted) != n) {
    broken.push_back("A + P invertible");
  }
  if (!broken.empty()) {
    std::string msg = "inverse_from_idempotent: hypotheses fail:";
    for (const auto& b : broken) {
      msg += " [" + b + "]";
    }
    throw PreconditionError(msg);
  }
  const auto lu = shifted.fullPivLu();
  const CMatrix complement = identity(n) - p;
  CMatrix x;
  AxiomResiduals r;
  if (side == Side::left) {
    x = lu.solve(complement);
    r = check_left_drazin(a, x, *j);
  } else {
    // (I - P)(A + P)^{-1} = ((A + P)^{-H} (I - P)^H)^H
    x = shifted.adjoint().fullPivLu().solve(complement.adjoint()).adjoint();
    r = check_right_drazin(a, x, *j);
  }
  if (!r.passes(tol)) {
    throw TheoremViolation(std::string("inverse_from_idempotent: ") + to_string(side) +
                           " construction fails its axioms, residuals " + describe(r));
  }
  return x;
}

CMatrix merge_two_sided(const CMatrix& a, const CMatrix& x, const CMatrix& y, int j, double tol) {
  require_pair(a, x, "merge_two_sided");
  require_pair(a, y, "merge_two_sided");
  const AxiomResiduals left = check_left_drazin(a, x, j);
  const AxiomResiduals right = check_right_drazin(a, y, j);
  if (!left.passes(tol) || !right.passes(tol)) {
    throw PreconditionError("merge_two_sided: left residuals " + describe(left) +
                            ", right residuals " + describe(right));
  }
  const double scale = inverse_scale(std::max(fro(x), fro(y)), fro(a));
  const double gap = relative(fro(x - y), scale);
  if (gap > tol) {
    throw TheoremViolation("merge_two_sided: left and right inverses differ by " +
                           format_modulus(gap));
  }
  const double commute = relative(fro(a * x - x * a), fro(a) * inverse_scale(fro(x), fro(a)));
  if (commute > tol) {
    throw TheoremViolation("merge_two_sided: merged inverse does not commute, residual " +
                           format_modulus(commute));
  }
  return x;
}

CMatrix power_lift(const CMatrix& x, const CMatrix& a, int n, int j, double tol) {
  require_pair(a, x, "power_lift");
  if (n < 1) {
    throw PreconditionError("power_lift: n must be >= 1");
  }
  const AxiomResiduals base = check_left_drazin(a, x, j);
  if (!base.passes(tol)) {
    throw PreconditionError("power_lift: X is not a left Drazin inverse of index " +
                            std::to_string(j) + ", residuals " + describe(base));
  }
  const CMatrix xn = matrix_power(x, n);
  const CMatrix an = matrix_power(a, n);
  // A^n may be pure rounding noise (nilpotent A), so it is measured against |A|^n.
  const double an_scale = pow_norm(fro(a), n);
  const AxiomResiduals lifted = check_left_drazin(an, xn, j, an_scale);
  if (!lifted.passes(tol)) {
    throw TheoremViolation("power_lift: X^n fails the left axioms for A^n, residuals " +
                           describe(lifted));
  }
  if (n == j) {
    const AxiomResiduals group = check_group(an, xn, Side::left, an_scale);
    if (!group.passes(tol)) {
      throw TheoremViolation("power_lift: X^j is not a left group inverse of A^j, residuals " +
                             describe(group));
    }
  }
  return xn;
}

CMatrix group_lift(const CMatrix& a, const CMatrix& x, int n, double tol) {
  require_pair(a, x, "group_lift");
  if (n < 1) {
    throw PreconditionError("group_lift: n must be >= 1");
  }
  const CMatrix an = matrix_power(a, n);
  const AxiomResiduals group = check_group(an, x, Side::left, pow_norm(fro(a), n));
  const double weak =
      relative(fro(a * x * a - x * a * a), fro(a) * fro(a) * inverse_scale(fro(x), fro(a)));
  if (!group.passes(tol) || weak > tol) {
    throw PreconditionError("group_lift: X is not a left group inverse of A^n with AXA = XA^2, "
                            "residuals " + describe(group) + ", |AXA - XA^2| " +
                            format_modulus(weak));
  }
  const CMatrix z = x * matrix_power(a, n - 1);
  const AxiomResiduals lifted = check_left_drazin(a, z, n);
  if (!lifted.passes(tol)) {
    throw TheoremViolation("group_lift: X A^{n-1} fails the left axioms, residuals " +
                           describe(lifted));
  }
  return z;
}

BcWitness bc_witness(const CMatrix& a, const CMatrix& x, int j) {
  require_pair(a, x, "bc_witness");
  if (j < 0) {
    throw InputError("bc_witness: negative index");
  }
  const double na = fro(a);
  const double nx = inverse_scale(fro(x), na);
  const CMatrix aj = matrix_power(a, j);
  BcWitness out;
  out.r_membership = relative(fro(x - matrix_power(x, j + 1) * aj),
                              std::max(pow_norm(nx, j + 1) * pow_norm(na, j), nx));
  out.r_defining = relative(fro(x * aj * a - aj), std::max(nx * pow_norm(na, j + 1), pow_norm(na, j)));
  return out;
}

EquationEquivalence matrix_equation_equivalence(const CMatrix& a, double tol,
                                                const DrazinOptions& options) {
  require_square(a, "matrix_equation_equivalence");
  const DrazinResult d = drazin_inverse(a, options);
  const CMatrix p = spectral_projector(a, options.rank_tol);
  EquationEquivalence out;
  out.index = d.index;
  out.drazin_solution = d.inverse;
  out.left_solution = inverse_from_idempotent(a, p, Side::left, std::max(tol, kAxiomTol));
  const double scale =
      inverse_scale(std::max(fro(out.left_solution), fro(out.drazin_solution)), fro(a));
  out.deviation = relative(fro(out.left_solution - out.drazin_solution), scale);
  if (out.deviation > tol) {
    throw TheoremViolation("matrix_equation_equivalence: solutions differ by " +
                           format_modulus(out.deviation));
  }
  return out;
}

AdjointDuality adjoint_duality(const CMatrix& a, const CMatrix& x, int j, double tol) {
  require_pair(a, x, "adjoint_duality");
  AdjointDuality out;
  out.left = check_left_drazin(a, x, j);
  out.adjoint_right = check_right_drazin(a.adjoint(), x.adjoint(), j);
  out.passed = out.left.passes(tol) && out.adjoint_right.passes(tol);
  return out;
}

BlockInvertibility idempotent_block_invertibility(const CMatrix& a, const CMatrix& p,
                                                  RankTol tol) {
  require_pair(a, p, "idempotent_block_invertibility");
  const Index n = a.rows();
  const double p_cutoff = resolve_rank_tol(p, tol) * std::max(norm2(p), 1.0);
  const SubspaceBasis range = range_basis_above(p, p_cutoff);
  const SubspaceBasis kernel = null_basis_below(p, p_cutoff);
  BlockInvertibility out;
  out.range_dim = static_cast<int>(range.dim());
  out.whole = rank(a, tol) == n;
  // Blocks are ranked against |A|: a block that is rounding noise is singular.
  const double cutoff = resolve_rank_tol(a, tol) * norm2(a);
  // Both subspaces are A-invariant, so U^H A U is the matrix of the restriction.
  auto restricted_invertible = [&](const SubspaceBasis& s) {
    if (s.empty()) {
      return true;
    }
    const CMatrix block = s.vectors.adjoint() * a * s.vectors;
    return rank_above(block, cutoff) == s.dim();
  };
  out.range_block = restricted_invertible(range);
  out.kernel_block = restricted_invertible(kernel);
  return out;
}

} // namespace drazin
