#include "drazinlab/structure.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "drazinlab/errors.hpp"

namespace drazin {

namespace {

void require_nonempty_square(const CMatrix& a, const char* what) {
  require_square(a, what);
  require_finite(a, what);
  if (a.rows() == 0) {
    throw ShapeError(std::string(what) + ": empty matrix");
  }
}

int first_stable(const std::vector<int>& table) {
  for (std::size_t k = 0; k + 1 < table.size(); ++k) {
    if (table[k] == table[k + 1]) {
      return static_cast<int>(k);
    }
  }
  return static_cast<int>(table.size()) - 1;
}

double invariance_residual(const CMatrix& a, const SubspaceBasis& s) {
  if (s.empty()) {
    return 0.0;
  }
  const CMatrix leak = (identity(a.rows()) - s.projector()) * a * s.vectors;
  return relative(leak.norm(), a.norm());
}

// Restriction of A to an invariant subspace in its orthonormal basis.
CMatrix restrict_to(const CMatrix& a, const SubspaceBasis& s) {
  return s.vectors.adjoint() * a * s.vectors;
}

} // namespace

int ChainReport::kaashoek_violations() const {
  int bad = 0;
  for (int k = 0; k < k_max(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (nullity[i + 1] - nullity[i] != meet[i] || rank[i] - rank[i + 1] != n - join[i]) {
      ++bad;
    }
  }
  return bad;
}

ChainReport chain_report(const CMatrix& a, RankTol tol) {
  require_nonempty_square(a, "chain_report");
  ChainReport r;
  r.n = static_cast<int>(a.rows());
  const int k_max = r.n + 1;
  const auto ranges = range_chain(a, k_max, tol);
  const auto kernels = kernel_chain(a, k_max, tol);
  for (int k = 0; k <= k_max; ++k) {
    const auto i = static_cast<std::size_t>(k);
    r.nullity.push_back(static_cast<int>(kernels[i].dim()));
    r.rank.push_back(static_cast<int>(ranges[i].dim()));
    r.meet.push_back(static_cast<int>(intersect(kernels[1], ranges[i]).dim()));
    r.join.push_back(static_cast<int>(subspace_sum(ranges[1], kernels[i]).dim()));
  }
  r.asc = first_stable(r.nullity);
  r.dsc = first_stable(r.rank);
  r.dis = k_max;
  while (r.dis > 0 && r.meet[static_cast<std::size_t>(r.dis - 1)] == r.meet.back()) {
    --r.dis;
  }
  return r;
}

SubspaceBasis quasinilpotent_part(const CMatrix& a, RankTol tol) {
  require_nonempty_square(a, "quasinilpotent_part");
  const int d = drazin_index(a, tol);
  return kernel_chain(a, d, tol).back();
}

SubspaceBasis analytic_core(const CMatrix& a, RankTol tol) {
  require_nonempty_square(a, "analytic_core");
  const int d = drazin_index(a, tol);
  return range_chain(a, d, tol).back();
}

bool KatoDecomposition::passed() const {
  return direct_sum && core_invertible && nil_order == index && complemented && core_surjective;
}

KatoDecomposition kato_decomposition(const CMatrix& a, RankTol tol) {
  require_nonempty_square(a, "kato_decomposition");
  const Index n = a.rows();
  KatoDecomposition r;
  r.index = drazin_index(a, tol);
  const auto ranges = range_chain(a, r.index + 1, tol);
  const auto kernels = kernel_chain(a, r.index + 1, tol);
  const auto j = static_cast<std::size_t>(r.index);
  r.core = ranges[j];
  r.nil = kernels[j];

  r.core_invariance = invariance_residual(a, r.core);
  r.nil_invariance = invariance_residual(a, r.nil);
  if (r.core_invariance > kInvarianceTol || r.nil_invariance > kInvarianceTol) {
    std::ostringstream os;
    os << "kato_decomposition: invariance residuals " << r.core_invariance << " (core), "
       << r.nil_invariance << " (nil) exceed " << kInvarianceTol;
    throw ConditioningError(os.str());
  }

  if (r.core.dim() + r.nil.dim() == n) {
    CMatrix joined(n, n);
    joined << r.core.vectors, r.nil.vectors;
    r.direct_sum = rank(joined) == n;
  }
  r.core_block = restrict_to(a, r.core);
  r.nil_block = restrict_to(a, r.nil);
  r.core_invertible = r.core.empty() || rank(r.core_block) == r.core.dim();
  if (!r.nil.empty()) {
    r.nil_order = nilpotency_order(r.nil_block, kAxiomTol, a.norm()).value_or(-1);
  }
  const SubspaceBasis& next_range = ranges[j + 1];
  r.complemented = kernels[j].dim() + next_range.dim() == n &&
                   intersect(kernels[j], next_range).dim() == 0;
  r.core_surjective = r.core.empty() || rank(a * r.core.vectors) == r.core.dim();
  return r;
}

int bf_index(const ChainReport& chain, int n) {
  if (n < chain.dis) {
    throw PreconditionError("bf_index: n = " + std::to_string(n) + " is below dis = " +
                            std::to_string(chain.dis));
  }
  const auto m = static_cast<std::size_t>(std::min(n, chain.k_max()));
  const int value = chain.meet[m] - (chain.n - chain.join[m]);
  if (value != 0) {
    throw TheoremViolation("bf_index: square matrix with nonzero index " + std::to_string(value));
  }
  return value;
}

int bf_index(const CMatrix& a, int n, RankTol tol) { return bf_index(chain_report(a, tol), n); }

PerturbReport perturb_expand(const CMatrix& t, const CMatrix& f, int n, RankTol tol) {
  require_nonempty_square(t, "perturb_expand");
  require_same_shape(t, f, "perturb_expand");
  require_finite(f, "perturb_expand");
  if (n < 1) {
    throw InputError("perturb_expand: n must be at least 1");
  }
  const CMatrix s = t + f;
  PerturbReport r;
  r.n = n;
  // sum_{i<n} T^i F S^{n-1-i}, accumulating powers of T from the left.
  std::vector<CMatrix> s_pow{identity(t.rows())};
  for (int i = 1; i < n; ++i) {
    s_pow.push_back(s_pow.back() * s);
  }
  r.f1 = CMatrix::Zero(t.rows(), t.cols());
  CMatrix t_pow = identity(t.rows());
  for (int i = 0; i < n; ++i) {
    r.f1 += t_pow * f * s_pow[static_cast<std::size_t>(n - 1 - i)];
    t_pow = t_pow * t;
  }
  const CMatrix sn = s_pow.back() * s;
  const CMatrix& tn = t_pow;
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    scale *= t.norm() + f.norm();
  }
  r.expansion_residual = relative((sn - tn - r.f1).norm(), scale);

  // Powers and F1 are ranked against (|T| + |F|)^n, so a power of a
  // nilpotent part that is only rounding noise counts as zero.
  double power_scale = 1.0;
  for (int i = 0; i < n; ++i) {
    power_scale *= norm2(t) + norm2(f);
  }
  const double cutoff = resolve_rank_tol(t, tol) * power_scale;
  r.rank_f = rank(f, tol);
  r.rank_f1 = rank_above(r.f1, cutoff);
  if (r.rank_f1 > n * r.rank_f) {
    throw TheoremViolation("perturb_expand: rank(F1) = " + std::to_string(r.rank_f1) +
                           " exceeds n rank(F) = " + std::to_string(n * r.rank_f));
  }
  r.index_before = drazin_index(t, tol);
  r.index_after = drazin_index(s, tol);
  const SubspaceBasis range_t = range_basis_above(tn, cutoff);
  const SubspaceBasis range_s = range_basis_above(sn, cutoff);
  r.essential_dim_gap = static_cast<int>(std::abs(range_s.dim() - range_t.dim()));
  r.correction = range_basis_above(r.f1, cutoff);
  const SubspaceBasis t_plus = subspace_sum(range_t, r.correction);
  const SubspaceBasis s_plus = subspace_sum(range_s, r.correction);
  r.correction_covers = subspace_sum(t_plus, range_s).dim() == t_plus.dim() &&
                        subspace_sum(s_plus, range_t).dim() == s_plus.dim();
  return r;
}

IndexStability index_stability(const CMatrix& t, const CMatrix& f, RankTol tol) {
  require_nonempty_square(t, "index_stability");
  require_same_shape(t, f, "index_stability");
  const int rf = rank(f, tol);
  if (2 * rf > t.rows()) {
    throw PreconditionError("index_stability: rank(F) = " + std::to_string(rf) +
                            " exceeds half the dimension");
  }
  IndexStability r;
  r.before = chain_report(t, tol);
  r.after = chain_report(t + f, tol);
  r.index_before = bf_index(r.before, r.before.dis);
  r.index_after = bf_index(r.after, r.after.dis);
  r.equal = r.index_before == r.index_after;
  return r;
}

DecompositionIndex decomposition_index_equality(const CMatrix& a, RankTol tol) {
  const ChainReport chain = chain_report(a, tol);
  DecompositionIndex r;
  r.whole = bf_index(chain, chain.dis);
  const SubspaceBasis core = analytic_core(a, tol);
  if (!core.empty()) {
    const CMatrix block = restrict_to(a, core);
    const auto nullity = null_basis(block, tol).dim();
    const auto codim = core.dim() - range_basis(block, tol).dim();
    r.core = static_cast<int>(nullity - codim);
  }
  r.equal = r.whole == r.core;
  return r;
}

SpectraScan spectra_scan(const CMatrix& a, const std::vector<Complex>& samples, double tol,
                         const DrazinOptions& options) {
  require_nonempty_square(a, "spectra_scan");
  Eigen::ComplexEigenSolver<CMatrix> eig(a, false);
  if (eig.info() != Eigen::Success) {
    throw ConditioningError("spectra_scan: eigenvalue computation did not converge");
  }
  std::vector<Complex> lambdas(eig.eigenvalues().data(),
                               eig.eigenvalues().data() + eig.eigenvalues().size());
  lambdas.insert(lambdas.end(), samples.begin(), samples.end());

  SpectraScan out;
  out.all_passed = true;
  const CMatrix id = identity(a.rows());
  for (const Complex& lambda : lambdas) {
    SpectrumSample s;
    s.lambda = lambda;
    const CMatrix b = lambda * id - a;
    const DrazinResult d = drazin_inverse(b, options);
    s.index = d.index;
    s.residuals = d.residuals;
    s.adjoint_right = check_right_drazin(b.adjoint(), d.inverse.adjoint(), d.index);
    s.passed = s.residuals.passes(tol) && s.adjoint_right.passes(tol);
    out.all_passed = out.all_passed && s.passed;
    out.samples.push_back(s);
  }
  return out;
}

} // namespace drazin
