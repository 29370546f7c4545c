#include "drazinlab/operator_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "drazinlab/errors.hpp"

namespace drazin {

namespace {

std::string describe(const WindowAxioms& r) {
  std::ostringstream os;
  os << "(" << r.r_weak_commute << ", " << r.r_inner << ")";
  return os.str();
}

void require_window(int n, const char* what) {
  if (n < 1) {
    throw InputError(std::string(what) + ": window must contain at least e_1");
  }
}

WindowAssertion assert_window(std::string name, double deviation, double allowance = 0.0) {
  return {std::move(name), deviation, allowance, deviation <= allowance};
}

// Windows are widened by the bandwidth so that entries feeding e_1..e_n
// through intermediate products are all exercised.
int widened(int n, const BandedOp& a, const BandedOp& b) {
  return n + static_cast<int>(std::min<std::int64_t>(a.bandwidth() + b.bandwidth(), 1 << 20));
}

} // namespace

WindowAxioms check_left_gd_window(const BandedOp& t, const BandedOp& s, int n) {
  require_window(n, "check_left_gd_window");
  WindowAxioms r;
  r.r_weak_commute = verify_on_basis(t * s * t, s * t * t, n);
  r.r_inner = verify_on_basis(s * s * t, s, n);
  return r;
}

WindowAxioms check_right_gd_window(const BandedOp& t, const BandedOp& s, int n) {
  require_window(n, "check_right_gd_window");
  WindowAxioms r;
  r.r_weak_commute = verify_on_basis(t * s * t, t * t * s, n);
  r.r_inner = verify_on_basis(t * s * s, s, n);
  return r;
}

BandedOp harmonic_weighted_shift() { return make_shift(ShiftKind::right, WeightRule::harmonic()); }

bool ShiftBundle::passed() const {
  return tp_certificate.verdict && non_invertibility.proven &&
         std::all_of(assertions.begin(), assertions.end(),
                     [](const WindowAssertion& a) { return a.passed; });
}

ShiftBundle make_shift_bundle(int window, int neumann_terms) {
  require_window(window, "make_shift_bundle");
  ShiftBundle b;
  b.window = window;
  b.right_shift = make_shift(ShiftKind::right);
  b.left_shift = make_shift(ShiftKind::left);
  b.weighted_shift = harmonic_weighted_shift();
  b.t = direct_sum({b.right_shift, b.weighted_shift});
  b.s = direct_sum({b.left_shift, BandedOp::zero()});
  b.p = direct_sum({BandedOp::zero(), BandedOp::identity()});
  b.p_formula = BandedOp::identity(2) - b.s * b.t;
  b.tp = b.t * b.p;
  b.t_plus_p = b.t + b.p;

  const BandedOp& t = b.t;
  const BandedOp& s = b.s;
  const BandedOp& p = b.p;
  auto& out = b.assertions;
  out.push_back(assert_window("TST = ST^2", verify_on_basis(t * s * t, s * t * t, window)));
  out.push_back(assert_window("S^2T = S", verify_on_basis(s * s * t, s, window)));
  out.push_back(assert_window("I - ST = 0 (+) I", verify_on_basis(b.p_formula, p, window)));
  out.push_back(assert_window("P^2 = P", verify_on_basis(p * p, p, window)));
  out.push_back(assert_window("TP = PT", verify_on_basis(t * p, p * t, window)));
  out.push_back(assert_window("T - TST = TP", verify_on_basis(t - t * s * t, b.tp, window)));
  out.push_back(assert_window("TP = 0 (+) W",
                              verify_on_basis(b.tp, direct_sum({BandedOp::zero(), b.weighted_shift}),
                                              window)));
  out.push_back(assert_window(
      "T + P = R (+) (I + W)",
      verify_on_basis(b.t_plus_p,
                      direct_sum({b.right_shift, BandedOp::identity() + b.weighted_shift}), window)));

  b.left_inverse = derive_left_inverse(b.t_plus_p, neumann_terms);
  out.push_back(assert_window("c (T + P) = I",
                              verify_on_basis(b.left_inverse.inverse * b.t_plus_p,
                                              BandedOp::identity(2), window),
                              b.left_inverse.defect_bound + kCoefficientTol));

  b.tp_certificate = qnil_certificate(b.tp, kQnilSamples, kQnilThreshold);
  b.non_invertibility = range_annihilator(b.t_plus_p, 0, 1);
  return b;
}

QuasipolarReport quasipolar_left_witness(const BandedOp& t, const BandedOp& s, int n) {
  require_window(n, "quasipolar_left_witness");
  QuasipolarReport r;
  r.input = check_left_gd_window(t, s, n);
  if (!r.input.passes()) {
    throw PreconditionError("quasipolar_left_witness: S fails the left axioms on the window, "
                            "residuals " +
                            describe(r.input));
  }
  r.q = s * t;
  r.b = r.q * s * r.q;
  r.q_idempotent = verify_on_basis(r.q * r.q, r.q, n);
  r.q_commutes = verify_on_basis(t * r.q, r.q * t, n);
  r.b_recovers_q = verify_on_basis(r.b * t, r.q, n);
  r.b_weak_commute = verify_on_basis(t * r.b * t, r.b * t * t, n);
  r.b_inner = verify_on_basis(r.b * r.b * t, r.b, n);
  r.b_minus_s = verify_on_basis(r.b, s, n);
  r.passed = std::max({r.q_idempotent, r.q_commutes, r.b_recovers_q, r.b_weak_commute,
                       r.b_inner}) <= kCoefficientTol;
  return r;
}

ResolventReport left_resolvent(const BandedOp& t, const BandedOp& p, Complex lambda, int terms,
                               int window, const std::optional<LeftInverseWitness>& c) {
  require_window(window, "left_resolvent");
  if (lambda == Complex(0.0, 0.0)) {
    throw InputError("left_resolvent: lambda must be nonzero");
  }
  if (terms < 0) {
    throw InputError("left_resolvent: negative number of terms");
  }
  if (t.components() != p.components()) {
    throw ShapeError("left_resolvent: T and P act on different component counts");
  }
  const BandedOp identity = BandedOp::identity(t.components());
  const int check = widened(window, t, p);
  if (verify_on_basis(p * p, p, check) > kCoefficientTol ||
      verify_on_basis(t * p, p * t, check) > kCoefficientTol) {
    throw PreconditionError("left_resolvent: P is not an idempotent commuting with T");
  }
  const LeftInverseWitness inv = c ? *c : derive_left_inverse(t + p);

  ResolventReport r;
  r.lambda = lambda;
  r.terms = terms;
  const double mod = std::abs(lambda);
  r.contraction = mod * inv.norm;
  if (!(r.contraction < 1.0)) {
    std::ostringstream os;
    os << "left_resolvent: |lambda| |c| = " << r.contraction
       << " >= 1, lambda lies outside the disk where the series converges";
    throw OutOfDiskError(os.str());
  }

  const BandedOp complement = identity - p;
  const BandedOp tp = t * p;
  std::vector<Complex> outer(static_cast<std::size_t>(terms) + 1);
  std::vector<Complex> inner(static_cast<std::size_t>(terms) + 1);
  Complex lk{1.0, 0.0};
  for (int k = 0; k <= terms; ++k) {
    outer[static_cast<std::size_t>(k)] = -lk;
    inner[static_cast<std::size_t>(k)] = 1.0 / (lk * lambda);
    lk *= lambda;
  }
  r.resolvent = polynomial(inv.inverse, outer) * inv.inverse * complement +
                polynomial(tp, inner) * p;

  // Left series: (lambda c)^{K+1} tail plus the left-inverse defect of c.
  // Right series: |lambda|^{-K-1} |(TP)^{K+1}|.
  const double geometric =
      (std::pow(r.contraction, terms + 1) + inv.defect_bound) / (1.0 - r.contraction);
  double nil_tail = 0.0;
  const double p_norm = norm_bound(p);
  if (p_norm > 0.0) {
    const PowerNormBound tail = power_norm_bound(tp, terms + 1);
    nil_tail = p_norm * std::exp(tail.log_value - (terms + 1) * std::log(mod));
  }
  r.remainder_bound = norm_bound(complement) * geometric + nil_tail;

  const BandedOp shifted = scale(lambda, identity) - t;
  for (int comp = 0; comp < t.components(); ++comp) {
    for (int k = 1; k <= window; ++k) {
      const SeqVector e = SeqVector::basis(comp, k);
      r.residual = std::max(r.residual, (r.resolvent.apply(shifted.apply(e)) - e).norm());
    }
  }
  r.passed = r.residual <= r.remainder_bound + kCoefficientTol;
  return r;
}

std::vector<ResolventReport> left_resolvent_ring(const BandedOp& t, const BandedOp& p,
                                                 double radius, int count, int terms,
                                                 int window) {
  if (!(radius > 0.0) || count < 1) {
    throw InputError("left_resolvent_ring: need a positive radius and at least one point");
  }
  const std::optional<LeftInverseWitness> c = derive_left_inverse(t + p);
  std::vector<ResolventReport> out;
  for (int j = 0; j < count; ++j) {
    const Complex lambda = std::polar(radius, 2.0 * std::numbers::pi * j / count);
    out.push_back(left_resolvent(t, p, lambda, terms, window, c));
  }
  return out;
}

CommutantReport commutant_invariance(const BandedOp& t, const BandedOp& s, const BandedOp& w,
                                     int n, WitnessSide side) {
  require_window(n, "commutant_invariance");
  CommutantReport r;
  r.commute_deviation = verify_on_basis(w * t, t * w, widened(n, w, t));
  if (r.commute_deviation > kCoefficientTol) {
    std::ostringstream os;
    os << "commutant_invariance: W does not commute with T (deviation " << r.commute_deviation
       << ")";
    throw PreconditionError(os.str());
  }
  const WindowAxioms ax =
      side == WitnessSide::left ? check_left_gd_window(t, s, n) : check_right_gd_window(t, s, n);
  if (!ax.passes()) {
    throw PreconditionError("commutant_invariance: S fails its axioms on the window, residuals " +
                            describe(ax));
  }
  const BandedOp identity = BandedOp::identity(t.components());
  const BandedOp p = side == WitnessSide::left ? identity - s * t : identity - t * s;
  const BandedOp pwp = p * w * p;
  r.deviation = side == WitnessSide::left ? verify_on_basis(w * p, pwp, n)
                                          : verify_on_basis(p * w, pwp, n);
  r.passed = r.deviation <= kCoefficientTol;
  return r;
}

OperatorDualityReport operator_adjoint_duality(const BandedOp& t, const BandedOp& s, int n,
                                               const std::optional<BandedOp>& qnil_part) {
  require_window(n, "operator_adjoint_duality");
  OperatorDualityReport r;
  r.left = check_left_gd_window(t, s, n);
  if (!r.left.passes()) {
    throw PreconditionError("operator_adjoint_duality: S fails the left axioms, residuals " +
                            describe(r.left));
  }
  r.adjoint_right = check_right_gd_window(band_adjoint(t), band_adjoint(s), n);
  r.passed = r.adjoint_right.passes();
  if (qnil_part) {
    r.adjoint_certificate = qnil_certificate(band_adjoint(*qnil_part), kQnilSamples, kQnilThreshold);
    r.passed = r.passed && r.adjoint_certificate->verdict;
  }
  return r;
}

UniquenessReport gd_uniqueness(const BandedOp& t, const BandedOp& s_left, const BandedOp& s_right,
                               int n) {
  require_window(n, "gd_uniqueness");
  UniquenessReport r;
  r.left = check_left_gd_window(t, s_left, n);
  r.right = check_right_gd_window(t, s_right, n);
  if (!r.left.passes() || !r.right.passes()) {
    throw PreconditionError("gd_uniqueness: witnesses fail their axioms, left " +
                            describe(r.left) + ", right " + describe(r.right));
  }
  for (int c = 0; c < t.components(); ++c) {
    for (int k = 1; k <= n; ++k) {
      const SeqVector e = SeqVector::basis(c, k);
      r.gap = std::max(r.gap, (s_left.apply(e) - s_right.apply(e)).norm());
    }
  }
  r.passed = r.gap <= kUniquenessTol;
  if (!r.passed) {
    std::ostringstream os;
    os << "gd_uniqueness: left and right inverses differ by " << r.gap;
    throw TheoremViolation(os.str());
  }
  return r;
}

} // namespace drazin
