#pragma once

// Exact banded operators on sequence space.
//
// An operator is an immutable expression tree over weighted shifts. It acts
// on finitely supported vectors indexed by (component, k), k >= 1, where the
// component selects a summand of a direct sum. Every node maps a basis vector
// to finitely many basis vectors, so applying an operator to a finitely
// supported vector is exact: nothing is truncated, and identities checked on
// e_1..e_N hold on those vectors up to coefficient rounding only.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drazinlab/linalg.hpp"

namespace drazin {

/// Exact p/q with 64-bit parts, always normalized (den > 0, gcd 1).
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Accepts "p", "p/q" and a leading sign.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;
  Rational reciprocal() const;

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
  friend bool operator==(const Rational& a, const Rational& b) = default;

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Weights w_1, w_2, ... of a shift: an explicit head followed by either a
/// constant tail or a harmonic tail scale / (k + shift).
struct WeightRule {
  enum class Tail { constant, harmonic };

  std::vector<Rational> head;
  Tail tail = Tail::constant;
  Rational tail_value{1};
  std::int64_t harmonic_shift = 0;

  /// w_k; zero for k < 1.
  Rational at(std::int64_t k) const;
  bool is_unit() const;
  /// Weights 1/w_k. Requires nonzero weights and a constant tail.
  WeightRule reciprocal() const;
  /// Throws InputError when a harmonic tail would divide by k + shift <= 0.
  void validate() const;

  static WeightRule unit() { return {}; }
  static WeightRule constant(Rational value);
  static WeightRule harmonic(Rational scale = Rational(1), std::int64_t shift = 0);
  /// Explicit weights; indices past the list carry weight 1.
  static WeightRule list(std::vector<Rational> weights);
};

struct BasisIndex {
  int component = 0;
  std::int64_t k = 1;
  auto operator<=>(const BasisIndex&) const = default;
};

/// Finitely supported vector of sequence space.
class SeqVector {
public:
  SeqVector() = default;
  static SeqVector basis(int component, std::int64_t k);

  const std::map<BasisIndex, Complex>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support() const { return entries_.size(); }
  Complex at(int component, std::int64_t k) const;

  /// Adds v to the coefficient; exact zeros are dropped.
  void add(BasisIndex at, Complex v);
  SeqVector& operator+=(const SeqVector& other);
  SeqVector& operator*=(Complex s);
  friend SeqVector operator-(const SeqVector& a, const SeqVector& b);

  double norm() const;
  double max_abs() const;

private:
  std::map<BasisIndex, Complex> entries_;
};

inline constexpr std::int64_t kDefaultBandwidthCap = std::int64_t{1} << 16;

/// Default window e_1..e_N for identity checks.
inline constexpr int kDefaultWindow = 128;

/// Allowance for coefficient rounding in window checks.
inline constexpr double kCoefficientTol = 1e-12;

class BandedOp {
public:
  enum class Kind { zero, identity, shift, sum, compose, scale, direct_sum, polynomial };

  /// The zero operator, default-constructed on one component.
  BandedOp();

  static BandedOp zero(int components = 1);
  static BandedOp identity(int components = 1);
  /// e_k -> w_{k + weight_offset} e_{k + offset}, dropped when k + offset < 1.
  static BandedOp shift(std::int64_t offset, WeightRule weights = WeightRule::unit(),
                        std::int64_t weight_offset = 0);

  Kind kind() const;
  int components() const;
  std::int64_t bandwidth() const;

  // Structural access, meaningful for the matching kind only.
  const std::vector<BandedOp>& operands() const;
  std::int64_t shift_offset() const;
  std::int64_t weight_offset() const;
  const WeightRule& weights() const;
  Complex factor() const;
  std::optional<Rational> exact_factor() const;
  const std::vector<Complex>& coefficients() const;

  SeqVector apply(const SeqVector& v) const;
  SeqVector apply_basis(int component, std::int64_t k) const {
    return apply(SeqVector::basis(component, k));
  }

  /// Readable formula, for diagnostics.
  std::string describe() const;

  struct Node;

private:
  explicit BandedOp(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend BandedOp make_node(Node node);
};

enum class ShiftKind { right, left };

/// Unilateral shift; weights default to 1.
BandedOp make_shift(ShiftKind kind, std::optional<std::vector<Rational>> weights = std::nullopt);
BandedOp make_shift(ShiftKind kind, WeightRule weights);

// Smart constructors. Zero and identity operands are absorbed, scalars are
// pushed into direct sums, and sums and products of direct sums with the
// same block layout are taken block by block.
BandedOp add(const BandedOp& a, const BandedOp& b);
BandedOp subtract(const BandedOp& a, const BandedOp& b);
/// outer * inner, i.e. inner is applied first.
BandedOp compose(const BandedOp& outer, const BandedOp& inner,
                 std::int64_t bandwidth_cap = kDefaultBandwidthCap);
BandedOp scale(Complex factor, const BandedOp& op);
BandedOp scale(const Rational& factor, const BandedOp& op);
BandedOp direct_sum(const std::vector<BandedOp>& parts);
/// sum_k coefficients[k] base^k, evaluated by Horner's rule.
BandedOp polynomial(const BandedOp& base, std::vector<Complex> coefficients,
                    std::int64_t bandwidth_cap = kDefaultBandwidthCap);
BandedOp power(const BandedOp& base, int n, std::int64_t bandwidth_cap = kDefaultBandwidthCap);
/// Conjugate transpose of the band.
BandedOp band_adjoint(const BandedOp& op);

inline BandedOp operator+(const BandedOp& a, const BandedOp& b) { return add(a, b); }
inline BandedOp operator-(const BandedOp& a, const BandedOp& b) { return subtract(a, b); }
inline BandedOp operator*(const BandedOp& a, const BandedOp& b) { return compose(a, b); }

/// Max over components c and k <= n of max_m |(lhs e_(c,k))_m - (rhs e_(c,k))_m|.
double verify_on_basis(const BandedOp& lhs, const BandedOp& rhs, int n);

/// Max over the window of |op e_(c,k)|, the Euclidean norm of the image.
double window_image_norm(const BandedOp& op, int n);

/// log |T^n| for a single weighted shift, exact: the supremum over k of the
/// product of the n weights met along the orbit of e_k. -inf for T^n = 0.
double log_weighted_power_norm(const BandedOp& shift, int n);
double weighted_power_norm(const BandedOp& shift, int n);

struct PowerNormBound {
  double log_value = 0.0;
  /// True when the value is the norm itself rather than an upper bound.
  bool exact = false;
  double value() const;
};

/// Bound on |op^n|: exact for shifts, zero, identity, their scalings and
/// direct sums thereof; |op|^n from the structural norm bound otherwise.
PowerNormBound power_norm_bound(const BandedOp& op, int n);

/// Upper bound on the operator norm from the expression structure.
double norm_bound(const BandedOp& op);

struct QnilSample {
  int n = 0;
  double bound = 0.0;
  double root = 0.0;
  bool exact = false;
};

struct QnilCertificate {
  std::vector<QnilSample> samples;
  double threshold = 0.0;
  bool verdict = false;
};

/// Samples |op^n|^(1/n) at n = 2, 4, ..., n_max. The verdict holds when the
/// last root is below threshold and the roots do not increase over the last
/// half of the samples.
QnilCertificate qnil_certificate(const BandedOp& op, int n_max, double threshold);

/// Functional e_(component,index)^* vanishing on the whole range of op. Only
/// columns k <= index + bandwidth can reach the coordinate, so checking those
/// columns proves the claim for every basis vector.
struct RangeAnnihilator {
  int component = 0;
  std::int64_t index = 1;
  std::int64_t columns_checked = 0;
  double max_coefficient = 0.0;
  bool proven = false;
};

RangeAnnihilator range_annihilator(const BandedOp& op, int component, std::int64_t index);

struct LeftInverseWitness {
  BandedOp inverse;
  /// Bound on |inverse * op - I|; zero for exact shift inverses.
  double defect_bound = 0.0;
  /// Bound on |inverse|.
  double norm = 0.0;
  /// Number of Neumann terms used, zero when none were needed.
  int neumann_terms = 0;
};

inline constexpr int kNeumannTerms = 40;

/// Builds a left inverse from the shift library: reciprocal-weight left
/// shifts for right shifts with bounded-below weights, Neumann series for
/// I + Q with Q of spectral radius below one, and block by block for direct
/// sums. Refuses with PreconditionError anything else.
LeftInverseWitness derive_left_inverse(const BandedOp& op, int neumann_terms = kNeumannTerms);

} // namespace drazin
