#include "drazinlab/banded.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "drazinlab/errors.hpp"

namespace drazin {

namespace {

__extension__ typedef __int128 i128;

std::int64_t checked_narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw ResourceError("rational arithmetic overflows 64-bit parts");
  }
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw InputError("malformed rational \"" + std::string(whole) + "\"");
  }
  return value;
}

} // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw InputError("rational with zero denominator");
  }
  i128 n = num;
  i128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = checked_narrow(n);
  den_ = checked_narrow(d);
}

Rational Rational::parse(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t");
  const auto end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) {
    throw InputError("empty rational");
  }
  const std::string_view body = text.substr(begin, end - begin + 1);
  const auto slash = body.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(body, text));
  }
  return Rational(parse_int(body.substr(0, slash), text), parse_int(body.substr(slash + 1), text));
}

std::string Rational::to_string() const {
  if (den_ == 1) {
    return std::to_string(num_);
  }
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::reciprocal() const {
  if (num_ == 0) {
    throw InputError("reciprocal of zero");
  }
  return Rational(den_, num_);
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const i128 n = static_cast<i128>(g1 == 0 ? a.num_ : a.num_ / g1) *
                     (g2 == 0 ? b.num_ : b.num_ / g2);
  const i128 d = static_cast<i128>(g2 == 0 ? a.den_ : a.den_ / g2) *
                     (g1 == 0 ? b.den_ : b.den_ / g1);
  return Rational(checked_narrow(n), checked_narrow(d));
}

Rational operator+(const Rational& a, const Rational& b) {
  const i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
  const i128 d = static_cast<i128>(a.den_) * b.den_;
  const i128 g = gcd128(n, d);
  return Rational(checked_narrow(g > 1 ? n / g : n), checked_narrow(g > 1 ? d / g : d));
}

// -------------------------------------------------------------- WeightRule

Rational WeightRule::at(std::int64_t k) const {
  if (k < 1) {
    return Rational(0);
  }
  const auto pos = static_cast<std::size_t>(k - 1);
  if (pos < head.size()) {
    return head[pos];
  }
  if (tail == Tail::constant) {
    return tail_value;
  }
  return tail_value * Rational(1, k + harmonic_shift);
}

bool WeightRule::is_unit() const {
  return tail == Tail::constant && tail_value == Rational(1) &&
         std::all_of(head.begin(), head.end(), [](const Rational& w) { return w == Rational(1); });
}

WeightRule WeightRule::reciprocal() const {
  if (tail != Tail::constant) {
    throw PreconditionError("harmonic weights are not bounded below");
  }
  WeightRule out;
  out.tail_value = tail_value.reciprocal();
  out.head.reserve(head.size());
  for (const auto& w : head) {
    out.head.push_back(w.reciprocal());
  }
  return out;
}

void WeightRule::validate() const {
  if (tail == Tail::harmonic) {
    const auto first_tail = static_cast<std::int64_t>(head.size()) + 1;
    if (first_tail + harmonic_shift < 1) {
      throw InputError("harmonic tail denominator k + shift must stay positive");
    }
  }
}

WeightRule WeightRule::constant(Rational value) {
  WeightRule out;
  out.tail_value = value;
  return out;
}

WeightRule WeightRule::harmonic(Rational scale, std::int64_t shift) {
  WeightRule out;
  out.tail = Tail::harmonic;
  out.tail_value = scale;
  out.harmonic_shift = shift;
  out.validate();
  return out;
}

WeightRule WeightRule::list(std::vector<Rational> weights) {
  WeightRule out;
  out.head = std::move(weights);
  return out;
}

// --------------------------------------------------------------- SeqVector

SeqVector SeqVector::basis(int component, std::int64_t k) {
  if (component < 0 || k < 1) {
    throw InputError("basis vectors are indexed by component >= 0 and k >= 1");
  }
  SeqVector v;
  v.entries_.emplace(BasisIndex{component, k}, Complex(1.0, 0.0));
  return v;
}

Complex SeqVector::at(int component, std::int64_t k) const {
  const auto it = entries_.find(BasisIndex{component, k});
  return it == entries_.end() ? Complex(0.0, 0.0) : it->second;
}

void SeqVector::add(BasisIndex at, Complex v) {
  if (v == Complex(0.0, 0.0)) {
    return;
  }
  auto [it, inserted] = entries_.try_emplace(at, v);
  if (!inserted) {
    it->second += v;
    if (it->second == Complex(0.0, 0.0)) {
      entries_.erase(it);
    }
  }
}

SeqVector& SeqVector::operator+=(const SeqVector& other) {
  for (const auto& [idx, v] : other.entries_) {
    add(idx, v);
  }
  return *this;
}

SeqVector& SeqVector::operator*=(Complex s) {
  if (s == Complex(0.0, 0.0)) {
    entries_.clear();
    return *this;
  }
  for (auto& entry : entries_) {
    entry.second *= s;
  }
  std::erase_if(entries_, [](const auto& e) { return e.second == Complex(0.0, 0.0); });
  return *this;
}

SeqVector operator-(const SeqVector& a, const SeqVector& b) {
  SeqVector out = a;
  for (const auto& [idx, v] : b.entries_) {
    out.add(idx, -v);
  }
  return out;
}

double SeqVector::norm() const {
  double s = 0.0;
  for (const auto& entry : entries_) {
    s += std::norm(entry.second);
  }
  return std::sqrt(s);
}

double SeqVector::max_abs() const {
  double m = 0.0;
  for (const auto& entry : entries_) {
    m = std::max(m, std::abs(entry.second));
  }
  return m;
}

// ---------------------------------------------------------------- BandedOp

struct BandedOp::Node {
  Kind kind = Kind::zero;
  int components = 1;
  std::int64_t bandwidth = 0;
  std::vector<BandedOp> operands;
  std::int64_t offset = 0;
  std::int64_t weight_offset = 0;
  WeightRule weights;
  Complex factor{1.0, 0.0};
  std::optional<Rational> exact_factor;
  std::vector<Complex> coefficients;
  /// First component of each direct-sum block.
  std::vector<int> block_start;
};

BandedOp make_node(BandedOp::Node node) {
  return BandedOp(std::make_shared<const BandedOp::Node>(std::move(node)));
}

namespace {

void require_components(int components) {
  if (components < 1) {
    throw InputError("an operator needs at least one component");
  }
}

void require_same_components(const BandedOp& a, const BandedOp& b, const char* what) {
  if (a.components() != b.components()) {
    throw ShapeError(std::string(what) + ": component counts differ (" +
                     std::to_string(a.components()) + " vs " + std::to_string(b.components()) +
                     ")");
  }
}

void require_cap(std::int64_t bandwidth, std::int64_t cap) {
  if (bandwidth > cap) {
    throw ResourceError("bandwidth " + std::to_string(bandwidth) + " exceeds the cap " +
                        std::to_string(cap));
  }
}

std::vector<int> block_layout(const BandedOp& op) {
  std::vector<int> layout;
  for (const auto& part : op.operands()) {
    layout.push_back(part.components());
  }
  return layout;
}

// Splits op into blocks of the given layout when its structure allows it.
std::optional<std::vector<BandedOp>> split(const BandedOp& op, const std::vector<int>& layout) {
  std::vector<BandedOp> parts;
  switch (op.kind()) {
  case BandedOp::Kind::zero:
    for (int c : layout) {
      parts.push_back(BandedOp::zero(c));
    }
    return parts;
  case BandedOp::Kind::identity:
    for (int c : layout) {
      parts.push_back(BandedOp::identity(c));
    }
    return parts;
  case BandedOp::Kind::direct_sum:
    if (block_layout(op) == layout) {
      return op.operands();
    }
    return std::nullopt;
  case BandedOp::Kind::scale: {
    auto inner = split(op.operands().front(), layout);
    if (!inner) {
      return std::nullopt;
    }
    for (auto& p : *inner) {
      p = op.exact_factor() ? scale(*op.exact_factor(), p) : scale(op.factor(), p);
    }
    return inner;
  }
  default:
    return std::nullopt;
  }
}

// Block layout shared by a pair of operators, taken from whichever is a
// direct sum.
std::optional<std::vector<int>> shared_layout(const BandedOp& a, const BandedOp& b) {
  if (a.kind() == BandedOp::Kind::direct_sum) {
    return block_layout(a);
  }
  if (b.kind() == BandedOp::Kind::direct_sum) {
    return block_layout(b);
  }
  if (a.kind() == BandedOp::Kind::scale) {
    return shared_layout(a.operands().front(), b);
  }
  if (b.kind() == BandedOp::Kind::scale) {
    return shared_layout(a, b.operands().front());
  }
  return std::nullopt;
}

std::string format_factor(const BandedOp& op) {
  if (op.exact_factor()) {
    return op.exact_factor()->to_string();
  }
  std::ostringstream os;
  const Complex f = op.factor();
  if (f.imag() == 0.0) {
    os << f.real();
  } else {
    os << "(" << f.real() << (f.imag() < 0 ? "-" : "+") << std::abs(f.imag()) << "i)";
  }
  return os.str();
}

} // namespace

BandedOp::BandedOp() : BandedOp(zero(1)) {}

BandedOp BandedOp::zero(int components) {
  require_components(components);
  Node n;
  n.kind = Kind::zero;
  n.components = components;
  return make_node(std::move(n));
}

BandedOp BandedOp::identity(int components) {
  require_components(components);
  Node n;
  n.kind = Kind::identity;
  n.components = components;
  return make_node(std::move(n));
}

BandedOp BandedOp::shift(std::int64_t offset, WeightRule weights, std::int64_t weight_offset) {
  weights.validate();
  Node n;
  n.kind = Kind::shift;
  n.offset = offset;
  n.bandwidth = offset < 0 ? -offset : offset;
  n.weights = std::move(weights);
  n.weight_offset = weight_offset;
  return make_node(std::move(n));
}

BandedOp::Kind BandedOp::kind() const { return node_->kind; }
int BandedOp::components() const { return node_->components; }
std::int64_t BandedOp::bandwidth() const { return node_->bandwidth; }
const std::vector<BandedOp>& BandedOp::operands() const { return node_->operands; }
std::int64_t BandedOp::shift_offset() const { return node_->offset; }
std::int64_t BandedOp::weight_offset() const { return node_->weight_offset; }
const WeightRule& BandedOp::weights() const { return node_->weights; }
Complex BandedOp::factor() const { return node_->factor; }
std::optional<Rational> BandedOp::exact_factor() const { return node_->exact_factor; }
const std::vector<Complex>& BandedOp::coefficients() const { return node_->coefficients; }

SeqVector BandedOp::apply(const SeqVector& v) const {
  for (const auto& entry : v.entries()) {
    if (entry.first.component >= node_->components) {
      throw ShapeError("vector component " + std::to_string(entry.first.component) +
                       " outside an operator with " + std::to_string(node_->components) +
                       " components");
    }
  }
  SeqVector out;
  switch (node_->kind) {
  case Kind::zero:
    return out;
  case Kind::identity:
    return v;
  case Kind::shift:
    for (const auto& [idx, value] : v.entries()) {
      const std::int64_t target = idx.k + node_->offset;
      if (target < 1) {
        continue;
      }
      const Rational w = node_->weights.at(idx.k + node_->weight_offset);
      if (!w.is_zero()) {
        out.add(BasisIndex{0, target}, value * w.to_double());
      }
    }
    return out;
  case Kind::sum:
    for (const auto& term : node_->operands) {
      out += term.apply(v);
    }
    return out;
  case Kind::compose:
    return node_->operands[0].apply(node_->operands[1].apply(v));
  case Kind::scale:
    out = node_->operands[0].apply(v);
    out *= node_->factor;
    return out;
  case Kind::direct_sum:
    for (std::size_t b = 0; b < node_->operands.size(); ++b) {
      const int start = node_->block_start[b];
      const int width = node_->operands[b].components();
      SeqVector local;
      for (const auto& [idx, value] : v.entries()) {
        if (idx.component >= start && idx.component < start + width) {
          local.add(BasisIndex{idx.component - start, idx.k}, value);
        }
      }
      if (local.empty()) {
        continue;
      }
      const SeqVector image = node_->operands[b].apply(local);
      for (const auto& [idx, value] : image.entries()) {
        out.add(BasisIndex{idx.component + start, idx.k}, value);
      }
    }
    return out;
  case Kind::polynomial: {
    const auto& c = node_->coefficients;
    out = v;
    out *= c.back();
    for (std::size_t i = c.size() - 1; i-- > 0;) {
      out = node_->operands[0].apply(out);
      SeqVector term = v;
      term *= c[i];
      out += term;
    }
    return out;
  }
  }
  return out;
}

std::string BandedOp::describe() const {
  switch (node_->kind) {
  case Kind::zero:
    return "0";
  case Kind::identity:
    return "I";
  case Kind::shift: {
    std::ostringstream os;
    if (node_->weights.is_unit() && node_->weight_offset == 0 && std::abs(node_->offset) == 1) {
      return node_->offset > 0 ? "R" : "L";
    }
    os << "shift(" << (node_->offset >= 0 ? "+" : "") << node_->offset;
    if (!node_->weights.is_unit()) {
      os << "; w=[";
      for (std::size_t i = 0; i < node_->weights.head.size(); ++i) {
        os << (i ? "," : "") << node_->weights.head[i].to_string();
      }
      os << "]";
      if (node_->weights.tail == WeightRule::Tail::harmonic) {
        os << " then " << node_->weights.tail_value.to_string() << "/(k"
           << (node_->weights.harmonic_shift >= 0 ? "+" : "") << node_->weights.harmonic_shift
           << ")";
      } else {
        os << " then " << node_->weights.tail_value.to_string();
      }
    }
    if (node_->weight_offset != 0) {
      os << "; weight index k" << (node_->weight_offset > 0 ? "+" : "") << node_->weight_offset;
    }
    os << ")";
    return os.str();
  }
  case Kind::sum: {
    std::string s = "(";
    for (std::size_t i = 0; i < node_->operands.size(); ++i) {
      s += (i ? " + " : "") + node_->operands[i].describe();
    }
    return s + ")";
  }
  case Kind::compose:
    return node_->operands[0].describe() + "*" + node_->operands[1].describe();
  case Kind::scale:
    return format_factor(*this) + "*" + node_->operands[0].describe();
  case Kind::direct_sum: {
    std::string s = "(";
    for (std::size_t i = 0; i < node_->operands.size(); ++i) {
      s += (i ? " (+) " : "") + node_->operands[i].describe();
    }
    return s + ")";
  }
  case Kind::polynomial:
    return "poly(" + node_->operands[0].describe() + "; degree " +
           std::to_string(node_->coefficients.size() - 1) + ")";
  }
  return "?";
}

// ------------------------------------------------------ smart constructors

BandedOp make_shift(ShiftKind kind, std::optional<std::vector<Rational>> weights) {
  return make_shift(kind, weights ? WeightRule::list(std::move(*weights)) : WeightRule::unit());
}

BandedOp make_shift(ShiftKind kind, WeightRule weights) {
  return BandedOp::shift(kind == ShiftKind::right ? 1 : -1, std::move(weights));
}

BandedOp direct_sum(const std::vector<BandedOp>& parts) {
  if (parts.empty()) {
    throw InputError("direct_sum of no operators");
  }
  std::vector<BandedOp> flat;
  for (const auto& p : parts) {
    if (p.kind() == BandedOp::Kind::direct_sum) {
      flat.insert(flat.end(), p.operands().begin(), p.operands().end());
    } else if ((p.kind() == BandedOp::Kind::zero || p.kind() == BandedOp::Kind::identity) &&
               p.components() > 1) {
      for (int c = 0; c < p.components(); ++c) {
        flat.push_back(p.kind() == BandedOp::Kind::zero ? BandedOp::zero() : BandedOp::identity());
      }
    } else {
      flat.push_back(p);
    }
  }
  if (flat.size() == 1) {
    return flat.front();
  }
  BandedOp::Node n;
  n.kind = BandedOp::Kind::direct_sum;
  n.components = 0;
  for (const auto& p : flat) {
    n.block_start.push_back(n.components);
    n.components += p.components();
    n.bandwidth = std::max(n.bandwidth, p.bandwidth());
  }
  n.operands = std::move(flat);
  return make_node(std::move(n));
}

BandedOp add(const BandedOp& a, const BandedOp& b) {
  require_same_components(a, b, "add");
  if (a.kind() == BandedOp::Kind::zero) {
    return b;
  }
  if (b.kind() == BandedOp::Kind::zero) {
    return a;
  }
  if (const auto layout = shared_layout(a, b)) {
    const auto pa = split(a, *layout);
    const auto pb = split(b, *layout);
    if (pa && pb) {
      std::vector<BandedOp> parts;
      for (std::size_t i = 0; i < pa->size(); ++i) {
        parts.push_back(add((*pa)[i], (*pb)[i]));
      }
      return direct_sum(parts);
    }
  }
  BandedOp::Node n;
  n.kind = BandedOp::Kind::sum;
  n.components = a.components();
  for (const auto* op : {&a, &b}) {
    if (op->kind() == BandedOp::Kind::sum) {
      n.operands.insert(n.operands.end(), op->operands().begin(), op->operands().end());
    } else {
      n.operands.push_back(*op);
    }
  }
  for (const auto& t : n.operands) {
    n.bandwidth = std::max(n.bandwidth, t.bandwidth());
  }
  return make_node(std::move(n));
}

BandedOp subtract(const BandedOp& a, const BandedOp& b) { return add(a, scale(Rational(-1), b)); }

BandedOp compose(const BandedOp& outer, const BandedOp& inner, std::int64_t bandwidth_cap) {
  require_same_components(outer, inner, "compose");
  if (outer.kind() == BandedOp::Kind::zero || inner.kind() == BandedOp::Kind::zero) {
    return BandedOp::zero(outer.components());
  }
  if (outer.kind() == BandedOp::Kind::identity) {
    return inner;
  }
  if (inner.kind() == BandedOp::Kind::identity) {
    return outer;
  }
  if (const auto layout = shared_layout(outer, inner)) {
    const auto po = split(outer, *layout);
    const auto pi = split(inner, *layout);
    if (po && pi) {
      std::vector<BandedOp> parts;
      for (std::size_t i = 0; i < po->size(); ++i) {
        parts.push_back(compose((*po)[i], (*pi)[i], bandwidth_cap));
      }
      return direct_sum(parts);
    }
  }
  BandedOp::Node n;
  n.kind = BandedOp::Kind::compose;
  n.components = outer.components();
  n.bandwidth = outer.bandwidth() + inner.bandwidth();
  require_cap(n.bandwidth, bandwidth_cap);
  n.operands = {outer, inner};
  return make_node(std::move(n));
}

namespace {

BandedOp scale_impl(Complex factor, std::optional<Rational> exact, const BandedOp& op) {
  if (!std::isfinite(factor.real()) || !std::isfinite(factor.imag())) {
    throw InputError("non-finite scale factor");
  }
  if (factor == Complex(0.0, 0.0) || op.kind() == BandedOp::Kind::zero) {
    return BandedOp::zero(op.components());
  }
  if (factor == Complex(1.0, 0.0)) {
    return op;
  }
  if (op.kind() == BandedOp::Kind::direct_sum) {
    std::vector<BandedOp> parts;
    for (const auto& p : op.operands()) {
      parts.push_back(exact ? scale(*exact, p) : scale(factor, p));
    }
    return direct_sum(parts);
  }
  if (op.kind() == BandedOp::Kind::scale) {
    const auto inner_exact = op.exact_factor();
    if (exact && inner_exact) {
      return scale(*exact * *inner_exact, op.operands().front());
    }
    return scale(factor * op.factor(), op.operands().front());
  }
  BandedOp::Node n;
  n.kind = BandedOp::Kind::scale;
  n.components = op.components();
  n.bandwidth = op.bandwidth();
  n.factor = factor;
  n.exact_factor = exact;
  n.operands = {op};
  return make_node(std::move(n));
}

} // namespace

BandedOp scale(Complex factor, const BandedOp& op) { return scale_impl(factor, std::nullopt, op); }

BandedOp scale(const Rational& factor, const BandedOp& op) {
  return scale_impl(Complex(factor.to_double(), 0.0), factor, op);
}

BandedOp polynomial(const BandedOp& base, std::vector<Complex> coefficients,
                    std::int64_t bandwidth_cap) {
  while (!coefficients.empty() && coefficients.back() == Complex(0.0, 0.0)) {
    coefficients.pop_back();
  }
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw InputError("non-finite polynomial coefficient");
    }
  }
  const int comps = base.components();
  if (coefficients.empty()) {
    return BandedOp::zero(comps);
  }
  if (coefficients.size() == 1 || base.kind() == BandedOp::Kind::zero) {
    return scale(coefficients.front(), BandedOp::identity(comps));
  }
  if (base.kind() == BandedOp::Kind::identity) {
    Complex total{0.0, 0.0};
    for (const auto& c : coefficients) {
      total += c;
    }
    return scale(total, BandedOp::identity(comps));
  }
  if (base.kind() == BandedOp::Kind::direct_sum) {
    std::vector<BandedOp> parts;
    for (const auto& p : base.operands()) {
      parts.push_back(polynomial(p, coefficients, bandwidth_cap));
    }
    return direct_sum(parts);
  }
  BandedOp::Node n;
  n.kind = BandedOp::Kind::polynomial;
  n.components = comps;
  n.bandwidth = base.bandwidth() * static_cast<std::int64_t>(coefficients.size() - 1);
  require_cap(n.bandwidth, bandwidth_cap);
  n.coefficients = std::move(coefficients);
  n.operands = {base};
  return make_node(std::move(n));
}

BandedOp power(const BandedOp& base, int n, std::int64_t bandwidth_cap) {
  if (n < 0) {
    throw InputError("negative operator power");
  }
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, Complex(0.0, 0.0));
  c.back() = 1.0;
  return polynomial(base, std::move(c), bandwidth_cap);
}

BandedOp band_adjoint(const BandedOp& op) {
  switch (op.kind()) {
  case BandedOp::Kind::zero:
  case BandedOp::Kind::identity:
    return op;
  case BandedOp::Kind::shift:
    // (e_k -> w e_{k+d})^* is e_m -> conj(w) e_{m-d}; the weights are real.
    return BandedOp::shift(-op.shift_offset(), op.weights(),
                           op.weight_offset() - op.shift_offset());
  case BandedOp::Kind::sum: {
    BandedOp out = BandedOp::zero(op.components());
    for (const auto& t : op.operands()) {
      out = add(out, band_adjoint(t));
    }
    return out;
  }
  case BandedOp::Kind::compose:
    return compose(band_adjoint(op.operands()[1]), band_adjoint(op.operands()[0]));
  case BandedOp::Kind::scale:
    if (op.exact_factor()) {
      return scale(*op.exact_factor(), band_adjoint(op.operands().front()));
    }
    return scale(std::conj(op.factor()), band_adjoint(op.operands().front()));
  case BandedOp::Kind::direct_sum: {
    std::vector<BandedOp> parts;
    for (const auto& p : op.operands()) {
      parts.push_back(band_adjoint(p));
    }
    return direct_sum(parts);
  }
  case BandedOp::Kind::polynomial: {
    std::vector<Complex> c;
    for (const auto& x : op.coefficients()) {
      c.push_back(std::conj(x));
    }
    return polynomial(band_adjoint(op.operands().front()), std::move(c));
  }
  }
  return op;
}

// ------------------------------------------------------------ window checks

double verify_on_basis(const BandedOp& lhs, const BandedOp& rhs, int n) {
  require_same_components(lhs, rhs, "verify_on_basis");
  if (n < 1) {
    throw InputError("verify_on_basis: window must contain at least e_1");
  }
  double worst = 0.0;
  for (int c = 0; c < lhs.components(); ++c) {
    for (int k = 1; k <= n; ++k) {
      const SeqVector e = SeqVector::basis(c, k);
      worst = std::max(worst, (lhs.apply(e) - rhs.apply(e)).max_abs());
    }
  }
  return worst;
}

double window_image_norm(const BandedOp& op, int n) {
  if (n < 1) {
    throw InputError("window_image_norm: window must contain at least e_1");
  }
  double worst = 0.0;
  for (int c = 0; c < op.components(); ++c) {
    for (int k = 1; k <= n; ++k) {
      worst = std::max(worst, op.apply_basis(c, k).norm());
    }
  }
  return worst;
}

// --------------------------------------------------------------- norms

double log_weighted_power_norm(const BandedOp& shift, int n) {
  if (shift.kind() != BandedOp::Kind::shift) {
    throw InputError("weighted_power_norm: operator is not a single weighted shift");
  }
  if (n < 0) {
    throw InputError("weighted_power_norm: negative power");
  }
  if (n == 0) {
    return 0.0;
  }
  const auto& w = shift.weights();
  const std::int64_t d = shift.shift_offset();
  const std::int64_t o = shift.weight_offset();
  const double minus_inf = -std::numeric_limits<double>::infinity();

  // Orbits starting at k >= k_far only touch tail weights; there the window
  // product is constant or decreasing in k.
  const std::int64_t k_far = static_cast<std::int64_t>(w.head.size()) + (o < 0 ? -o : o) +
                             (d < 0 ? -d : d) * n + 1;
  double best = minus_inf;
  for (std::int64_t k = 1; k <= k_far; ++k) {
    double log_product = 0.0;
    std::int64_t at = k;
    for (int step = 0; step < n && log_product > minus_inf; ++step) {
      if (at + d < 1) {
        log_product = minus_inf;
        break;
      }
      const Rational wk = w.at(at + o);
      log_product = wk.is_zero() ? minus_inf : log_product + std::log(std::abs(wk.to_double()));
      at += d;
    }
    best = std::max(best, log_product);
  }
  if (w.tail == WeightRule::Tail::constant) {
    const double t = std::abs(w.tail_value.to_double());
    best = std::max(best, t == 0.0 ? minus_inf : n * std::log(t));
  }
  return best;
}

double weighted_power_norm(const BandedOp& shift, int n) {
  return std::exp(log_weighted_power_norm(shift, n));
}

double PowerNormBound::value() const { return std::exp(log_value); }

double norm_bound(const BandedOp& op) {
  switch (op.kind()) {
  case BandedOp::Kind::zero:
    return 0.0;
  case BandedOp::Kind::identity:
    return 1.0;
  case BandedOp::Kind::shift:
    return weighted_power_norm(op, 1);
  case BandedOp::Kind::sum: {
    double s = 0.0;
    for (const auto& t : op.operands()) {
      s += norm_bound(t);
    }
    return s;
  }
  case BandedOp::Kind::compose:
    return norm_bound(op.operands()[0]) * norm_bound(op.operands()[1]);
  case BandedOp::Kind::scale:
    return std::abs(op.factor()) * norm_bound(op.operands().front());
  case BandedOp::Kind::direct_sum: {
    double m = 0.0;
    for (const auto& p : op.operands()) {
      m = std::max(m, norm_bound(p));
    }
    return m;
  }
  case BandedOp::Kind::polynomial: {
    double s = 0.0;
    const auto& c = op.coefficients();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] != Complex(0.0, 0.0)) {
        s += std::abs(c[k]) * power_norm_bound(op.operands().front(), static_cast<int>(k)).value();
      }
    }
    return s;
  }
  }
  return std::numeric_limits<double>::infinity();
}

PowerNormBound power_norm_bound(const BandedOp& op, int n) {
  if (n < 0) {
    throw InputError("power_norm_bound: negative power");
  }
  const double minus_inf = -std::numeric_limits<double>::infinity();
  if (n == 0) {
    return {0.0, true};
  }
  switch (op.kind()) {
  case BandedOp::Kind::zero:
    return {minus_inf, true};
  case BandedOp::Kind::identity:
    return {0.0, true};
  case BandedOp::Kind::shift:
    return {log_weighted_power_norm(op, n), true};
  case BandedOp::Kind::scale: {
    const PowerNormBound inner = power_norm_bound(op.operands().front(), n);
    return {n * std::log(std::abs(op.factor())) + inner.log_value, inner.exact};
  }
  case BandedOp::Kind::direct_sum: {
    PowerNormBound out{minus_inf, true};
    for (const auto& p : op.operands()) {
      const PowerNormBound b = power_norm_bound(p, n);
      out.log_value = std::max(out.log_value, b.log_value);
      out.exact = out.exact && b.exact;
    }
    return out;
  }
  default: {
    const double nb = norm_bound(op);
    return {nb == 0.0 ? minus_inf : n * std::log(nb), false};
  }
  }
}

QnilCertificate qnil_certificate(const BandedOp& op, int n_max, double threshold) {
  if (n_max < 2) {
    throw InputError("qnil_certificate: n_max must be at least 2");
  }
  QnilCertificate cert;
  cert.threshold = threshold;
  for (int n = 2; n <= n_max; n += 2) {
    const PowerNormBound b = power_norm_bound(op, n);
    QnilSample s;
    s.n = n;
    s.exact = b.exact;
    s.bound = b.value();
    s.root = std::exp(b.log_value / n);
    cert.samples.push_back(s);
  }
  const auto& samples = cert.samples;
  bool monotone = true;
  for (std::size_t i = std::max<std::size_t>(1, samples.size() / 2); i < samples.size(); ++i) {
    if (samples[i].root > samples[i - 1].root * (1.0 + 1e-12)) {
      monotone = false;
    }
  }
  cert.verdict = monotone && samples.back().root < threshold;
  return cert;
}

RangeAnnihilator range_annihilator(const BandedOp& op, int component, std::int64_t index) {
  if (component < 0 || component >= op.components() || index < 1) {
    throw InputError("range_annihilator: coordinate outside the operator");
  }
  RangeAnnihilator out;
  out.component = component;
  out.index = index;
  out.columns_checked = index + op.bandwidth();
  for (int c = 0; c < op.components(); ++c) {
    for (std::int64_t k = 1; k <= out.columns_checked; ++k) {
      out.max_coefficient =
          std::max(out.max_coefficient, std::abs(op.apply_basis(c, k).at(component, index)));
    }
  }
  out.proven = out.max_coefficient == 0.0;
  return out;
}

// ------------------------------------------------------------ left inverses

LeftInverseWitness derive_left_inverse(const BandedOp& op, int neumann_terms) {
  if (neumann_terms < 1) {
    throw InputError("derive_left_inverse: at least one Neumann term is required");
  }
  switch (op.kind()) {
  case BandedOp::Kind::identity:
    return {op, 0.0, 1.0, 0};
  case BandedOp::Kind::shift: {
    if (op.shift_offset() < 0) {
      throw PreconditionError("a backward shift annihilates e_1 and has no left inverse");
    }
    for (const auto& w : op.weights().head) {
      if (w.is_zero()) {
        throw PreconditionError("a shift with a zero weight has no left inverse");
      }
    }
    if (op.weights().tail != WeightRule::Tail::constant || op.weights().tail_value.is_zero()) {
      throw PreconditionError("shift weights are not bounded below");
    }
    const BandedOp inv = BandedOp::shift(-op.shift_offset(), op.weights().reciprocal(),
                                         op.weight_offset() - op.shift_offset());
    return {inv, 0.0, norm_bound(inv), 0};
  }
  case BandedOp::Kind::scale: {
    const Complex f = op.factor();
    LeftInverseWitness inner = derive_left_inverse(op.operands().front(), neumann_terms);
    inner.inverse = op.exact_factor() ? scale(op.exact_factor()->reciprocal(), inner.inverse)
                                      : scale(1.0 / f, inner.inverse);
    inner.norm /= std::abs(f);
    return inner;
  }
  case BandedOp::Kind::direct_sum: {
    LeftInverseWitness out;
    std::vector<BandedOp> parts;
    for (const auto& p : op.operands()) {
      const LeftInverseWitness w = derive_left_inverse(p, neumann_terms);
      parts.push_back(w.inverse);
      out.defect_bound = std::max(out.defect_bound, w.defect_bound);
      out.norm = std::max(out.norm, w.norm);
      out.neumann_terms = std::max(out.neumann_terms, w.neumann_terms);
    }
    out.inverse = direct_sum(parts);
    return out;
  }
  case BandedOp::Kind::sum: {
    // I + Q: truncated Neumann series sum_{k<=K} (-Q)^k. Its product with
    // I + Q is I - (-Q)^{K+1}.
    const auto& terms = op.operands();
    const auto it = std::find_if(terms.begin(), terms.end(), [](const BandedOp& t) {
      return t.kind() == BandedOp::Kind::identity;
    });
    if (it != terms.end()) {
      BandedOp q = BandedOp::zero(op.components());
      for (auto t = terms.begin(); t != terms.end(); ++t) {
        if (t != it) {
          q = add(q, *t);
        }
      }
      const PowerNormBound tail = power_norm_bound(q, neumann_terms + 1);
      if (!(tail.value() < 1.0)) {
        throw PreconditionError("Neumann series for " + op.describe() +
                                " is not certified to converge");
      }
      std::vector<Complex> c(static_cast<std::size_t>(neumann_terms) + 1);
      for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = (k % 2 == 0) ? 1.0 : -1.0;
      }
      LeftInverseWitness out;
      out.inverse = polynomial(q, std::move(c));
      out.defect_bound = tail.value();
      out.norm = norm_bound(out.inverse);
      out.neumann_terms = neumann_terms;
      return out;
    }
    break;
  }
  default:
    break;
  }
  throw PreconditionError("no left inverse witness available for " + op.describe());
}

} // namespace drazin
