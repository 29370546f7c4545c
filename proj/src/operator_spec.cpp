#include "drazinlab/operator_spec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "drazinlab/errors.hpp"

namespace drazin {

using nlohmann::json;

namespace {

const json& field(const json& spec, const char* name) {
  if (!spec.is_object() || !spec.contains(name)) {
    throw InputError(std::string("operator spec: missing field \"") + name + "\" in " +
                     spec.dump());
  }
  return spec.at(name);
}

// Exact value of a double when its denominator is a power of two that fits.
Rational rational_from_double(double v) {
  if (!std::isfinite(v)) {
    throw InputError("operator spec: non-finite number");
  }
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // v = m * 2^(exp - 53) with m an integer of at most 53 bits.
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  int e = exp - 53;
  while (e < 0 && m % 2 == 0 && m != 0) {
    m /= 2;
    ++e;
  }
  if (m == 0) {
    return Rational(0);
  }
  if (e >= 0) {
    if (e > 62 || std::abs(m) > (std::int64_t{1} << (62 - e))) {
      throw InputError("operator spec: number too large for an exact rational");
    }
    return Rational(m * (std::int64_t{1} << e));
  }
  if (-e > 62) {
    throw InputError("operator spec: number has no 64-bit rational form");
  }
  return Rational(m, std::int64_t{1} << (-e));
}

ShiftKind direction(const json& spec) {
  const std::string d = field(spec, "direction").get<std::string>();
  if (d == "right") {
    return ShiftKind::right;
  }
  if (d == "left") {
    return ShiftKind::left;
  }
  throw InputError("operator spec: direction must be \"right\" or \"left\", got \"" + d + "\"");
}

BandedOp parse_operator(const json& spec);

std::vector<BandedOp> operator_list(const json& spec, const char* name) {
  const json& items = field(spec, name);
  if (!items.is_array() || items.empty()) {
    throw InputError(std::string("operator spec: \"") + name + "\" must be a nonempty array");
  }
  std::vector<BandedOp> out;
  for (const auto& item : items) {
    out.push_back(parse_operator(item));
  }
  return out;
}

int component_count(const json& spec) {
  if (!spec.contains("components")) {
    return 1;
  }
  const int n = spec.at("components").get<int>();
  if (n < 1) {
    throw InputError("operator spec: components must be positive");
  }
  return n;
}

json weights_to_json(const WeightRule& w) {
  json head = json::array();
  for (const auto& x : w.head) {
    head.push_back(x.to_string());
  }
  json tail;
  if (w.tail == WeightRule::Tail::constant) {
    tail = {{"rule", "constant"}, {"value", w.tail_value.to_string()}};
  } else {
    tail = {{"rule", "harmonic"}, {"scale", w.tail_value.to_string()}, {"shift", w.harmonic_shift}};
  }
  return {{"weights", head}, {"tail", tail}};
}

} // namespace

Rational rational_from_json(const json& value) {
  if (value.is_string()) {
    return Rational::parse(value.get<std::string>());
  }
  if (value.is_number_integer()) {
    return Rational(value.get<std::int64_t>());
  }
  if (value.is_number_float()) {
    return rational_from_double(value.get<double>());
  }
  throw InputError("operator spec: expected a rational, got " + value.dump());
}

BandedOp operator_from_json(const json& spec) {
  try {
    return parse_operator(spec);
  } catch (const json::exception& e) {
    throw InputError(std::string("operator spec: ") + e.what());
  }
}

namespace {

BandedOp parse_operator(const json& spec) {
  if (!spec.is_object()) {
    throw InputError("operator spec: expected an object, got " + spec.dump());
  }
  const std::string kind = field(spec, "kind").get<std::string>();
  if (kind == "shift") {
    return make_shift(direction(spec));
  }
  if (kind == "weighted_shift") {
    WeightRule rule;
    if (spec.contains("weights")) {
      for (const auto& w : spec.at("weights")) {
        rule.head.push_back(rational_from_json(w));
      }
    }
    if (spec.contains("tail")) {
      const json& tail = spec.at("tail");
      const std::string r = field(tail, "rule").get<std::string>();
      if (r == "constant") {
        rule.tail_value = rational_from_json(field(tail, "value"));
      } else if (r == "harmonic") {
        rule.tail = WeightRule::Tail::harmonic;
        rule.tail_value = tail.contains("scale") ? rational_from_json(tail.at("scale")) : Rational(1);
        rule.harmonic_shift = tail.value("shift", std::int64_t{0});
      } else {
        throw InputError("operator spec: unknown tail rule \"" + r + "\"");
      }
    }
    const std::int64_t offset = direction(spec) == ShiftKind::right ? 1 : -1;
    return BandedOp::shift(offset, std::move(rule), spec.value("weight_offset", std::int64_t{0}));
  }
  if (kind == "sum") {
    const auto terms = operator_list(spec, "terms");
    BandedOp out = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
      out = add(out, terms[i]);
    }
    return out;
  }
  if (kind == "compose") {
    const auto factors = operator_list(spec, "factors");
    BandedOp out = factors.back();
    for (std::size_t i = factors.size() - 1; i-- > 0;) {
      out = compose(factors[i], out);
    }
    return out;
  }
  if (kind == "direct_sum") {
    return direct_sum(operator_list(spec, "components"));
  }
  if (kind == "identity") {
    return BandedOp::identity(component_count(spec));
  }
  if (kind == "zero") {
    return BandedOp::zero(component_count(spec));
  }
  if (kind == "scale") {
    const json& f = field(spec, "factor");
    const BandedOp operand = operator_from_json(field(spec, "operand"));
    if (f.is_object()) {
      return scale(Complex(f.value("re", 0.0), f.value("im", 0.0)), operand);
    }
    return scale(rational_from_json(f), operand);
  }
  if (kind == "adjoint") {
    return band_adjoint(operator_from_json(field(spec, "operand")));
  }
  if (kind == "polynomial") {
    std::vector<Complex> c;
    for (const auto& x : field(spec, "coefficients")) {
      if (x.is_array() && x.size() == 2) {
        c.emplace_back(x[0].get<double>(), x[1].get<double>());
      } else {
        c.emplace_back(x.get<double>(), 0.0);
      }
    }
    return polynomial(operator_from_json(field(spec, "operand")), std::move(c));
  }
  throw InputError("operator spec: unknown kind \"" + kind + "\"");
}

} // namespace

json operator_to_json(const BandedOp& op) {
  switch (op.kind()) {
  case BandedOp::Kind::zero:
    return {{"kind", "zero"}, {"components", op.components()}};
  case BandedOp::Kind::identity:
    return {{"kind", "identity"}, {"components", op.components()}};
  case BandedOp::Kind::shift: {
    const std::int64_t d = op.shift_offset();
    if (d != 1 && d != -1) {
      throw InputError("operator spec: only unit shifts are serializable");
    }
    json out = {{"kind", "weighted_shift"}, {"direction", d > 0 ? "right" : "left"}};
    out.update(weights_to_json(op.weights()));
    if (op.weight_offset() != 0) {
      out["weight_offset"] = op.weight_offset();
    }
    return out;
  }
  case BandedOp::Kind::sum: {
    json terms = json::array();
    for (const auto& t : op.operands()) {
      terms.push_back(operator_to_json(t));
    }
    return {{"kind", "sum"}, {"terms", terms}};
  }
  case BandedOp::Kind::compose:
    return {{"kind", "compose"},
            {"factors", {operator_to_json(op.operands()[0]), operator_to_json(op.operands()[1])}}};
  case BandedOp::Kind::scale: {
    json factor;
    if (op.exact_factor()) {
      factor = op.exact_factor()->to_string();
    } else {
      factor = {{"re", op.factor().real()}, {"im", op.factor().imag()}};
    }
    return {{"kind", "scale"}, {"factor", factor}, {"operand", operator_to_json(op.operands()[0])}};
  }
  case BandedOp::Kind::direct_sum: {
    json parts = json::array();
    for (const auto& p : op.operands()) {
      parts.push_back(operator_to_json(p));
    }
    return {{"kind", "direct_sum"}, {"components", parts}};
  }
  case BandedOp::Kind::polynomial: {
    json c = json::array();
    for (const auto& x : op.coefficients()) {
      c.push_back({x.real(), x.imag()});
    }
    return {{"kind", "polynomial"},
            {"operand", operator_to_json(op.operands()[0])},
            {"coefficients", c}};
  }
  }
  return {};
}

BandedOp load_operator_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open operator spec " + path.string());
  }
  json spec;
  try {
    in >> spec;
  } catch (const json::parse_error& e) {
    throw InputError("operator spec " + path.string() + ": " + e.what());
  }
  return operator_from_json(spec);
}

} // namespace drazin
