#include "actsearch/expr.hpp"

#include <cctype>
#include <utility>

#include "actsearch/errors.hpp"
#include "json.hpp"

namespace actsearch {
namespace {

std::string ref_string(InputRef ref) {
  return ref.is_x() ? "x" : "u" + std::to_string(ref.unit);
}

std::string operand_string(UnaryOp u, InputRef in) {
  if (u == UnaryOp::Const) return "const";
  return std::string(unary_name(u)) + "(" + ref_string(in) + ")";
}

std::string unit_string(const CoreUnit& unit) {
  return std::string(binary_name(unit.b)) + "(" +
         operand_string(unit.u1, unit.in1) + ", " +
         operand_string(unit.u2, unit.in2) + ")";
}

}  // namespace

ActivationExpr ActivationExpr::from_units(std::vector<CoreUnit> units) {
  if (units.empty() || units.size() > kMaxUnits) {
    throw std::invalid_argument("expression must have 1-" +
                                std::to_string(kMaxUnits) + " units, got " +
                                std::to_string(units.size()));
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    CoreUnit& u = units[i];
    // Const ignores its input; pin it to x so equal canonical strings mean
    // equal structures.
    if (u.u1 == UnaryOp::Const) u.in1 = InputRef::x();
    if (u.u2 == UnaryOp::Const) u.in2 = InputRef::x();
    for (InputRef ref : {u.in1, u.in2}) {
      if (ref.is_x()) continue;
      if (i == 0) {
        throw std::invalid_argument("unit 0 inputs must be the preactivation");
      }
      if (ref.unit < 0 || ref.unit >= static_cast<int>(i)) {
        throw std::invalid_argument("unit " + std::to_string(i) +
                                    " references unit " +
                                    std::to_string(ref.unit));
      }
    }
    if (binary_commutative(u.b) &&
        operand_string(u.u2, u.in2) < operand_string(u.u1, u.in1)) {
      std::swap(u.u1, u.u2);
      std::swap(u.in1, u.in2);
    }
  }

  ActivationExpr e;
  e.units_ = std::move(units);
  e.output_ = static_cast<int>(e.units_.size()) - 1;
  e.slot_of_.assign(e.units_.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < e.units_.size(); ++i) {
    const CoreUnit& u = e.units_[i];
    const UnaryOp us[2] = {u.u1, u.u2};
    for (int pos = 0; pos < 2; ++pos) {
      if (unary_has_param(us[pos])) {
        const int id = static_cast<int>(e.params_.size());
        e.params_.push_back({id, unary_param_init(us[pos]),
                             static_cast<int>(i), pos, true});
        e.slot_of_[i][pos] = id;
      }
    }
    if (binary_has_param(u.b)) {
      const int id = static_cast<int>(e.params_.size());
      e.params_.push_back(
          {id, binary_param_init(u.b), static_cast<int>(i), 2, true});
      e.slot_of_[i][2] = id;
    }
  }

  std::string canon;
  for (std::size_t i = 0; i < e.units_.size(); ++i) {
    if (i > 0) canon += "; ";
    canon += unit_string(e.units_[i]);
  }
  e.canonical_ = std::move(canon);
  return e;
}

ActivationExpr ActivationExpr::swish_expr() {
  return from_units({CoreUnit{InputRef::x(), InputRef::x(),
                              UnaryOp::ScaleParam, UnaryOp::Identity,
                              BinaryOp::SigmoidGate}});
}

ActivationExpr ActivationExpr::relu_expr() {
  return from_units({CoreUnit{InputRef::x(), InputRef::x(), UnaryOp::Identity,
                              UnaryOp::Const, BinaryOp::Max}});
}

std::vector<double> ActivationExpr::param_inits() const {
  std::vector<double> out;
  out.reserve(params_.size());
  for (const ParamSlot& p : params_) out.push_back(p.init);
  return out;
}

void ActivationExpr::set_param_init(int slot, double value) {
  params_.at(slot).init = value;
}

void ActivationExpr::set_shared_per_channel(bool shared) {
  for (ParamSlot& p : params_) p.shared_per_channel = shared;
}

double ActivationExpr::eval(double x, std::span<const double> params) const {
  if (params.size() != params_.size()) {
    throw ParamArityMismatch(params_.size(), params.size());
  }
  double vals[kMaxUnits];
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const CoreUnit& u = units_[i];
    const double a = u.in1.is_x() ? x : vals[u.in1.unit];
    const double b = u.in2.is_x() ? x : vals[u.in2.unit];
    const auto& slots = slot_of_[i];
    const double v1 =
        eval_unary(u.u1, a, slots[0] >= 0 ? params[slots[0]] : 0.0);
    const double v2 =
        eval_unary(u.u2, b, slots[1] >= 0 ? params[slots[1]] : 0.0);
    vals[i] = eval_binary(u.b, v1, v2, slots[2] >= 0 ? params[slots[2]] : 0.0);
  }
  return vals[output_];
}

ExprGrad ActivationExpr::grad(double x, std::span<const double> params) const {
  if (params.size() != params_.size()) {
    throw ParamArityMismatch(params_.size(), params.size());
  }
  double vals[kMaxUnits];
  UnaryGrad g1[kMaxUnits], g2[kMaxUnits];
  BinaryGrad gb[kMaxUnits];
  for (std::size_t i = 0; i < units_.size(); ++i) {
    const CoreUnit& u = units_[i];
    const double a = u.in1.is_x() ? x : vals[u.in1.unit];
    const double b = u.in2.is_x() ? x : vals[u.in2.unit];
    const auto& slots = slot_of_[i];
    g1[i] = eval_grad_unary(u.u1, a, slots[0] >= 0 ? params[slots[0]] : 0.0);
    g2[i] = eval_grad_unary(u.u2, b, slots[1] >= 0 ? params[slots[1]] : 0.0);
    gb[i] = eval_grad_binary(u.b, g1[i].value, g2[i].value,
                             slots[2] >= 0 ? params[slots[2]] : 0.0);
    vals[i] = gb[i].value;
  }

  ExprGrad out;
  out.df_dparams.assign(params_.size(), 0.0);
  double adj[kMaxUnits] = {0.0, 0.0, 0.0, 0.0};
  adj[output_] = 1.0;
  for (int i = static_cast<int>(units_.size()) - 1; i >= 0; --i) {
    const CoreUnit& u = units_[i];
    const auto& slots = slot_of_[i];
    const double a = adj[i];
    if (a == 0.0) continue;
    if (slots[2] >= 0) out.df_dparams[slots[2]] += a * gb[i].dbeta;
    const double d1 = a * gb[i].dx1;
    const double d2 = a * gb[i].dx2;
    if (slots[0] >= 0) out.df_dparams[slots[0]] += d1 * g1[i].dbeta;
    if (slots[1] >= 0) out.df_dparams[slots[1]] += d2 * g2[i].dbeta;
    const double da = d1 * g1[i].dx;
    const double db = d2 * g2[i].dx;
    if (u.in1.is_x()) {
      out.df_dx += da;
    } else {
      adj[u.in1.unit] += da;
    }
    if (u.in2.is_x()) {
      out.df_dx += db;
    } else {
      adj[u.in2.unit] += db;
    }
  }
  return out;
}

double eval_expr(const ActivationExpr& expr, double x,
                 std::span<const double> params) {
  return expr.eval(x, params);
}

ExprGrad grad_expr(const ActivationExpr& expr, double x,
                   std::span<const double> params) {
  return expr.grad(x, params);
}

std::string canonical_string(const ActivationExpr& expr) {
  return expr.canonical_string();
}

namespace {

// Recursive-descent parser for the canonical grammar:
//   expr    := unit { ';' unit }
//   unit    := bname '(' operand ',' operand ')'
//   operand := 'const' | uname '(' ref ')'
//   ref     := 'x' | 'u' digits
class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ActivationExpr parse() {
    std::vector<CoreUnit> units;
    units.push_back(parse_unit(0));
    skip_ws();
    while (pos_ < text_.size() && text_[pos_] == ';') {
      ++pos_;
      units.push_back(parse_unit(static_cast<int>(units.size())));
      skip_ws();
    }
    if (pos_ != text_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    if (units.size() > ActivationExpr::kMaxUnits) {
      throw ParseError("too many units", pos_);
    }
    try {
      return ActivationExpr::from_units(std::move(units));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), pos_);
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  std::string_view ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError("expected identifier", pos_);
    }
    return std::string_view(text_).substr(start, pos_ - start);
  }

  InputRef parse_ref(int unit_index) {
    skip_ws();
    const std::size_t start = pos_;
    const std::string_view name = ident();
    if (name == "x") return InputRef::x();
    if (name.size() >= 2 && name[0] == 'u') {
      int idx = 0;
      for (char c : name.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
          throw ParseError("bad unit reference", start);
        }
        idx = idx * 10 + (c - '0');
      }
      if (idx >= unit_index) {
        throw ParseError("reference to unit " + std::to_string(idx) +
                             " before it is defined",
                         start);
      }
      return InputRef::unit_output(idx);
    }
    throw ParseError("expected 'x' or 'u<i>'", start);
  }

  void parse_operand(int unit_index, UnaryOp& op, InputRef& in) {
    skip_ws();
    const std::size_t start = pos_;
    const std::string_view name = ident();
    const auto u = unary_from_name(name);
    if (!u) {
      throw ParseError("unknown unary op '" + std::string(name) + "'", start);
    }
    op = *u;
    if (op == UnaryOp::Const) {
      in = InputRef::x();
      return;
    }
    expect('(');
    in = parse_ref(unit_index);
    expect(')');
  }

  CoreUnit parse_unit(int unit_index) {
    skip_ws();
    const std::size_t start = pos_;
    const std::string_view name = ident();
    const auto b = binary_from_name(name);
    if (!b) {
      throw ParseError("unknown binary op '" + std::string(name) + "'", start);
    }
    CoreUnit unit;
    unit.b = *b;
    expect('(');
    parse_operand(unit_index, unit.u1, unit.in1);
    expect(',');
    parse_operand(unit_index, unit.u2, unit.in2);
    expect(')');
    return unit;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

ActivationExpr parse_expr(const std::string& text) {
  return Parser(text).parse();
}

std::string ActivationExpr::to_json() const {
  nlohmann::json j;
  j["units"] = nlohmann::json::array();
  for (const CoreUnit& u : units_) {
    j["units"].push_back({{"b", binary_name(u.b)},
                          {"u1", unary_name(u.u1)},
                          {"in1", ref_string(u.in1)},
                          {"u2", unary_name(u.u2)},
                          {"in2", ref_string(u.in2)}});
  }
  j["output"] = output_;
  j["params"] = nlohmann::json::array();
  for (const ParamSlot& p : params_) {
    j["params"].push_back({{"id", p.id},
                           {"init", p.init},
                           {"owner_unit", p.owner_unit},
                           {"owner_pos", p.owner_pos},
                           {"shared_per_channel", p.shared_per_channel}});
  }
  return j.dump();
}

ActivationExpr ActivationExpr::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  std::vector<CoreUnit> units;
  auto parse_ref = [](const std::string& s) {
    if (s == "x") return InputRef::x();
    if (s.size() >= 2 && s[0] == 'u') {
      return InputRef::unit_output(std::stoi(s.substr(1)));
    }
    throw std::invalid_argument("bad input reference '" + s + "'");
  };
  for (const auto& ju : j.at("units")) {
    CoreUnit u;
    const auto b = binary_from_name(ju.at("b").get<std::string>());
    const auto u1 = unary_from_name(ju.at("u1").get<std::string>());
    const auto u2 = unary_from_name(ju.at("u2").get<std::string>());
    if (!b || !u1 || !u2) throw std::invalid_argument("unknown op name");
    u.b = *b;
    u.u1 = *u1;
    u.u2 = *u2;
    u.in1 = parse_ref(ju.at("in1").get<std::string>());
    u.in2 = parse_ref(ju.at("in2").get<std::string>());
    units.push_back(u);
  }
  ActivationExpr e = from_units(std::move(units));
  if (j.contains("output") && j.at("output").get<int>() != e.output_) {
    throw std::invalid_argument("output must be the final unit");
  }
  if (j.contains("params")) {
    const auto& jp = j.at("params");
    if (jp.size() != e.params_.size()) {
      throw ParamArityMismatch(e.params_.size(), jp.size());
    }
    for (std::size_t i = 0; i < jp.size(); ++i) {
      e.params_[i].init = jp[i].at("init").get<double>();
      if (jp[i].contains("shared_per_channel")) {
        e.params_[i].shared_per_channel =
            jp[i].at("shared_per_channel").get<bool>();
      }
    }
  }
  return e;
}

}  // namespace actsearch
