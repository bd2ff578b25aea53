#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "actsearch/ops.hpp"

namespace actsearch {

// Where a core-unit input comes from: the layer preactivation x, or the
// output of an earlier unit.
struct InputRef {
  static constexpr int kPreactivation = -1;
  int unit = kPreactivation;

  bool is_x() const { return unit == kPreactivation; }
  static InputRef x() { return InputRef{}; }
  static InputRef unit_output(int i) { return InputRef{i}; }
  bool operator==(const InputRef&) const = default;
};

// One composition cell: b(u1(in1), u2(in2)).
struct CoreUnit {
  InputRef in1;
  InputRef in2;
  UnaryOp u1 = UnaryOp::Identity;
  UnaryOp u2 = UnaryOp::Identity;
  BinaryOp b = BinaryOp::Add;
  bool operator==(const CoreUnit&) const = default;
};

// One trainable beta. Position within the owning unit: 0 = u1, 1 = u2, 2 = b.
struct ParamSlot {
  int id = 0;
  double init = 0.0;
  int owner_unit = 0;
  int owner_pos = 0;
  bool shared_per_channel = true;
};

struct ExprGrad {
  double df_dx = 0.0;
  std::vector<double> df_dparams;
};

// A candidate activation function: a DAG of 1-4 core units, evaluated at
// the final unit. Construction validates the wiring, normalizes commutative
// operand order, and assigns parameter slots; instances are immutable
// afterwards and safe to share across threads.
class ActivationExpr {
 public:
  static constexpr int kMaxUnits = 4;

  static ActivationExpr from_units(std::vector<CoreUnit> units);

  // f(x) = sigmoid(beta * x) * x with beta initialized to 1.
  static ActivationExpr swish_expr();
  // f(x) = max(x, beta) with beta initialized to 0.
  static ActivationExpr relu_expr();

  const std::vector<CoreUnit>& units() const { return units_; }
  int output() const { return output_; }
  const std::vector<ParamSlot>& params() const { return params_; }
  std::vector<double> param_inits() const;

  void set_param_init(int slot, double value);
  void set_shared_per_channel(bool shared);

  double eval(double x, std::span<const double> params) const;
  ExprGrad grad(double x, std::span<const double> params) const;

  const std::string& canonical_string() const { return canonical_; }

  std::string to_json() const;
  static ActivationExpr from_json(const std::string& text);

  bool operator==(const ActivationExpr& other) const {
    return canonical_ == other.canonical_;
  }

 private:
  ActivationExpr() = default;

  std::vector<CoreUnit> units_;
  int output_ = 0;
  std::vector<ParamSlot> params_;
  // slot_of_[unit][pos] is the slot id feeding that position, or -1.
  std::vector<std::array<int, 3>> slot_of_;
  std::string canonical_;
};

double eval_expr(const ActivationExpr& expr, double x,
                 std::span<const double> params);
ExprGrad grad_expr(const ActivationExpr& expr, double x,
                   std::span<const double> params);

std::string canonical_string(const ActivationExpr& expr);
ActivationExpr parse_expr(const std::string& text);

}  // namespace actsearch
