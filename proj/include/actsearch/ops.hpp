#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace actsearch {

// The candidate search space composes scalar functions drawn from fixed
// unary and binary primitive sets. Ops tagged with a beta carry one
// trainable parameter slot each.

enum class UnaryOp : std::uint8_t {
  Identity,    // x
  Negate,      // -x
  Abs,         // |x|
  Square,      // x^2
  Cube,        // x^3
  Sqrt,        // sqrt(|x|), totalized over the reals
  ScaleParam,  // beta * x
  ShiftParam,  // x + beta
  LogAbs,      // log(|x| + eps)
  Exp,         // exp(x)
  Sin,         // sin(x)
  Cos,         // cos(x)
  Sinh,        // sinh(x)
  Cosh,        // cosh(x)
  Tanh,        // tanh(x)
  Asinh,       // asinh(x)
  Atan,        // atan(x)
  Sinc,        // sin(x)/x, sinc(0) = 1
  ReluHalf,    // max(x, 0)
  NegHalf,     // min(x, 0)
  Sigmoid,     // 1 / (1 + exp(-x))
  Softplus,    // log(1 + exp(x))
  Gauss,       // exp(-x^2)
  Erf,         // erf(x)
  Const,       // beta, input ignored
};
inline constexpr int kNumUnaryOps = 25;

enum class BinaryOp : std::uint8_t {
  Add,          // x1 + x2
  Mul,          // x1 * x2
  Sub,          // x1 - x2
  GuardedDiv,   // x1 / (x2 + eps)
  Max,          // max(x1, x2)
  Min,          // min(x1, x2)
  SigmoidGate,  // sigmoid(x1) * x2
  GaussSq,      // exp(-beta * (x1 - x2)^2)
  GaussAbs,     // exp(-beta * |x1 - x2|)
  Mix,          // beta * x1 + (1 - beta) * x2
};
inline constexpr int kNumBinaryOps = 10;

// Guard epsilon shared by LogAbs and GuardedDiv.
inline constexpr double kGuardEps = 1e-6;

constexpr bool unary_has_param(UnaryOp op) {
  return op == UnaryOp::ScaleParam || op == UnaryOp::ShiftParam ||
         op == UnaryOp::Const;
}

constexpr bool binary_has_param(BinaryOp op) {
  return op == BinaryOp::GaussSq || op == BinaryOp::GaussAbs ||
         op == BinaryOp::Mix;
}

// Multiplicative slots start at 1, additive/constant slots at 0, Mix at 1/2,
// so every parameterized op starts out as a neutral member of its family.
constexpr double unary_param_init(UnaryOp op) {
  return op == UnaryOp::ScaleParam ? 1.0 : 0.0;
}

constexpr double binary_param_init(BinaryOp op) {
  return op == BinaryOp::Mix ? 0.5 : 1.0;
}

// Ops whose operands may be swapped without changing the value; their
// canonical form sorts the operand strings.
constexpr bool binary_commutative(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Mul:
    case BinaryOp::Max:
    case BinaryOp::Min:
    case BinaryOp::GaussSq:
    case BinaryOp::GaussAbs:
      return true;
    default:
      return false;
  }
}

std::string_view unary_name(UnaryOp op);
std::string_view binary_name(BinaryOp op);
std::optional<UnaryOp> unary_from_name(std::string_view name);
std::optional<BinaryOp> binary_from_name(std::string_view name);

// Overflow-safe sigmoid.
double sigmoid(double z);
// log(1 + exp(x)) without intermediate overflow.
double softplus(double x);
// Abramowitz-Stegun 7.1.26 rational approximation, |error| <= 1.5e-7.
double erf_approx(double x);
// Standard normal CDF via erf_approx.
double norm_cdf(double x);

double swish(double x, double beta);
// d/dx of swish: beta*f(x) + sigmoid(beta*x) * (1 - beta*f(x)).
double swish_prime(double x, double beta);

// Total on finite inputs; beta is ignored by parameterless ops.
double eval_unary(UnaryOp op, double x, double beta);
double eval_binary(BinaryOp op, double x1, double x2, double beta);

struct UnaryGrad {
  double value;
  double dx;
  double dbeta;
};

struct BinaryGrad {
  double value;
  double dx1;
  double dx2;
  double dbeta;
};

// Fused value + partial derivatives. Kinked ops (Abs, ReluHalf, NegHalf,
// Sqrt, GaussAbs, Max/Min ties) take subgradient 0 at the kink, matching
// the convention that max(x, 0) has derivative 0 at 0.
UnaryGrad eval_grad_unary(UnaryOp op, double x, double beta);
BinaryGrad eval_grad_binary(BinaryOp op, double x1, double x2, double beta);

}  // namespace actsearch
