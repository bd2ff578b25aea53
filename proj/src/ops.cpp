#include "actsearch/ops.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace actsearch {
namespace {

constexpr std::array<std::string_view, kNumUnaryOps> kUnaryNames = {
    "id",    "neg",  "abs",  "square",      "cube",     "sqrt",    "scale_param",
    "shift_param", "log_abs", "exp", "sin", "cos",      "sinh",    "cosh",
    "tanh",  "asinh", "atan", "sinc", "relu_half", "neg_half", "sigmoid",
    "softplus", "gauss", "erf", "const"};

constexpr std::array<std::string_view, kNumBinaryOps> kBinaryNames = {
    "add", "mul", "sub", "guarded_div", "max",
    "min", "sigmoid_gate", "gauss_sq", "gauss_abs", "mix"};

// Square/Cube/ScaleParam/ShiftParam saturate instead of overflowing; only
// the exp family is allowed to reach +/-inf.
double saturate(double v) {
  if (std::isinf(v)) {
    return std::copysign(std::numeric_limits<double>::max(), v);
  }
  return v;
}

double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

constexpr double kTwoOverSqrtPi = 1.1283791670955126;
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double sinc_prime(double x) {
  if (std::abs(x) < 1e-4) {
    return -x / 3.0 + x * x * x / 30.0;
  }
  return (x * std::cos(x) - std::sin(x)) / (x * x);
}

// Derivative of the A-S 7.1.26 form itself, so reverse mode and finite
// differences of erf_approx agree. Within ~1e-6 of 2/sqrt(pi)*exp(-x^2).
double erf_approx_prime(double x) {
  const double ax = std::abs(x);
  const double p = 0.3275911;
  const double t = 1.0 / (1.0 + p * ax);
  const double poly =
      t * (0.254829592 +
           t * (-0.284496736 +
                t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
  const double dpoly =
      0.254829592 +
      t * (2.0 * -0.284496736 +
           t * (3.0 * 1.421413741 +
                t * (4.0 * -1.453152027 + t * 5.0 * 1.061405429)));
  return std::exp(-ax * ax) * (p * t * t * dpoly + 2.0 * ax * poly);
}

}  // namespace

std::string_view unary_name(UnaryOp op) {
  return kUnaryNames[static_cast<int>(op)];
}

std::string_view binary_name(BinaryOp op) {
  return kBinaryNames[static_cast<int>(op)];
}

std::optional<UnaryOp> unary_from_name(std::string_view name) {
  for (int i = 0; i < kNumUnaryOps; ++i) {
    if (kUnaryNames[i] == name) return static_cast<UnaryOp>(i);
  }
  return std::nullopt;
}

std::optional<BinaryOp> binary_from_name(std::string_view name) {
  for (int i = 0; i < kNumBinaryOps; ++i) {
    if (kBinaryNames[i] == name) return static_cast<BinaryOp>(i);
  }
  return std::nullopt;
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

double erf_approx(double x) {
  const double ax = std::abs(x);
  const double t = 1.0 / (1.0 + 0.3275911 * ax);
  const double poly =
      t * (0.254829592 +
           t * (-0.284496736 +
                t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
  const double y = 1.0 - poly * std::exp(-ax * ax);
  return std::copysign(y, x);
}

double norm_cdf(double x) { return 0.5 * (1.0 + erf_approx(x * kInvSqrt2)); }

double swish(double x, double beta) { return x * sigmoid(beta * x); }

double swish_prime(double x, double beta) {
  const double f = swish(x, beta);
  return beta * f + sigmoid(beta * x) * (1.0 - beta * f);
}

double eval_unary(UnaryOp op, double x, double beta) {
  switch (op) {
    case UnaryOp::Identity:
      return x;
    case UnaryOp::Negate:
      return -x;
    case UnaryOp::Abs:
      return std::abs(x);
    case UnaryOp::Square:
      return saturate(x * x);
    case UnaryOp::Cube:
      return saturate(x * x * x);
    case UnaryOp::Sqrt:
      return std::sqrt(std::abs(x));
    case UnaryOp::ScaleParam:
      return saturate(beta * x);
    case UnaryOp::ShiftParam:
      return saturate(x + beta);
    case UnaryOp::LogAbs:
      return std::log(std::abs(x) + kGuardEps);
    case UnaryOp::Exp:
      return std::exp(x);
    case UnaryOp::Sin:
      return std::sin(x);
    case UnaryOp::Cos:
      return std::cos(x);
    case UnaryOp::Sinh:
      return std::sinh(x);
    case UnaryOp::Cosh:
      return std::cosh(x);
    case UnaryOp::Tanh:
      return std::tanh(x);
    case UnaryOp::Asinh:
      return std::asinh(x);
    case UnaryOp::Atan:
      return std::atan(x);
    case UnaryOp::Sinc:
      return sinc(x);
    case UnaryOp::ReluHalf:
      return x > 0.0 ? x : 0.0;
    case UnaryOp::NegHalf:
      return x < 0.0 ? x : 0.0;
    case UnaryOp::Sigmoid:
      return sigmoid(x);
    case UnaryOp::Softplus:
      return softplus(x);
    case UnaryOp::Gauss:
      return std::exp(-x * x);
    case UnaryOp::Erf:
      return erf_approx(x);
    case UnaryOp::Const:
      return beta;
  }
  return 0.0;
}

double eval_binary(BinaryOp op, double x1, double x2, double beta) {
  switch (op) {
    case BinaryOp::Add:
      return x1 + x2;
    case BinaryOp::Mul:
      return x1 * x2;
    case BinaryOp::Sub:
      return x1 - x2;
    case BinaryOp::GuardedDiv:
      return x1 / (x2 + kGuardEps);
    case BinaryOp::Max:
      return std::max(x1, x2);
    case BinaryOp::Min:
      return std::min(x1, x2);
    case BinaryOp::SigmoidGate:
      return sigmoid(x1) * x2;
    case BinaryOp::GaussSq: {
      const double d = x1 - x2;
      double e = beta * d * d;
      if (std::isnan(e)) e = 0.0;  // 0 * inf
      return std::exp(-e);
    }
    case BinaryOp::GaussAbs: {
      double e = beta * std::abs(x1 - x2);
      if (std::isnan(e)) e = 0.0;
      return std::exp(-e);
    }
    case BinaryOp::Mix:
      return beta * x1 + (1.0 - beta) * x2;
  }
  return 0.0;
}

UnaryGrad eval_grad_unary(UnaryOp op, double x, double beta) {
  switch (op) {
    case UnaryOp::Identity:
      return {x, 1.0, 0.0};
    case UnaryOp::Negate:
      return {-x, -1.0, 0.0};
    case UnaryOp::Abs:
      return {std::abs(x), sign0(x), 0.0};
    case UnaryOp::Square:
      return {saturate(x * x), 2.0 * x, 0.0};
    case UnaryOp::Cube:
      return {saturate(x * x * x), 3.0 * x * x, 0.0};
    case UnaryOp::Sqrt: {
      const double r = std::sqrt(std::abs(x));
      return {r, x == 0.0 ? 0.0 : sign0(x) / (2.0 * r), 0.0};
    }
    case UnaryOp::ScaleParam:
      return {saturate(beta * x), beta, x};
    case UnaryOp::ShiftParam:
      return {saturate(x + beta), 1.0, 1.0};
    case UnaryOp::LogAbs:
      return {std::log(std::abs(x) + kGuardEps),
              sign0(x) / (std::abs(x) + kGuardEps), 0.0};
    case UnaryOp::Exp: {
      const double e = std::exp(x);
      return {e, e, 0.0};
    }
    case UnaryOp::Sin:
      return {std::sin(x), std::cos(x), 0.0};
    case UnaryOp::Cos:
      return {std::cos(x), -std::sin(x), 0.0};
    case UnaryOp::Sinh:
      return {std::sinh(x), std::cosh(x), 0.0};
    case UnaryOp::Cosh:
      return {std::cosh(x), std::sinh(x), 0.0};
    case UnaryOp::Tanh: {
      const double t = std::tanh(x);
      return {t, 1.0 - t * t, 0.0};
    }
    case UnaryOp::Asinh:
      return {std::asinh(x), 1.0 / std::sqrt(1.0 + x * x), 0.0};
    case UnaryOp::Atan:
      return {std::atan(x), 1.0 / (1.0 + x * x), 0.0};
    case UnaryOp::Sinc:
      return {sinc(x), sinc_prime(x), 0.0};
    case UnaryOp::ReluHalf:
      return {x > 0.0 ? x : 0.0, x > 0.0 ? 1.0 : 0.0, 0.0};
    case UnaryOp::NegHalf:
      return {x < 0.0 ? x : 0.0, x < 0.0 ? 1.0 : 0.0, 0.0};
    case UnaryOp::Sigmoid: {
      const double s = sigmoid(x);
      return {s, s * (1.0 - s), 0.0};
    }
    case UnaryOp::Softplus:
      return {softplus(x), sigmoid(x), 0.0};
    case UnaryOp::Gauss: {
      const double g = std::exp(-x * x);
      return {g, -2.0 * x * g, 0.0};
    }
    case UnaryOp::Erf:
      return {erf_approx(x), kTwoOverSqrtPi * std::exp(-x * x), 0.0};
    case UnaryOp::Const:
      return {beta, 0.0, 1.0};
  }
  return {0.0, 0.0, 0.0};
}

BinaryGrad eval_grad_binary(BinaryOp op, double x1, double x2, double beta) {
  switch (op) {
    case BinaryOp::Add:
      return {x1 + x2, 1.0, 1.0, 0.0};
    case BinaryOp::Mul:
      return {x1 * x2, x2, x1, 0.0};
    case BinaryOp::Sub:
      return {x1 - x2, 1.0, -1.0, 0.0};
    case BinaryOp::GuardedDiv: {
      const double d = x2 + kGuardEps;
      return {x1 / d, 1.0 / d, -x1 / (d * d), 0.0};
    }
    case BinaryOp::Max:
      if (x1 > x2) return {x1, 1.0, 0.0, 0.0};
      if (x1 < x2) return {x2, 0.0, 1.0, 0.0};
      return {x1, 0.5, 0.5, 0.0};
    case BinaryOp::Min:
      if (x1 < x2) return {x1, 1.0, 0.0, 0.0};
      if (x1 > x2) return {x2, 0.0, 1.0, 0.0};
      return {x1, 0.5, 0.5, 0.0};
    case BinaryOp::SigmoidGate: {
      const double s = sigmoid(x1);
      return {s * x2, s * (1.0 - s) * x2, s, 0.0};
    }
    case BinaryOp::GaussSq: {
      const double d = x1 - x2;
      double e = beta * d * d;
      if (std::isnan(e)) e = 0.0;
      const double g = std::exp(-e);
      const double dd = -2.0 * beta * d * g;
      return {g, dd, -dd, -d * d * g};
    }
    case BinaryOp::GaussAbs: {
      const double d = x1 - x2;
      double e = beta * std::abs(d);
      if (std::isnan(e)) e = 0.0;
      const double g = std::exp(-e);
      const double dd = -beta * sign0(d) * g;
      return {g, dd, -dd, -std::abs(d) * g};
    }
    case BinaryOp::Mix:
      return {beta * x1 + (1.0 - beta) * x2, beta, 1.0 - beta, x1 - x2};
  }
  return {0.0, 0.0, 0.0, 0.0};
}

}  // namespace actsearch
