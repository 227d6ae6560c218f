#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccn/graph.hpp"
#include "ccn/phase.hpp"

namespace ccn {

// ---------------------------------------------------------------------------
// Expression language for control modules.
//
// Variables u<slot>_<component> read one component of one input slot.
// Operators: + - * / ^ with ^ right-associative and binding tighter than
// unary minus, so -2^2 evaluates to -4. Functions: sin cos tan tanh exp log
// sqrt abs.
// ---------------------------------------------------------------------------

enum class Func { sin, cos, tan, tanh, exp, log, sqrt, abs };

const char* func_name(Func f);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, variable, neg, add, sub, mul, div, pow, call };

  Kind kind{};
  double number = 0.0;          // Kind::number
  int slot = -1;                // Kind::variable
  int comp = -1;
  Func fn = Func::sin;          // Kind::call
  ExprPtr a;                    // unary operand / left operand
  ExprPtr b;                    // right operand
};

ExprPtr make_number(double v);
ExprPtr make_variable(int slot, int comp);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_binary(Expr::Kind op, ExprPtr a, ExprPtr b);
ExprPtr make_call(Func fn, ExprPtr a);

/// Recursive-descent parse. Throws SyntaxError (with position) or
/// UnknownFunction.
ExprPtr parse(const std::string& text);

/// Canonical text form; parse(print(e)) is structurally e.
std::string print(const ExprPtr& e);

bool structurally_equal(const ExprPtr& x, const ExprPtr& y);

/// Rewrites slot indices: slot i becomes perm[i]. Component indices are kept.
ExprPtr substitute_slots(const ExprPtr& e, const std::vector<int>& perm);

/// Evaluates with one value vector per slot. Division by zero and domain
/// errors follow IEEE semantics; out-of-range variables throw.
double eval(const ExprPtr& e, const std::vector<std::vector<double>>& slots);

// ---------------------------------------------------------------------------
// Control modules bound to an input-tree signature.
// ---------------------------------------------------------------------------

struct ModuleSpec {
  std::optional<int> declared_slots;
  std::vector<std::string> outputs;
};

/// A control law for one input-tree class: one output expression per root
/// component, reading slot variables. A leafless class admits only the zero
/// module. A symmetrized module may instead hold a base module plus the
/// permutations to average over.
struct BoundModule {
  InputSignature signature;
  int root_dim = 0;
  std::vector<int> slot_dims;
  bool zero = false;

  std::vector<ExprPtr> outputs;  // one per root component when expression-backed

  std::shared_ptr<const BoundModule> base;  // averaging wrapper when set
  std::vector<std::vector<int>> average_perms;

  bool expression_backed() const { return base == nullptr; }
  void eval_into(const std::vector<std::vector<double>>& slots,
                 std::vector<double>& out) const;
  std::vector<double> eval(const std::vector<std::vector<double>>& slots) const;
};

BoundModule bind_module(const ModuleSpec& spec, const InputSignature& signature,
                        const PhaseDims& dims);

/// Programmatic variant; `outputs` may be empty for the zero module.
BoundModule bind_module(std::vector<ExprPtr> outputs, const InputSignature& signature,
                        const PhaseDims& dims);

}  // namespace ccn
