#include "ccn/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace ccn {

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::tan: return "tan";
    case Func::tanh: return "tanh";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::abs: return "abs";
  }
  return "?";
}

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::number;
  e->number = v;
  return e;
}

ExprPtr make_variable(int slot, int comp) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::variable;
  e->slot = slot;
  e->comp = comp;
  return e;
}

ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::neg;
  e->a = std::move(a);
  return e;
}

ExprPtr make_binary(Expr::Kind op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr make_call(Func fn, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::call;
  e->fn = fn;
  e->a = std::move(a);
  return e;
}

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;

  [[noreturn]] void error(const std::string& what) {
    fail(Errc::syntax_error, what + " at position " + std::to_string(pos));
  }

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool eat(char c) {
    skip_space();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  ExprPtr parse_expr() {
    ExprPtr left = parse_term();
    while (true) {
      if (eat('+')) {
        left = make_binary(Expr::Kind::add, left, parse_term());
      } else if (eat('-')) {
        left = make_binary(Expr::Kind::sub, left, parse_term());
      } else {
        return left;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr left = parse_unary();
    while (true) {
      if (eat('*')) {
        left = make_binary(Expr::Kind::mul, left, parse_unary());
      } else if (eat('/')) {
        left = make_binary(Expr::Kind::div, left, parse_unary());
      } else {
        return left;
      }
    }
  }

  // Exponentiation binds tighter than unary minus and associates to the
  // right: -2^2 is -(2^2), 2^3^2 is 2^(3^2).
  ExprPtr parse_unary() {
    if (eat('-')) return make_neg(parse_unary());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (eat('^')) return make_binary(Expr::Kind::pow, base, parse_unary());
    return base;
  }

  ExprPtr parse_atom() {
    skip_space();
    if (pos >= text.size()) error("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      ExprPtr inner = parse_expr();
      if (!eat(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return parse_name();
    }
    error(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) error("malformed number");
    pos += static_cast<size_t>(end - begin);
    return make_number(v);
  }

  ExprPtr parse_name() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    std::string name = text.substr(start, pos - start);

    // Slot variables: u<slot>_<component>.
    if (name.size() >= 4 && name[0] == 'u' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      size_t underscore = name.find('_');
      if (underscore == std::string::npos) {
        error("malformed variable '" + name + "'");
      }
      std::string slot_part = name.substr(1, underscore - 1);
      std::string comp_part = name.substr(underscore + 1);
      if (slot_part.empty() || comp_part.empty()) {
        error("malformed variable '" + name + "'");
      }
      for (char ch : slot_part + comp_part) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
          error("malformed variable '" + name + "'");
        }
      }
      return make_variable(std::stoi(slot_part), std::stoi(comp_part));
    }
    if (name.size() >= 2 && name[0] == 'u' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      error("malformed variable '" + name + "'");
    }

    static const struct {
      const char* name;
      Func fn;
    } kFuncs[] = {
        {"sin", Func::sin}, {"cos", Func::cos},   {"tan", Func::tan},
        {"tanh", Func::tanh}, {"exp", Func::exp}, {"log", Func::log},
        {"sqrt", Func::sqrt}, {"abs", Func::abs},
    };
    for (const auto& f : kFuncs) {
      if (name == f.name) {
        if (!eat('(')) error("expected '(' after '" + name + "'");
        ExprPtr arg = parse_expr();
        if (!eat(')')) error("expected ')'");
        return make_call(f.fn, arg);
      }
    }
    fail(Errc::unknown_function, "'" + name + "'");
  }
};

// Precedence levels for printing; must mirror the parser.
constexpr int kLevelAdd = 1;
constexpr int kLevelMul = 2;
constexpr int kLevelNeg = 3;
constexpr int kLevelPow = 4;
constexpr int kLevelAtom = 5;

void print_rec(const ExprPtr& e, int min_level, std::string& out) {
  auto wrap = [&](int level, auto&& body) {
    bool parens = level < min_level;
    if (parens) out += '(';
    body();
    if (parens) out += ')';
  };
  switch (e->kind) {
    case Expr::Kind::number: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", e->number);
      // A negative literal binds like a negation, not like an atom; without
      // parens "-2^x" would re-parse as -(2^x) and change the value.
      wrap(buf[0] == '-' ? kLevelNeg : kLevelAtom, [&] { out += buf; });
      break;
    }
    case Expr::Kind::variable:
      out += "u" + std::to_string(e->slot) + "_" + std::to_string(e->comp);
      break;
    case Expr::Kind::neg:
      wrap(kLevelNeg, [&] {
        out += '-';
        print_rec(e->a, kLevelNeg, out);
      });
      break;
    case Expr::Kind::add:
    case Expr::Kind::sub:
      wrap(kLevelAdd, [&] {
        print_rec(e->a, kLevelAdd, out);
        out += e->kind == Expr::Kind::add ? " + " : " - ";
        print_rec(e->b, kLevelAdd + 1, out);
      });
      break;
    case Expr::Kind::mul:
    case Expr::Kind::div:
      wrap(kLevelMul, [&] {
        print_rec(e->a, kLevelMul, out);
        out += e->kind == Expr::Kind::mul ? "*" : "/";
        print_rec(e->b, kLevelMul + 1, out);
      });
      break;
    case Expr::Kind::pow:
      wrap(kLevelPow, [&] {
        print_rec(e->a, kLevelAtom, out);
        out += '^';
        print_rec(e->b, kLevelNeg, out);
      });
      break;
    case Expr::Kind::call:
      out += func_name(e->fn);
      out += '(';
      print_rec(e->a, 0, out);
      out += ')';
      break;
  }
}

}  // namespace

ExprPtr parse(const std::string& text) {
  Parser p{text};
  ExprPtr e = p.parse_expr();
  p.skip_space();
  if (p.pos != text.size()) p.error("trailing input");
  return e;
}

std::string print(const ExprPtr& e) {
  std::string out;
  print_rec(e, 0, out);
  return out;
}

bool structurally_equal(const ExprPtr& x, const ExprPtr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case Expr::Kind::number:
      return x->number == y->number;
    case Expr::Kind::variable:
      return x->slot == y->slot && x->comp == y->comp;
    case Expr::Kind::neg:
      return structurally_equal(x->a, y->a);
    case Expr::Kind::call:
      return x->fn == y->fn && structurally_equal(x->a, y->a);
    default:
      return structurally_equal(x->a, y->a) && structurally_equal(x->b, y->b);
  }
}

ExprPtr substitute_slots(const ExprPtr& e, const std::vector<int>& perm) {
  switch (e->kind) {
    case Expr::Kind::number:
      return e;
    case Expr::Kind::variable: {
      if (e->slot < 0 || e->slot >= static_cast<int>(perm.size())) {
        fail(Errc::out_of_range_variable, "slot " + std::to_string(e->slot));
      }
      return make_variable(perm[e->slot], e->comp);
    }
    case Expr::Kind::neg:
      return make_neg(substitute_slots(e->a, perm));
    case Expr::Kind::call:
      return make_call(e->fn, substitute_slots(e->a, perm));
    default:
      return make_binary(e->kind, substitute_slots(e->a, perm),
                         substitute_slots(e->b, perm));
  }
}

double eval(const ExprPtr& e, const std::vector<std::vector<double>>& slots) {
  switch (e->kind) {
    case Expr::Kind::number:
      return e->number;
    case Expr::Kind::variable: {
      if (e->slot < 0 || e->slot >= static_cast<int>(slots.size()) || e->comp < 0 ||
          e->comp >= static_cast<int>(slots[e->slot].size())) {
        fail(Errc::unbound_variable, "u" + std::to_string(e->slot) + "_" +
                                         std::to_string(e->comp));
      }
      return slots[e->slot][e->comp];
    }
    case Expr::Kind::neg:
      return -eval(e->a, slots);
    case Expr::Kind::add:
      return eval(e->a, slots) + eval(e->b, slots);
    case Expr::Kind::sub:
      return eval(e->a, slots) - eval(e->b, slots);
    case Expr::Kind::mul:
      return eval(e->a, slots) * eval(e->b, slots);
    case Expr::Kind::div:
      return eval(e->a, slots) / eval(e->b, slots);
    case Expr::Kind::pow:
      return std::pow(eval(e->a, slots), eval(e->b, slots));
    case Expr::Kind::call: {
      double v = eval(e->a, slots);
      switch (e->fn) {
        case Func::sin: return std::sin(v);
        case Func::cos: return std::cos(v);
        case Func::tan: return std::tan(v);
        case Func::tanh: return std::tanh(v);
        case Func::exp: return std::exp(v);
        case Func::log: return std::log(v);
        case Func::sqrt: return std::sqrt(v);
        case Func::abs: return std::fabs(v);
      }
      break;
    }
  }
  fail(Errc::syntax_error, "corrupt expression node");
}

namespace {

bool literal_zero(const ExprPtr& e) {
  return e->kind == Expr::Kind::number && e->number == 0.0;
}

void check_variable_ranges(const ExprPtr& e, const std::vector<int>& slot_dims) {
  switch (e->kind) {
    case Expr::Kind::number:
      return;
    case Expr::Kind::variable:
      if (e->slot < 0 || e->slot >= static_cast<int>(slot_dims.size())) {
        fail(Errc::out_of_range_variable,
             "slot " + std::to_string(e->slot) + " does not exist (" +
                 std::to_string(slot_dims.size()) + " slots)");
      }
      if (e->comp < 0 || e->comp >= slot_dims[e->slot]) {
        fail(Errc::out_of_range_variable,
             "component " + std::to_string(e->comp) + " of slot " +
                 std::to_string(e->slot) + " exceeds dimension " +
                 std::to_string(slot_dims[e->slot]));
      }
      return;
    case Expr::Kind::neg:
    case Expr::Kind::call:
      check_variable_ranges(e->a, slot_dims);
      return;
    default:
      check_variable_ranges(e->a, slot_dims);
      check_variable_ranges(e->b, slot_dims);
      return;
  }
}

}  // namespace

BoundModule bind_module(std::vector<ExprPtr> outputs, const InputSignature& signature,
                        const PhaseDims& dims) {
  BoundModule m;
  m.signature = signature;
  m.root_dim = dims.by_color[signature.root_color];
  for (const auto& [edge_color, source_color] : signature.slots) {
    (void)edge_color;
    m.slot_dims.push_back(dims.by_color[source_color]);
  }

  if (signature.leafless()) {
    for (const auto& e : outputs) {
      if (!literal_zero(e)) {
        fail(Errc::nonzero_module_on_leafless_class,
             "a node with no inputs admits only the zero law");
      }
    }
    m.zero = true;
    return m;
  }

  if (outputs.empty()) {
    m.zero = true;
    return m;
  }
  if (static_cast<int>(outputs.size()) != m.root_dim) {
    fail(Errc::arity_mismatch,
         std::to_string(outputs.size()) + " outputs for a " +
             std::to_string(m.root_dim) + "-dimensional root block");
  }
  for (const auto& e : outputs) check_variable_ranges(e, m.slot_dims);
  m.outputs = std::move(outputs);
  return m;
}

BoundModule bind_module(const ModuleSpec& spec, const InputSignature& signature,
                        const PhaseDims& dims) {
  if (spec.declared_slots &&
      *spec.declared_slots != static_cast<int>(signature.slots.size())) {
    fail(Errc::arity_mismatch,
         "declared " + std::to_string(*spec.declared_slots) + " slots, signature has " +
             std::to_string(signature.slots.size()));
  }
  std::vector<ExprPtr> outputs;
  outputs.reserve(spec.outputs.size());
  for (const auto& text : spec.outputs) outputs.push_back(parse(text));
  return bind_module(std::move(outputs), signature, dims);
}

void BoundModule::eval_into(const std::vector<std::vector<double>>& slots,
                            std::vector<double>& out) const {
  out.assign(root_dim, 0.0);
  if (zero) return;
  if (base) {
    std::vector<std::vector<double>> permuted(slots.size());
    std::vector<double> tmp;
    for (const auto& perm : average_perms) {
      for (size_t k = 0; k < perm.size(); ++k) permuted[k] = slots[perm[k]];
      base->eval_into(permuted, tmp);
      for (int i = 0; i < root_dim; ++i) out[i] += tmp[i];
    }
    double scale = 1.0 / static_cast<double>(average_perms.size());
    for (double& v : out) v *= scale;
    return;
  }
  for (int i = 0; i < root_dim; ++i) out[i] = ccn::eval(outputs[i], slots);
}

std::vector<double> BoundModule::eval(const std::vector<std::vector<double>>& slots) const {
  std::vector<double> out;
  eval_into(slots, out);
  return out;
}

}  // namespace ccn
