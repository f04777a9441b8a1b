#pragma once

// Small arithmetic expression evaluator for user-supplied potentials and
// weights. Grammar (EBNF, also documented in the README):
//
//   expr     = term , { ( "+" | "-" ) , term } ;
//   term     = unary , { ( "*" | "/" ) , unary } ;
//   unary    = "-" , unary | power ;
//   power    = primary , [ "^" , unary ] ;           (right associative,
//                                                     binds above unary "-")
//   primary  = number | variable | "pi"
//            | function , "(" , expr , { "," , expr } , ")"
//            | "(" , expr , ")" ;
//   function = "sqrt" | "abs" | "exp" | "sin" | "cos" | "tanh"
//            | "min" | "max" ;
//
// The variable name is fixed at parse time ("s" for potentials, "t" for
// weights). Parsing is recursive descent into a flat RPN program; evaluation
// walks the program with a value stack and no allocation.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "hbi/errors.hpp"

namespace hbi {

class Expression {
public:
  static Expression parse(const std::string& text,
                          const std::string& variable) {
    Parser p{text, variable, 0, {}};
    p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("unexpected trailing input");
    Expression e;
    e.ops_ = std::move(p.ops);
    e.text_ = text;
    e.variable_ = variable;
    return e;
  }

  double operator()(double x) const {
    double stack[64] = {0};
    std::size_t top = 0;
    for (const Op& op : ops_) {
      switch (op.code) {
        case Code::num: stack[top++] = op.imm; break;
        case Code::var: stack[top++] = x; break;
        case Code::add: --top; stack[top - 1] += stack[top]; break;
        case Code::sub: --top; stack[top - 1] -= stack[top]; break;
        case Code::mul: --top; stack[top - 1] *= stack[top]; break;
        case Code::div: --top; stack[top - 1] /= stack[top]; break;
        case Code::pow:
          --top;
          stack[top - 1] = std::pow(stack[top - 1], stack[top]);
          break;
        case Code::neg: stack[top - 1] = -stack[top - 1]; break;
        case Code::fsqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
        case Code::fabs: stack[top - 1] = std::abs(stack[top - 1]); break;
        case Code::fexp: stack[top - 1] = std::exp(stack[top - 1]); break;
        case Code::fsin: stack[top - 1] = std::sin(stack[top - 1]); break;
        case Code::fcos: stack[top - 1] = std::cos(stack[top - 1]); break;
        case Code::ftanh: stack[top - 1] = std::tanh(stack[top - 1]); break;
        case Code::fmin:
          --top;
          stack[top - 1] = std::min(stack[top - 1], stack[top]);
          break;
        case Code::fmax:
          --top;
          stack[top - 1] = std::max(stack[top - 1], stack[top]);
          break;
      }
    }
    return stack[0];
  }

  const std::string& text() const { return text_; }
  const std::string& variable() const { return variable_; }

private:
  enum class Code {
    num, var, add, sub, mul, div, pow, neg,
    fsqrt, fabs, fexp, fsin, fcos, ftanh, fmin, fmax
  };
  struct Op {
    Code code;
    double imm = 0;
  };

  struct Parser {
    const std::string& text;
    const std::string& variable;
    std::size_t pos;
    std::vector<Op> ops;

    [[noreturn]] void fail(const std::string& what) const {
      std::ostringstream msg;
      msg << "expression: " << what << " at position " << pos << " in \""
          << text << "\"";
      throw parameter_error(msg.str());
    }

    void skip_ws() {
      while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }

    bool eat(char c) {
      skip_ws();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    void parse_expr() {
      parse_term();
      for (;;) {
        if (eat('+')) {
          parse_term();
          ops.push_back({Code::add});
        } else if (eat('-')) {
          parse_term();
          ops.push_back({Code::sub});
        } else {
          return;
        }
      }
    }

    void parse_term() {
      parse_unary();
      for (;;) {
        if (eat('*')) {
          parse_unary();
          ops.push_back({Code::mul});
        } else if (eat('/')) {
          parse_unary();
          ops.push_back({Code::div});
        } else {
          return;
        }
      }
    }

    void parse_unary() {
      if (eat('-')) {
        parse_unary();
        ops.push_back({Code::neg});
      } else {
        parse_power();
      }
    }

    void parse_power() {
      parse_primary();
      if (eat('^')) {
        parse_unary();  // right associative; exponent may carry its own sign
        ops.push_back({Code::pow});
      }
    }

    void parse_primary() {
      skip_ws();
      if (pos >= text.size()) fail("unexpected end of input");
      const char c = text[pos];
      if (std::isdigit((unsigned char)c) || c == '.') {
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos += (std::size_t)(end - begin);
        ops.push_back({Code::num, v});
        return;
      }
      if (c == '(') {
        ++pos;
        parse_expr();
        if (!eat(')')) fail("missing ')'");
        return;
      }
      if (std::isalpha((unsigned char)c)) {
        std::size_t end = pos;
        while (end < text.size() &&
               (std::isalnum((unsigned char)text[end]) || text[end] == '_'))
          ++end;
        const std::string name = text.substr(pos, end - pos);
        pos = end;
        if (name == variable) {
          ops.push_back({Code::var});
          return;
        }
        if (name == "pi") {
          ops.push_back({Code::num, 3.14159265358979323846});
          return;
        }
        const Code fn = function_code(name);
        if (!eat('(')) fail("expected '(' after function " + name);
        parse_expr();
        int args = 1;
        while (eat(',')) {
          parse_expr();
          ++args;
        }
        if (!eat(')')) fail("missing ')'");
        const bool binary = fn == Code::fmin || fn == Code::fmax;
        if (args != (binary ? 2 : 1))
          fail("wrong argument count for " + name);
        ops.push_back({fn});
        return;
      }
      fail(std::string("unexpected character '") + c + "'");
    }

    Code function_code(const std::string& name) const {
      if (name == "sqrt") return Code::fsqrt;
      if (name == "abs") return Code::fabs;
      if (name == "exp") return Code::fexp;
      if (name == "sin") return Code::fsin;
      if (name == "cos") return Code::fcos;
      if (name == "tanh") return Code::ftanh;
      if (name == "min") return Code::fmin;
      if (name == "max") return Code::fmax;
      fail("unknown identifier " + name);
    }
  };

  std::vector<Op> ops_;
  std::string text_;
  std::string variable_;
};

}  // namespace hbi
