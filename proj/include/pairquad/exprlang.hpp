#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Small scalar expression language used to define cochains and point
// functions on the command line and in config files.
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?            right-associative
//   atom   := number | name | name '(' expr {',' expr} ')' | '(' expr ')'
//
// Functions: sin cos tan exp log sqrt abs pow atan2. Constants pi and e are
// folded to literals at parse time. Any other identifier is a free variable,
// bound at evaluation time.

namespace pairquad {

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { number, variable, unary_minus, binary, call };
    Kind kind;
    double number = 0.0;
    std::string name;  // variable or function name
    char op = 0;       // one of + - * / ^
    std::vector<Expr> args;
};

// Parse error with the byte offset of the offending token.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

class EvalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Expr parse(std::string_view src);

// Resolver returns the value of a variable, or nullopt if unbound.
using VarResolver = std::function<std::optional<double>(std::string_view)>;

double eval(const Expr& e, const VarResolver& vars);
double eval(const Expr& e, const std::map<std::string, double>& vars);

// Canonical form: minimal parentheses, shortest round-trip numerals.
// parse(print(e)) reproduces e.
std::string print(const Expr& e);

// Free variables, sorted, deduplicated.
std::vector<std::string> variables(const Expr& e);

}  // namespace pairquad
