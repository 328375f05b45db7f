#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcube/error.hpp"
#include "lcube/normalize.hpp"
#include "lcube/term.hpp"
#include "lcube/typing.hpp"

namespace lcube {

enum class Quantifier { Forall, Exists };

struct QDecl {
  Quantifier quantifier;
  std::string name;
  Term type;
};

/// A context whose variables are each universal or existential.
struct QContext {
  std::vector<QDecl> decls;

  std::size_t size() const { return decls.size(); }
  bool empty() const { return decls.empty(); }
  const QDecl& operator[](std::size_t pos) const { return decls[pos]; }

  /// The first `n` declarations.
  QContext prefix(std::size_t n) const;
  Context plain() const;
  std::vector<std::string> names() const;
  /// Position of the last declaration named `name`.
  std::optional<std::size_t> find(const std::string& name) const;
  /// Context position referenced by index `i` at top level.
  std::size_t position_of_index(std::size_t i) const { return size() - 1 - i; }
  Term var_at(std::size_t pos) const { return Term::var(size() - 1 - pos); }

  void push(Quantifier q, std::string name, Term type) {
    decls.push_back({q, std::move(name), std::move(type)});
  }
};

/// Element of N ∪ {∞}.
class Order {
 public:
  static Order finite(unsigned n) { return Order(n); }
  static Order infinite() { return Order(); }

  bool is_infinite() const { return !value_.has_value(); }
  /// Only meaningful when finite.
  unsigned value() const { return value_.value(); }
  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(*value_); }

  friend bool operator==(const Order&, const Order&) = default;
  friend std::strong_ordering operator<=>(const Order& a, const Order& b) {
    if (a.is_infinite() || b.is_infinite())
      return a.is_infinite() <=> b.is_infinite();
    return *a.value_ <=> *b.value_;
  }

 private:
  Order() = default;
  explicit Order(unsigned n) : value_(n) {}
  std::optional<unsigned> value_;
};

Order max(const Order& a, const Order& b);

class OrderError : public Error {
 public:
  enum class Code { NotAType, UnsupportedHead };
  OrderError(Code code, std::string message) : Error(std::move(message)), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// o(T): 1 for atoms headed by a universal variable, ∞ for atoms headed by
/// an existential, 2 for Prop, and max(1 + o(A), o(B)) for (y:A)B where y
/// counts as existential inside B. `type` is normalized first and must not
/// be an abstraction; a head `Type` has no defined order.
Order order(const Term& type, const QContext& qctx, Fuel fuel = {});

/// Every free variable of `t` is universal and its type is recursively
/// closed in the prefix before it.
bool is_closed(const Term& t, const QContext& qctx);

/// Replacement for one existential variable: `replacement` lives in the
/// already substituted prefix extended with `local`, whose declarations
/// are all existential.
struct Binding {
  std::vector<QDecl> local;
  Term replacement;
};

/// Finite map from context positions to bindings; at most one per variable.
class Substitution {
 public:
  /// Throws std::invalid_argument if `pos` is already bound.
  void bind(std::size_t pos, Binding binding);
  void unbind(std::size_t pos) { bindings_.erase(pos); }
  const Binding* find(std::size_t pos) const;
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::size_t, Binding>& bindings() const { return bindings_; }

  /// Bindings for positions below `n`.
  Substitution restrict_below(std::size_t n) const;

 private:
  std::map<std::size_t, Binding> bindings_;
};

/// Applies σ to a term living in the first `prefix_len` declarations of
/// `qctx`; the result lives in σ applied to that prefix. No normalization.
Term apply_subst(const Substitution& sigma, const QContext& qctx, const Term& t,
                 std::optional<std::size_t> prefix_len = std::nullopt);

class SubstitutionError : public Error {
 public:
  enum class Check {
    UnknownPosition,
    UniversalBound,
    LocalNotExistential,
    LocalContext,
    Sort,
    Replacement,
  };
  SubstitutionError(std::size_t position, Check check, std::string message)
      : Error(std::move(message)), position_(position), check_(check) {}
  std::size_t position() const { return position_; }
  Check check() const { return check_; }

 private:
  std::size_t position_;
  Check check_;
};

/// Checks that σ is well typed in Γ declaration by declaration and returns
/// σΓ. Existential declarations are replaced by the binding's local context
/// (or kept when unbound) and the replacement must have type σT there.
QContext subst_well_typed(const Substitution& sigma, const QContext& qctx,
                          const CubeSpec& spec, Fuel fuel = {});

enum class ProblemKind { Unification, Matching };

std::string_view to_string(ProblemKind k);

/// <Γ, a, b>: two terms of the same type in a quantified context.
struct Problem {
  QContext qctx;
  Term lhs;
  Term rhs;
  /// Normal form of the common type.
  Term type;
  ProblemKind kind;
  /// Highest order among existential declaration types; empty without
  /// existentials.
  std::optional<Order> max_existential_order;
};

class ProblemError : public Error {
 public:
  enum class Code { IllTypedSide, TypeMismatch };
  ProblemError(Code code, std::string message, std::optional<SortPair> missing = std::nullopt)
      : Error(std::move(message)), code_(code), missing_(missing) {}
  Code code() const { return code_; }
  std::optional<SortPair> missing_pair() const { return missing_; }

 private:
  Code code_;
  std::optional<SortPair> missing_;
};

/// Validates the context and both sides; classifies Matching iff `b` is
/// closed. Context errors surface as TypeError with the declaration set.
Problem make_problem(QContext qctx, Term a, Term b, const CubeSpec& spec, Fuel fuel = {});

bool is_solution(const Substitution& sigma, const Problem& p, const CubeSpec& spec,
                 Fuel fuel = {});

/// Γ = [∀U:Prop]Γ' with every other declaration of type U, U→U, U→U→U or
/// U→U→U→U, and common type U.
bool is_term_elementary(const Problem& p);

struct ElementaryCheck {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Declarations typed by Prop, Prop→Prop, ... up to three arrows and common
/// type Prop; only available with type constructors.
ElementaryCheck is_type_elementary(const Problem& p, const CubeSpec& spec);

/// Returns `base` or `base` with a numeric suffix, avoiding `taken`.
std::string fresh_name(const std::string& base, const std::vector<std::string>& taken,
                       bool always_suffix = false);

}  // namespace lcube
