#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace lcube {

enum class Sort : std::uint8_t { Prop, Type };

std::string_view sort_name(Sort s);

/// Immutable term of the cube in de Bruijn form.
///
/// Index 0 is the innermost binder; an index n under k binders with n >= k
/// refers to context position n - k counted from the end of the context.
/// Binders carry a display hint which never takes part in equality.
class Term {
 public:
  enum class Kind : std::uint8_t { Sort, Var, App, Lam, Pi };

  static Term sort(Sort s);
  static Term prop() { return sort(Sort::Prop); }
  static Term type() { return sort(Sort::Type); }
  static Term var(std::size_t index);
  static Term app(Term fun, Term arg);
  static Term lam(Term dom, Term body, std::string hint = {});
  static Term pi(Term dom, Term cod, std::string hint = {});
  /// Non-dependent product `dom -> cod`; `cod` is given in the outer scope.
  static Term arrow(Term dom, Term cod);

  Term() = delete;

  Kind kind() const;
  bool is_sort() const { return kind() == Kind::Sort; }
  bool is_sort(Sort s) const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_lam() const { return kind() == Kind::Lam; }
  bool is_pi() const { return kind() == Kind::Pi; }

  Sort sort_tag() const;
  std::size_t index() const;
  const Term& fun() const;
  const Term& arg() const;
  /// Domain of a Lam or Pi.
  const Term& dom() const;
  /// Body of a Lam or codomain of a Pi.
  const Term& body() const;
  const std::string& hint() const;

  /// One past the largest free index, 0 for closed terms.
  std::size_t free_bound() const;
  bool is_closed() const { return free_bound() == 0; }
  std::size_t node_count() const;

  /// Structural (alpha) equality.
  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind = Kind::Sort;
  Sort sort = Sort::Prop;
  std::size_t index = 0;
  std::optional<Term> left;
  std::optional<Term> right;
  std::string hint;
  std::size_t free_bound = 0;
  std::size_t nodes = 1;
};

inline Term::Kind Term::kind() const { return node_->kind; }
inline bool Term::is_sort(Sort s) const { return is_sort() && node_->sort == s; }
inline std::size_t Term::free_bound() const { return node_->free_bound; }
inline std::size_t Term::node_count() const { return node_->nodes; }

/// Moves every free index >= cutoff by `delta`. A negative resulting index
/// is a caller defect and raises std::logic_error.
Term shift(const Term& t, std::int64_t delta, std::size_t cutoff = 0);

/// Replaces index `j` by `s` and closes the gap left by slot j: indices
/// above j move down by one. `s` lives in the context without slot j.
Term subst(const Term& t, std::size_t j, const Term& s);

/// Context positions (as indices at the top level) referenced by `t`.
std::set<std::size_t> free_indices(const Term& t);

bool occurs_free(const Term& t, std::size_t index);

/// Non-dependent product: the codomain does not mention the bound variable.
bool is_arrow(const Term& t);

/// Raw de Bruijn rendering for diagnostics (`#n` for indices).
std::string debug_string(const Term& t);

}  // namespace lcube
