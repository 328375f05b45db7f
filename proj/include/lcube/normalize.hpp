#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "lcube/error.hpp"
#include "lcube/term.hpp"

namespace lcube {

/// Upper bound on the number of beta steps a single normalization may take.
struct Fuel {
  std::size_t max_steps = 100000;
};

enum class Strategy {
  LeftmostOutermost,
  RightmostInnermost,
};

Term beta_normalize(const Term& t, Fuel fuel = {},
                    Strategy strategy = Strategy::LeftmostOutermost);

/// Maximal eta contraction of a beta-normal term, bottom-up.
Term eta_contract(const Term& t);

/// Beta-normal, maximally eta-contracted form. Throws FuelExhausted.
Term normalize(const Term& t, Fuel fuel = {},
               Strategy strategy = Strategy::LeftmostOutermost);

/// Two terms are convertible iff their normal forms are identical.
bool equivalent(const Term& a, const Term& b, Fuel fuel = {});

bool has_beta_redex(const Term& t);
bool has_eta_redex(const Term& t);
inline bool is_normal(const Term& t) { return !has_beta_redex(t) && !has_eta_redex(t); }

class NotNormal : public Error {
 public:
  using Error::Error;
};

/// Head of an atomic normal term.
struct HeadRef {
  enum class Kind { Var, Sort } kind;
  std::size_t index = 0;
  Sort sort = Sort::Prop;

  friend bool operator==(const HeadRef&, const HeadRef&) = default;
};

struct Abstraction {};
struct Product {};
struct Atomic {
  HeadRef head;
  std::vector<Term> args;
};

using NormalClass = std::variant<Abstraction, Product, Atomic>;

/// Splits a normal term into abstraction, product or `(x t1 ... tn)`.
/// Throws NotNormal when a redex is present.
NormalClass classify_normal(const Term& t);

/// Head and arguments of an application spine, in application order.
std::pair<Term, std::vector<Term>> unfold_app(const Term& t);
Term fold_app(Term head, const std::vector<Term>& args);

}  // namespace lcube
