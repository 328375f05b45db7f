#include "lcube/normalize.hpp"

#include <algorithm>
#include <stdexcept>

namespace lcube {

namespace {

class Reducer {
 public:
  explicit Reducer(Fuel fuel) : fuel_(fuel) {}

  Term outermost(const Term& t) {
    Term head = weak_head(t);
    switch (head.kind()) {
      case Term::Kind::Sort:
      case Term::Kind::Var:
        return head;
      case Term::Kind::Lam: {
        Term dom = outermost(head.dom());
        return Term::lam(std::move(dom), outermost(head.body()), head.hint());
      }
      case Term::Kind::Pi: {
        Term dom = outermost(head.dom());
        return Term::pi(std::move(dom), outermost(head.body()), head.hint());
      }
      case Term::Kind::App: {
        auto [h, args] = unfold_app(head);
        Term out = outermost(h);
        for (const Term& a : args) out = Term::app(std::move(out), outermost(a));
        return out;
      }
    }
    throw std::logic_error("unreachable term kind");
  }

  Term innermost(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Sort:
      case Term::Kind::Var:
        return t;
      case Term::Kind::Lam: {
        Term body = innermost(t.body());
        return Term::lam(innermost(t.dom()), std::move(body), t.hint());
      }
      case Term::Kind::Pi: {
        Term body = innermost(t.body());
        return Term::pi(innermost(t.dom()), std::move(body), t.hint());
      }
      case Term::Kind::App: {
        Term arg = innermost(t.arg());
        Term fun = innermost(t.fun());
        if (fun.is_lam()) {
          tick();
          return innermost(subst(fun.body(), 0, arg));
        }
        return Term::app(std::move(fun), std::move(arg));
      }
    }
    throw std::logic_error("unreachable term kind");
  }

 private:
  void tick() {
    if (++steps_ > fuel_.max_steps) throw FuelExhausted(fuel_.max_steps);
  }

  Term weak_head(Term t) {
    for (;;) {
      if (!t.is_app()) return t;
      auto [h, args] = unfold_app(t);
      if (!h.is_lam()) return t;
      tick();
      Term reduced = subst(h.body(), 0, args.front());
      for (std::size_t i = 1; i < args.size(); ++i) reduced = Term::app(std::move(reduced), args[i]);
      t = std::move(reduced);
    }
  }

  Fuel fuel_;
  std::size_t steps_ = 0;
};

bool is_eta_redex(const Term& t) {
  if (!t.is_lam()) return false;
  const Term& b = t.body();
  return b.is_app() && b.arg().is_var() && b.arg().index() == 0 && !occurs_free(b.fun(), 0);
}

}  // namespace

std::pair<Term, std::vector<Term>> unfold_app(const Term& t) {
  std::vector<Term> args;
  const Term* cur = &t;
  while (cur->is_app()) {
    args.push_back(cur->arg());
    cur = &cur->fun();
  }
  std::reverse(args.begin(), args.end());
  return {*cur, std::move(args)};
}

Term fold_app(Term head, const std::vector<Term>& args) {
  for (const Term& a : args) head = Term::app(std::move(head), a);
  return head;
}

Term beta_normalize(const Term& t, Fuel fuel, Strategy strategy) {
  Reducer r(fuel);
  return strategy == Strategy::LeftmostOutermost ? r.outermost(t) : r.innermost(t);
}

Term eta_contract(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Sort:
    case Term::Kind::Var:
      return t;
    case Term::Kind::App:
      return Term::app(eta_contract(t.fun()), eta_contract(t.arg()));
    case Term::Kind::Pi:
      return Term::pi(eta_contract(t.dom()), eta_contract(t.body()), t.hint());
    case Term::Kind::Lam: {
      Term lam = Term::lam(eta_contract(t.dom()), eta_contract(t.body()), t.hint());
      if (is_eta_redex(lam)) return shift(lam.body().fun(), -1, 0);
      return lam;
    }
  }
  throw std::logic_error("unreachable term kind");
}

Term normalize(const Term& t, Fuel fuel, Strategy strategy) {
  return eta_contract(beta_normalize(t, fuel, strategy));
}

bool equivalent(const Term& a, const Term& b, Fuel fuel) {
  if (a == b) return true;
  return normalize(a, fuel) == normalize(b, fuel);
}

bool has_beta_redex(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Sort:
    case Term::Kind::Var:
      return false;
    case Term::Kind::App:
      return t.fun().is_lam() || has_beta_redex(t.fun()) || has_beta_redex(t.arg());
    case Term::Kind::Lam:
    case Term::Kind::Pi:
      return has_beta_redex(t.dom()) || has_beta_redex(t.body());
  }
  return false;
}

bool has_eta_redex(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Sort:
    case Term::Kind::Var:
      return false;
    case Term::Kind::App:
      return has_eta_redex(t.fun()) || has_eta_redex(t.arg());
    case Term::Kind::Lam:
      return is_eta_redex(t) || has_eta_redex(t.dom()) || has_eta_redex(t.body());
    case Term::Kind::Pi:
      return has_eta_redex(t.dom()) || has_eta_redex(t.body());
  }
  return false;
}

NormalClass classify_normal(const Term& t) {
  if (has_beta_redex(t)) throw NotNormal("term has a beta redex: " + debug_string(t));
  if (has_eta_redex(t)) throw NotNormal("term has an eta redex: " + debug_string(t));
  if (t.is_lam()) return Abstraction{};
  if (t.is_pi()) return Product{};
  auto [head, args] = unfold_app(t);
  if (head.is_var()) return Atomic{{HeadRef::Kind::Var, head.index()}, std::move(args)};
  if (head.is_sort()) return Atomic{{HeadRef::Kind::Sort, 0, head.sort_tag()}, std::move(args)};
  // A beta-normal spine cannot have a Lam head; a Pi head is not a term of
  // the normal-form grammar.
  throw NotNormal("application headed by a product: " + debug_string(t));
}

}  // namespace lcube
