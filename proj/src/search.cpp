#include "lcube/search.hpp"

#include <algorithm>

namespace lcube {

std::size_t candidate_size(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Sort:
    case Term::Kind::Var:
      return 1;
    case Term::Kind::App:
      return 1 + candidate_size(t.fun()) + candidate_size(t.arg());
    case Term::Kind::Lam:
      return 1 + candidate_size(t.body());
    case Term::Kind::Pi:
      return 1 + candidate_size(t.dom()) + candidate_size(t.body());
  }
  return 0;
}

bool candidate_less(const Term& a, const Term& b) {
  std::size_t sa = candidate_size(a), sb = candidate_size(b);
  if (sa != sb) return sa < sb;
  return (a <=> b) < 0;
}

namespace {

class Enumerator {
 public:
  Enumerator(const QContext& qctx, const CubeSpec& spec, Fuel fuel) : spec_(spec), fuel_(fuel) {
    for (const QDecl& d : qctx.decls)
      scope_.push_back({d.type, d.quantifier == Quantifier::Forall, d.name});
  }

  std::vector<Term> generate(const Term& type, std::size_t budget) {
    std::vector<Term> out;
    if (budget == 0) return out;
    Term target = normalize(type, fuel_);
    if (target.is_pi()) {
      if (budget < 2) return out;
      std::string hint = target.hint().empty() ? "x" : target.hint();
      scope_.push_back({target.dom(), true, hint});
      std::vector<Term> bodies = generate(target.body(), budget - 1);
      scope_.pop_back();
      for (Term& b : bodies) out.push_back(Term::lam(target.dom(), std::move(b), hint));
      return out;
    }
    if (target.is_sort()) products(target.sort_tag(), budget, out);
    for (std::size_t pos = 0; pos < scope_.size(); ++pos) {
      if (!scope_[pos].usable) continue;
      std::size_t index = scope_.size() - 1 - pos;
      Term head_type =
          normalize(shift(scope_[pos].type, static_cast<std::int64_t>(index) + 1, 0), fuel_);
      spine(Term::var(index), head_type, target, budget - 1, out);
    }
    return out;
  }

 private:
  struct Entry {
    Term type;
    bool usable;
    std::string name;
  };

  // Types inhabiting a sort: Prop itself (when the sort is Type) and
  // products whose sort pair is in the calculus.
  void products(Sort s, std::size_t budget, std::vector<Term>& out) {
    if (s == Sort::Type) out.push_back(Term::prop());
    if (budget < 3) return;
    for (Sort dom_sort : {Sort::Prop, Sort::Type}) {
      if (!spec_.has({dom_sort, s})) continue;
      for (const Term& dom : generate(Term::sort(dom_sort), budget - 2)) {
        std::size_t used = 1 + candidate_size(dom);
        scope_.push_back({dom, true, "x"});
        std::vector<Term> cods = generate(Term::sort(s), budget - used);
        scope_.pop_back();
        for (Term& cod : cods) out.push_back(Term::pi(dom, std::move(cod), "x"));
      }
    }
  }

  // True when stripping all products of `t` leaves a result that does not
  // mention the stripped binders and differs from `target`.
  static bool cannot_reach(const Term& t, const Term& target) {
    const Term* cur = &t;
    std::size_t depth = 0;
    while (cur->is_pi()) {
      cur = &cur->body();
      ++depth;
    }
    for (std::size_t j = 0; j < depth; ++j)
      if (occurs_free(*cur, j)) return false;
    return !(shift(*cur, -static_cast<std::int64_t>(depth), depth) == target);
  }

  void spine(const Term& head, const Term& head_type, const Term& target, std::size_t remaining,
             std::vector<Term>& out) {
    if (head_type == target) {
      out.push_back(head);
      return;
    }
    if (!head_type.is_pi() || remaining < 2) return;
    if (cannot_reach(head_type, target)) return;
    for (const Term& arg : generate(head_type.dom(), remaining - 1)) {
      std::size_t used = 1 + candidate_size(arg);
      Term next = normalize(subst(head_type.body(), 0, arg), fuel_);
      spine(Term::app(head, arg), next, target, remaining - used, out);
    }
  }

  const CubeSpec& spec_;
  Fuel fuel_;
  std::vector<Entry> scope_;
};

}  // namespace

std::vector<Term> enumerate_candidates(const QContext& qctx, const Term& type,
                                       const SearchBudget& budget, const CubeSpec& spec,
                                       Fuel fuel) {
  Enumerator e(qctx, spec, fuel);
  std::vector<Term> raw = e.generate(type, budget.max_term_size);
  std::sort(raw.begin(), raw.end(), candidate_less);
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  Context ctx = qctx.plain();
  std::vector<Term> out;
  for (Term& t : raw) {
    bool ok = false;
    try {
      ok = check_type(ctx, t, type, spec, fuel);
    } catch (const TypeError&) {
    }
    if (ok) out.push_back(std::move(t));
  }
  return out;
}

namespace {

class Solver {
 public:
  Solver(const Problem& p, const SearchBudget& budget, const CubeSpec& spec, Fuel fuel)
      : p_(p), budget_(budget), spec_(spec), fuel_(fuel) {}

  SearchResult run() {
    bool any_existential = std::any_of(p_.qctx.decls.begin(), p_.qctx.decls.end(),
                                       [](const QDecl& d) { return d.quantifier == Quantifier::Exists; });
    if (!any_existential) {
      ++result_.assignments_tried;
      if (is_solution(sigma_, p_, spec_, fuel_)) result_.solutions.push_back(sigma_);
      return std::move(result_);
    }
    for (layer_ = 1; layer_ <= budget_.max_term_size && !stopped_; ++layer_) {
      QContext target;
      walk(0, target, 0);
    }
    return std::move(result_);
  }

 private:
  void walk(std::size_t pos, QContext& target, std::size_t largest) {
    if (stopped_) return;
    if (pos == p_.qctx.size()) {
      if (largest != layer_) return;
      ++result_.assignments_tried;
      if (!is_solution(sigma_, p_, spec_, fuel_)) return;
      if (result_.solutions.size() == budget_.max_solutions) {
        result_.exhaustive = false;
        stopped_ = true;
        return;
      }
      result_.solutions.push_back(sigma_);
      return;
    }
    const QDecl& decl = p_.qctx[pos];
    Term inst = apply_subst(sigma_, p_.qctx, decl.type, pos);
    if (decl.quantifier == Quantifier::Forall) {
      target.push(Quantifier::Forall, decl.name, inst);
      walk(pos + 1, target, largest);
      target.decls.pop_back();
      return;
    }
    for (const Term& cand : enumerate_candidates(target, inst, {layer_, 1}, spec_, fuel_)) {
      sigma_.bind(pos, Binding{{}, cand});
      walk(pos + 1, target, std::max(largest, candidate_size(cand)));
      sigma_.unbind(pos);
      if (stopped_) return;
    }
  }

  const Problem& p_;
  SearchBudget budget_;
  const CubeSpec& spec_;
  Fuel fuel_;
  std::size_t layer_ = 0;
  bool stopped_ = false;
  Substitution sigma_;
  SearchResult result_;
};

}  // namespace

SearchResult solve_bounded(const Problem& p, const SearchBudget& budget, const CubeSpec& spec,
                           Fuel fuel) {
  return Solver(p, budget, spec, fuel).run();
}

}  // namespace lcube
