#include "lcube/problem.hpp"

#include <algorithm>
#include <stdexcept>

namespace lcube {

QContext QContext::prefix(std::size_t n) const {
  QContext out;
  out.decls.assign(decls.begin(), decls.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())));
  return out;
}

Context QContext::plain() const {
  Context ctx;
  ctx.reserve(decls.size());
  for (const QDecl& d : decls) ctx.push_back({d.name, d.type});
  return ctx;
}

std::vector<std::string> QContext::names() const {
  std::vector<std::string> out;
  out.reserve(decls.size());
  for (const QDecl& d : decls) out.push_back(d.name);
  return out;
}

std::optional<std::size_t> QContext::find(const std::string& name) const {
  for (std::size_t i = decls.size(); i-- > 0;)
    if (decls[i].name == name) return i;
  return std::nullopt;
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& taken,
                       bool always_suffix) {
  auto used = [&](const std::string& n) {
    return std::find(taken.begin(), taken.end(), n) != taken.end();
  };
  if (!always_suffix && !used(base)) return base;
  for (std::size_t k = always_suffix ? 0 : 1;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!used(candidate)) return candidate;
  }
}

Order max(const Order& a, const Order& b) { return a < b ? b : a; }

namespace {

Order successor(const Order& o) {
  return o.is_infinite() ? o : Order::finite(o.value() + 1);
}

Order order_of(const Term& t, std::vector<Quantifier>& quants) {
  if (t.is_lam()) throw OrderError(OrderError::Code::NotAType, "an abstraction is not a type");
  if (t.is_pi()) {
    Order dom = order_of(t.dom(), quants);
    quants.push_back(Quantifier::Exists);
    Order cod = order_of(t.body(), quants);
    quants.pop_back();
    return max(successor(dom), cod);
  }
  auto [head, args] = unfold_app(t);
  if (head.is_sort(Sort::Prop)) return Order::finite(2);
  if (head.is_sort(Sort::Type))
    throw OrderError(OrderError::Code::UnsupportedHead, "order is undefined for a type headed by Type");
  if (!head.is_var())
    throw OrderError(OrderError::Code::NotAType, "type is not in normal form: " + debug_string(t));
  if (head.index() >= quants.size())
    throw std::out_of_range("order: unbound variable #" + std::to_string(head.index()));
  return quants[quants.size() - 1 - head.index()] == Quantifier::Forall ? Order::finite(1)
                                                                       : Order::infinite();
}

}  // namespace

Order order(const Term& type, const QContext& qctx, Fuel fuel) {
  Term nf = normalize(type, fuel);
  std::vector<Quantifier> quants;
  quants.reserve(qctx.size() + 8);
  for (const QDecl& d : qctx.decls) quants.push_back(d.quantifier);
  return order_of(nf, quants);
}

bool is_closed(const Term& t, const QContext& qctx) {
  std::vector<bool> closed(qctx.size(), false);
  for (std::size_t i = 0; i < qctx.size(); ++i) {
    if (qctx[i].quantifier != Quantifier::Forall) continue;
    bool ok = true;
    for (std::size_t idx : free_indices(qctx[i].type)) {
      if (idx >= i || !closed[i - 1 - idx]) {
        ok = false;
        break;
      }
    }
    closed[i] = ok;
  }
  for (std::size_t idx : free_indices(t)) {
    if (idx >= qctx.size() || !closed[qctx.position_of_index(idx)]) return false;
  }
  return true;
}

void Substitution::bind(std::size_t pos, Binding binding) {
  if (!bindings_.emplace(pos, std::move(binding)).second)
    throw std::invalid_argument("variable at position " + std::to_string(pos) +
                                " is already bound");
}

const Binding* Substitution::find(std::size_t pos) const {
  auto it = bindings_.find(pos);
  return it == bindings_.end() ? nullptr : &it->second;
}

Substitution Substitution::restrict_below(std::size_t n) const {
  Substitution out;
  for (const auto& [pos, b] : bindings_)
    if (pos < n) out.bind(pos, b);
  return out;
}

namespace {

// Where each source position lands in σ(prefix): its image lives in the
// target prefix of length `after[pos]`.
struct Layout {
  std::vector<std::size_t> after;
  std::vector<Term> image;
  std::size_t total = 0;
};

Layout layout_of(const Substitution& sigma, std::size_t prefix_len) {
  Layout l;
  l.after.reserve(prefix_len);
  l.image.reserve(prefix_len);
  std::size_t len = 0;
  for (std::size_t pos = 0; pos < prefix_len; ++pos) {
    if (const Binding* b = sigma.find(pos)) {
      len += b->local.size();
      l.image.push_back(b->replacement);
    } else {
      len += 1;
      l.image.push_back(Term::var(0));
    }
    l.after.push_back(len);
  }
  l.total = len;
  return l;
}

Term apply_layout(const Layout& l, const Term& t, std::size_t depth) {
  if (t.free_bound() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Sort:
      return t;
    case Term::Kind::Var: {
      std::size_t n = t.index();
      if (n < depth) return t;
      std::size_t outer = n - depth;
      if (outer >= l.after.size())
        throw std::out_of_range("apply_subst: index #" + std::to_string(n) +
                                " escapes the context");
      std::size_t pos = l.after.size() - 1 - outer;
      return shift(l.image[pos], static_cast<std::int64_t>(l.total - l.after[pos] + depth), 0);
    }
    case Term::Kind::App:
      return Term::app(apply_layout(l, t.fun(), depth), apply_layout(l, t.arg(), depth));
    case Term::Kind::Lam:
      return Term::lam(apply_layout(l, t.dom(), depth), apply_layout(l, t.body(), depth + 1),
                       t.hint());
    case Term::Kind::Pi:
      return Term::pi(apply_layout(l, t.dom(), depth), apply_layout(l, t.body(), depth + 1),
                      t.hint());
  }
  throw std::logic_error("unreachable term kind");
}

}  // namespace

Term apply_subst(const Substitution& sigma, const QContext& qctx, const Term& t,
                 std::optional<std::size_t> prefix_len) {
  std::size_t len = prefix_len.value_or(qctx.size());
  if (sigma.empty()) return t;
  return apply_layout(layout_of(sigma, len), t, 0);
}

QContext subst_well_typed(const Substitution& sigma, const QContext& qctx,
                          const CubeSpec& spec, Fuel fuel) {
  for (const auto& [pos, binding] : sigma.bindings()) {
    if (pos >= qctx.size())
      throw SubstitutionError(pos, SubstitutionError::Check::UnknownPosition,
                              "substitution binds unknown position " + std::to_string(pos));
  }
  std::vector<std::string> taken = qctx.names();
  QContext out;
  for (std::size_t i = 0; i < qctx.size(); ++i) {
    const QDecl& decl = qctx[i];
    const Binding* binding = sigma.find(i);
    Term inst = apply_subst(sigma, qctx, decl.type, i);
    auto where = [&](const std::string& what) {
      return "declaration " + std::to_string(i) + " (" + decl.name + "): " + what;
    };
    if (decl.quantifier == Quantifier::Forall && binding)
      throw SubstitutionError(i, SubstitutionError::Check::UniversalBound,
                              where("universal variables cannot be substituted"));
    if (!binding) {
      try {
        sort_of(out.plain(), inst, spec, fuel);
      } catch (const TypeError& e) {
        throw SubstitutionError(i, SubstitutionError::Check::Sort,
                                where(std::string("instantiated type is not sorted: ") + e.what()));
      }
      out.push(decl.quantifier, decl.name, inst);
      continue;
    }
    QContext extended = out;
    for (const QDecl& local : binding->local) {
      if (local.quantifier != Quantifier::Exists)
        throw SubstitutionError(i, SubstitutionError::Check::LocalNotExistential,
                                where("local context variable " + local.name +
                                      " must be existential"));
      try {
        sort_of(extended.plain(), local.type, spec, fuel);
      } catch (const TypeError& e) {
        throw SubstitutionError(i, SubstitutionError::Check::LocalContext,
                                where("local declaration " + local.name + " is ill formed: " +
                                      e.what()));
      }
      std::string name = fresh_name(local.name, taken);
      taken.push_back(name);
      extended.push(Quantifier::Exists, std::move(name), local.type);
    }
    Term expected = shift(inst, static_cast<std::int64_t>(binding->local.size()), 0);
    bool ok = false;
    std::string detail = "replacement does not have the instantiated type";
    try {
      ok = check_type(extended.plain(), binding->replacement, expected, spec, fuel);
    } catch (const TypeError& e) {
      detail = std::string("replacement is ill typed: ") + e.what();
    }
    if (!ok) throw SubstitutionError(i, SubstitutionError::Check::Replacement, where(detail));
    out = std::move(extended);
  }
  return out;
}

std::string_view to_string(ProblemKind k) {
  return k == ProblemKind::Matching ? "matching" : "unification";
}

Problem make_problem(QContext qctx, Term a, Term b, const CubeSpec& spec, Fuel fuel) {
  Context ctx = qctx.plain();
  wf_context(ctx, spec, fuel);
  auto side_type = [&](const Term& t, const char* side) {
    try {
      return infer_type(ctx, t, spec, fuel);
    } catch (const TypeError& e) {
      throw ProblemError(ProblemError::Code::IllTypedSide,
                         std::string(side) + " side is ill typed: " + e.what(), e.missing_pair());
    }
  };
  Term ta = side_type(a, "left");
  Term tb = side_type(b, "right");
  if (!(ta == tb))
    throw ProblemError(ProblemError::Code::TypeMismatch,
                       "sides have different types: " + debug_string(ta) + " and " +
                           debug_string(tb));
  std::optional<Order> max_order;
  for (std::size_t i = 0; i < qctx.size(); ++i) {
    if (qctx[i].quantifier != Quantifier::Exists) continue;
    Order o = order(qctx[i].type, qctx.prefix(i), fuel);
    max_order = max_order ? max(*max_order, o) : o;
  }
  ProblemKind kind = is_closed(b, qctx) ? ProblemKind::Matching : ProblemKind::Unification;
  return Problem{std::move(qctx), std::move(a), std::move(b), std::move(ta), kind, max_order};
}

bool is_solution(const Substitution& sigma, const Problem& p, const CubeSpec& spec, Fuel fuel) {
  try {
    subst_well_typed(sigma, p.qctx, spec, fuel);
  } catch (const SubstitutionError&) {
    return false;
  }
  Term a = apply_subst(sigma, p.qctx, p.lhs);
  Term b = apply_subst(sigma, p.qctx, p.rhs);
  return equivalent(a, b, fuel);
}

namespace {

// The base type `base` followed by 0..3 arrows over it, at context depth
// where `base` is the given index.
std::vector<Term> arrow_tower(const Term& base_at_depth_zero) {
  std::vector<Term> out{base_at_depth_zero};
  Term cur = base_at_depth_zero;
  for (int k = 0; k < 3; ++k) {
    cur = Term::arrow(base_at_depth_zero, cur);
    out.push_back(cur);
  }
  return out;
}

bool in_tower(const Term& type, const std::vector<Term>& tower) {
  return std::find(tower.begin(), tower.end(), type) != tower.end();
}

}  // namespace

bool is_term_elementary(const Problem& p) {
  const QContext& q = p.qctx;
  if (q.empty() || q[0].quantifier != Quantifier::Forall || !q[0].type.is_sort(Sort::Prop))
    return false;
  for (std::size_t i = 1; i < q.size(); ++i) {
    Term t = normalize(q[i].type);
    if (!in_tower(t, arrow_tower(Term::var(i - 1)))) return false;
  }
  return p.type == Term::var(q.size() - 1);
}

ElementaryCheck is_type_elementary(const Problem& p, const CubeSpec& spec) {
  if (!spec.has(kTypeType))
    return {false, "type-elementary problems are only available with type constructors " +
                       to_string(kTypeType) + ", which calculus " + spec.display_name() +
                       " lacks"};
  auto tower = arrow_tower(Term::prop());
  for (std::size_t i = 0; i < p.qctx.size(); ++i) {
    Term t = normalize(p.qctx[i].type);
    if (!in_tower(t, tower))
      return {false, "declaration " + p.qctx[i].name + " has a type outside Prop, ..., Prop -> Prop -> Prop -> Prop"};
  }
  if (!p.type.is_sort(Sort::Prop)) return {false, "the common type of the sides is not Prop"};
  return {true, {}};
}

}  // namespace lcube
