#include "lcube/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace lcube {

std::string_view sort_name(Sort s) { return s == Sort::Prop ? "Prop" : "Type"; }

Term Term::sort(Sort s) {
  auto make_sort = [](Sort tag) {
    Node n;
    n.sort = tag;
    return std::make_shared<const Node>(std::move(n));
  };
  static const Term prop{make_sort(Sort::Prop)};
  static const Term type{make_sort(Sort::Type)};
  return s == Sort::Prop ? prop : type;
}

Term Term::var(std::size_t index) {
  Node n;
  n.kind = Kind::Var;
  n.index = index;
  n.free_bound = index + 1;
  return Term{std::make_shared<const Node>(std::move(n))};
}

Term Term::app(Term fun, Term arg) {
  Node n;
  n.kind = Kind::App;
  n.free_bound = std::max(fun.free_bound(), arg.free_bound());
  n.nodes = 1 + fun.node_count() + arg.node_count();
  n.left = std::move(fun);
  n.right = std::move(arg);
  return Term{std::make_shared<const Node>(std::move(n))};
}

namespace {

std::size_t binder_free_bound(const Term& dom, const Term& body) {
  std::size_t inner = body.free_bound();
  return std::max(dom.free_bound(), inner == 0 ? 0 : inner - 1);
}

}  // namespace

Term Term::lam(Term dom, Term body, std::string hint) {
  Node n;
  n.kind = Kind::Lam;
  n.free_bound = binder_free_bound(dom, body);
  n.nodes = 1 + dom.node_count() + body.node_count();
  n.left = std::move(dom);
  n.right = std::move(body);
  n.hint = std::move(hint);
  return Term{std::make_shared<const Node>(std::move(n))};
}

Term Term::pi(Term dom, Term cod, std::string hint) {
  Node n;
  n.kind = Kind::Pi;
  n.free_bound = binder_free_bound(dom, cod);
  n.nodes = 1 + dom.node_count() + cod.node_count();
  n.left = std::move(dom);
  n.right = std::move(cod);
  n.hint = std::move(hint);
  return Term{std::make_shared<const Node>(std::move(n))};
}

Term Term::arrow(Term dom, Term cod) { return pi(std::move(dom), shift(cod, 1, 0)); }

Sort Term::sort_tag() const {
  if (!is_sort()) throw std::logic_error("sort_tag on a non-sort term");
  return node_->sort;
}

std::size_t Term::index() const {
  if (!is_var()) throw std::logic_error("index on a non-variable term");
  return node_->index;
}

const Term& Term::fun() const {
  if (!is_app()) throw std::logic_error("fun on a non-application term");
  return *node_->left;
}

const Term& Term::arg() const {
  if (!is_app()) throw std::logic_error("arg on a non-application term");
  return *node_->right;
}

const Term& Term::dom() const {
  if (!is_lam() && !is_pi()) throw std::logic_error("dom on a non-binder term");
  return *node_->left;
}

const Term& Term::body() const {
  if (!is_lam() && !is_pi()) throw std::logic_error("body on a non-binder term");
  return *node_->right;
}

const std::string& Term::hint() const { return node_->hint; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.free_bound() != b.free_bound() ||
      a.node_count() != b.node_count())
    return false;
  switch (a.kind()) {
    case Term::Kind::Sort:
      return a.node_->sort == b.node_->sort;
    case Term::Kind::Var:
      return a.node_->index == b.node_->index;
    default:
      return *a.node_->left == *b.node_->left && *a.node_->right == *b.node_->right;
  }
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Term::Kind::Sort:
      return a.node_->sort <=> b.node_->sort;
    case Term::Kind::Var:
      return a.node_->index <=> b.node_->index;
    default:
      if (auto c = *a.node_->left <=> *b.node_->left; c != 0) return c;
      return *a.node_->right <=> *b.node_->right;
  }
}

namespace {

Term shift_at(const Term& t, std::int64_t delta, std::size_t cutoff) {
  if (t.free_bound() <= cutoff) return t;
  switch (t.kind()) {
    case Term::Kind::Sort:
      return t;
    case Term::Kind::Var: {
      auto moved = static_cast<std::int64_t>(t.index()) + delta;
      if (moved < 0) throw std::logic_error("shift produced a negative de Bruijn index");
      return Term::var(static_cast<std::size_t>(moved));
    }
    case Term::Kind::App:
      return Term::app(shift_at(t.fun(), delta, cutoff), shift_at(t.arg(), delta, cutoff));
    case Term::Kind::Lam:
      return Term::lam(shift_at(t.dom(), delta, cutoff),
                       shift_at(t.body(), delta, cutoff + 1), t.hint());
    case Term::Kind::Pi:
      return Term::pi(shift_at(t.dom(), delta, cutoff),
                      shift_at(t.body(), delta, cutoff + 1), t.hint());
  }
  throw std::logic_error("unreachable term kind");
}

Term subst_at(const Term& t, std::size_t j, const Term& s, std::size_t depth) {
  if (t.free_bound() <= depth + j) return t;
  switch (t.kind()) {
    case Term::Kind::Sort:
      return t;
    case Term::Kind::Var: {
      std::size_t n = t.index();
      if (n < depth + j) return t;
      if (n == depth + j) return shift_at(s, static_cast<std::int64_t>(depth), 0);
      return Term::var(n - 1);
    }
    case Term::Kind::App:
      return Term::app(subst_at(t.fun(), j, s, depth), subst_at(t.arg(), j, s, depth));
    case Term::Kind::Lam:
      return Term::lam(subst_at(t.dom(), j, s, depth), subst_at(t.body(), j, s, depth + 1),
                       t.hint());
    case Term::Kind::Pi:
      return Term::pi(subst_at(t.dom(), j, s, depth), subst_at(t.body(), j, s, depth + 1),
                      t.hint());
  }
  throw std::logic_error("unreachable term kind");
}

void collect_free(const Term& t, std::size_t depth, std::set<std::size_t>& out) {
  if (t.free_bound() <= depth) return;
  switch (t.kind()) {
    case Term::Kind::Sort:
      return;
    case Term::Kind::Var:
      out.insert(t.index() - depth);
      return;
    case Term::Kind::App:
      collect_free(t.fun(), depth, out);
      collect_free(t.arg(), depth, out);
      return;
    case Term::Kind::Lam:
    case Term::Kind::Pi:
      collect_free(t.dom(), depth, out);
      collect_free(t.body(), depth + 1, out);
      return;
  }
}

bool occurs_at(const Term& t, std::size_t index) {
  if (t.free_bound() <= index) return false;
  switch (t.kind()) {
    case Term::Kind::Sort:
      return false;
    case Term::Kind::Var:
      return t.index() == index;
    case Term::Kind::App:
      return occurs_at(t.fun(), index) || occurs_at(t.arg(), index);
    case Term::Kind::Lam:
    case Term::Kind::Pi:
      return occurs_at(t.dom(), index) || occurs_at(t.body(), index + 1);
  }
  return false;
}

}  // namespace

Term shift(const Term& t, std::int64_t delta, std::size_t cutoff) {
  if (delta == 0) return t;
  return shift_at(t, delta, cutoff);
}

Term subst(const Term& t, std::size_t j, const Term& s) { return subst_at(t, j, s, 0); }

std::set<std::size_t> free_indices(const Term& t) {
  std::set<std::size_t> out;
  collect_free(t, 0, out);
  return out;
}

bool occurs_free(const Term& t, std::size_t index) { return occurs_at(t, index); }

bool is_arrow(const Term& t) { return t.is_pi() && !occurs_at(t.body(), 0); }

std::string debug_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Sort:
      return std::string(sort_name(t.sort_tag()));
    case Term::Kind::Var:
      return "#" + std::to_string(t.index());
    case Term::Kind::App:
      return "(" + debug_string(t.fun()) + " " + debug_string(t.arg()) + ")";
    case Term::Kind::Lam:
      return "[" + debug_string(t.dom()) + "]" + debug_string(t.body());
    case Term::Kind::Pi:
      return "{" + debug_string(t.dom()) + "}" + debug_string(t.body());
  }
  return "?";
}

}  // namespace lcube
