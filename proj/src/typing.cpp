#include "lcube/typing.hpp"

#include <map>

namespace lcube {

std::string to_string(SortPair p) {
  return "(" + std::string(sort_name(p.from)) + ", " + std::string(sort_name(p.to)) + ")";
}

std::string_view short_name(SortPair p) {
  if (p == kPropProp) return "PP";
  if (p == kPropType) return "PT";
  if (p == kTypeProp) return "TP";
  return "TT";
}

std::optional<SortPair> parse_sort_pair(std::string_view code) {
  for (SortPair p : kAllPairs)
    if (short_name(p) == code) return p;
  return std::nullopt;
}

CubeSpec CubeSpec::custom(const std::vector<SortPair>& pairs) {
  CubeSpec spec;
  spec.rules_.set(slot(kPropProp));
  for (SortPair p : pairs) spec.rules_.set(slot(p));
  return spec;
}

namespace {

const std::vector<std::pair<std::string, std::vector<SortPair>>>& preset_table() {
  static const std::vector<std::pair<std::string, std::vector<SortPair>>> table = {
      {"stlc", {}},
      {"lP", {kPropType}},
      {"l2", {kTypeProp}},
      {"lw-weak", {kTypeType}},
      {"lw", {kTypeProp, kTypeType}},
      {"lP2", {kPropType, kTypeProp}},
      {"lPw-weak", {kPropType, kTypeType}},
      {"coc", {kPropType, kTypeProp, kTypeType}},
  };
  return table;
}

}  // namespace

std::optional<CubeSpec> CubeSpec::preset(std::string_view name) {
  for (const auto& [n, pairs] : preset_table()) {
    if (n == name) {
      CubeSpec spec = custom(pairs);
      spec.name_ = n;
      return spec;
    }
  }
  return std::nullopt;
}

const std::vector<std::string>& CubeSpec::preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : preset_table()) out.push_back(entry.first);
    return out;
  }();
  return names;
}

std::vector<SortPair> CubeSpec::rules() const {
  std::vector<SortPair> out;
  for (SortPair p : kAllPairs)
    if (has(p)) out.push_back(p);
  return out;
}

std::vector<SortPair> CubeSpec::missing(const std::vector<SortPair>& required) const {
  std::vector<SortPair> out;
  for (SortPair p : required)
    if (!has(p)) out.push_back(p);
  return out;
}

std::string CubeSpec::display_name() const {
  if (!name_.empty()) return name_;
  std::string out = "custom (";
  bool first = true;
  for (SortPair p : rules()) {
    if (!first) out += ", ";
    out += short_name(p);
    first = false;
  }
  return out + ")";
}

TypeError TypeError::at_declaration(std::size_t index, const std::string& name) const {
  TypeError copy(code_, "declaration " + std::to_string(index) + " (" + name + "): " + what(),
                 subterm_, missing_);
  copy.declaration_ = index;
  return copy;
}

Term lookup_type(const Context& ctx, std::size_t index) {
  if (index >= ctx.size())
    throw TypeError(TypeError::Code::UnboundVariable,
                    "unbound variable #" + std::to_string(index), Term::var(index));
  return shift(ctx[ctx.size() - 1 - index].type, static_cast<std::int64_t>(index) + 1, 0);
}

namespace {

class Checker {
 public:
  Checker(const Context& ctx, const CubeSpec& spec, Fuel fuel)
      : outer_(ctx), spec_(spec), fuel_(fuel) {}

  Term infer(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Sort:
        if (t.is_sort(Sort::Prop)) return Term::type();
        throw TypeError(TypeError::Code::TypeHasNoType, "the sort Type has no type", t);
      case Term::Kind::Var:
        return normalize(var_type(t.index()), fuel_);
      case Term::Kind::Pi: {
        Sort dom_sort = sort(t.dom());
        push(t.dom());
        Sort cod_sort = sort(t.body());
        pop();
        SortPair needed{dom_sort, cod_sort};
        if (!spec_.has(needed))
          throw TypeError(TypeError::Code::SortPairNotInR,
                          "product requires sort pair " + to_string(needed) +
                              " which is not in calculus " + spec_.display_name(),
                          t, needed);
        return Term::sort(cod_sort);
      }
      case Term::Kind::Lam: {
        sort(t.dom());
        push(t.dom());
        Term body_type = infer(t.body());
        pop();
        Term product = Term::pi(normalize(t.dom(), fuel_), body_type, t.hint());
        if (body_type.is_sort(Sort::Type))
          throw TypeError(TypeError::Code::TypeHasNoType,
                          "abstraction body has type Type, whose product is not typable", t);
        sort(product);
        return product;
      }
      case Term::Kind::App: {
        Term fun_type = infer(t.fun());
        if (!fun_type.is_pi())
          throw TypeError(TypeError::Code::NotAFunction,
                          "applied term has non-product type " + debug_string(fun_type), t);
        Term arg_type = infer(t.arg());
        if (!(arg_type == fun_type.dom()))
          throw TypeError(TypeError::Code::ArgumentMismatch,
                          "argument has type " + debug_string(arg_type) + " but " +
                              debug_string(fun_type.dom()) + " was expected",
                          t);
        return normalize(subst(fun_type.body(), 0, t.arg()), fuel_);
      }
    }
    throw std::logic_error("unreachable term kind");
  }

  Sort sort(const Term& type) {
    Term s = infer(type);
    if (!s.is_sort())
      throw TypeError(TypeError::Code::NotAType,
                      "expected a type, found a term of type " + debug_string(s), type);
    return s.sort_tag();
  }

 private:
  Term var_type(std::size_t index) const {
    if (index < local_.size())
      return shift(local_[local_.size() - 1 - index], static_cast<std::int64_t>(index) + 1, 0);
    return shift(lookup_type(outer_, index - local_.size()),
                 static_cast<std::int64_t>(local_.size()), 0);
  }

  void push(const Term& type) { local_.push_back(type); }
  void pop() { local_.pop_back(); }

  const Context& outer_;
  const CubeSpec& spec_;
  Fuel fuel_;
  std::vector<Term> local_;
};

}  // namespace

void wf_context(const Context& ctx, const CubeSpec& spec, Fuel fuel) {
  Context prefix;
  prefix.reserve(ctx.size());
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    try {
      Checker(prefix, spec, fuel).sort(ctx[i].type);
    } catch (const TypeError& e) {
      throw e.at_declaration(i, ctx[i].name);
    }
    prefix.push_back(ctx[i]);
  }
}

Term infer_type(const Context& ctx, const Term& t, const CubeSpec& spec, Fuel fuel) {
  return Checker(ctx, spec, fuel).infer(t);
}

bool check_type(const Context& ctx, const Term& t, const Term& type, const CubeSpec& spec,
                Fuel fuel) {
  Term inferred = infer_type(ctx, t, spec, fuel);
  return equivalent(inferred, type, fuel);
}

Sort sort_of(const Context& ctx, const Term& type, const CubeSpec& spec, Fuel fuel) {
  return Checker(ctx, spec, fuel).sort(type);
}

}  // namespace lcube
