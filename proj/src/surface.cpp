#include "lcube/surface.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>

namespace lcube {

namespace {

enum class Tok {
  Ident,
  KwProp,
  KwType,
  KwForall,
  KwExists,
  KwMatch,
  KwUnify,
  KwCalculus,
  KwCustom,
  KwWhere,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Colon,
  Arrow,
  Equals,
  Assign,
  Comma,
  Newline,
  End,
};

constexpr std::array<std::pair<std::string_view, Tok>, 9> kKeywords{{
    {"Prop", Tok::KwProp},
    {"Type", Tok::KwType},
    {"forall", Tok::KwForall},
    {"exists", Tok::KwExists},
    {"match", Tok::KwMatch},
    {"unify", Tok::KwUnify},
    {"calculus", Tok::KwCalculus},
    {"custom", Tok::KwCustom},
    {"where", Tok::KwWhere},
}};

bool is_keyword(std::string_view s) {
  return std::any_of(kKeywords.begin(), kKeywords.end(),
                     [&](const auto& kw) { return kw.first == s; });
}

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Newline:
      return "end of line";
    default:
      return "'" + t.text + "'";
  }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src, bool keep_newlines) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto span_at = [&](std::size_t begin, std::size_t len) {
    return SourceSpan{begin, begin + len, line, col};
  };
  auto emit = [&](Tok kind, std::size_t len) {
    out.push_back({kind, std::string(src.substr(i, len)), span_at(i, len)});
    i += len;
    col += len;
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      if (keep_newlines) out.push_back({Tok::Newline, "\\n", span_at(i, 1)});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') {
        ++i;
        ++col;
      }
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size()) {
        if (ident_char(src[j])) {
          ++j;
        } else if (src[j] == '-' && j + 1 < src.size() && ident_char(src[j + 1])) {
          j += 2;  // calculus names such as lw-weak
        } else {
          break;
        }
      }
      std::string_view word = src.substr(i, j - i);
      Tok kind = Tok::Ident;
      for (const auto& [kw, tok] : kKeywords)
        if (kw == word) kind = tok;
      emit(kind, j - i);
      continue;
    }
    if (src.substr(i, 2) == "->") {
      emit(Tok::Arrow, 2);
      continue;
    }
    if (src.substr(i, 2) == ":=") {
      emit(Tok::Assign, 2);
      continue;
    }
    switch (c) {
      case '[': emit(Tok::LBracket, 1); continue;
      case ']': emit(Tok::RBracket, 1); continue;
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case ':': emit(Tok::Colon, 1); continue;
      case '=': emit(Tok::Equals, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      default:
        throw ParseError(ParseError::Code::Syntax, span_at(i, 1),
                         std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", span_at(i, 0)});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  Token expect(Tok k, std::string_view what) {
    if (!at(k))
      throw ParseError(ParseError::Code::Syntax, peek().span,
                       "expected " + std::string(what) + ", found " + describe(peek()));
    return take();
  }
  SourceSpan span_from(const SourceSpan& start) const {
    const SourceSpan& last = toks_[pos_ == 0 ? 0 : pos_ - 1].span;
    SourceSpan s = start;
    s.end = std::max(start.end, last.end);
    return s;
  }

  Term term(std::vector<std::string>& scope) {
    Term lhs = app(scope);
    if (!at(Tok::Arrow)) return lhs;
    take();
    Term rhs = term(scope);
    return Term::arrow(std::move(lhs), std::move(rhs));
  }

 private:
  static bool starts_primary(Tok k) {
    return k == Tok::KwProp || k == Tok::KwType || k == Tok::Ident || k == Tok::LParen ||
           k == Tok::LBracket;
  }

  Term app(std::vector<std::string>& scope) {
    Term head = primary(scope);
    while (starts_primary(peek().kind)) head = Term::app(std::move(head), primary(scope));
    return head;
  }

  Term binder_body(std::vector<std::string>& scope) {
    Term p = primary(scope);
    if (!at(Tok::Arrow)) return p;
    take();
    Term rhs = term(scope);
    return Term::arrow(std::move(p), std::move(rhs));
  }

  Term binder(std::vector<std::string>& scope, bool is_lam) {
    take();  // [ or (
    Token name = expect(Tok::Ident, "a binder name");
    expect(Tok::Colon, "':'");
    Term dom = term(scope);
    expect(is_lam ? Tok::RBracket : Tok::RParen, is_lam ? "']'" : "')'");
    scope.push_back(name.text);
    Term body = binder_body(scope);
    scope.pop_back();
    return is_lam ? Term::lam(std::move(dom), std::move(body), name.text)
                  : Term::pi(std::move(dom), std::move(body), name.text);
  }

  Term primary(std::vector<std::string>& scope) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwProp:
        take();
        return Term::prop();
      case Tok::KwType:
        take();
        return Term::type();
      case Tok::Ident: {
        Token id = take();
        for (std::size_t k = scope.size(); k-- > 0;)
          if (scope[k] == id.text) return Term::var(scope.size() - 1 - k);
        throw ParseError(ParseError::Code::UnboundName, id.span, "unbound name '" + id.text + "'");
      }
      case Tok::LBracket:
        return binder(scope, true);
      case Tok::LParen: {
        if (peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) return binder(scope, false);
        take();
        Term inner = term(scope);
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(ParseError::Code::Syntax, t.span, "expected a term, found " + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool arrow_tailed(const Term& t) {
  if (is_arrow(t)) return true;
  if (t.is_lam() || t.is_pi()) return arrow_tailed(t.body());
  return false;
}

class Printer {
 public:
  explicit Printer(std::vector<std::string> names) : names_(std::move(names)) {}

  enum class Pos { Top, Arg, Domain };

  std::string print(const Term& t, Pos pos) {
    switch (t.kind()) {
      case Term::Kind::Sort:
        return std::string(sort_name(t.sort_tag()));
      case Term::Kind::Var:
        if (t.index() < names_.size()) return names_[names_.size() - 1 - t.index()];
        return "?" + std::to_string(t.index() - names_.size());
      case Term::Kind::App: {
        auto [head, args] = unfold_app(t);
        std::string out = "(" + print(head, Pos::Arg);
        for (const Term& a : args) out += " " + print(a, Pos::Arg);
        return out + ")";
      }
      case Term::Kind::Lam:
      case Term::Kind::Pi: {
        std::string out;
        if (is_arrow(t)) {
          out = print(t.dom(), Pos::Domain) + " -> ";
          names_.push_back("");
          out += print(t.body(), Pos::Top);
          names_.pop_back();
          return pos == Pos::Top ? out : "(" + out + ")";
        }
        std::string name = binder_name(t);
        std::string dom = print(t.dom(), Pos::Top);
        names_.push_back(name);
        std::string body = print(t.body(), Pos::Top);
        names_.pop_back();
        out = t.is_lam() ? "[" + name + ":" + dom + "]" + body
                         : "(" + name + ":" + dom + ")" + body;
        bool wrap = pos == Pos::Domain || (pos == Pos::Arg && arrow_tailed(t));
        return wrap ? "(" + out + ")" : out;
      }
    }
    return "?";
  }

 private:
  // The binder keeps its hint unless the body refers to an outer variable
  // displayed under the same name.
  std::string binder_name(const Term& t) {
    std::vector<std::string> referenced;
    for (std::size_t idx : free_indices(t.body())) {
      if (idx == 0) continue;
      std::size_t outer = idx - 1;
      if (outer < names_.size()) referenced.push_back(names_[names_.size() - 1 - outer]);
    }
    if (t.hint().empty()) {
      std::vector<std::string> taken = names_;
      return fresh_name("x", taken, true);
    }
    bool clash = is_keyword(t.hint()) ||
                 std::find(referenced.begin(), referenced.end(), t.hint()) != referenced.end();
    if (!clash) return t.hint();
    std::vector<std::string> taken = names_;
    for (const auto& kw : kKeywords) taken.emplace_back(kw.first);
    return fresh_name(t.hint(), taken, false);
  }

  std::vector<std::string> names_;
};

Parser parser_for(std::string_view input, bool keep_newlines = false) {
  return Parser(lex(input, keep_newlines));
}

}  // namespace

Term parse_term(std::string_view input, const std::vector<std::string>& scope) {
  Parser p = parser_for(input);
  std::vector<std::string> names = scope;
  Term t = p.term(names);
  if (!p.at(Tok::End))
    throw ParseError(ParseError::Code::Syntax, p.peek().span,
                     "unexpected " + describe(p.peek()) + " after term");
  return t;
}

std::string print_term(const Term& t, const std::vector<std::string>& scope) {
  return Printer(scope).print(t, Printer::Pos::Top);
}

ProblemFile parse_problem(std::string_view input, Fuel fuel,
                          const std::optional<CubeSpec>& calculus_override) {
  Parser p = parser_for(input);
  p.expect(Tok::KwCalculus, "'calculus' header");
  std::optional<CubeSpec> spec;
  if (p.at(Tok::KwCustom)) {
    p.take();
    p.expect(Tok::LParen, "'('");
    std::vector<SortPair> pairs;
    bool has_pp = false;
    SourceSpan open = p.peek().span;
    do {
      if (!pairs.empty() || has_pp) p.expect(Tok::Comma, "','");
      Token code = p.expect(Tok::Ident, "a sort pair (PP, PT, TP or TT)");
      auto pair = parse_sort_pair(code.text);
      if (!pair)
        throw ParseError(ParseError::Code::UnknownCalculus, code.span,
                         "unknown sort pair '" + code.text + "'");
      if (*pair == kPropProp) has_pp = true;
      pairs.push_back(*pair);
    } while (p.at(Tok::Comma));
    p.expect(Tok::RParen, "')'");
    if (!has_pp)
      throw ParseError(ParseError::Code::UnknownCalculus, p.span_from(open),
                       "custom calculus must contain PP");
    spec = CubeSpec::custom(pairs);
  } else {
    Token name = p.expect(Tok::Ident, "a calculus name");
    spec = CubeSpec::preset(name.text);
    if (!spec)
      throw ParseError(ParseError::Code::UnknownCalculus, name.span,
                       "unknown calculus '" + name.text + "'");
  }
  if (calculus_override) spec = calculus_override;

  QContext qctx;
  std::vector<std::string> scope;
  std::vector<SourceSpan> decl_spans;
  while (p.at(Tok::KwForall) || p.at(Tok::KwExists)) {
    Token q = p.take();
    Token name = p.expect(Tok::Ident, "a variable name");
    p.expect(Tok::Colon, "':'");
    Term type = p.term(scope);
    decl_spans.push_back(p.span_from(q.span));
    qctx.push(q.kind == Tok::KwForall ? Quantifier::Forall : Quantifier::Exists, name.text,
              std::move(type));
    scope.push_back(name.text);
  }
  if (!p.at(Tok::KwMatch) && !p.at(Tok::KwUnify))
    throw ParseError(ParseError::Code::Syntax, p.peek().span,
                     "expected a declaration or a 'match'/'unify' goal, found " + describe(p.peek()));
  Token goal = p.take();
  SourceSpan lhs_start = p.peek().span;
  Term lhs = p.term(scope);
  SourceSpan lhs_span = p.span_from(lhs_start);
  Token eq = p.expect(Tok::Equals, "'='");
  SourceSpan rhs_start = p.peek().span;
  Term rhs = p.term(scope);
  SourceSpan rhs_span = p.span_from(rhs_start);
  if (!p.at(Tok::End))
    throw ParseError(ParseError::Code::Syntax, p.peek().span,
                     "unexpected " + describe(p.peek()) + " after the goal");

  ProblemFile file{*spec, Problem{QContext{}, lhs, rhs, Term::prop(), ProblemKind::Unification, {}},
                   goal.kind == Tok::KwMatch ? GoalKeyword::Match : GoalKeyword::Unify};
  try {
    file.problem = make_problem(std::move(qctx), std::move(lhs), std::move(rhs), *spec, fuel);
  } catch (const TypeError& e) {
    SourceSpan where = e.declaration() ? decl_spans[*e.declaration()] : lhs_span;
    throw ParseError(ParseError::Code::Type, where, e.what(), e.missing_pair());
  } catch (const ProblemError& e) {
    SourceSpan where = eq.span;
    if (e.code() == ProblemError::Code::IllTypedSide)
      where = std::string_view(e.what()).starts_with("left") ? lhs_span : rhs_span;
    throw ParseError(ParseError::Code::Type, where, e.what(), e.missing_pair());
  } catch (const OrderError& e) {
    throw ParseError(ParseError::Code::Type, lhs_span, e.what());
  }
  if (file.goal == GoalKeyword::Match && file.problem.kind != ProblemKind::Matching)
    throw ParseError(ParseError::Code::Type, rhs_span,
                     "right side of a 'match' goal must be closed; use 'unify'");
  return file;
}

std::vector<std::string> display_names(const QContext& qctx) {
  std::vector<std::string> out;
  for (const QDecl& d : qctx.decls) {
    std::string base = d.name.empty() ? "v" : d.name;
    bool clash = is_keyword(base) || std::find(out.begin(), out.end(), base) != out.end();
    out.push_back(clash || d.name.empty() ? fresh_name(base, out, d.name.empty()) : base);
  }
  return out;
}

std::string print_problem(const Problem& p, const CubeSpec& spec) {
  std::ostringstream os;
  os << "calculus " << spec.display_name() << "\n";
  std::vector<std::string> names = display_names(p.qctx);
  for (std::size_t i = 0; i < p.qctx.size(); ++i) {
    std::vector<std::string> prefix(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i));
    os << (p.qctx[i].quantifier == Quantifier::Forall ? "forall " : "exists ") << names[i]
       << " : " << print_term(p.qctx[i].type, prefix) << "\n";
  }
  os << (p.kind == ProblemKind::Matching ? "match " : "unify ") << print_term(p.lhs, names)
     << " = " << print_term(p.rhs, names) << "\n";
  return os.str();
}

namespace {

struct RawBinding {
  Token name;
  std::vector<Token> replacement;
  std::vector<std::pair<Token, std::vector<Token>>> locals;
};

std::vector<Token> with_end(std::vector<Token> toks, const SourceSpan& end_span) {
  toks.push_back({Tok::End, "", end_span});
  return toks;
}

Term parse_tokens(std::vector<Token> toks, std::vector<std::string>& scope) {
  Parser p(std::move(toks));
  Term t = p.term(scope);
  if (!p.at(Tok::End))
    throw ParseError(ParseError::Code::Syntax, p.peek().span,
                     "unexpected " + describe(p.peek()) + " after term");
  return t;
}

}  // namespace

Substitution parse_substitution(std::string_view input, const QContext& qctx) {
  std::vector<Token> toks = lex(input, true);
  std::map<std::size_t, RawBinding> raw;
  std::size_t i = 0;
  auto at = [&](Tok k) { return toks[i].kind == k; };
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(ParseError::Code::Syntax, toks[i].span, msg + ", found " + describe(toks[i]));
  };
  while (!at(Tok::End)) {
    if (at(Tok::Newline)) {
      ++i;
      continue;
    }
    if (!at(Tok::Ident)) throw fail("expected a variable name");
    RawBinding b{toks[i++], {}, {}};
    if (!at(Tok::Assign)) throw fail("expected ':='");
    ++i;
    auto grab = [&] {
      std::vector<Token> out;
      while (!at(Tok::End) && !at(Tok::Newline) && !at(Tok::KwWhere)) out.push_back(toks[i++]);
      if (out.empty()) throw fail("expected a term");
      return with_end(std::move(out), toks[i].span);
    };
    b.replacement = grab();
    while (at(Tok::KwWhere)) {
      ++i;
      if (!at(Tok::KwExists)) throw fail("expected 'exists'");
      ++i;
      if (!at(Tok::Ident)) throw fail("expected a local variable name");
      Token local = toks[i++];
      if (!at(Tok::Colon)) throw fail("expected ':'");
      ++i;
      b.locals.emplace_back(local, grab());
    }
    auto pos = qctx.find(b.name.text);
    if (!pos)
      throw ParseError(ParseError::Code::Substitution, b.name.span,
                       "'" + b.name.text + "' is not declared in the problem");
    if (qctx[*pos].quantifier != Quantifier::Exists)
      throw ParseError(ParseError::Code::Substitution, b.name.span,
                       "'" + b.name.text + "' is universal and cannot be substituted");
    if (raw.count(*pos))
      throw ParseError(ParseError::Code::Substitution, b.name.span,
                       "'" + b.name.text + "' is bound twice");
    raw.emplace(*pos, std::move(b));
  }

  Substitution sigma;
  std::vector<std::string> scope;
  for (std::size_t pos = 0; pos < qctx.size(); ++pos) {
    auto it = raw.find(pos);
    if (it == raw.end()) {
      scope.push_back(qctx[pos].name);
      continue;
    }
    Binding binding{{}, Term::prop()};
    std::vector<std::string> inner = scope;
    for (auto& [name, type_toks] : it->second.locals) {
      Term type = parse_tokens(type_toks, inner);
      binding.local.push_back({Quantifier::Exists, name.text, std::move(type)});
      inner.push_back(name.text);
    }
    binding.replacement = parse_tokens(it->second.replacement, inner);
    for (const QDecl& d : binding.local) scope.push_back(d.name);
    sigma.bind(pos, std::move(binding));
  }
  return sigma;
}

std::string print_substitution(const Substitution& sigma, const QContext& qctx) {
  std::ostringstream os;
  std::vector<std::string> scope;
  for (std::size_t pos = 0; pos < qctx.size(); ++pos) {
    const Binding* b = sigma.find(pos);
    if (!b) {
      scope.push_back(qctx[pos].name);
      continue;
    }
    std::vector<std::string> inner = scope;
    std::vector<std::string> local_names;
    std::vector<std::string> local_types;
    for (const QDecl& d : b->local) {
      std::vector<std::string> taken = inner;
      for (const QDecl& other : qctx.decls) taken.push_back(other.name);
      std::string name = fresh_name(d.name.empty() ? "y" : d.name, taken);
      local_types.push_back(print_term(d.type, inner));
      local_names.push_back(name);
      inner.push_back(name);
    }
    os << qctx[pos].name << " := " << print_term(b->replacement, inner);
    for (std::size_t k = 0; k < local_names.size(); ++k)
      os << " where exists " << local_names[k] << " : " << local_types[k];
    os << "\n";
    for (const std::string& n : local_names) scope.push_back(n);
  }
  return os.str();
}

std::string print_artifact(const ReductionArtifact& art) {
  std::ostringstream os;
  os << "# kind: " << to_string(art.kind) << "\n";
  os << "# f-variable: " << display_names(art.target.qctx)[art.f_position] << "\n";
  os << "# f-order: " << art.f_order.to_string() << "\n";
  os << "# requires:";
  for (SortPair p : art.requirements) os << " " << short_name(p);
  os << "\n";
  os << "# invalid-per-erratum: " << (art.invalid_per_erratum ? "true" : "false") << "\n";
  os << print_problem(art.target, art.spec);
  return os.str();
}

}  // namespace lcube
