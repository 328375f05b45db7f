#include "lcube/reductions.hpp"

#include <functional>

namespace lcube {

std::string_view to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::Thm1:
      return "thm1";
    case ReductionKind::ErratumThm2:
      return "erratum";
    case ReductionKind::InvalidThm2:
      return "thm2-invalid";
  }
  return "?";
}

namespace {

// Appends declarations after the source context and hands out references
// valid at the current length.
class Extension {
 public:
  explicit Extension(const Problem& source)
      : qctx_(source.qctx), source_len_(source.qctx.size()), taken_(source.qctx.names()) {}

  std::size_t push(Quantifier q, const std::string& base, Term type, std::string& name_out) {
    name_out = fresh_name(base, taken_);
    taken_.push_back(name_out);
    qctx_.push(q, name_out, std::move(type));
    return qctx_.size() - 1;
  }

  Term ref(std::size_t pos, std::size_t depth = 0) const {
    return Term::var(qctx_.size() - 1 - pos + depth);
  }

  /// A term of the source context lifted to the current length plus `depth`.
  Term lift(const Term& source_term, std::size_t depth = 0) const {
    return shift(source_term, static_cast<std::int64_t>(qctx_.size() - source_len_ + depth), 0);
  }

  const QContext& qctx() const { return qctx_; }

 private:
  QContext qctx_;
  std::size_t source_len_;
  std::vector<std::string> taken_;
};

void require(const CubeSpec& spec, const std::vector<SortPair>& needed, std::string_view what) {
  auto missing = spec.missing(needed);
  if (missing.empty()) return;
  std::string list;
  for (SortPair p : missing) list += (list.empty() ? "" : ", ") + to_string(p);
  throw ReductionError(ReductionError::Code::CalculusLacksCapability,
                       "calculus " + spec.display_name() + " cannot host the " +
                           std::string(what) + " construction; missing " + list,
                       std::move(missing));
}

Problem validate_target(const QContext& qctx, const Term& t1, const Term& t2,
                        const CubeSpec& spec, Fuel fuel) {
  try {
    return make_problem(qctx, t1, t2, spec, fuel);
  } catch (const Error& e) {
    throw ReductionError(ReductionError::Code::ConstructionRejected,
                         std::string("kernel rejected the constructed problem: ") + e.what());
  }
}

// The common tail: c, d : base; G : base -> base -> base; f : f_type and the
// goal (G (f k c) (f k d)) = (G c d), where k is the constant function [x:_]z.
ReductionArtifact finish(ReductionKind kind, const Problem& source, const CubeSpec& spec,
                         Fuel fuel, Extension& ext, EncodingNames names, std::size_t z_pos,
                         const std::function<Term()>& k_dom, const std::function<Term()>& base,
                         const std::function<Term()>& f_type,
                         std::vector<SortPair> requirements) {
  std::size_t c = ext.push(Quantifier::Forall, "c", base(), names.c);
  std::size_t d = ext.push(Quantifier::Forall, "d", base(), names.d);
  Term b = base();
  ext.push(Quantifier::Forall, "G", Term::arrow(b, Term::arrow(b, b)), names.G);
  std::size_t G = ext.qctx().size() - 1;
  Term ftype = f_type();
  std::size_t f = ext.push(Quantifier::Exists, "f", ftype, names.f);

  Term k = Term::lam(k_dom(), ext.ref(z_pos, 1), kind == ReductionKind::Thm1 ? "x" : "X");
  Term t1 = Term::app(Term::app(ext.ref(G), fold_app(ext.ref(f), {k, ext.ref(c)})),
                      fold_app(ext.ref(f), {k, ext.ref(d)}));
  Term t2 = Term::app(Term::app(ext.ref(G), ext.ref(c)), ext.ref(d));

  ReductionArtifact art{kind, spec, source, validate_target(ext.qctx(), t1, t2, spec, fuel),
                        std::move(names), f, Order::infinite(), {}, false};
  art.f_order = order(art.target.qctx[f].type, art.target.qctx.prefix(f), fuel);
  art.requirements = std::move(requirements);
  art.invalid_per_erratum = kind == ReductionKind::InvalidThm2;
  return art;
}

}  // namespace

ReductionArtifact build_thm1(const Problem& source, const CubeSpec& spec, Fuel fuel) {
  require(spec, {kPropType}, "dependent-type");
  if (!is_term_elementary(source))
    throw ReductionError(ReductionError::Code::NotTermElementary,
                         "source problem is not term-elementary");
  Extension ext(source);
  EncodingNames names;
  const std::size_t U = 0;
  std::size_t z = ext.push(Quantifier::Forall, "z", ext.ref(U), names.z);
  std::size_t P = ext.push(Quantifier::Forall, "P", Term::arrow(ext.ref(U), Term::prop()), names.P);
  auto base = [&] { return Term::app(ext.ref(P), ext.ref(z)); };
  auto f_type = [&] {
    // (h:U→U)(P (h u1)) → (P (h u2)), built under the binder h.
    Term u1 = ext.lift(source.lhs, 1);
    Term u2 = ext.lift(source.rhs, 1);
    Term dom = Term::app(ext.ref(P, 1), Term::app(Term::var(0), u1));
    Term cod = Term::app(ext.ref(P, 1), Term::app(Term::var(0), u2));
    return Term::pi(Term::arrow(ext.ref(U), ext.ref(U)), Term::arrow(dom, cod), "h");
  };
  return finish(ReductionKind::Thm1, source, spec, fuel, ext, std::move(names), z,
                [&] { return ext.ref(U); }, base, f_type, {kPropType});
}

namespace {

void require_type_elementary(const Problem& source, const CubeSpec& spec) {
  if (auto check = is_type_elementary(source, spec); !check)
    throw ReductionError(ReductionError::Code::NotTypeElementary,
                         "source problem is not type-elementary: " + check.reason);
}

}  // namespace

ReductionArtifact build_erratum(const Problem& source, const CubeSpec& spec, Fuel fuel) {
  require(spec, {kTypeProp, kTypeType}, "fourth-order");
  require_type_elementary(source, spec);
  Extension ext(source);
  EncodingNames names;
  Term prop_to_prop = Term::arrow(Term::prop(), Term::prop());
  std::size_t P = ext.push(Quantifier::Forall, "P", prop_to_prop, names.P);
  std::size_t Z = ext.push(Quantifier::Forall, "Z", Term::prop(), names.z);
  auto base = [&] { return Term::app(ext.ref(P), ext.ref(Z)); };
  auto f_type = [&] {
    Term u1 = ext.lift(source.lhs, 1);
    Term u2 = ext.lift(source.rhs, 1);
    Term dom = Term::app(ext.ref(P, 1), Term::app(Term::var(0), u1));
    Term cod = Term::app(ext.ref(P, 1), Term::app(Term::var(0), u2));
    return Term::pi(prop_to_prop, Term::arrow(dom, cod), "h");
  };
  return finish(ReductionKind::ErratumThm2, source, spec, fuel, ext, std::move(names), Z,
                Term::prop, base, f_type, {kTypeProp, kTypeType});
}

ReductionArtifact build_thm2_invalid(const Problem& source, const CubeSpec& spec, Fuel fuel) {
  require(spec, {kTypeProp, kTypeType}, "type-constructor");
  require_type_elementary(source, spec);
  Extension ext(source);
  EncodingNames names;
  std::size_t Z = ext.push(Quantifier::Forall, "Z", Term::prop(), names.z);
  auto base = [&] { return ext.ref(Z); };
  auto f_type = [&] {
    Term u1 = ext.lift(source.lhs, 1);
    Term u2 = ext.lift(source.rhs, 1);
    Term dom = Term::app(Term::var(0), u1);
    Term cod = Term::app(Term::var(0), u2);
    return Term::pi(Term::arrow(Term::prop(), Term::prop()), Term::arrow(dom, cod), "h");
  };
  return finish(ReductionKind::InvalidThm2, source, spec, fuel, ext, std::move(names), Z,
                Term::prop, base, f_type, {kTypeProp, kTypeType});
}

namespace {

Substitution witness(const Substitution& tau, const ReductionArtifact& art, ReductionKind kind,
                     Fuel fuel) {
  if (art.kind != kind)
    throw ReductionError(ReductionError::Code::WrongKind,
                         "artifact is of kind " + std::string(to_string(art.kind)) + ", expected " +
                             std::string(to_string(kind)));
  if (!is_solution(tau, art.source, art.spec, fuel))
    throw ReductionError(ReductionError::Code::TauNotASolution,
                         "the given substitution does not solve the source problem");

  const QContext& q = art.target.qctx;
  const std::size_t len = art.f_position;  // f's replacement lives before f
  const std::size_t src = art.source.qctx.size();
  auto ref = [&](std::size_t pos, std::size_t depth) {
    return Term::var(len - 1 - pos + depth);
  };
  std::size_t P = *art.target.qctx.find(art.names.P);
  Term x1_dom = kind == ReductionKind::Thm1 ? Term::arrow(ref(0, 0), ref(0, 0))
                                            : Term::arrow(Term::prop(), Term::prop());
  Term u1 = shift(art.source.lhs, static_cast<std::int64_t>(len - src + 1), 0);
  Term x2_dom = Term::app(ref(P, 1), Term::app(Term::var(0), u1));
  Term raw = Term::lam(x1_dom, Term::lam(x2_dom, Term::var(0), "x2"), "x1");

  Substitution sigma = tau;
  sigma.bind(art.f_position, Binding{{}, apply_subst(tau, q, raw, len)});
  if (!is_solution(sigma, art.target, art.spec, fuel))
    throw ReductionError(ReductionError::Code::ConstructionRejected,
                         "witness substitution failed verification against the target");
  return sigma;
}

Substitution extract(const Substitution& sigma, const ReductionArtifact& art, ReductionKind kind,
                     Fuel fuel) {
  if (art.kind != kind)
    throw ReductionError(ReductionError::Code::WrongKind,
                         "artifact is of kind " + std::string(to_string(art.kind)) + ", expected " +
                             std::string(to_string(kind)));
  if (!is_solution(sigma, art.target, art.spec, fuel))
    throw ReductionError(ReductionError::Code::SigmaNotASolution,
                         "the given substitution does not solve the target problem");
  Substitution restricted = sigma.restrict_below(art.source.qctx.size());
  if (!is_solution(restricted, art.source, art.spec, fuel))
    throw ReductionError(ReductionError::Code::ConstructionRejected,
                         "restriction of a target solution does not solve the source");
  return restricted;
}

}  // namespace

Substitution thm1_witness(const Substitution& tau, const ReductionArtifact& art, Fuel fuel) {
  return witness(tau, art, ReductionKind::Thm1, fuel);
}

Substitution erratum_witness(const Substitution& tau, const ReductionArtifact& art, Fuel fuel) {
  return witness(tau, art, ReductionKind::ErratumThm2, fuel);
}

Substitution thm1_extract(const Substitution& sigma, const ReductionArtifact& art, Fuel fuel) {
  return extract(sigma, art, ReductionKind::Thm1, fuel);
}

Substitution erratum_extract(const Substitution& sigma, const ReductionArtifact& art, Fuel fuel) {
  return extract(sigma, art, ReductionKind::ErratumThm2, fuel);
}

GoldfarbShapes GoldfarbShapes::standard() {
  GoldfarbShapes s;
  s.qctx.push(Quantifier::Forall, "U", Term::prop());
  s.qctx.push(Quantifier::Forall, "a", Term::var(0));
  s.qctx.push(Quantifier::Forall, "g", Term::arrow(Term::var(1), Term::arrow(Term::var(1), Term::var(1))));
  s.base = 0;
  s.constant = 1;
  s.binary = 2;
  return s;
}

Term goldfarb_numeral(std::size_t n, const GoldfarbShapes& shapes) {
  Term body = Term::var(0);
  for (std::size_t k = 0; k < n; ++k)
    body = fold_app(shapes.ref(shapes.binary, 1), {shapes.ref(shapes.constant, 1), body});
  return Term::lam(shapes.ref(shapes.base, 0), body, "w1");
}

Term goldfarb_tpl(std::size_t n_i, std::size_t p, const GoldfarbShapes& shapes) {
  Term left = Term::app(shift(goldfarb_numeral(n_i * p, shapes), 2, 0), Term::var(1));
  Term right = Term::app(shift(goldfarb_numeral(p, shapes), 2, 0), Term::var(0));
  Term body = fold_app(shapes.ref(shapes.binary, 2), {left, right});
  return Term::lam(shapes.ref(shapes.base, 0), Term::lam(shapes.ref(shapes.base, 1), body, "w2"),
                   "w1");
}

std::pair<Term, Term> goldfarb_solution_shapes(std::size_t n_i, std::size_t n_j,
                                               const GoldfarbShapes& shapes) {
  Term f_shape = Term::lam(shapes.ref(shapes.base, 0),
                           Term::app(shift(goldfarb_numeral(n_i, shapes), 1, 0), Term::var(0)),
                           "w1");
  Term acc = Term::var(0);
  for (std::size_t p = n_j; p-- > 0;) {
    Term tp = fold_app(shift(goldfarb_tpl(n_i, p, shapes), 3, 0), {Term::var(2), Term::var(1)});
    acc = fold_app(shapes.ref(shapes.binary, 3), {tp, acc});
  }
  Term g_shape = Term::lam(
      shapes.ref(shapes.base, 0),
      Term::lam(shapes.ref(shapes.base, 1), Term::lam(shapes.ref(shapes.base, 2), acc, "w3"), "w2"),
      "w1");
  return {f_shape, g_shape};
}

}  // namespace lcube
