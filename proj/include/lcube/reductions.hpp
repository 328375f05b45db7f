#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcube/error.hpp"
#include "lcube/problem.hpp"

namespace lcube {

enum class ReductionKind {
  /// Third-order matching with dependent types, from a term-elementary source.
  Thm1,
  /// Fourth-order corrected construction for polymorphism + type constructors.
  ErratumThm2,
  /// The original type-constructor construction, whose existential has order
  /// ∞ and which needs polymorphism as well. Kept as a negative regression.
  InvalidThm2,
};

std::string_view to_string(ReductionKind k);  // thm1 | erratum | thm2-invalid

/// Names and positions of the declarations appended after the source context.
struct EncodingNames {
  std::string z;  // base point; named Z in the type-constructor encodings
  std::string P;  // predicate; empty for InvalidThm2
  std::string c;
  std::string d;
  std::string G;
  std::string f;
};

struct ReductionArtifact {
  ReductionKind kind;
  CubeSpec spec;
  Problem source;
  Problem target;
  EncodingNames names;
  /// Position of the existential f in the target context.
  std::size_t f_position = 0;
  Order f_order = Order::infinite();
  /// Sort pairs the construction needs beyond <Prop, Prop>.
  std::vector<SortPair> requirements;
  /// Set for the original second construction, retracted by its erratum.
  bool invalid_per_erratum = false;
};

class ReductionError : public Error {
 public:
  enum class Code {
    NotTermElementary,
    NotTypeElementary,
    CalculusLacksCapability,
    TauNotASolution,
    SigmaNotASolution,
    WrongKind,
    /// The kernel rejected a constructed term; indicates a defect.
    ConstructionRejected,
  };
  ReductionError(Code code, std::string message, std::vector<SortPair> missing = {})
      : Error(std::move(message)), code_(code), missing_(std::move(missing)) {}
  Code code() const { return code_; }
  const std::vector<SortPair>& missing_pairs() const { return missing_; }

 private:
  Code code_;
  std::vector<SortPair> missing_;
};

/// Γ = γ[∀z:U; ∀P:U→Prop; ∀c:(P z); ∀d:(P z); ∀G:(P z)→(P z)→(P z);
///       ∃f:(h:U→U)(P (h u1))→(P (h u2))],
/// t1 = (G (f [x:U]z c) (f [x:U]z d)), t2 = (G c d).
ReductionArtifact build_thm1(const Problem& source, const CubeSpec& spec, Fuel fuel = {});

/// Same shape over Prop with P : Prop→Prop and f : (h:Prop→Prop)(P (h u1))→(P (h u2)).
ReductionArtifact build_erratum(const Problem& source, const CubeSpec& spec, Fuel fuel = {});

/// Γ = γ[∀Z:Prop; ∀c:Z; ∀d:Z; ∀G:Z→Z→Z; ∃f:(h:Prop→Prop)(h u1)→(h u2)].
ReductionArtifact build_thm2_invalid(const Problem& source, const CubeSpec& spec,
                                     Fuel fuel = {});

/// σ = τ ∪ {f ↦ [x1:U→U][x2:(P (x1 (τ u1)))]x2}; verified against the target.
Substitution thm1_witness(const Substitution& tau, const ReductionArtifact& art, Fuel fuel = {});

/// σ = τ ∪ {f ↦ [x1:Prop→Prop][x2:(P (x1 (τ u1)))]x2}; verified against the target.
Substitution erratum_witness(const Substitution& tau, const ReductionArtifact& art,
                             Fuel fuel = {});

/// Restricts a target solution to the source's variables and checks that it
/// solves the source.
Substitution thm1_extract(const Substitution& sigma, const ReductionArtifact& art,
                          Fuel fuel = {});
Substitution erratum_extract(const Substitution& sigma, const ReductionArtifact& art,
                             Fuel fuel = {});

/// Signature used by the numeral gadgets: a base type, a constant and a
/// binary symbol, all universal in `qctx`.
struct GoldfarbShapes {
  QContext qctx;
  std::size_t base = 0;
  std::size_t constant = 1;
  std::size_t binary = 2;

  /// [∀U:Prop; ∀a:U; ∀g:U→U→U]
  static GoldfarbShapes standard();

  /// Reference to position `pos` from under `depth` binders.
  Term ref(std::size_t pos, std::size_t depth) const {
    return Term::var(qctx.size() - 1 - pos + depth);
  }
};

/// [w1:U](g a (g a ... (g a w1))) with n applications of g.
Term goldfarb_numeral(std::size_t n, const GoldfarbShapes& shapes);

/// [w1:U][w2:U](g (numeral(n_i * p) w1) (numeral(p) w2)); the overlined
/// index n_i.p is read as the arithmetic product.
Term goldfarb_tpl(std::size_t n_i, std::size_t p, const GoldfarbShapes& shapes);

/// (F shape, G shape): [w1:U](numeral(n_i) w1) and
/// [w1][w2][w3](g (t_0 w1 w2) (g (t_1 w1 w2) ... (g (t_{n_j-1} w1 w2) w3))),
/// where t_p is goldfarb_tpl(n_i, p).
std::pair<Term, Term> goldfarb_solution_shapes(std::size_t n_i, std::size_t n_j,
                                               const GoldfarbShapes& shapes);

}  // namespace lcube
