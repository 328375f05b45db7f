#pragma once

#include <bitset>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcube/error.hpp"
#include "lcube/normalize.hpp"
#include "lcube/term.hpp"

namespace lcube {

/// A pair <s, s'> licensing the formation of products (x:A)B with A : s
/// and B : s'.
struct SortPair {
  Sort from;
  Sort to;

  friend bool operator==(const SortPair&, const SortPair&) = default;
};

std::string to_string(SortPair p);        // "(Prop, Type)"
std::string_view short_name(SortPair p);  // "PT"
std::optional<SortPair> parse_sort_pair(std::string_view code);

inline constexpr SortPair kPropProp{Sort::Prop, Sort::Prop};
inline constexpr SortPair kPropType{Sort::Prop, Sort::Type};
inline constexpr SortPair kTypeProp{Sort::Type, Sort::Prop};
inline constexpr SortPair kTypeType{Sort::Type, Sort::Type};
inline constexpr SortPair kAllPairs[] = {kPropProp, kPropType, kTypeProp, kTypeType};

/// The rule set R picking one of the eight calculi of the cube.
class CubeSpec {
 public:
  /// Builds a custom calculus. <Prop, Prop> is always added.
  static CubeSpec custom(const std::vector<SortPair>& pairs);
  static std::optional<CubeSpec> preset(std::string_view name);
  static const std::vector<std::string>& preset_names();

  static CubeSpec stlc() { return *preset("stlc"); }
  static CubeSpec lambda_p() { return *preset("lP"); }
  static CubeSpec lambda_2() { return *preset("l2"); }
  static CubeSpec lambda_weak_omega() { return *preset("lw-weak"); }
  static CubeSpec lambda_omega() { return *preset("lw"); }
  static CubeSpec lambda_p2() { return *preset("lP2"); }
  static CubeSpec lambda_p_weak_omega() { return *preset("lPw-weak"); }
  static CubeSpec coc() { return *preset("coc"); }

  bool has(SortPair p) const { return rules_.test(slot(p)); }
  std::vector<SortPair> rules() const;
  std::vector<SortPair> missing(const std::vector<SortPair>& required) const;
  bool subset_of(const CubeSpec& other) const { return (rules_ & ~other.rules_).none(); }

  /// Preset name, or empty for a custom rule set.
  const std::string& name() const { return name_; }
  /// Preset name or `custom (PP, ...)`.
  std::string display_name() const;

  friend bool operator==(const CubeSpec& a, const CubeSpec& b) { return a.rules_ == b.rules_; }

 private:
  static std::size_t slot(SortPair p) {
    return (p.from == Sort::Type ? 2 : 0) + (p.to == Sort::Type ? 1 : 0);
  }

  std::bitset<4> rules_;
  std::string name_;
};

struct Decl {
  std::string name;
  Term type;
};

/// Declarations in order; the last entry is de Bruijn index 0.
using Context = std::vector<Decl>;

class TypeError : public Error {
 public:
  enum class Code {
    UnboundVariable,
    TypeHasNoType,
    NotAType,
    NotAFunction,
    ArgumentMismatch,
    SortPairNotInR,
    IllFormedContext,
  };

  TypeError(Code code, std::string message, std::optional<Term> subterm = std::nullopt,
            std::optional<SortPair> missing = std::nullopt)
      : Error(std::move(message)),
        code_(code),
        subterm_(std::move(subterm)),
        missing_(missing) {}

  Code code() const { return code_; }
  /// The subterm at which no rule applied, in its local scope.
  const std::optional<Term>& subterm() const { return subterm_; }
  /// The sort pair that would have been needed, for SortPairNotInR.
  std::optional<SortPair> missing_pair() const { return missing_; }
  /// Offending declaration for context errors.
  std::optional<std::size_t> declaration() const { return declaration_; }

  TypeError at_declaration(std::size_t index, const std::string& name) const;

 private:
  Code code_;
  std::optional<Term> subterm_;
  std::optional<SortPair> missing_;
  std::optional<std::size_t> declaration_;
};

/// Succeeds iff every declared type is sorted by Prop or Type in its prefix.
void wf_context(const Context& ctx, const CubeSpec& spec, Fuel fuel = {});

/// Synthesizes the normal-form type of `t`. The context must be well formed.
Term infer_type(const Context& ctx, const Term& t, const CubeSpec& spec, Fuel fuel = {});

/// True iff `t` has a type convertible with `type`. Errors other than a
/// mismatch propagate.
bool check_type(const Context& ctx, const Term& t, const Term& type, const CubeSpec& spec,
                Fuel fuel = {});

Sort sort_of(const Context& ctx, const Term& type, const CubeSpec& spec, Fuel fuel = {});

/// Type of context position `pos` lifted to the full context.
Term lookup_type(const Context& ctx, std::size_t index);

}  // namespace lcube
