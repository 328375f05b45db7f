#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcube/error.hpp"
#include "lcube/problem.hpp"
#include "lcube/reductions.hpp"

namespace lcube {

struct SourceSpan {
  std::size_t begin = 0;  // byte offsets, end exclusive
  std::size_t end = 0;
  std::size_t line = 1;  // 1-based position of `begin`
  std::size_t column = 1;
};

class ParseError : public Error {
 public:
  enum class Code { Syntax, UnboundName, UnknownCalculus, Type, Substitution };
  ParseError(Code code, const SourceSpan& span, const std::string& message,
             std::optional<SortPair> missing = std::nullopt)
      : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
        code_(code),
        span_(span),
        missing_(missing) {}
  Code code() const { return code_; }
  const SourceSpan& span() const { return span_; }
  /// Sort pair a failed typing judgement needed, when that was the cause.
  std::optional<SortPair> missing_pair() const { return missing_; }

 private:
  Code code_;
  SourceSpan span_;
  std::optional<SortPair> missing_;
};

/// Parses a term, resolving names against `scope` (last entry innermost).
///
///   term    := app ("->" term)?
///   app     := primary+
///   primary := Prop | Type | ident | "(" term ")" | binder
///   binder  := "[" ident ":" term "]" body | "(" ident ":" term ")" body
///   body    := primary ("->" term)?
///
/// A binder body is one primary, so `(f [x:U]z c)` applies f to two
/// arguments, while `(h:A)B -> C` is the product over `B -> C`.
Term parse_term(std::string_view input, const std::vector<std::string>& scope = {});

/// Inverse of parse_term: applications are fully parenthesized, binder
/// names come from hints and get numeric suffixes when they clash.
std::string print_term(const Term& t, const std::vector<std::string>& scope = {});

enum class GoalKeyword { Match, Unify };

struct ProblemFile {
  CubeSpec spec;
  Problem problem;
  GoalKeyword goal = GoalKeyword::Match;
};

/// Reads a problem file and validates it with make_problem. When
/// `calculus_override` is set it replaces the file's header.
ProblemFile parse_problem(std::string_view input, Fuel fuel = {},
                          const std::optional<CubeSpec>& calculus_override = std::nullopt);

std::string print_problem(const Problem& p, const CubeSpec& spec);

/// Names used when printing `qctx`, with duplicates suffixed.
std::vector<std::string> display_names(const QContext& qctx);

/// Lines `x := term` with optional `where exists y : T` clauses giving the
/// binding's local context. Names in a replacement resolve in the
/// substituted prefix before x, then the local context.
Substitution parse_substitution(std::string_view input, const QContext& qctx);

std::string print_substitution(const Substitution& sigma, const QContext& qctx);

/// `# key: value` comment block describing a reduction artifact, followed by
/// the target problem file.
std::string print_artifact(const ReductionArtifact& art);

}  // namespace lcube
