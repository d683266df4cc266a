// Text grammar for ring expressions and the matching deterministic
// pretty-printer.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-')* base ('^' ('-')? integer)?
//   base   := rational | variable | '(' expr ')'
//
// Variables come in two ring styles:
//   * indexed family:  u[i,n]  (two indices: generator i, shift n),
//                      u_i     (alias for u[i,0]),
//                      u[n]    only when the ring has a single generator,
//                      u       bare name for a single-generator ring;
//   * named:           v, u, ... each a generator, with v[n] for shifts.

#pragma once

#include <string>
#include <vector>

#include "mpva/diffring.hpp"

namespace mpva {

struct RingCtx {
  enum class Style { IndexedFamily, Named };
  Style style = Style::IndexedFamily;
  // Family name for the IndexedFamily style (e.g. "u" or "v").
  std::string family = "u";
  // Declared generators: (index, display name).  For IndexedFamily the
  // display name is "family[index]"-derived and may be left empty.
  std::vector<std::pair<int, std::string>> gens;

  static RingCtx indexed(std::string family, std::vector<int> indices);
  static RingCtx named(std::vector<std::pair<int, std::string>> gens);

  bool has_gen(int idx) const;
  const std::string& name_of(int idx) const;
  // -1-style sentinel lookups throw on failure.
  int gen_by_name(const std::string& name) const;
};

DiffFrac parse_frac(const std::string& text, const RingCtx& ring);
// Throws std::domain_error when the expression is not polynomial.
DiffPoly parse_poly(const std::string& text, const RingCtx& ring);

std::string to_string(const Scalar& s);
std::string to_string(const Monomial& m, const RingCtx& ring);
std::string to_string(const DiffPoly& p, const RingCtx& ring);
std::string to_string(const DiffFrac& f, const RingCtx& ring);

}  // namespace mpva
