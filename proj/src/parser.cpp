#include "mpva/parser.hpp"

#include <cctype>
#include <sstream>

namespace mpva {

// ---------------------------------------------------------------------------
// RingCtx

RingCtx RingCtx::indexed(std::string family, std::vector<int> indices) {
  RingCtx r;
  r.style = Style::IndexedFamily;
  r.family = std::move(family);
  for (int i : indices) r.gens.push_back({i, {}});
  return r;
}

RingCtx RingCtx::named(std::vector<std::pair<int, std::string>> gens) {
  RingCtx r;
  r.style = Style::Named;
  r.gens = std::move(gens);
  return r;
}

bool RingCtx::has_gen(int idx) const {
  for (const auto& [i, n] : gens)
    if (i == idx) return true;
  return false;
}

const std::string& RingCtx::name_of(int idx) const {
  for (const auto& [i, n] : gens)
    if (i == idx) return n;
  throw std::domain_error("RingCtx: unknown generator index");
}

int RingCtx::gen_by_name(const std::string& name) const {
  for (const auto& [i, n] : gens)
    if (n == name) return i;
  throw std::domain_error("RingCtx: unknown generator name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  const std::string& s;
  const RingCtx& ring;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw std::domain_error(std::string("parse error: expected '") + c +
                              "' at offset " + std::to_string(pos));
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw std::domain_error("parse error: " + msg + " at offset " +
                            std::to_string(pos));
  }

  long integer() {
    skip();
    bool neg = eat('-');
    skip();
    if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
      fail("expected integer");
    long v = 0;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos]))
      v = v * 10 + (s[pos++] - '0');
    return neg ? -v : v;
  }

  DiffFrac expr() {
    DiffFrac r = term();
    for (;;) {
      skip();
      if (eat('+'))
        r = r + term();
      else if (eat('-'))
        r = r - term();
      else
        return r;
    }
  }

  DiffFrac term() {
    DiffFrac r = factor();
    for (;;) {
      skip();
      if (eat('*'))
        r = r * factor();
      else if (eat('/'))
        r = r / factor();
      else
        return r;
    }
  }

  DiffFrac factor() {
    skip();
    if (eat('-')) return -factor();
    DiffFrac b = base();
    skip();
    if (eat('^')) {
      long e = integer();
      if (e >= 0) {
        DiffFrac r(1);
        for (long i = 0; i < e; ++i) r = r * b;
        return r;
      }
      DiffFrac r(1);
      DiffFrac bi = b.inverse();
      for (long i = 0; i < -e; ++i) r = r * bi;
      return r;
    }
    return b;
  }

  DiffFrac base() {
    skip();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      DiffFrac r = expr();
      expect(')');
      return r;
    }
    if (std::isdigit((unsigned char)c)) {
      std::string digits;
      while (pos < s.size() && std::isdigit((unsigned char)s[pos]))
        digits += s[pos++];
      return DiffFrac(Scalar(mpz_class(digits)));
    }
    if (std::isalpha((unsigned char)c)) return variable();
    fail("unexpected character");
  }

  DiffFrac variable() {
    std::string name;
    while (pos < s.size() && std::isalpha((unsigned char)s[pos]))
      name += s[pos++];
    if (pos < s.size() && s[pos] == '_') {
      ++pos;
      long idx = integer();
      // family_i is u[i,0] in an indexed-family ring.
      if (ring.style != RingCtx::Style::IndexedFamily || name != ring.family)
        fail("subscript form used with non-family name '" + name + "'");
      if (!ring.has_gen((int)idx)) fail("unknown generator index");
      return DiffFrac(DiffPoly::var((int)idx, 0));
    }
    if (pos < s.size() && s[pos] == '[') {
      ++pos;
      long a = integer();
      if (eat(',')) {
        long b = integer();
        expect(']');
        if (ring.style != RingCtx::Style::IndexedFamily ||
            name != ring.family)
          fail("two-index form used with non-family name '" + name + "'");
        if (!ring.has_gen((int)a)) fail("unknown generator index");
        return DiffFrac(DiffPoly::var((int)a, b));
      }
      expect(']');
      // Single index: the shift, for an unambiguous generator name.
      return DiffFrac(DiffPoly::var(single_gen(name), a));
    }
    return DiffFrac(DiffPoly::var(single_gen(name), 0));
  }

  int single_gen(const std::string& name) {
    if (ring.style == RingCtx::Style::Named) return ring.gen_by_name(name);
    if (name != ring.family) fail("unknown name '" + name + "'");
    if (ring.gens.size() != 1)
      fail("bare family name is ambiguous in a multi-generator ring");
    return ring.gens[0].first;
  }
};

}  // namespace

DiffFrac parse_frac(const std::string& text, const RingCtx& ring) {
  Parser p{text, ring};
  DiffFrac r = p.expr();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return r;
}

DiffPoly parse_poly(const std::string& text, const RingCtx& ring) {
  return parse_frac(text, ring).as_poly();
}

// ---------------------------------------------------------------------------
// Printer

std::string to_string(const Scalar& s) { return s.get_str(); }

namespace {

std::string var_string(const VarRef& v, const RingCtx& ring) {
  std::ostringstream o;
  if (ring.style == RingCtx::Style::IndexedFamily) {
    if (ring.gens.size() == 1) {
      o << ring.family;
      if (v.shift != 0) o << '[' << v.shift << ']';
    } else {
      o << ring.family << '[' << v.gen << ',' << v.shift << ']';
    }
  } else {
    o << ring.name_of(v.gen);
    if (v.shift != 0) o << '[' << v.shift << ']';
  }
  return o.str();
}

}  // namespace

std::string to_string(const Monomial& m, const RingCtx& ring) {
  if (m.is_one()) return "1";
  std::ostringstream o;
  bool first = true;
  for (const auto& [v, e] : m.factors) {
    if (!first) o << '*';
    first = false;
    o << var_string(v, ring);
    if (e != 1) o << '^' << e;
  }
  return o.str();
}

std::string to_string(const DiffPoly& p, const RingCtx& ring) {
  if (p.is_zero()) return "0";
  std::ostringstream o;
  // Emit terms from largest to smallest under the fixed order.
  bool first = true;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const auto& [m, c] = *it;
    Scalar a = c;
    if (first) {
      if (sgn(a) < 0) {
        o << '-';
        a = -a;
      }
    } else {
      o << (sgn(a) < 0 ? " - " : " + ");
      if (sgn(a) < 0) a = -a;
    }
    first = false;
    if (m.is_one()) {
      o << to_string(a);
    } else if (a == 1) {
      o << to_string(m, ring);
    } else {
      o << to_string(a) << '*' << to_string(m, ring);
    }
  }
  return o.str();
}

std::string to_string(const DiffFrac& f, const RingCtx& ring) {
  if (f.is_polynomial()) return to_string(f.num(), ring);
  return "(" + to_string(f.num(), ring) + ") / (" + to_string(f.den(), ring) +
         ")";
}

}  // namespace mpva
