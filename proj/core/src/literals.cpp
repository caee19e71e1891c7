#include "padyn/literals.hpp"

#include <algorithm>

namespace padyn {

static std::vector<std::string> split_top(const std::string& body) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : body) {
    if (c == ' ') continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

static PadicNumber coefficient(const std::string& s, Prime p, long precision) {
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']')
    return PadicNumber::parse(s.substr(1, s.size() - 2), p, precision);
  return PadicNumber::parse(s, p, precision);
}

static Prime parse_prime(const std::string& s) {
  long v = 0;
  try {
    v = std::stol(s);
  } catch (const std::exception&) {
    throw ParseError("bad prime '" + s + "'");
  }
  if (v < 2 || !is_prime(static_cast<Prime>(v))) throw DomainError(s + " is not prime");
  return static_cast<Prime>(v);
}

static long parse_order(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad order '" + s + "'");
  }
  if (used != s.size()) throw ParseError("bad order '" + s + "'");
  return v;
}

MapLiteral parse_map(const std::string& literal, long precision) {
  auto open = literal.find('(');
  if (open == std::string::npos || literal.empty() || literal.back() != ')')
    throw ParseError("bad map literal '" + literal + "'");
  const std::string head = literal.substr(0, open);
  auto args = split_top(literal.substr(open + 1, literal.size() - open - 2));
  if (head == "flow") {
    if (args.size() != 3) throw ParseError("flow(p,m,a) expected");
    Prime p = parse_prime(args[0]);
    return FlowMap(p, parse_order(args[1]), coefficient(args[2], p, precision));
  }
  if (head == "germ") {
    if (args.size() != 4) throw ParseError("germ(p,m,a,b) expected");
    Prime p = parse_prime(args[0]);
    return PerturbedMap(p, parse_order(args[1]), coefficient(args[2], p, precision),
                        coefficient(args[3], p, precision));
  }
  if (head == "mult") {
    if (args.size() != 2) throw ParseError("mult(p,a) expected");
    Prime p = parse_prime(args[0]);
    return MultiplierMap(p, coefficient(args[1], p, precision));
  }
  throw ParseError("unknown map kind '" + head + "'");
}

FlowMap parse_flow(const std::string& literal, long precision) {
  auto m = parse_map(literal, precision);
  if (auto* f = std::get_if<FlowMap>(&m)) return *f;
  throw ParseError("expected a flow(p,m,a) literal");
}

PerturbedMap parse_germ(const std::string& literal, long precision) {
  auto m = parse_map(literal, precision);
  if (auto* g = std::get_if<PerturbedMap>(&m)) return *g;
  throw ParseError("expected a germ(p,m,a,b) literal");
}

// Small integers print as integers; anything else as a bracketed p-adic literal.
std::string coefficient_literal(const PadicNumber& a) {
  if (a.is_zero()) return "0";
  if (a.valuation() >= 0) {
    const long t = *a.absolute_precision();
    const mpz_class mod = pow_p(a.prime(), t);
    mpz_class r = a.residue(t);
    if (2 * r > mod) r -= mod;
    if (abs(r) < 1000000 && 4 * abs(r) * abs(r) < mod) return r.get_str();
  }
  return "[" + a.to_literal() + "]";
}

std::string map_literal(const FlowMap& F) {
  return "flow(" + std::to_string(F.p) + "," + std::to_string(F.m) + "," + coefficient_literal(F.a) + ")";
}

std::string map_literal(const MultiplierMap& L) {
  return "mult(" + std::to_string(L.p) + "," + coefficient_literal(L.a) + ")";
}

std::string map_literal(const PerturbedMap& G) {
  return "germ(" + std::to_string(G.flow.p) + "," + std::to_string(G.flow.m) + "," + coefficient_literal(G.flow.a) +
         "," + coefficient_literal(G.b) + ")";
}

}  // namespace padyn
