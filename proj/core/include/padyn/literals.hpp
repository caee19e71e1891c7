#pragma once
#include <string>
#include <variant>

#include "padyn/flows.hpp"
#include "padyn/multipliers.hpp"

namespace padyn {

// Map literals: flow(p,m,a), germ(p,m,a,b), mult(p,a).
// Coefficients are rationals, or p-adic literals in brackets such as [5:0:1,2,3].
using MapLiteral = std::variant<FlowMap, MultiplierMap, PerturbedMap>;

MapLiteral parse_map(const std::string& literal, long precision = 64);
FlowMap parse_flow(const std::string& literal, long precision = 64);
PerturbedMap parse_germ(const std::string& literal, long precision = 64);
std::string coefficient_literal(const PadicNumber& a);
std::string map_literal(const FlowMap& F);
std::string map_literal(const MultiplierMap& L);
std::string map_literal(const PerturbedMap& G);

}  // namespace padyn
