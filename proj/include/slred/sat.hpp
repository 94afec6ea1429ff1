#pragma once

// Satisfiability from exact mean rounding, smallest witness by bisection,
// and a DIMACS CNF front end.

#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slred/boolmean.hpp"
#include "slred/context.hpp"
#include "slred/core.hpp"

namespace slred {

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // signed literals, variable v in 1..num_vars

  /// Bit v-1 of `assignment` is the value of variable v.
  bool satisfied_by(std::uint64_t assignment) const {
    for (const auto& clause : clauses) {
      bool any = false;
      for (int lit : clause) {
        const bool value = (assignment >> (std::abs(lit) - 1)) & 1u;
        if (value == (lit > 0)) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  }
};

/// DIMACS CNF. `strict` enforces the header's clause count.
inline CnfFormula parse_dimacs(std::string_view text, bool strict = true) {
  CnfFormula f;
  bool header = false;
  long declared = 0;
  std::vector<int> current;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw input_error("DIMACS line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == 'c') continue;
    if (tok == "%") break;  // SATLIB trailer
    if (tok == "p") {
      if (header) fail("duplicate header");
      std::string kind;
      long nv = -1, nc = -1;
      std::string extra;
      if (!(ls >> kind >> nv >> nc) || kind != "cnf" || nv < 0 || nc < 0 || (ls >> extra))
        fail("malformed header, expected 'p cnf <vars> <clauses>'");
      if (nv > 62) fail("at most 62 variables are supported");
      f.num_vars = static_cast<int>(nv);
      declared = nc;
      header = true;
      continue;
    }
    if (!header) fail("clause before 'p cnf' header");
    do {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') fail("bad literal '" + tok + "'");
      if (lit == 0) {
        if (current.empty()) fail("empty clause");
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::labs(lit) > f.num_vars) fail("literal " + tok + " out of range");
        current.push_back(static_cast<int>(lit));
      }
    } while (ls >> tok);
  }
  if (!header) throw input_error("DIMACS input has no 'p cnf' header");
  if (!current.empty()) throw input_error("DIMACS input ends inside a clause (missing terminating 0)");
  if (strict && static_cast<long>(f.clauses.size()) != declared)
    throw input_error("header declares " + std::to_string(declared) + " clauses but " +
                      std::to_string(f.clauses.size()) + " were found");
  return f;
}

inline BooleanOracle cnf_oracle(const CnfFormula& f) {
  auto shared = std::make_shared<const CnfFormula>(f);
  return BooleanOracle(f.num_vars, [shared](std::uint64_t j) { return shared->satisfied_by(j); });
}

struct SatDecision : EstimateWithConfidence {
  bool satisfiable = false;
  MeanEstimate mean;
};

/// YES iff some B(j) = 1, with probability >= 1 - delta.
inline SatDecision sat_decide(const BooleanOracle& b, double delta, Context& ctx) {
  const double nn = static_cast<double>(b.size());
  SatDecision out;
  out.mean = boolean_mean(b, 1.0 / (3.0 * nn), delta, ctx);
  out.satisfiable = out.mean.count > 0;
  out.value = out.satisfiable ? 1.0 : 0.0;
  out.eta = out.mean.eta;
  out.delta = delta;
  out.ledger = out.mean.ledger;
  return out;
}

struct SatSearch : EstimateWithConfidence {
  std::uint64_t index = 0;
  bool witness_confirmed = false;  // result of the one confirmation call
  std::vector<bool> verdicts;      // lower-half verdicts, most significant bit first
};

/// Smallest j with B(j) = 1, with probability >= 1 - delta when B != 0.
inline SatSearch sat_search(const BooleanOracle& b, double delta, Context& ctx) {
  check_delta(delta);
  const int n = b.n();
  SatSearch out;
  out.delta = delta;
  const double step_delta = n > 0 ? split_confidence(delta, n) : delta;
  std::uint64_t base = 0;
  for (int k = n - 1; k >= 0; --k) {
    const SatDecision d = sat_decide(b.restrict(base, k), step_delta, ctx);
    out.ledger.merge(d.ledger);
    out.verdicts.push_back(d.satisfiable);
    if (!d.satisfiable) base += std::uint64_t{1} << k;
  }
  out.index = base;
  out.value = static_cast<double>(base);
  out.witness_confirmed = b(base);
  out.ledger.verification_queries += 1;
  return out;
}

}  // namespace slred
