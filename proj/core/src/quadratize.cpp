#include "qfactor/quadratize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qfactor/errors.hpp"

namespace qfactor {

std::vector<VarId> Qubo::variables() const {
  std::set<VarId> vars;
  for (const auto& [v, c] : linear) vars.insert(v);
  for (const auto& [pair, c] : quadratic) {
    vars.insert(pair.first);
    vars.insert(pair.second);
  }
  return std::vector<VarId>(vars.begin(), vars.end());
}

Coeff Qubo::energy(const Assignment& assignment) const {
  auto bit = [&assignment](VarId v) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw MissingVariable("energy: assignment missing variable " + v.name());
    }
    if (it->second != 0 && it->second != 1) {
      throw std::invalid_argument("energy: value of " + v.name() + " must be 0 or 1");
    }
    return it->second;
  };
  Coeff total = offset;
  for (const auto& [v, c] : linear) {
    if (bit(v)) total += c;
  }
  for (const auto& [pair, c] : quadratic) {
    if (bit(pair.first) && bit(pair.second)) total += c;
  }
  return total;
}

std::string Qubo::to_text() const {
  std::string out = "c " + coeff_to_string(offset) + "\n";
  for (const auto& [v, c] : linear) {
    out += v.name() + " " + coeff_to_string(c) + "\n";
  }
  for (const auto& [pair, c] : quadratic) {
    out += pair.first.name() + " " + pair.second.name() + " " + coeff_to_string(c) + "\n";
  }
  return out;
}

Qubo Qubo::parse_text(std::string_view text) {
  Qubo q;
  std::istringstream lines{std::string(text)};
  std::string line;
  int line_no = 0;
  auto add_linear = [&q](VarId v, const Coeff& c) {
    auto [it, inserted] = q.linear.emplace(v, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) q.linear.erase(it);
    }
  };
  auto add_quadratic = [&q, &line_no](VarId a, VarId b, const Coeff& c) {
    if (a == b) {
      throw ParseError("coupling line " + std::to_string(line_no) + ": repeated variable");
    }
    if (b < a) std::swap(a, b);
    auto [it, inserted] = q.quadratic.emplace(std::make_pair(a, b), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) q.quadratic.erase(it);
    }
  };
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::vector<std::string> toks;
    std::string tok;
    while (tokens >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() == 2 && toks[0] == "c") {
      q.offset += coeff_from_string(toks[1]);
    } else if (toks.size() == 2) {
      add_linear(VarId::parse(toks[0]), coeff_from_string(toks[1]));
    } else if (toks.size() == 3) {
      add_quadratic(VarId::parse(toks[0]), VarId::parse(toks[1]), coeff_from_string(toks[2]));
    } else {
      throw ParseError("coupling line " + std::to_string(line_no) + ": expected 2 or 3 tokens");
    }
  }
  return q;
}

void PenaltyWeight::validate() const {
  if (s < 1) throw std::invalid_argument("PenaltyWeight: s must be >= 1");
}

Coeff safe_penalty_bound(const MultilinearPoly& p) {
  Coeff total = 1;
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() >= 3) total += abs_coeff(c);
  }
  return total;
}

namespace {

int next_ancilla_index(const MultilinearPoly& p) {
  int next = 0;
  for (VarId v : p.variables()) {
    if (v.kind == VarKind::Ancilla) next = std::max(next, v.index + 1);
  }
  return next;
}

void merge_term(MultilinearPoly::TermMap& terms, const Monomial& m, const Coeff& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

}  // namespace

Qubo quadratize(const MultilinearPoly& p, const PenaltyWeight& penalty) {
  penalty.validate();
  const Coeff& s = penalty.s;

  MultilinearPoly::TermMap terms = p.terms();
  std::vector<AncillaDef> defs;
  int next_index = next_ancilla_index(p);

  while (true) {
    // Score every pair occurring inside a monomial of degree >= 3 by how
    // many degree-3 monomials it completes. Map order makes the "first
    // maximum wins" rule the lowest-pair tie break.
    std::map<std::pair<VarId, VarId>, long long> scores;
    bool any_high_degree = false;
    for (const auto& [m, c] : terms) {
      if (m.degree() < 3) continue;
      any_high_degree = true;
      const auto& vars = m.vars();
      const long long weight = m.degree() == 3 ? 1 : 0;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
          scores[{vars[i], vars[j]}] += weight;
        }
      }
    }
    if (!any_high_degree) break;

    std::pair<VarId, VarId> best{};
    long long best_score = -1;
    for (const auto& [pair, score] : scores) {
      if (score > best_score) {
        best_score = score;
        best = pair;
      }
    }

    const VarId z = VarId::ancilla(next_index++);
    defs.push_back(AncillaDef{z, best.first, best.second});

    MultilinearPoly::TermMap next;
    for (const auto& [m, c] : terms) {
      if (m.degree() >= 3 && m.contains_pair(best.first, best.second)) {
        merge_term(next, m.with_pair_replaced(best.first, best.second, z), c);
      } else {
        merge_term(next, m, c);
      }
    }
    terms = std::move(next);

    // s * (3 z + a b - 2 z a - 2 z b)
    merge_term(terms, Monomial({z}), Coeff(3) * s);
    merge_term(terms, Monomial({best.first, best.second}), s);
    merge_term(terms, Monomial({z, best.first}), Coeff(-2) * s);
    merge_term(terms, Monomial({z, best.second}), Coeff(-2) * s);
  }

  Qubo q;
  q.ancilla_defs = std::move(defs);
  for (const auto& [m, c] : terms) {
    switch (m.degree()) {
      case 0: q.offset = c; break;
      case 1: q.linear.emplace(m.vars()[0], c); break;
      case 2: q.quadratic.emplace(std::make_pair(m.vars()[0], m.vars()[1]), c); break;
      default: throw std::logic_error("quadratize: residual high-degree term");
    }
  }
  return q;
}

Coeff qubo_energy(const Qubo& q, const Assignment& assignment) { return q.energy(assignment); }

}  // namespace qfactor
