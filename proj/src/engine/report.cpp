#include "loopterm/engine.hpp"

#include <json.hpp>

#include <sstream>

namespace loopterm {

namespace {

using Json = nlohmann::ordered_json;

std::string term(const TermIndex& t) { return "(" + std::to_string(t.k) + "," + std::to_string(t.l) + ")"; }

std::string guess_string(const std::vector<TermIndex>& g) {
  std::string s;
  for (size_t i = 0; i < g.size(); ++i) s += (i ? " " : "") + term(g[i]);
  return s.empty() ? "-" : s;
}

Json vector_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(q.get_str());
  return a;
}

Json term_json(const TermIndex& t) { return Json{{"k", t.k}, {"l", t.l}}; }

Json witness_json(const WitnessRecord& w) {
  Json j;
  j["x0"] = vector_json(w.x0);
  Json g = Json::array();
  for (const auto& t : w.guess) g.push_back(term_json(t));
  j["guess"] = g;
  j["checked_steps"] = w.checked;
  j["discrepancy"] = w.discrepancy;
  if (w.discrepancy) {
    j["first_failure"] = w.first_failure;
    j["shift"] = w.shift;
    j["shifted_survives"] = w.shifted_survives;
  }
  return j;
}

}  // namespace

std::string render_json(const Report& r, bool timings) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["vars"] = r.vars;
  Json cf;
  cf["charpoly"] = r.charpoly;
  cf["shift"] = r.shift;
  Json eig = Json::array();
  for (const auto& e : r.eigen)
    eig.push_back(Json{{"factor", e.factor}, {"multiplicity", e.multiplicity}, {"roots", e.roots},
                       {"arguments", e.arguments}});
  cf["eigenvalues"] = eig;
  j["closed_form"] = cf;
  Json guards = Json::array();
  for (const auto& g : r.guards) guards.push_back(Json{{"guard", g.guard}, {"period", g.period}, {"classes", g.classes}});
  j["guards"] = guards;
  Json tables = Json::array();
  for (const auto& t : r.tables) {
    Json c = Json::array();
    for (const auto& x : t.candidates) c.push_back(term_json(x));
    tables.push_back(Json{{"guard", t.guard},
                          {"residue", t.residue},
                          {"period", t.period},
                          {"moduli", t.moduli},
                          {"terms", t.terms},
                          {"candidates", c},
                          {"pruned", t.pruned}});
  }
  j["tables"] = tables;
  j["torus"] = r.torus;
  Json as;
  as["aggregate"] = to_string(r.assumption.aggregate);
  Json entries = Json::array();
  for (const auto& e : r.assumption.entries) {
    Json x{{"table", e.table}, {"term", term_json(e.term)}, {"status", to_string(e.status)}};
    if (!e.reason.empty()) x["reason"] = e.reason;
    entries.push_back(x);
  }
  as["coefficients"] = entries;
  j["assumption"] = as;
  j["guesses_total"] = r.guesses_total;
  Json gs = Json::array();
  for (const auto& g : r.guesses) {
    Json terms = Json::array();
    for (const auto& t : g.guess) terms.push_back(term_json(t));
    Json x{{"guess", terms},
           {"constraints", g.constraints},
           {"outcome", to_string(g.outcome.tag)},
           {"method", g.outcome.method}};
    if (!g.outcome.reason.empty()) x["reason"] = g.outcome.reason;
    if (g.outcome.tag == SolverOutcome::Tag::Sat) x["model"] = vector_json(g.outcome.model);
    gs.push_back(x);
  }
  j["guesses"] = gs;
  j["witness"] = r.witness ? witness_json(*r.witness) : Json(nullptr);
  if (timings) {
    Json t;
    for (const auto& [k, v] : r.timings) t[k] = v;
    j["timings_s"] = t;
  }
  return j.dump(2) + "\n";
}

std::string render_human(const Report& r, bool timings) {
  std::ostringstream os;
  os << "verdict: " << to_string(r.verdict) << "\n";
  os << "reason: " << r.reason << "\n";
  os << "characteristic polynomial: " << r.charpoly << "\n";
  if (r.shift) os << "zero eigenvalue index: " << r.shift << "\n";
  for (const auto& e : r.eigen) {
    os << "  factor " << e.factor;
    if (e.multiplicity > 1) os << " (multiplicity " << e.multiplicity << ")";
    os << "\n";
    for (size_t i = 0; i < e.roots.size(); ++i) os << "    " << e.roots[i] << "  [" << e.arguments[i] << "]\n";
  }
  for (const auto& g : r.guards) {
    os << "guard " << g.guard << ": period " << g.period << "\n";
    for (const auto& c : g.classes) os << "  " << c << "\n";
  }
  for (size_t i = 0; i < r.torus.size(); ++i) os << "torus angle " << i + 1 << ": " << r.torus[i] << "\n";
  for (const auto& t : r.tables) {
    os << "table guard " << t.guard << " residue " << t.residue << "/" << t.period << ": " << t.terms
       << " terms, candidates";
    for (const auto& c : t.candidates) os << " " << term(c);
    if (t.pruned) os << " (" << t.pruned << " pruned)";
    os << "\n";
  }
  os << "guesses: " << r.guesses.size() << " of " << r.guesses_total << " tried\n";
  for (size_t i = 0; i < r.guesses.size(); ++i) {
    const auto& g = r.guesses[i];
    os << "  " << i + 1 << ". " << guess_string(g.guess) << ": " << to_string(g.outcome.tag) << " via "
       << g.outcome.method << ", " << g.constraints << " constraints";
    if (!g.outcome.reason.empty()) os << " (" << g.outcome.reason << ")";
    os << "\n";
  }
  os << "assumption: " << to_string(r.assumption.aggregate) << "\n";
  for (const auto& e : r.assumption.entries) {
    os << "  table " << e.table + 1 << " term " << term(e.term) << ": " << to_string(e.status);
    if (!e.reason.empty()) os << " (" << e.reason << ")";
    os << "\n";
  }
  if (r.witness) {
    const auto& w = *r.witness;
    os << "witness: " << to_string(w.x0) << "\n";
    if (!w.discrepancy) {
      os << "  guards positive for " << w.checked << " steps\n";
    } else {
      os << "  guard fails at step " << w.first_failure << "; from step " << w.shift << " the run "
         << (w.shifted_survives ? "survives " : "fails within ") << w.checked << " steps\n";
    }
  }
  if (timings)
    for (const auto& [k, v] : r.timings) os << "time " << k << ": " << v << " s\n";
  return os.str();
}

}  // namespace loopterm
