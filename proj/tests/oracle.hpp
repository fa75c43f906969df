// Test oracles, kept independent of the library's union-find /
// triangular machinery: a textbook substitution-based unifier that
// materializes the full mgu, plus helpers to compare against it.

#ifndef UNET_TESTS_ORACLE_HPP
#define UNET_TESTS_ORACLE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "unet/term.hpp"
#include "unet/unify.hpp"

namespace unet::oracle {

// Explicit mgu as a fully-resolved map existential var -> term.
struct ExplicitMgu {
  std::map<std::string, Term> map;
};

inline Term subst_apply(const std::map<std::string, Term>& m, const Term& t) {
  if (t.is_var()) {
    auto it = m.find(t.name());
    return it == m.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(subst_apply(m, a));
  return Term::app(t.name(), std::move(args));
}

// Robinson unification, treating universal and free variables as
// constants.  Returns nullopt when not unifiable.  Node budgets are the
// caller's problem; keep inputs small.
inline std::optional<ExplicitMgu> robinson(const EquationSet& e) {
  std::map<std::string, Term> sub;
  std::vector<std::pair<Term, Term>> work(e.equations.begin(),
                                          e.equations.end());
  auto solvable = [&](const std::string& v) {
    return e.class_of(v) == VarClass::Existential;
  };
  while (!work.empty()) {
    auto [s0, t0] = work.back();
    work.pop_back();
    Term s = subst_apply(sub, s0), t = subst_apply(sub, t0);
    if (s == t) continue;
    if (s.is_var() && solvable(s.name())) {
      if (t.contains_var(s.name())) return std::nullopt;  // occurs
      std::map<std::string, Term> one{{s.name(), t}};
      for (auto& [k, v] : sub) v = subst_apply(one, v);
      sub[s.name()] = t;
      continue;
    }
    if (t.is_var() && solvable(t.name())) {
      work.emplace_back(t, s);
      continue;
    }
    if (s.is_var() || t.is_var()) return std::nullopt;  // constant clash
    if (s.name() != t.name() || s.arity() != t.arity()) return std::nullopt;
    for (std::size_t i = 0; i < s.arity(); ++i)
      work.emplace_back(s.args()[i], t.args()[i]);
  }
  // Unconstrained existential variables get fresh free variables so the
  // result is comparable with the library's convention.
  std::set<std::string> taken;
  for (const auto& [v, c] : e.classes) taken.insert(v);
  FreshNames names(std::move(taken));
  for (const auto& [v, c] : e.classes)
    if (c == VarClass::Existential && !sub.count(v)) {
      Term fresh = Term::var(names.fresh("o"));
      std::map<std::string, Term> one{{v, fresh}};
      for (auto& [k, val] : sub) val = subst_apply(one, val);
      sub[v] = fresh;
    }
  return ExplicitMgu{std::move(sub)};
}

// True when the assignment equalizes every equation.
inline bool equalizes(const std::map<std::string, Term>& m,
                      const EquationSet& e) {
  for (const auto& [s, t] : e.equations)
    if (!(subst_apply(m, s) == subst_apply(m, t))) return false;
  return true;
}

// Precedences read off an explicit mgu: existential x before universal y
// whenever m(x) contains y.
inline std::set<std::pair<std::string, std::string>> precedences(
    const ExplicitMgu& m, const EquationSet& e) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [x, t] : m.map) {
    if (e.class_of(x) != VarClass::Existential) continue;
    for (const std::string& y : t.vars())
      if (e.class_of(y) == VarClass::Universal) out.emplace(x, y);
  }
  return out;
}

// Terms equal up to a bijective renaming of free variables not in
// `rigid`.  Used for mgu comparison "up to fresh free variable renaming".
inline bool equal_up_to_renaming(const Term& a, const Term& b,
                                 const std::set<std::string>& rigid,
                                 std::map<std::string, std::string>& fwd,
                                 std::map<std::string, std::string>& bwd) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    bool ra = rigid.count(a.name()), rb = rigid.count(b.name());
    if (ra || rb) return ra && rb && a.name() == b.name();
    auto f = fwd.find(a.name());
    auto g = bwd.find(b.name());
    if (f == fwd.end() && g == bwd.end()) {
      fwd[a.name()] = b.name();
      bwd[b.name()] = a.name();
      return true;
    }
    return f != fwd.end() && g != bwd.end() && f->second == b.name() &&
           g->second == a.name();
  }
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!equal_up_to_renaming(a.args()[i], b.args()[i], rigid, fwd, bwd))
      return false;
  return true;
}

// Compares the library's triangular result against this oracle's
// explicit mgu, entry by entry, up to fresh-free renaming.
inline bool same_mgu(const TriangularSubst& tri, const ExplicitMgu& m,
                     const EquationSet& e) {
  std::set<std::string> rigid;
  for (const auto& [v, c] : e.classes)
    if (c != VarClass::Existential) rigid.insert(v);
  // all free variables of the equations are rigid too
  for (const auto& [s, t] : e.equations) {
    for (const std::string& v : s.vars())
      if (e.class_of(v) != VarClass::Existential) rigid.insert(v);
    for (const std::string& v : t.vars())
      if (e.class_of(v) != VarClass::Existential) rigid.insert(v);
  }
  std::map<std::string, std::string> fwd, bwd;
  for (const auto& [v, c] : e.classes) {
    if (c != VarClass::Existential) continue;
    auto it = m.map.find(v);
    if (it == m.map.end()) return false;
    Term lib = tri.assignment(v);
    if (!equal_up_to_renaming(lib, it->second, rigid, fwd, bwd)) return false;
  }
  return true;
}

}  // namespace unet::oracle

#endif  // UNET_TESTS_ORACLE_HPP
