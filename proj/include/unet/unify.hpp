// First-order unification over linkings.
//
// Unifiability runs in near-linear time: a union-find session over the
// shared term store, decomposing application pairs once per class merge.
// The output is a triangular substitution <x1<-t1>...<xn<-tn> whose
// sequential composition denotes the mgu: each ti mentions only bound
// variables with strictly earlier positions, so resolving a binding means
// expanding earlier bindings into it.  The binding terms are subterms of
// the input (shared, never copied), which keeps the session's allocation
// footprint small even when the denoted mgu is exponentially large.
//
// Precedences (existential x before universal y whenever the mgu assigns
// x a term containing y) are extracted without expanding anything, by
// propagating per-binding universal-variable sets along the triangular
// order.  This is the quadratic path the correctness criterion rides on.

#ifndef UNET_UNIFY_HPP
#define UNET_UNIFY_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "unet/linking.hpp"
#include "unet/syntax.hpp"
#include "unet/term.hpp"

namespace unet {

enum class VarClass : std::uint8_t { Existential, Universal, Free };

struct EquationSet {
  std::vector<std::pair<Term, Term>> equations;
  // class of every variable of the problem; variables not listed are free
  std::map<std::string, VarClass> classes;

  VarClass class_of(const std::string& v) const {
    auto it = classes.find(v);
    return it == classes.end() ? VarClass::Free : it->second;
  }
};

struct Binding {
  std::string var;
  Term term;
};

struct NotUnifiable {
  enum Kind { Clash, OccursCycle } kind;
  std::string detail;
};

/// Sequential (triangular) mgu representation.
class TriangularSubst {
 public:
  TriangularSubst() = default;
  TriangularSubst(std::vector<Binding> bindings,
                  std::vector<std::string> unconstrained,
                  std::map<std::string, VarClass> classes)
      : bindings_(std::move(bindings)),
        unconstrained_(std::move(unconstrained)),
        classes_(std::move(classes)) {
    for (std::size_t i = 0; i < bindings_.size(); ++i)
      pos_[bindings_[i].var] = i;
    // Deterministic fresh free variable per unconstrained existential.
    std::set<std::string> taken;
    for (const auto& [v, c] : classes_) taken.insert(v);
    FreshNames names(std::move(taken));
    for (const std::string& v : unconstrained_)
      fresh_[v] = names.fresh(v);
  }

  const std::vector<Binding>& bindings() const { return bindings_; }
  const std::vector<std::string>& unconstrained() const {
    return unconstrained_;
  }
  const std::map<std::string, VarClass>& classes() const { return classes_; }

  bool binds(const std::string& x) const { return pos_.count(x) != 0; }
  bool is_unconstrained(const std::string& x) const {
    return fresh_.count(x) != 0;
  }

  /// Fresh free variable standing in for an unconstrained existential.
  const std::string& fresh_free(const std::string& x) const {
    return fresh_.at(x);
  }

  /// Fully expands the denoted mgu over a term.  Counts constructed
  /// nodes; throws CapExceeded beyond node_cap.  Worst case exponential.
  Term apply_mgu(const Term& t, std::uint64_t node_cap = kDefaultNodeCap) const {
    std::uint64_t budget = node_cap;
    return resolve(t, budget);
  }

  /// The denoted mgu's assignment for an existential variable.
  Term assignment(const std::string& x,
                  std::uint64_t node_cap = kDefaultNodeCap) const {
    return apply_mgu(Term::var(x), node_cap);
  }

  /// For each binding i, the set of universal variables occurring in the
  /// denoted mgu entry for bindings()[i].var.  Quadratic, no expansion.
  std::vector<std::set<std::string>> universal_sets() const {
    std::vector<std::set<std::string>> u(bindings_.size());
    for (std::size_t i = 0; i < bindings_.size(); ++i) {
      std::set<std::string> acc;
      collect_universals(bindings_[i].term, i, u, acc);
      u[i] = std::move(acc);
    }
    return u;
  }

  /// All precedences x-before-y: mgu assigns existential x a term
  /// containing universal y.  Pairs are ordered by binding position then
  /// universal name, which fixes the frame's fresh-predicate numbering.
  std::vector<std::pair<std::string, std::string>> precedences() const {
    std::vector<std::pair<std::string, std::string>> out;
    auto u = universal_sets();
    for (std::size_t i = 0; i < bindings_.size(); ++i)
      for (const std::string& y : u[i]) out.emplace_back(bindings_[i].var, y);
    return out;
  }

  /// Debug dump: one `x <- t` line per binding, in binding order.
  std::string dump() const {
    std::ostringstream os;
    for (const Binding& b : bindings_)
      os << b.var << " <- " << b.term << "\n";
    for (const std::string& v : unconstrained_)
      os << v << " <- " << fresh_.at(v) << " (fresh)\n";
    return os.str();
  }

  static constexpr std::uint64_t kDefaultNodeCap = 1000000;

 private:
  Term resolve(const Term& t, std::uint64_t& budget) const {
    if (budget == 0) throw CapExceeded("apply_mgu node cap exceeded");
    --budget;
    if (t.is_var()) {
      auto it = pos_.find(t.name());
      if (it != pos_.end()) {
        ++budget;  // the variable node itself is replaced, not kept
        return resolve(bindings_[it->second].term, budget);
      }
      auto fr = fresh_.find(t.name());
      if (fr != fresh_.end()) return Term::var(fr->second);
      return t;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    bool changed = false;
    for (const Term& a : t.args()) {
      Term a2 = resolve(a, budget);
      if (!(a2 == a)) changed = true;
      args.push_back(std::move(a2));
    }
    return changed ? Term::app(t.name(), std::move(args)) : t;
  }

  void collect_universals(const Term& t, std::size_t limit,
                          const std::vector<std::set<std::string>>& u,
                          std::set<std::string>& acc) const {
    if (t.is_var()) {
      auto it = pos_.find(t.name());
      if (it != pos_.end()) {
        // triangularity: bound strictly earlier
        acc.insert(u[it->second].begin(), u[it->second].end());
        return;
      }
      if (fresh_.count(t.name())) return;  // fresh free variable
      auto c = classes_.find(t.name());
      if (c != classes_.end() && c->second == VarClass::Universal)
        acc.insert(t.name());
      return;
    }
    for (const Term& a : t.args()) collect_universals(a, limit, u, acc);
  }

  std::vector<Binding> bindings_;
  std::vector<std::string> unconstrained_;
  std::map<std::string, VarClass> classes_;
  std::unordered_map<std::string, std::size_t> pos_;
  std::map<std::string, std::string> fresh_;
};

using UnifyResult = std::variant<TriangularSubst, NotUnifiable>;

inline bool unified(const UnifyResult& r) {
  return std::holds_alternative<TriangularSubst>(r);
}
inline const TriangularSubst& mgu_of(const UnifyResult& r) {
  return std::get<TriangularSubst>(r);
}
inline const NotUnifiable& failure_of(const UnifyResult& r) {
  return std::get<NotUnifiable>(r);
}

// ---------------------------------------------------------------------------
// Union-find unification session.

namespace detail {

class UnifySession {
 public:
  explicit UnifySession(const EquationSet& e) : eqs_(e) {}

  UnifyResult run() {
    std::deque<std::pair<Term, Term>> work(eqs_.equations.begin(),
                                           eqs_.equations.end());
    while (!work.empty()) {
      auto [s, t] = work.front();
      work.pop_front();
      int a = find(node_of(s));
      int b = find(node_of(t));
      if (a == b) continue;
      if (auto fail = merge(a, b, work)) return *fail;
    }
    return extract();
  }

 private:
  struct ClassInfo {
    Term schema;                        // representative application term
    std::string constant;               // universal/free variable, if any
    std::vector<std::string> evars;     // existential members, sweep order
  };

  int node_of(const Term& t) {
    if (t.is_var()) {
      if (eqs_.class_of(t.name()) == VarClass::Existential)
        return var_node(t.name());
      // universal/free variables are constants: one node per name
      auto [it, fresh] = const_nodes_.emplace(t.name(), -1);
      if (fresh) {
        it->second = new_node();
        info_[it->second].constant = t.name();
      }
      return it->second;
    }
    auto [it, fresh] = app_nodes_.emplace(t.raw(), -1);
    if (fresh) {
      it->second = new_node();
      info_[it->second].schema = t;
    }
    return it->second;
  }

  int var_node(const std::string& v) {
    auto [it, fresh] = var_nodes_.emplace(v, -1);
    if (fresh) {
      it->second = new_node();
      info_[it->second].evars.push_back(v);
    }
    return it->second;
  }

  int new_node() {
    parent_.push_back(static_cast<int>(parent_.size()));
    rank_.push_back(0);
    info_.emplace_back();
    return static_cast<int>(parent_.size()) - 1;
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::optional<NotUnifiable> merge(int a, int b,
                                    std::deque<std::pair<Term, Term>>& work) {
    ClassInfo& ia = info_[a];
    ClassInfo& ib = info_[b];
    // Schema/constant conflicts.
    if (ia.schema.valid() && ib.schema.valid()) {
      if (ia.schema.name() != ib.schema.name() ||
          ia.schema.arity() != ib.schema.arity())
        return NotUnifiable{NotUnifiable::Clash,
                            "clash: " + ia.schema.str() + " vs " +
                                ib.schema.str()};
      for (std::size_t i = 0; i < ia.schema.arity(); ++i)
        work.emplace_back(ia.schema.args()[i], ib.schema.args()[i]);
    }
    if (!ia.constant.empty() && !ib.constant.empty() &&
        ia.constant != ib.constant)
      return NotUnifiable{NotUnifiable::Clash, "clash: " + ia.constant +
                                                   " vs " + ib.constant};
    if (ia.constant.empty() != ib.constant.empty()) {
      const std::string& c = ia.constant.empty() ? ib.constant : ia.constant;
      const Term& s = ia.schema.valid() ? ia.schema : ib.schema;
      if (s.valid())
        return NotUnifiable{NotUnifiable::Clash,
                            "clash: " + c + " vs " + s.str()};
    }
    // Union by rank.  The merged payload keeps a's (earlier-swept)
    // ordering: a's schema and existential variables come first.
    int root = a, child = b;
    if (rank_[a] < rank_[b]) std::swap(root, child);
    if (rank_[root] == rank_[child]) ++rank_[root];
    parent_[child] = root;
    ClassInfo merged;
    merged.schema = ia.schema.valid() ? ia.schema : ib.schema;
    merged.constant = !ia.constant.empty() ? ia.constant : ib.constant;
    merged.evars = std::move(ia.evars);
    merged.evars.insert(merged.evars.end(), ib.evars.begin(), ib.evars.end());
    info_[child] = ClassInfo{};
    info_[root] = std::move(merged);
    return std::nullopt;
  }

  UnifyResult extract() {
    // Roots in deterministic (creation-order) sweep.
    std::vector<int> roots;
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i)
      if (find(i) == i) roots.push_back(i);

    // Dependency DAG: class -> classes of variables inside its schema.
    // A cycle is an occurs failure.  Emit bindings in dependency order.
    std::map<int, int> state;  // 0 unvisited, 1 on stack, 2 done
    std::vector<Binding> bindings;
    std::vector<std::string> unconstrained;
    std::optional<NotUnifiable> failure;

    std::function<void(int)> visit = [&](int root) {
      if (failure) return;
      int& st = state[root];
      if (st == 2) return;
      if (st == 1) {
        failure = NotUnifiable{NotUnifiable::OccursCycle,
                               "occurs cycle through " +
                                   (info_[root].evars.empty()
                                        ? std::string("a term class")
                                        : info_[root].evars.front())};
        return;
      }
      st = 1;
      const ClassInfo& ci = info_[root];
      if (ci.schema.valid()) {
        // visit classes of variables inside the schema
        std::function<void(const Term&)> deps = [&](const Term& t) {
          if (failure) return;
          if (t.is_var()) {
            if (eqs_.class_of(t.name()) == VarClass::Existential) {
              auto it = var_nodes_.find(t.name());
              if (it != var_nodes_.end()) visit(find(it->second));
            }
            return;
          }
          for (const Term& a : t.args()) deps(a);
        };
        deps(ci.schema);
      }
      if (failure) return;
      state[root] = 2;

      // Emit this class's bindings.
      if (ci.schema.valid()) {
        for (const std::string& v : ci.evars)
          bindings.push_back({v, ci.schema});
      } else if (!ci.constant.empty()) {
        for (const std::string& v : ci.evars)
          bindings.push_back({v, Term::var(ci.constant)});
      } else if (ci.evars.size() > 1) {
        // all-equal existential variables: earlier-swept ones bind to the
        // last, which stays unconstrained (a fresh free variable)
        const std::string& canon = ci.evars.back();
        for (std::size_t i = 0; i + 1 < ci.evars.size(); ++i)
          bindings.push_back({ci.evars[i], Term::var(canon)});
      }
    };

    for (int r : roots) {
      visit(r);
      if (failure) return *failure;
    }

    // Unconstrained existential variables: no binding emitted.
    std::set<std::string> bound;
    for (const Binding& b : bindings) bound.insert(b.var);
    for (const auto& [v, c] : eqs_.classes)
      if (c == VarClass::Existential && !bound.count(v))
        unconstrained.push_back(v);

    return TriangularSubst(std::move(bindings), std::move(unconstrained),
                           eqs_.classes);
  }

  const EquationSet& eqs_;
  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<ClassInfo> info_;
  std::unordered_map<std::string, int> var_nodes_;
  std::unordered_map<std::string, int> const_nodes_;
  std::unordered_map<const detail::TermNode*, int> app_nodes_;
};

}  // namespace detail

inline UnifyResult unify(const EquationSet& e) {
  detail::UnifySession session(e);
  return session.run();
}

// ---------------------------------------------------------------------------
// Equation extraction from a linking on a clean, cut-free (encoded) sequent.

struct ArityMismatch : std::runtime_error {
  explicit ArityMismatch(const std::string& m) : std::runtime_error(m) {}
};

namespace detail {

inline void classify_vars(const Formula& f, std::map<std::string, VarClass>& out) {
  switch (f.kind()) {
    case FKind::Atom:
      return;
    case FKind::Tensor:
    case FKind::Par:
      classify_vars(f.left(), out);
      classify_vars(f.right(), out);
      return;
    case FKind::Forall:
    case FKind::Exists:
      if (f.body().has_free_var(f.var()))  // vacuous quantifiers bind nothing
        out[f.var()] = f.kind() == FKind::Exists ? VarClass::Existential
                                                 : VarClass::Universal;
      classify_vars(f.body(), out);
      return;
  }
}

}  // namespace detail

/// Variable classification for a clean sequent: existential / universal
/// by binder, everything else free.  Vacuous quantifier variables are not
/// variables of the problem and are skipped.
inline std::map<std::string, VarClass> classify_vars(const Sequent& s) {
  std::map<std::string, VarClass> out;
  for (const Formula& f : s.formulas()) detail::classify_vars(f, out);
  return out;
}

/// Extracts the unification problem of a linking on a clean sequent
/// without cuts (encode cuts first).  One equation per argument pair of
/// each link.
inline EquationSet equations_of(const Sequent& host,
                                const std::vector<Link>& links) {
  EquationSet e;
  e.classes = classify_vars(host);
  for (const auto& [a, b] : links) {
    const Formula& fa = host.leaf(a);
    const Formula& fb = host.leaf(b);
    if (fa.pred().arity != fb.pred().arity)
      throw ArityMismatch("linked atoms " + fa.pred().str() + " / " +
                          fb.pred().str() + " have different arities");
    for (std::size_t i = 0; i < fa.terms().size(); ++i)
      e.equations.emplace_back(fa.terms()[i], fb.terms()[i]);
  }
  return e;
}

inline EquationSet equations_of(const Linking& l) {
  return equations_of(l.host(), l.links());
}

}  // namespace unet

#endif  // UNET_UNIFY_HPP
