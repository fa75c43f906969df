// Formulas, sequents and cut sequents as labelled directed forests.
//
// Formula trees are immutable and shared.  A node is identified inside a
// CutSequent by a LeafId / NodeId: the member index (formulas first, then
// the two formulas of each cut) and the child-index path from the member
// root.  Paths are stable under renaming, so cleansing never disturbs
// leaf identity.

#ifndef UNET_SYNTAX_HPP
#define UNET_SYNTAX_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "unet/term.hpp"

namespace unet {

enum class Polarity : std::uint8_t { Pos, Neg };

inline Polarity flip(Polarity p) {
  return p == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
}

struct PredicateSymbol {
  std::string base;
  Polarity polarity = Polarity::Pos;
  std::size_t arity = 0;

  PredicateSymbol dual() const { return {base, flip(polarity), arity}; }

  friend bool operator==(const PredicateSymbol& a, const PredicateSymbol& b) {
    return a.base == b.base && a.polarity == b.polarity && a.arity == b.arity;
  }
  friend bool operator!=(const PredicateSymbol& a, const PredicateSymbol& b) {
    return !(a == b);
  }

  std::string str() const {
    return (polarity == Polarity::Neg ? "~" : "") + base;
  }
};

enum class FKind : std::uint8_t { Atom, Tensor, Par, Forall, Exists };

inline bool is_binary(FKind k) { return k == FKind::Tensor || k == FKind::Par; }
inline bool is_quant(FKind k) { return k == FKind::Forall || k == FKind::Exists; }

class Formula;

namespace detail {
struct FormulaNode {
  FKind kind;
  // Atom
  PredicateSymbol pred;
  std::vector<Term> terms;
  // Binary / quantifier
  std::string var;               // quantifier-bound variable
  std::vector<Formula> children; // 2 for binary, 1 for quantifier
};
}  // namespace detail

using Path = std::vector<std::uint8_t>;

class Formula {
 public:
  Formula() = default;

  static Formula atom(PredicateSymbol p, std::vector<Term> ts) {
    auto n = std::make_shared<detail::FormulaNode>();
    n->kind = FKind::Atom;
    n->pred = std::move(p);
    n->terms = std::move(ts);
    return Formula(std::move(n));
  }
  static Formula tensor(Formula l, Formula r) {
    return binary(FKind::Tensor, std::move(l), std::move(r));
  }
  static Formula par(Formula l, Formula r) {
    return binary(FKind::Par, std::move(l), std::move(r));
  }
  static Formula forall(std::string x, Formula body) {
    return quant(FKind::Forall, std::move(x), std::move(body));
  }
  static Formula exists(std::string x, Formula body) {
    return quant(FKind::Exists, std::move(x), std::move(body));
  }
  static Formula binary(FKind k, Formula l, Formula r) {
    auto n = std::make_shared<detail::FormulaNode>();
    n->kind = k;
    n->children = {std::move(l), std::move(r)};
    return Formula(std::move(n));
  }
  static Formula quant(FKind k, std::string x, Formula body) {
    auto n = std::make_shared<detail::FormulaNode>();
    n->kind = k;
    n->var = std::move(x);
    n->children = {std::move(body)};
    return Formula(std::move(n));
  }

  bool valid() const { return node_ != nullptr; }
  FKind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == FKind::Atom; }
  const PredicateSymbol& pred() const { return node_->pred; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::string& var() const { return node_->var; }
  const Formula& left() const { return node_->children[0]; }
  const Formula& right() const { return node_->children[1]; }
  const Formula& body() const { return node_->children[0]; }
  const std::vector<Formula>& children() const { return node_->children; }

  const Formula& at(const Path& p) const {
    const Formula* f = this;
    for (auto step : p) f = &f->children()[step];
    return *f;
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case FKind::Atom:
        return a.pred() == b.pred() &&
               std::equal(a.terms().begin(), a.terms().end(),
                          b.terms().begin(), b.terms().end());
      case FKind::Tensor:
      case FKind::Par:
        return a.left() == b.left() && a.right() == b.right();
      case FKind::Forall:
      case FKind::Exists:
        return a.var() == b.var() && a.body() == b.body();
    }
    return false;
  }
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }

  /// Structural dual: atoms flip polarity, tensor<->par, forall<->exists.
  Formula dual() const {
    switch (kind()) {
      case FKind::Atom:
        return atom(pred().dual(), terms());
      case FKind::Tensor:
        return par(left().dual(), right().dual());
      case FKind::Par:
        return tensor(left().dual(), right().dual());
      case FKind::Forall:
        return exists(var(), body().dual());
      case FKind::Exists:
        return forall(var(), body().dual());
    }
    return {};
  }

  /// Capture-respecting substitution of terms for *free* variables.
  Formula substitute(const Subst& s) const {
    if (s.empty()) return *this;
    switch (kind()) {
      case FKind::Atom: {
        std::vector<Term> ts;
        ts.reserve(terms().size());
        bool changed = false;
        for (const Term& t : terms()) {
          Term t2 = s.apply(t);
          if (!(t2 == t)) changed = true;
          ts.push_back(std::move(t2));
        }
        return changed ? atom(pred(), std::move(ts)) : *this;
      }
      case FKind::Tensor:
      case FKind::Par: {
        Formula l = left().substitute(s), r = right().substitute(s);
        if (l == left() && r == right()) return *this;
        return binary(kind(), std::move(l), std::move(r));
      }
      case FKind::Forall:
      case FKind::Exists: {
        if (s.binds(var())) {
          Subst s2;
          for (const auto& [k, v] : s.entries())
            if (k != var()) s2.bind(k, v);
          if (s2.empty()) return *this;
          Formula b = body().substitute(s2);
          return b == body() ? *this : quant(kind(), var(), std::move(b));
        }
        Formula b = body().substitute(s);
        return b == body() ? *this : quant(kind(), var(), std::move(b));
      }
    }
    return {};
  }

  Formula substitute(const std::string& x, const Term& t) const {
    Subst s;
    s.bind(x, t);
    return substitute(s);
  }

  void free_vars(std::vector<std::string>& out, std::set<std::string>& seen,
                 std::set<std::string>& bound) const {
    switch (kind()) {
      case FKind::Atom:
        for (const Term& t : terms()) {
          for (const std::string& v : t.vars())
            if (!bound.count(v) && seen.insert(v).second) out.push_back(v);
        }
        return;
      case FKind::Tensor:
      case FKind::Par:
        left().free_vars(out, seen, bound);
        right().free_vars(out, seen, bound);
        return;
      case FKind::Forall:
      case FKind::Exists: {
        bool fresh = bound.insert(var()).second;
        body().free_vars(out, seen, bound);
        if (fresh) bound.erase(var());
        return;
      }
    }
  }

  /// Free variables in first-occurrence left-to-right order.
  std::vector<std::string> free_vars() const {
    std::vector<std::string> out;
    std::set<std::string> seen, bound;
    free_vars(out, seen, bound);
    return out;
  }

  bool has_free_var(const std::string& x) const {
    auto fv = free_vars();
    return std::find(fv.begin(), fv.end(), x) != fv.end();
  }

  /// Number of formula-tree nodes plus term symbol occurrences.
  std::uint64_t size() const {
    std::uint64_t n = 1;
    if (is_atom()) {
      for (const Term& t : terms()) n += t.tree_size();
    } else {
      for (const Formula& c : children()) n += c.size();
    }
    return n;
  }

  void leaf_paths(Path& here, std::vector<Path>& out) const {
    if (is_atom()) {
      out.push_back(here);
      return;
    }
    for (std::size_t i = 0; i < children().size(); ++i) {
      here.push_back(static_cast<std::uint8_t>(i));
      children()[i].leaf_paths(here, out);
      here.pop_back();
    }
  }

  std::vector<Path> leaf_paths() const {
    Path here;
    std::vector<Path> out;
    leaf_paths(here, out);
    return out;
  }

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> n)
      : node_(std::move(n)) {}
  std::shared_ptr<const detail::FormulaNode> node_;
};

/// Identifies an atom occurrence in a CutSequent: member index (formulas
/// first, then each cut contributing two members) plus tree path.
struct LeafId {
  std::size_t member = 0;
  Path path;

  friend bool operator==(const LeafId& a, const LeafId& b) {
    return a.member == b.member && a.path == b.path;
  }
  friend bool operator<(const LeafId& a, const LeafId& b) {
    if (a.member != b.member) return a.member < b.member;
    return a.path < b.path;
  }
  friend bool operator!=(const LeafId& a, const LeafId& b) {
    return !(a == b);
  }
};

class CutSequent {
 public:
  CutSequent() = default;
  explicit CutSequent(std::vector<Formula> fs) : formulas_(std::move(fs)) {}
  CutSequent(std::vector<Formula> fs,
             std::vector<std::pair<Formula, Formula>> cuts)
      : formulas_(std::move(fs)), cuts_(std::move(cuts)) {}

  const std::vector<Formula>& formulas() const { return formulas_; }
  const std::vector<std::pair<Formula, Formula>>& cuts() const {
    return cuts_;
  }
  std::vector<Formula>& formulas() { return formulas_; }
  std::vector<std::pair<Formula, Formula>>& cuts() { return cuts_; }

  bool empty() const { return formulas_.empty() && cuts_.empty(); }
  std::size_t member_count() const { return formulas_.size() + 2 * cuts_.size(); }

  /// Member access: formulas first, then cut lefts/rights pairwise.
  const Formula& member(std::size_t i) const {
    if (i < formulas_.size()) return formulas_[i];
    std::size_t j = i - formulas_.size();
    return (j % 2 == 0) ? cuts_[j / 2].first : cuts_[j / 2].second;
  }

  bool member_is_cut(std::size_t i) const { return i >= formulas_.size(); }

  /// For a cut member, index of the cut it belongs to.
  std::size_t cut_index_of(std::size_t member) const {
    return (member - formulas_.size()) / 2;
  }

  friend bool operator==(const CutSequent& a, const CutSequent& b) {
    if (a.formulas_.size() != b.formulas_.size() ||
        a.cuts_.size() != b.cuts_.size())
      return false;
    for (std::size_t i = 0; i < a.formulas_.size(); ++i)
      if (a.formulas_[i] != b.formulas_[i]) return false;
    for (std::size_t i = 0; i < a.cuts_.size(); ++i)
      if (a.cuts_[i].first != b.cuts_[i].first ||
          a.cuts_[i].second != b.cuts_[i].second)
        return false;
    return true;
  }
  friend bool operator!=(const CutSequent& a, const CutSequent& b) {
    return !(a == b);
  }

  /// All leaves, in canonical left-to-right order.
  std::vector<LeafId> leaves() const {
    std::vector<LeafId> out;
    for (std::size_t m = 0; m < member_count(); ++m)
      for (Path& p : member(m).leaf_paths())
        out.push_back({m, std::move(p)});
    return out;
  }

  const Formula& leaf(const LeafId& id) const {
    return member(id.member).at(id.path);
  }

  /// Free variables of the sequent.  Cut members contribute none: every
  /// free variable of a cut formula is bound in the cut.
  std::vector<std::string> free_vars() const {
    std::vector<std::string> out;
    std::set<std::string> seen, bound;
    for (const Formula& f : formulas_) f.free_vars(out, seen, bound);
    return out;
  }

  std::uint64_t size() const {
    std::uint64_t n = 0;
    for (std::size_t m = 0; m < member_count(); ++m) n += member(m).size();
    return n;
  }

 private:
  std::vector<Formula> formulas_;
  std::vector<std::pair<Formula, Formula>> cuts_;
};

using Sequent = CutSequent;

// ---------------------------------------------------------------------------
// Cleansing

/// Deterministic fresh-name supply: base name plus increasing numeric
/// suffix, skipping names already in use.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> taken) : taken_(std::move(taken)) {}

  std::string fresh(const std::string& base) {
    std::string stem = base;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back())))
      stem.pop_back();
    if (stem.empty()) stem = "v";
    for (std::uint64_t& k = next_[stem];; ++k) {
      std::string cand = stem + std::to_string(k + 1);
      if (taken_.insert(cand).second) {
        ++k;
        return cand;
      }
    }
  }

  void reserve(const std::string& name) { taken_.insert(name); }

 private:
  std::set<std::string> taken_;
  std::map<std::string, std::uint64_t> next_;
};

namespace detail {

inline void collect_all_vars(const Formula& f, std::set<std::string>& out) {
  if (f.is_atom()) {
    for (const Term& t : f.terms())
      for (const std::string& v : t.vars()) out.insert(v);
    return;
  }
  if (is_quant(f.kind())) out.insert(f.var());
  for (const Formula& c : f.children()) collect_all_vars(c, out);
}

// Renames binders so that all quantifier variables are pairwise distinct
// and distinct from free variables.  env maps in-scope bound names to
// their replacements.  Inner binders shadow outer ones.
inline Formula cleanse_formula(const Formula& f,
                               std::map<std::string, std::string>& env,
                               std::set<std::string>& used_binders,
                               FreshNames& names,
                               std::vector<std::pair<std::string, std::string>>&
                                   renaming) {
  switch (f.kind()) {
    case FKind::Atom: {
      std::vector<Term> ts;
      ts.reserve(f.terms().size());
      bool changed = false;
      for (const Term& t : f.terms()) {
        // substitute env over variables
        std::function<Term(const Term&)> go = [&](const Term& u) -> Term {
          if (u.is_var()) {
            auto it = env.find(u.name());
            return it == env.end() ? u : Term::var(it->second);
          }
          bool ch = false;
          std::vector<Term> as;
          as.reserve(u.args().size());
          for (const Term& a : u.args()) {
            Term a2 = go(a);
            if (!(a2 == a)) ch = true;
            as.push_back(std::move(a2));
          }
          return ch ? Term::app(u.name(), std::move(as)) : u;
        };
        Term t2 = go(t);
        if (!(t2 == t)) changed = true;
        ts.push_back(std::move(t2));
      }
      return changed ? Formula::atom(f.pred(), std::move(ts)) : f;
    }
    case FKind::Tensor:
    case FKind::Par: {
      Formula l = cleanse_formula(f.left(), env, used_binders, names, renaming);
      Formula r = cleanse_formula(f.right(), env, used_binders, names, renaming);
      if (l == f.left() && r == f.right()) return f;
      return Formula::binary(f.kind(), std::move(l), std::move(r));
    }
    case FKind::Forall:
    case FKind::Exists: {
      std::string x = f.var();
      std::string nx = x;
      if (!used_binders.insert(x).second) {
        nx = names.fresh(x);
        used_binders.insert(nx);
        renaming.emplace_back(x, nx);
      }
      auto it = env.find(x);
      std::optional<std::string> saved;
      if (it != env.end()) saved = it->second;
      if (nx != x)
        env[x] = nx;
      else
        env.erase(x);  // inner binder shadows any outer renaming
      Formula b = cleanse_formula(f.body(), env, used_binders, names, renaming);
      if (saved)
        env[x] = *saved;
      else
        env.erase(x);
      if (nx == x && b == f.body()) return f;
      return Formula::quant(f.kind(), nx, std::move(b));
    }
  }
  return {};
}

}  // namespace detail

struct CleanseResult {
  CutSequent sequent;
  // (old binder name, fresh name) in renaming order
  std::vector<std::pair<std::string, std::string>> renaming;
};

/// Renames bound variables so the sequent is clean: all quantified
/// variables pairwise distinct and distinct from every free variable.
/// Cut variables (free variables of cut formulas) count as bound at the
/// cut, so they too are renamed apart; the two formulas of a cut are
/// renamed in sync, preserving their duality.
inline CleanseResult cleanse(const CutSequent& s) {
  // All names anywhere in the sequent are off limits for fresh names.
  std::set<std::string> all;
  for (std::size_t m = 0; m < s.member_count(); ++m)
    detail::collect_all_vars(s.member(m), all);
  FreshNames names(all);

  // Free variables of the proper formulas are "binders" we must avoid:
  // seed them as used so bound variables get renamed away from them.
  std::set<std::string> used;
  for (const std::string& v : s.free_vars()) used.insert(v);

  std::vector<std::pair<std::string, std::string>> renaming;
  std::vector<Formula> fs;
  fs.reserve(s.formulas().size());
  for (const Formula& f : s.formulas()) {
    std::map<std::string, std::string> env;
    fs.push_back(detail::cleanse_formula(f, env, used, names, renaming));
  }

  std::vector<std::pair<Formula, Formula>> cuts;
  cuts.reserve(s.cuts().size());
  for (const auto& [a, b] : s.cuts()) {
    // The two formulas of a cut are mirror images (right = dual(left)),
    // sharing their bound variable names position for position.  Rename
    // the cut variables (free vars of the pair) apart, cleanse the left
    // side, and rebuild the right as its dual so the pair stays in sync.
    Subst cv;
    std::map<std::string, std::string> env;
    for (const std::string& v : a.free_vars()) {
      if (!used.insert(v).second) {
        std::string nv = names.fresh(v);
        used.insert(nv);
        renaming.emplace_back(v, nv);
        cv.bind(v, Term::var(nv));
      }
    }
    Formula a2 = a.substitute(cv);
    a2 = detail::cleanse_formula(a2, env, used, names, renaming);
    Formula b2 = a2.dual();
    cuts.emplace_back(std::move(a2), std::move(b2));
  }
  return {CutSequent(std::move(fs), std::move(cuts)), std::move(renaming)};
}

/// A sequent is clean when cleansing it is the identity.
inline bool is_clean(const CutSequent& s) {
  return cleanse(s).sequent == s;
}

// ---------------------------------------------------------------------------
// Cut encoding

/// Replaces each cut (A, ~A) by the existentially closed tensor
/// ex x1...xn (A * ~A) over A's free variables in first-occurrence order.
/// Leaves keep their identity: member index m of a cut half maps to the
/// encoded formula's member, with the path extended by the closure
/// quantifiers and the tensor branch.
inline Sequent encode_cuts(const CutSequent& s) {
  std::vector<Formula> fs = s.formulas();
  for (const auto& [a, b] : s.cuts()) {
    Formula enc = Formula::tensor(a, b);
    std::vector<std::string> xs = a.free_vars();
    for (auto it = xs.rbegin(); it != xs.rend(); ++it)
      enc = Formula::exists(*it, std::move(enc));
    fs.push_back(std::move(enc));
  }
  return Sequent(std::move(fs));
}

/// Maps a leaf of the original cut sequent to the same leaf in
/// encode_cuts(s).
inline LeafId encode_leaf(const CutSequent& s, const LeafId& id) {
  if (!s.member_is_cut(id.member)) return id;
  std::size_t cut = s.cut_index_of(id.member);
  bool right = ((id.member - s.formulas().size()) % 2) == 1;
  std::size_t closure = s.cuts()[cut].first.free_vars().size();
  Path p(closure, 0);
  p.push_back(right ? 1 : 0);
  p.insert(p.end(), id.path.begin(), id.path.end());
  return {s.formulas().size() + cut, std::move(p)};
}

/// Inverse of encode_leaf.
inline LeafId decode_leaf(const CutSequent& s, const LeafId& id) {
  if (id.member < s.formulas().size()) return id;
  std::size_t cut = id.member - s.formulas().size();
  std::size_t closure = s.cuts()[cut].first.free_vars().size();
  bool right = id.path[closure] == 1;
  Path p(id.path.begin() + closure + 1, id.path.end());
  return {s.formulas().size() + 2 * cut + (right ? 1 : 0), std::move(p)};
}

}  // namespace unet

#endif  // UNET_SYNTAX_HPP
