// First-order terms as immutable shared DAGs.
//
// A Term is a variable or an application of a function symbol (constants
// are variables from the parser's point of view: a bare lowercase
// identifier is a variable, and free variables behave exactly like
// constants during unification).  Nodes are reference counted and never
// mutated, so terms can be shared freely across threads and across
// substitution results.

#ifndef UNET_TERM_HPP
#define UNET_TERM_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace unet {

class Term;

namespace detail {

inline std::atomic<std::uint64_t>& term_alloc_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

struct TermNode {
  bool is_var;
  std::string name;
  std::vector<Term> args;

  TermNode(bool v, std::string n, std::vector<Term> a);
};

}  // namespace detail

/// Number of term nodes allocated so far, process-wide.  Used by the
/// benchmark harness to certify allocation bounds.
inline std::uint64_t term_nodes_allocated() {
  return detail::term_alloc_counter().load(std::memory_order_relaxed);
}

class Term {
 public:
  Term() = default;

  static Term var(std::string name) {
    return Term(std::make_shared<detail::TermNode>(true, std::move(name),
                                                   std::vector<Term>{}));
  }

  static Term app(std::string fn, std::vector<Term> args) {
    return Term(std::make_shared<detail::TermNode>(false, std::move(fn),
                                                   std::move(args)));
  }

  static Term constant(std::string name) { return app(std::move(name), {}); }

  bool valid() const { return node_ != nullptr; }
  bool is_var() const { return node_->is_var; }
  bool is_app() const { return !node_->is_var; }
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }

  const detail::TermNode* raw() const { return node_.get(); }

  /// Structural equality.  Shared subterms compare fast via pointer hits.
  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.is_var() != b.is_var() || a.name() != b.name()) return false;
    if (a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!(a.args()[i] == b.args()[i])) return false;
    return true;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

  /// Total order for use in sets/maps; structural.
  friend bool operator<(const Term& a, const Term& b) {
    return a.compare(b) < 0;
  }

  int compare(const Term& o) const {
    if (node_ == o.node_) return 0;
    if (is_var() != o.is_var()) return is_var() ? -1 : 1;
    if (int c = name().compare(o.name())) return c < 0 ? -1 : 1;
    if (args().size() != o.args().size())
      return args().size() < o.args().size() ? -1 : 1;
    for (std::size_t i = 0; i < args().size(); ++i)
      if (int c = args()[i].compare(o.args()[i])) return c;
    return 0;
  }

  /// Size of the term as a tree (no sharing), i.e. number of symbol
  /// occurrences.  Exponential results are the caller's problem; use
  /// tree_size_capped when a bound matters.
  std::uint64_t tree_size() const {
    std::uint64_t n = 1;
    for (const Term& t : args()) n += t.tree_size();
    return n;
  }

  /// Tree size, but returns cap+1 as soon as the count exceeds cap.
  std::uint64_t tree_size_capped(std::uint64_t cap) const {
    std::uint64_t n = 1;
    for (const Term& t : args()) {
      if (n > cap) return cap + 1;
      n += t.tree_size_capped(cap);
    }
    return n;
  }

  /// Number of occurrences of variable x in the tree expansion.
  std::uint64_t count_var(const std::string& x) const {
    if (is_var()) return name() == x ? 1 : 0;
    std::uint64_t n = 0;
    for (const Term& t : args()) n += t.count_var(x);
    return n;
  }

  bool contains_var(const std::string& x) const {
    if (is_var()) return name() == x;
    for (const Term& t : args())
      if (t.contains_var(x)) return true;
    return false;
  }

  void collect_vars(std::vector<std::string>& out,
                    std::set<std::string>& seen) const {
    if (is_var()) {
      if (seen.insert(name()).second) out.push_back(name());
      return;
    }
    for (const Term& t : args()) t.collect_vars(out, seen);
  }

  /// Free variables in first-occurrence (left-to-right) order.
  std::vector<std::string> vars() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_vars(out, seen);
    return out;
  }

  void print(std::ostream& os) const {
    os << name();
    if (is_app() && !args().empty()) {
      os << '(';
      for (std::size_t i = 0; i < args().size(); ++i) {
        if (i) os << ',';
        args()[i].print(os);
      }
      os << ')';
    }
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> n)
      : node_(std::move(n)) {}
  std::shared_ptr<const detail::TermNode> node_;
};

namespace detail {
inline TermNode::TermNode(bool v, std::string n, std::vector<Term> a)
    : is_var(v), name(std::move(n)), args(std::move(a)) {
  term_alloc_counter().fetch_add(1, std::memory_order_relaxed);
}
}  // namespace detail

inline std::ostream& operator<<(std::ostream& os, const Term& t) {
  t.print(os);
  return os;
}

/// Thrown when an expansion would exceed a configured node budget.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Simultaneous substitution of terms for variables.
class Subst {
 public:
  Subst() = default;

  void bind(const std::string& x, Term t) { map_[x] = std::move(t); }
  bool binds(const std::string& x) const { return map_.count(x) != 0; }
  const Term* lookup(const std::string& x) const {
    auto it = map_.find(x);
    return it == map_.end() ? nullptr : &it->second;
  }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::unordered_map<std::string, Term>& entries() const { return map_; }

  Term apply(const Term& t) const {
    if (t.is_var()) {
      if (const Term* b = lookup(t.name())) return *b;
      return t;
    }
    bool changed = false;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) {
      Term a2 = apply(a);
      if (!(a2 == a)) changed = true;
      args.push_back(std::move(a2));
    }
    if (!changed) return t;
    return Term::app(t.name(), std::move(args));
  }

 private:
  std::unordered_map<std::string, Term> map_;
};

}  // namespace unet

#endif  // UNET_TERM_HPP
