// Linkings: the data of a unification net.
//
// A linking on a (cut) sequent is a set of disjoint leaf pairs covering
// every leaf, each pair joining atoms with dual predicate base names and
// equal arities.  Term vectors at the two ends may differ; making them
// unifiable is the correctness criterion's job, not the linking's.

#ifndef UNET_LINKING_HPP
#define UNET_LINKING_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "unet/parse.hpp"
#include "unet/syntax.hpp"

namespace unet {

using Link = std::pair<LeafId, LeafId>;

class Linking {
 public:
  Linking() = default;
  Linking(CutSequent host, std::vector<Link> links)
      : host_(std::move(host)), links_(std::move(links)) {
    normalize();
  }

  const CutSequent& host() const { return host_; }
  const std::vector<Link>& links() const { return links_; }

  /// Structural equality of host and link set.
  friend bool operator==(const Linking& a, const Linking& b) {
    return a.host_ == b.host_ && a.links_ == b.links_;
  }
  friend bool operator!=(const Linking& a, const Linking& b) {
    return !(a == b);
  }

  /// Same link set (by leaf id), ignoring the hosts.
  bool same_links(const Linking& o) const { return links_ == o.links_; }

  /// Checks the linking invariants; returns a diagnostic or nullopt.
  std::optional<std::string> validate() const {
    std::set<LeafId> seen;
    std::vector<LeafId> all = host_.leaves();
    std::set<LeafId> leafset(all.begin(), all.end());
    for (const auto& [a, b] : links_) {
      if (!leafset.count(a) || !leafset.count(b))
        return "link endpoint is not a leaf of the sequent";
      if (a == b) return "link joins a leaf to itself";
      if (!seen.insert(a).second || !seen.insert(b).second)
        return "links are not disjoint";
      const Formula& fa = host_.leaf(a);
      const Formula& fb = host_.leaf(b);
      if (fa.pred().base != fb.pred().base ||
          fa.pred().polarity == fb.pred().polarity)
        return "linked predicates are not dual: " + fa.pred().str() + " / " +
               fb.pred().str();
      if (fa.pred().arity != fb.pred().arity)
        return "linked predicates have different arities";
    }
    if (seen.size() != all.size()) return "linking does not cover every leaf";
    return std::nullopt;
  }

  std::uint64_t size() const { return host_.size() + links_.size(); }

 private:
  void normalize() {
    for (auto& l : links_)
      if (l.second < l.first) std::swap(l.first, l.second);
    std::sort(links_.begin(), links_.end());
  }

  CutSequent host_;
  std::vector<Link> links_;
};

/// Map leaf ids of a sequent to their left-to-right ordinal and back.
struct LeafIndex {
  explicit LeafIndex(const CutSequent& s) : leaves(s.leaves()) {
    for (std::size_t i = 0; i < leaves.size(); ++i) index[leaves[i]] = i;
  }
  std::size_t of(const LeafId& id) const { return index.at(id); }
  const LeafId& at(std::size_t i) const { return leaves.at(i); }
  std::size_t count() const { return leaves.size(); }

  std::vector<LeafId> leaves;
  std::map<LeafId, std::size_t> index;
};

// ---------------------------------------------------------------------------
// Net text format: sequent line(s), then "links: (i j) (k l) ...".

inline Linking parse_net(std::string_view text, Signature& sig) {
  auto pos = text.find("links:");
  if (pos == std::string_view::npos)
    throw ParseError(1, 1, "net is missing a 'links:' line");
  CutSequent host = parse_sequent(text.substr(0, pos), sig);
  LeafIndex idx(host);
  std::string_view rest = text.substr(pos + 6);
  detail::Cursor cur(rest);
  std::vector<Link> links;
  while (!cur.eof()) {
    cur.expect('(');
    auto a = cur.try_integer();
    auto b = cur.try_integer();
    if (!a || !b) cur.fail("expected two leaf numbers");
    cur.expect(')');
    if (*a < 0 || *b < 0 || static_cast<std::size_t>(*a) >= idx.count() ||
        static_cast<std::size_t>(*b) >= idx.count())
      cur.fail("leaf number out of range");
    links.emplace_back(idx.at(*a), idx.at(*b));
  }
  Linking l(std::move(host), std::move(links));
  if (auto err = l.validate()) throw MalformedCut(*err);
  return l;
}

inline Linking parse_net(std::string_view text) {
  Signature sig;
  return parse_net(text, sig);
}

inline std::string print(const Linking& l) {
  std::ostringstream os;
  os << print(l.host()) << "\n";
  LeafIndex idx(l.host());
  os << "links:";
  for (const auto& [a, b] : l.links())
    os << " (" << idx.of(a) << " " << idx.of(b) << ")";
  os << "\n";
  return os.str();
}

/// Convenience: build a linking from leaf ordinals.
inline Linking make_linking(CutSequent host,
                            std::vector<std::pair<std::size_t, std::size_t>>
                                pairs) {
  LeafIndex idx(host);
  std::vector<Link> links;
  links.reserve(pairs.size());
  for (auto [a, b] : pairs) links.emplace_back(idx.at(a), idx.at(b));
  return Linking(std::move(host), std::move(links));
}

}  // namespace unet

#endif  // UNET_LINKING_HPP
