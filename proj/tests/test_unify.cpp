#include "catch_amalgamated.hpp"

#include <map>
#include <set>
#include <string>

#include "oracle.hpp"
#include "unet/parse.hpp"
#include "unet/unify.hpp"

using namespace unet;

namespace {

EquationSet eqs(std::vector<std::pair<std::string, std::string>> pairs,
                std::map<std::string, VarClass> classes) {
  Signature sig;
  EquationSet e;
  for (auto& [s, t] : pairs)
    e.equations.emplace_back(parse_term(s, sig), parse_term(t, sig));
  e.classes = std::move(classes);
  return e;
}

std::map<std::string, Term> bindings_of(const TriangularSubst& s) {
  std::map<std::string, Term> out;
  for (const Binding& b : s.bindings()) out[b.var] = b.term;
  return out;
}

}  // namespace

TEST_CASE("worked unification example") {
  // E = {g(u)=w, f(v)=f(x), a=a, h(z,a)=y}, solving for v, w, y with
  // u, x universal and z, a free.
  EquationSet e = eqs({{"g(u)", "w"}, {"f(v)", "f(x)"}, {"a", "a"},
                       {"h(z,a)", "y"}},
                      {{"v", VarClass::Existential},
                       {"w", VarClass::Existential},
                       {"y", VarClass::Existential},
                       {"u", VarClass::Universal},
                       {"x", VarClass::Universal}});
  UnifyResult r = unify(e);
  REQUIRE(unified(r));
  const TriangularSubst& s = mgu_of(r);
  auto m = bindings_of(s);
  REQUIRE(m.size() == 3);
  CHECK(m.at("v").str() == "x");
  CHECK(m.at("w").str() == "g(u)");
  CHECK(m.at("y").str() == "h(z,a)");
  CHECK(s.unconstrained().empty());

  // precedences: v before x, w before u
  auto pv = s.precedences();
  std::set<std::pair<std::string, std::string>> p(pv.begin(), pv.end());
  CHECK(p == std::set<std::pair<std::string, std::string>>{{"v", "x"},
                                                           {"w", "u"}});

  auto om = oracle::robinson(e);
  REQUIRE(om);
  CHECK(oracle::same_mgu(s, *om, e));
  CHECK(oracle::precedences(*om, e) == p);
}

TEST_CASE("existential meets universal") {
  EquationSet e = eqs({{"x", "y"}}, {{"x", VarClass::Existential},
                                     {"y", VarClass::Universal}});
  UnifyResult r = unify(e);
  REQUIRE(unified(r));
  auto m = bindings_of(mgu_of(r));
  REQUIRE(m.size() == 1);
  CHECK(m.at("x").str() == "y");
  auto p = mgu_of(r).precedences();
  REQUIRE(p.size() == 1);
  CHECK(p[0] == std::pair<std::string, std::string>{"x", "y"});
}

TEST_CASE("two existentials meet: fresh free variable") {
  EquationSet e = eqs({{"x", "y"}}, {{"x", VarClass::Existential},
                                     {"y", VarClass::Existential}});
  UnifyResult r = unify(e);
  REQUIRE(unified(r));
  const TriangularSubst& s = mgu_of(r);
  // one binding, one unconstrained, equal denoted assignments
  CHECK(s.bindings().size() == 1);
  CHECK(s.unconstrained().size() == 1);
  CHECK(s.assignment("x") == s.assignment("y"));
  CHECK(s.assignment("x").is_var());
  CHECK(s.precedences().empty());
}

TEST_CASE("clash") {
  EquationSet e = eqs({{"x", "a"}, {"x", "b"}},
                      {{"x", VarClass::Existential}});
  UnifyResult r = unify(e);
  REQUIRE(!unified(r));
  CHECK(failure_of(r).kind == NotUnifiable::Clash);

  // function symbol clash
  EquationSet e2 = eqs({{"x", "f(a)"}, {"x", "g(a)"}},
                       {{"x", VarClass::Existential}});
  REQUIRE(!unified(unify(e2)));

  // universal vs application
  EquationSet e3 = eqs({{"u", "f(a)"}}, {{"u", VarClass::Universal}});
  UnifyResult r3 = unify(e3);
  REQUIRE(!unified(r3));
  CHECK(failure_of(r3).kind == NotUnifiable::Clash);
}

TEST_CASE("occurs cycle") {
  EquationSet e = eqs({{"x", "f(y)"}, {"y", "f(x)"}},
                      {{"x", VarClass::Existential},
                       {"y", VarClass::Existential}});
  UnifyResult r = unify(e);
  REQUIRE(!unified(r));
  CHECK(failure_of(r).kind == NotUnifiable::OccursCycle);

  EquationSet e2 = eqs({{"x", "f(x)"}}, {{"x", VarClass::Existential}});
  UnifyResult r2 = unify(e2);
  REQUIRE(!unified(r2));
  CHECK(failure_of(r2).kind == NotUnifiable::OccursCycle);
}

TEST_CASE("triangular chains resolve through earlier bindings") {
  // x1 = a, x2 = g(x1), x3 = h(x2)
  EquationSet e = eqs({{"x3", "h(x2)"}, {"x2", "g(x1)"}, {"x1", "a"}},
                      {{"x1", VarClass::Existential},
                       {"x2", VarClass::Existential},
                       {"x3", VarClass::Existential}});
  UnifyResult r = unify(e);
  REQUIRE(unified(r));
  const TriangularSubst& s = mgu_of(r);
  CHECK(s.assignment("x3").str() == "h(g(a))");
  CHECK(s.assignment("x2").str() == "g(a)");
  // triangularity: every binding term only references earlier bindings
  std::set<std::string> seen;
  for (const Binding& b : s.bindings()) {
    for (const std::string& v : b.term.vars())
      if (s.binds(v)) CHECK(seen.count(v));
    seen.insert(b.var);
  }
}

TEST_CASE("exponential chain: precedences stay quadratic") {
  // x1 = f(y,y), xi = g(x(i-1), x(i-1)); y universal.  The denoted mgu
  // for x_n has 2^n leaves, but precedence extraction never expands it.
  auto build = [](int n) {
    EquationSet e;
    Signature sig;
    e.classes["y"] = VarClass::Universal;
    e.equations.emplace_back(parse_term("x1", sig), parse_term("f(y,y)", sig));
    e.classes["x1"] = VarClass::Existential;
    for (int i = 2; i <= n; ++i) {
      std::string xi = "x" + std::to_string(i);
      std::string prev = "x" + std::to_string(i - 1);
      e.equations.emplace_back(
          Term::var(xi),
          Term::app("g", {Term::var(prev), Term::var(prev)}));
      e.classes[xi] = VarClass::Existential;
    }
    return e;
  };

  SECTION("agrees with explicit mgu at small n") {
    for (int n = 1; n <= 6; ++n) {
      EquationSet e = build(n);
      UnifyResult r = unify(e);
      REQUIRE(unified(r));
      auto om = oracle::robinson(e);
      REQUIRE(om);
      CHECK(oracle::same_mgu(mgu_of(r), *om, e));
      auto pv = mgu_of(r).precedences();
      std::set<std::pair<std::string, std::string>> p(pv.begin(), pv.end());
      CHECK(p == oracle::precedences(*om, e));
    }
  }

  SECTION("n = 24 without expansion") {
    EquationSet e = build(24);
    std::uint64_t before = term_nodes_allocated();
    UnifyResult r = unify(e);
    REQUIRE(unified(r));
    auto p = mgu_of(r).precedences();
    std::uint64_t after = term_nodes_allocated();
    CHECK(p.size() == 24);  // every xi leaps to y
    for (auto& [x, y] : p) CHECK(y == "y");
    // allocations bounded well below any expansion of the mgu
    CHECK(after - before < 24 * 24 * 4 + 64);
    // the explicit expansion would exceed a million nodes
    CHECK_THROWS_AS(mgu_of(r).apply_mgu(Term::var("x24"), 1000000),
                    CapExceeded);
  }
}

TEST_CASE("apply_mgu") {
  SECTION("empty substitution") {
    TriangularSubst s;
    Term t = parse_term("f(g(x),y)");
    CHECK(s.apply_mgu(t) == t);
  }
  SECTION("expansion") {
    EquationSet e = eqs({{"x", "y"}}, {{"x", VarClass::Existential},
                                       {"y", VarClass::Universal}});
    UnifyResult r = unify(e);
    CHECK(mgu_of(r).apply_mgu(Term::var("x")).str() == "y");
  }
}

TEST_CASE("equations_of") {
  SECTION("worked example") {
    Signature sig;
    Sequent host = parse_sequent(
        "all u. all x. ex v. ex w. ex y. "
        "(~P(g(u),f(v),a) | P(w,f(x),a)) | (Q(h(z,a)) | ~Q(y))",
        sig);
    REQUIRE(is_clean(host));
    LeafIndex idx(host);
    std::vector<Link> links{{idx.at(0), idx.at(1)}, {idx.at(2), idx.at(3)}};
    EquationSet e = equations_of(host, links);
    REQUIRE(e.equations.size() == 4);
    CHECK(e.equations[0].first.str() == "g(u)");
    CHECK(e.equations[0].second.str() == "w");
    CHECK(e.equations[3].first.str() == "h(z,a)");
    CHECK(e.equations[3].second.str() == "y");
    CHECK(e.class_of("u") == VarClass::Universal);
    CHECK(e.class_of("v") == VarClass::Existential);
    CHECK(e.class_of("z") == VarClass::Free);
  }
  SECTION("nullary link yields no equations") {
    Sequent host = parse_sequent("P, ~P");
    LeafIndex idx(host);
    EquationSet e = equations_of(host, {{idx.at(0), idx.at(1)}});
    CHECK(e.equations.empty());
  }
  SECTION("vacuous quantifiers are not problem variables") {
    Sequent host = parse_sequent("all x. ex y. all z. P(z,c), ex w. ~P(w,c)");
    auto classes = classify_vars(host);
    CHECK(!classes.count("x"));
    CHECK(!classes.count("y"));
    CHECK(classes.at("z") == VarClass::Universal);
    CHECK(classes.at("w") == VarClass::Existential);
  }
}
