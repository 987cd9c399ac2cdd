#pragma once
// Core abstract syntax: types, terms, values and definitions, with named
// binders. Substitution is capture-avoiding (variables for variables only)
// and alpha-equivalence is decidable.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace mdot {

using Name = std::string;
using Location = std::uint64_t;

template <class... Fs> struct Overloaded : Fs... { using Fs::operator()...; };
template <class... Fs> Overloaded(Fs...) -> Overloaded<Fs...>;

struct TypeExpr;
struct Term;
struct Value;
struct Def;
using TypePtr = std::shared_ptr<const TypeExpr>;
using TermPtr = std::shared_ptr<const Term>;
using ValuePtr = std::shared_ptr<const Value>;
using DefPtr = std::shared_ptr<const Def>;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct TopT {};
struct BotT {};
struct FieldDeclT { Name label; TypePtr type; };              // {a: T}
struct TypeDeclT { Name label; TypePtr lo; TypePtr hi; };     // {A: S..U}
struct SelT { Name subject; Name label; };                    // x.A
struct AndT { TypePtr lhs; TypePtr rhs; };                    // T /\ U
struct RecT { Name self; TypePtr body; };                     // mu(self: body)
struct AllT { Name param; TypePtr domain; TypePtr codomain; };// all(x: S) T; x scopes over T only
struct RefTypeT { TypePtr cell; };                            // Ref T

struct TypeExpr {
  std::variant<TopT, BotT, FieldDeclT, TypeDeclT, SelT, AndT, RecT, AllT,
               RefTypeT>
      node;
};

// ---------------------------------------------------------------------------
// Terms, values, definitions
// ---------------------------------------------------------------------------

struct VarE { Name name; };
struct ValE { ValuePtr value; };
struct FieldSelE { Name subject; Name label; };   // x.a
struct AppE { Name fn; Name arg; };               // x y
struct LetE { Name binder; TermPtr head; TermPtr body; };
struct RefNewE { Name subject; TypePtr type; };   // ref x T
struct DerefE { Name subject; };                  // !x
struct AsgnE { Name target; Name source; };       // x := y

struct Term {
  std::variant<VarE, ValE, FieldSelE, AppE, LetE, RefNewE, DerefE, AsgnE> node;
};

struct ObjV { Name self; TypePtr type; DefPtr defs; };  // nu(self: T) d; self scopes over T and d
struct LamV { Name param; TypePtr domain; TermPtr body; }; // param scopes over body only
struct LocV { Location loc; };

struct Value {
  std::variant<ObjV, LamV, LocV> node;
};

struct FieldDefD { Name label; TermPtr term; };   // {a = t}
struct TypeDefD { Name label; TypePtr type; };    // {A = T}
struct AndDefD { DefPtr lhs; DefPtr rhs; };

struct Def {
  std::variant<FieldDefD, TypeDefD, AndDefD> node;
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

namespace types {
inline TypePtr make(TypeExpr t) { return std::make_shared<const TypeExpr>(std::move(t)); }
inline TypePtr top() { static const TypePtr t = make({TopT{}}); return t; }
inline TypePtr bot() { static const TypePtr t = make({BotT{}}); return t; }
inline TypePtr field(Name a, TypePtr T) { return make({FieldDeclT{std::move(a), std::move(T)}}); }
inline TypePtr decl(Name A, TypePtr lo, TypePtr hi) { return make({TypeDeclT{std::move(A), std::move(lo), std::move(hi)}}); }
inline TypePtr sel(Name x, Name A) { return make({SelT{std::move(x), std::move(A)}}); }
inline TypePtr and_(TypePtr l, TypePtr r) { return make({AndT{std::move(l), std::move(r)}}); }
inline TypePtr rec(Name self, TypePtr body) { return make({RecT{std::move(self), std::move(body)}}); }
inline TypePtr all(Name x, TypePtr S, TypePtr T) { return make({AllT{std::move(x), std::move(S), std::move(T)}}); }
inline TypePtr ref(TypePtr T) { return make({RefTypeT{std::move(T)}}); }
} // namespace types

namespace terms {
inline TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }
inline ValuePtr make_value(Value v) { return std::make_shared<const Value>(std::move(v)); }
inline DefPtr make_def(Def d) { return std::make_shared<const Def>(std::move(d)); }

inline TermPtr var(Name x) { return make({VarE{std::move(x)}}); }
inline TermPtr val(ValuePtr v) { return make({ValE{std::move(v)}}); }
inline TermPtr field_sel(Name x, Name a) { return make({FieldSelE{std::move(x), std::move(a)}}); }
inline TermPtr app(Name f, Name y) { return make({AppE{std::move(f), std::move(y)}}); }
inline TermPtr let_(Name x, TermPtr head, TermPtr body) { return make({LetE{std::move(x), std::move(head), std::move(body)}}); }
inline TermPtr ref_new(Name x, TypePtr T) { return make({RefNewE{std::move(x), std::move(T)}}); }
inline TermPtr deref(Name x) { return make({DerefE{std::move(x)}}); }
inline TermPtr asgn(Name x, Name y) { return make({AsgnE{std::move(x), std::move(y)}}); }

inline ValuePtr obj(Name self, TypePtr T, DefPtr d) { return make_value({ObjV{std::move(self), std::move(T), std::move(d)}}); }
inline ValuePtr lam(Name x, TypePtr S, TermPtr body) { return make_value({LamV{std::move(x), std::move(S), std::move(body)}}); }
inline ValuePtr loc(Location l) { return make_value({LocV{l}}); }

inline DefPtr field_def(Name a, TermPtr t) { return make_def({FieldDefD{std::move(a), std::move(t)}}); }
inline DefPtr type_def(Name A, TypePtr T) { return make_def({TypeDefD{std::move(A), std::move(T)}}); }
inline DefPtr and_def(DefPtr l, DefPtr r) { return make_def({AndDefD{std::move(l), std::move(r)}}); }
} // namespace terms

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

namespace detail {
inline void fv_type(const TypePtr& t, std::vector<Name>& bound, std::set<Name>& out);
inline void fv_term(const TermPtr& t, std::vector<Name>& bound, std::set<Name>& out);
inline void fv_value(const ValuePtr& v, std::vector<Name>& bound, std::set<Name>& out);
inline void fv_def(const DefPtr& d, std::vector<Name>& bound, std::set<Name>& out);

inline bool is_bound(const std::vector<Name>& bound, const Name& x) {
  for (auto it = bound.rbegin(); it != bound.rend(); ++it)
    if (*it == x) return true;
  return false;
}

inline void fv_occ(const Name& x, std::vector<Name>& bound, std::set<Name>& out) {
  if (!is_bound(bound, x)) out.insert(x);
}

inline void fv_type(const TypePtr& t, std::vector<Name>& bound, std::set<Name>& out) {
  std::visit(Overloaded{
    [&](const TopT&) {},
    [&](const BotT&) {},
    [&](const FieldDeclT& n) { fv_type(n.type, bound, out); },
    [&](const TypeDeclT& n) { fv_type(n.lo, bound, out); fv_type(n.hi, bound, out); },
    [&](const SelT& n) { fv_occ(n.subject, bound, out); },
    [&](const AndT& n) { fv_type(n.lhs, bound, out); fv_type(n.rhs, bound, out); },
    [&](const RecT& n) {
      bound.push_back(n.self);
      fv_type(n.body, bound, out);
      bound.pop_back();
    },
    [&](const AllT& n) {
      fv_type(n.domain, bound, out);
      bound.push_back(n.param);
      fv_type(n.codomain, bound, out);
      bound.pop_back();
    },
    [&](const RefTypeT& n) { fv_type(n.cell, bound, out); },
  }, t->node);
}

inline void fv_term(const TermPtr& t, std::vector<Name>& bound, std::set<Name>& out) {
  std::visit(Overloaded{
    [&](const VarE& n) { fv_occ(n.name, bound, out); },
    [&](const ValE& n) { fv_value(n.value, bound, out); },
    [&](const FieldSelE& n) { fv_occ(n.subject, bound, out); },
    [&](const AppE& n) { fv_occ(n.fn, bound, out); fv_occ(n.arg, bound, out); },
    [&](const LetE& n) {
      fv_term(n.head, bound, out);
      bound.push_back(n.binder);
      fv_term(n.body, bound, out);
      bound.pop_back();
    },
    [&](const RefNewE& n) { fv_occ(n.subject, bound, out); fv_type(n.type, bound, out); },
    [&](const DerefE& n) { fv_occ(n.subject, bound, out); },
    [&](const AsgnE& n) { fv_occ(n.target, bound, out); fv_occ(n.source, bound, out); },
  }, t->node);
}

inline void fv_value(const ValuePtr& v, std::vector<Name>& bound, std::set<Name>& out) {
  std::visit(Overloaded{
    [&](const ObjV& n) {
      bound.push_back(n.self);
      fv_type(n.type, bound, out);
      fv_def(n.defs, bound, out);
      bound.pop_back();
    },
    [&](const LamV& n) {
      fv_type(n.domain, bound, out);
      bound.push_back(n.param);
      fv_term(n.body, bound, out);
      bound.pop_back();
    },
    [&](const LocV&) {},
  }, v->node);
}

inline void fv_def(const DefPtr& d, std::vector<Name>& bound, std::set<Name>& out) {
  std::visit(Overloaded{
    [&](const FieldDefD& n) { fv_term(n.term, bound, out); },
    [&](const TypeDefD& n) { fv_type(n.type, bound, out); },
    [&](const AndDefD& n) { fv_def(n.lhs, bound, out); fv_def(n.rhs, bound, out); },
  }, d->node);
}
} // namespace detail

inline std::set<Name> free_vars(const TypePtr& t) {
  std::set<Name> out; std::vector<Name> bound;
  detail::fv_type(t, bound, out);
  return out;
}
inline std::set<Name> free_vars(const TermPtr& t) {
  std::set<Name> out; std::vector<Name> bound;
  detail::fv_term(t, bound, out);
  return out;
}
inline std::set<Name> free_vars(const ValuePtr& v) {
  std::set<Name> out; std::vector<Name> bound;
  detail::fv_value(v, bound, out);
  return out;
}
inline std::set<Name> free_vars(const DefPtr& d) {
  std::set<Name> out; std::vector<Name> bound;
  detail::fv_def(d, bound, out);
  return out;
}

// Smallest prime-extension of `base` not contained in `avoid`.
inline Name fresh_name(Name base, const std::set<Name>& avoid) {
  Name cand = std::move(base);
  while (avoid.count(cand)) cand += "'";
  return cand;
}

// ---------------------------------------------------------------------------
// Substitution (variable for variable, capture-avoiding)
// ---------------------------------------------------------------------------

inline TypePtr subst(const TypePtr& t, const Name& from, const Name& to);
inline TermPtr subst(const TermPtr& t, const Name& from, const Name& to);
inline ValuePtr subst(const ValuePtr& v, const Name& from, const Name& to);
inline DefPtr subst(const DefPtr& d, const Name& from, const Name& to);

namespace detail {
inline Name subst_occ(const Name& x, const Name& from, const Name& to) {
  return x == from ? to : x;
}

// Decide what to do at a binder. Returns the (possibly renamed) binder; sets
// `enter` when substitution must continue into the scope.
template <class Body>
inline Name subst_binder(const Name& binder, const Name& from, const Name& to,
                         const Body& body, bool& enter, bool& rename) {
  enter = false;
  rename = false;
  if (binder == from) return binder;  // shadowed: stop here
  enter = true;
  if (binder == to) {
    auto fv = free_vars(body);
    if (fv.count(from)) {
      // The incoming variable would be captured; rename this binder first.
      fv.insert(from);
      fv.insert(to);
      rename = true;
      return fresh_name(binder, fv);
    }
  }
  return binder;
}
} // namespace detail

inline TypePtr subst(const TypePtr& t, const Name& from, const Name& to) {
  using namespace types;
  if (from == to) return t;
  return std::visit(Overloaded{
    [&](const TopT&) { return t; },
    [&](const BotT&) { return t; },
    [&](const FieldDeclT& n) { return field(n.label, subst(n.type, from, to)); },
    [&](const TypeDeclT& n) { return decl(n.label, subst(n.lo, from, to), subst(n.hi, from, to)); },
    [&](const SelT& n) { return sel(detail::subst_occ(n.subject, from, to), n.label); },
    [&](const AndT& n) { return and_(subst(n.lhs, from, to), subst(n.rhs, from, to)); },
    [&](const RecT& n) {
      bool enter, ren;
      Name b = detail::subst_binder(n.self, from, to, n.body, enter, ren);
      if (!enter) return t;
      TypePtr body = ren ? subst(n.body, n.self, b) : n.body;
      return rec(b, subst(body, from, to));
    },
    [&](const AllT& n) {
      TypePtr dom = subst(n.domain, from, to);
      bool enter, ren;
      Name b = detail::subst_binder(n.param, from, to, n.codomain, enter, ren);
      if (!enter) return all(n.param, dom, n.codomain);
      TypePtr cod = ren ? subst(n.codomain, n.param, b) : n.codomain;
      return all(b, dom, subst(cod, from, to));
    },
    [&](const RefTypeT& n) { return ref(subst(n.cell, from, to)); },
  }, t->node);
}

inline TermPtr subst(const TermPtr& t, const Name& from, const Name& to) {
  using namespace terms;
  if (from == to) return t;
  return std::visit(Overloaded{
    [&](const VarE& n) { return var(detail::subst_occ(n.name, from, to)); },
    [&](const ValE& n) { return val(subst(n.value, from, to)); },
    [&](const FieldSelE& n) { return field_sel(detail::subst_occ(n.subject, from, to), n.label); },
    [&](const AppE& n) { return app(detail::subst_occ(n.fn, from, to), detail::subst_occ(n.arg, from, to)); },
    [&](const LetE& n) {
      TermPtr head = subst(n.head, from, to);
      bool enter, ren;
      Name b = detail::subst_binder(n.binder, from, to, n.body, enter, ren);
      if (!enter) return let_(n.binder, head, n.body);
      TermPtr body = ren ? subst(n.body, n.binder, b) : n.body;
      return let_(b, head, subst(body, from, to));
    },
    [&](const RefNewE& n) { return ref_new(detail::subst_occ(n.subject, from, to), subst(n.type, from, to)); },
    [&](const DerefE& n) { return deref(detail::subst_occ(n.subject, from, to)); },
    [&](const AsgnE& n) { return asgn(detail::subst_occ(n.target, from, to), detail::subst_occ(n.source, from, to)); },
  }, t->node);
}

inline ValuePtr subst(const ValuePtr& v, const Name& from, const Name& to) {
  using namespace terms;
  if (from == to) return v;
  return std::visit(Overloaded{
    [&](const ObjV& n) {
      // Self scopes over both the annotation and the definitions.
      bool enter, ren;
      struct Both { TypePtr t; DefPtr d; };
      // Compute free vars of the scope (annotation + defs).
      auto scope_fv = [&]() {
        auto s = free_vars(n.type);
        for (auto& x : free_vars(n.defs)) s.insert(x);
        return s;
      };
      enter = !(n.self == from);
      if (!enter) return v;
      Name b = n.self;
      ren = false;
      if (n.self == to) {
        auto fv = scope_fv();
        fv.erase(n.self);
        if (fv.count(from)) {
          fv.insert(from);
          fv.insert(to);
          ren = true;
          b = fresh_name(n.self, fv);
        }
      }
      TypePtr ty = ren ? subst(n.type, n.self, b) : n.type;
      DefPtr ds = ren ? subst(n.defs, n.self, b) : n.defs;
      return obj(b, subst(ty, from, to), subst(ds, from, to));
    },
    [&](const LamV& n) {
      TypePtr dom = subst(n.domain, from, to);
      bool enter, ren;
      Name b = detail::subst_binder(n.param, from, to, n.body, enter, ren);
      if (!enter) return lam(n.param, dom, n.body);
      TermPtr body = ren ? subst(n.body, n.param, b) : n.body;
      return lam(b, dom, subst(body, from, to));
    },
    [&](const LocV&) { return v; },
  }, v->node);
}

inline DefPtr subst(const DefPtr& d, const Name& from, const Name& to) {
  using namespace terms;
  if (from == to) return d;
  return std::visit(Overloaded{
    [&](const FieldDefD& n) { return field_def(n.label, subst(n.term, from, to)); },
    [&](const TypeDefD& n) { return type_def(n.label, subst(n.type, from, to)); },
    [&](const AndDefD& n) { return and_def(subst(n.lhs, from, to), subst(n.rhs, from, to)); },
  }, d->node);
}

// Open a binder scope: substitute the bound name by a (fresh) variable.
// Callers must pick `to` fresh for the scope when freshness matters.
inline TypePtr open_type(const RecT& r, const Name& to) { return subst(r.body, r.self, to); }
inline TypePtr open_type(const AllT& a, const Name& to) { return subst(a.codomain, a.param, to); }

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

namespace detail {
struct AlphaEnv {
  // Parallel binder stacks; a bound occurrence must resolve to the same depth
  // on both sides.
  std::vector<Name> left, right;
  int resolve(const std::vector<Name>& side, const Name& x) const {
    for (int i = static_cast<int>(side.size()) - 1; i >= 0; --i)
      if (side[static_cast<size_t>(i)] == x) return i;
    return -1;
  }
  bool occ(const Name& a, const Name& b) const {
    int ia = resolve(left, a), ib = resolve(right, b);
    if (ia != ib) return false;
    if (ia == -1) return a == b;  // both free
    return true;
  }
};

inline bool aeq_type(const TypePtr& a, const TypePtr& b, AlphaEnv& env);
inline bool aeq_term(const TermPtr& a, const TermPtr& b, AlphaEnv& env);
inline bool aeq_value(const ValuePtr& a, const ValuePtr& b, AlphaEnv& env);
inline bool aeq_def(const DefPtr& a, const DefPtr& b, AlphaEnv& env);

template <class F>
inline bool with_binders(AlphaEnv& env, const Name& l, const Name& r, F f) {
  env.left.push_back(l);
  env.right.push_back(r);
  bool ok = f();
  env.left.pop_back();
  env.right.pop_back();
  return ok;
}

inline bool aeq_type(const TypePtr& a, const TypePtr& b, AlphaEnv& env) {
  if (a.get() == b.get() && env.left.empty() && env.right.empty()) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(Overloaded{
    [&](const TopT&) { return true; },
    [&](const BotT&) { return true; },
    [&](const FieldDeclT& x) {
      const auto& y = std::get<FieldDeclT>(b->node);
      return x.label == y.label && aeq_type(x.type, y.type, env);
    },
    [&](const TypeDeclT& x) {
      const auto& y = std::get<TypeDeclT>(b->node);
      return x.label == y.label && aeq_type(x.lo, y.lo, env) && aeq_type(x.hi, y.hi, env);
    },
    [&](const SelT& x) {
      const auto& y = std::get<SelT>(b->node);
      return x.label == y.label && env.occ(x.subject, y.subject);
    },
    [&](const AndT& x) {
      const auto& y = std::get<AndT>(b->node);
      return aeq_type(x.lhs, y.lhs, env) && aeq_type(x.rhs, y.rhs, env);
    },
    [&](const RecT& x) {
      const auto& y = std::get<RecT>(b->node);
      return with_binders(env, x.self, y.self, [&] { return aeq_type(x.body, y.body, env); });
    },
    [&](const AllT& x) {
      const auto& y = std::get<AllT>(b->node);
      if (!aeq_type(x.domain, y.domain, env)) return false;
      return with_binders(env, x.param, y.param, [&] { return aeq_type(x.codomain, y.codomain, env); });
    },
    [&](const RefTypeT& x) {
      const auto& y = std::get<RefTypeT>(b->node);
      return aeq_type(x.cell, y.cell, env);
    },
  }, a->node);
}

inline bool aeq_term(const TermPtr& a, const TermPtr& b, AlphaEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(Overloaded{
    [&](const VarE& x) { return env.occ(x.name, std::get<VarE>(b->node).name); },
    [&](const ValE& x) { return aeq_value(x.value, std::get<ValE>(b->node).value, env); },
    [&](const FieldSelE& x) {
      const auto& y = std::get<FieldSelE>(b->node);
      return x.label == y.label && env.occ(x.subject, y.subject);
    },
    [&](const AppE& x) {
      const auto& y = std::get<AppE>(b->node);
      return env.occ(x.fn, y.fn) && env.occ(x.arg, y.arg);
    },
    [&](const LetE& x) {
      const auto& y = std::get<LetE>(b->node);
      if (!aeq_term(x.head, y.head, env)) return false;
      return with_binders(env, x.binder, y.binder, [&] { return aeq_term(x.body, y.body, env); });
    },
    [&](const RefNewE& x) {
      const auto& y = std::get<RefNewE>(b->node);
      return env.occ(x.subject, y.subject) && aeq_type(x.type, y.type, env);
    },
    [&](const DerefE& x) { return env.occ(x.subject, std::get<DerefE>(b->node).subject); },
    [&](const AsgnE& x) {
      const auto& y = std::get<AsgnE>(b->node);
      return env.occ(x.target, y.target) && env.occ(x.source, y.source);
    },
  }, a->node);
}

inline bool aeq_value(const ValuePtr& a, const ValuePtr& b, AlphaEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(Overloaded{
    [&](const ObjV& x) {
      const auto& y = std::get<ObjV>(b->node);
      return with_binders(env, x.self, y.self, [&] {
        return aeq_type(x.type, y.type, env) && aeq_def(x.defs, y.defs, env);
      });
    },
    [&](const LamV& x) {
      const auto& y = std::get<LamV>(b->node);
      if (!aeq_type(x.domain, y.domain, env)) return false;
      return with_binders(env, x.param, y.param, [&] { return aeq_term(x.body, y.body, env); });
    },
    [&](const LocV& x) { return x.loc == std::get<LocV>(b->node).loc; },
  }, a->node);
}

inline bool aeq_def(const DefPtr& a, const DefPtr& b, AlphaEnv& env) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(Overloaded{
    [&](const FieldDefD& x) {
      const auto& y = std::get<FieldDefD>(b->node);
      return x.label == y.label && aeq_term(x.term, y.term, env);
    },
    [&](const TypeDefD& x) {
      const auto& y = std::get<TypeDefD>(b->node);
      return x.label == y.label && aeq_type(x.type, y.type, env);
    },
    [&](const AndDefD& x) {
      const auto& y = std::get<AndDefD>(b->node);
      return aeq_def(x.lhs, y.lhs, env) && aeq_def(x.rhs, y.rhs, env);
    },
  }, a->node);
}
} // namespace detail

inline bool alpha_eq(const TypePtr& a, const TypePtr& b) {
  detail::AlphaEnv env;
  return detail::aeq_type(a, b, env);
}
inline bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  detail::AlphaEnv env;
  return detail::aeq_term(a, b, env);
}
inline bool alpha_eq(const ValuePtr& a, const ValuePtr& b) {
  detail::AlphaEnv env;
  return detail::aeq_value(a, b, env);
}
inline bool alpha_eq(const DefPtr& a, const DefPtr& b) {
  detail::AlphaEnv env;
  return detail::aeq_def(a, b, env);
}

// ---------------------------------------------------------------------------
// Canonical spelling (binders numbered by de Bruijn level). Two syntax trees
// are alpha-equivalent iff their canonical spellings coincide; used as a memo
// key and as an independent equality route in tests.
// ---------------------------------------------------------------------------

namespace detail {
struct CanonEnv {
  std::vector<Name> bound;
  void occ(const Name& x, std::string& out) const {
    for (int i = static_cast<int>(bound.size()) - 1; i >= 0; --i)
      if (bound[static_cast<size_t>(i)] == x) {
        out += '#';
        out += std::to_string(i);
        return;
      }
    out += x;
  }
};

inline void canon_type(const TypePtr& t, CanonEnv& env, std::string& out);
inline void canon_term(const TermPtr& t, CanonEnv& env, std::string& out);
inline void canon_value(const ValuePtr& v, CanonEnv& env, std::string& out);
inline void canon_def(const DefPtr& d, CanonEnv& env, std::string& out);

inline void canon_type(const TypePtr& t, CanonEnv& env, std::string& out) {
  std::visit(Overloaded{
    [&](const TopT&) { out += "Top"; },
    [&](const BotT&) { out += "Bot"; },
    [&](const FieldDeclT& n) {
      out += "{"; out += n.label; out += ":";
      canon_type(n.type, env, out);
      out += "}";
    },
    [&](const TypeDeclT& n) {
      out += "{"; out += n.label; out += ":";
      canon_type(n.lo, env, out);
      out += "..";
      canon_type(n.hi, env, out);
      out += "}";
    },
    [&](const SelT& n) { env.occ(n.subject, out); out += "."; out += n.label; },
    [&](const AndT& n) {
      out += "(&";
      canon_type(n.lhs, env, out);
      out += " ";
      canon_type(n.rhs, env, out);
      out += ")";
    },
    [&](const RecT& n) {
      out += "(mu.";
      env.bound.push_back(n.self);
      canon_type(n.body, env, out);
      env.bound.pop_back();
      out += ")";
    },
    [&](const AllT& n) {
      out += "(all ";
      canon_type(n.domain, env, out);
      out += ".";
      env.bound.push_back(n.param);
      canon_type(n.codomain, env, out);
      env.bound.pop_back();
      out += ")";
    },
    [&](const RefTypeT& n) {
      out += "(Ref ";
      canon_type(n.cell, env, out);
      out += ")";
    },
  }, t->node);
}

inline void canon_term(const TermPtr& t, CanonEnv& env, std::string& out) {
  std::visit(Overloaded{
    [&](const VarE& n) { env.occ(n.name, out); },
    [&](const ValE& n) { canon_value(n.value, env, out); },
    [&](const FieldSelE& n) { env.occ(n.subject, out); out += "."; out += n.label; },
    [&](const AppE& n) {
      out += "(";
      env.occ(n.fn, out);
      out += " ";
      env.occ(n.arg, out);
      out += ")";
    },
    [&](const LetE& n) {
      out += "(let ";
      canon_term(n.head, env, out);
      out += ".";
      env.bound.push_back(n.binder);
      canon_term(n.body, env, out);
      env.bound.pop_back();
      out += ")";
    },
    [&](const RefNewE& n) {
      out += "(ref ";
      env.occ(n.subject, out);
      out += " ";
      canon_type(n.type, env, out);
      out += ")";
    },
    [&](const DerefE& n) { out += "!"; env.occ(n.subject, out); },
    [&](const AsgnE& n) {
      out += "(";
      env.occ(n.target, out);
      out += ":=";
      env.occ(n.source, out);
      out += ")";
    },
  }, t->node);
}

inline void canon_value(const ValuePtr& v, CanonEnv& env, std::string& out) {
  std::visit(Overloaded{
    [&](const ObjV& n) {
      out += "(nu.";
      env.bound.push_back(n.self);
      canon_type(n.type, env, out);
      out += " ";
      canon_def(n.defs, env, out);
      env.bound.pop_back();
      out += ")";
    },
    [&](const LamV& n) {
      out += "(lam ";
      canon_type(n.domain, env, out);
      out += ".";
      env.bound.push_back(n.param);
      canon_term(n.body, env, out);
      env.bound.pop_back();
      out += ")";
    },
    [&](const LocV& n) { out += "<loc "; out += std::to_string(n.loc); out += ">"; },
  }, v->node);
}

inline void canon_def(const DefPtr& d, CanonEnv& env, std::string& out) {
  std::visit(Overloaded{
    [&](const FieldDefD& n) {
      out += "{"; out += n.label; out += "=";
      canon_term(n.term, env, out);
      out += "}";
    },
    [&](const TypeDefD& n) {
      out += "{"; out += n.label; out += "=";
      canon_type(n.type, env, out);
      out += "}";
    },
    [&](const AndDefD& n) {
      out += "(&";
      canon_def(n.lhs, env, out);
      out += " ";
      canon_def(n.rhs, env, out);
      out += ")";
    },
  }, d->node);
}
} // namespace detail

inline std::string canonical(const TypePtr& t) {
  std::string out; detail::CanonEnv env;
  detail::canon_type(t, env, out);
  return out;
}
inline std::string canonical(const TermPtr& t) {
  std::string out; detail::CanonEnv env;
  detail::canon_term(t, env, out);
  return out;
}
inline std::string canonical(const ValuePtr& v) {
  std::string out; detail::CanonEnv env;
  detail::canon_value(v, env, out);
  return out;
}
inline std::string canonical(const DefPtr& d) {
  std::string out; detail::CanonEnv env;
  detail::canon_def(d, env, out);
  return out;
}

// Labels defined by a definition tree, in left-to-right order.
inline void def_labels(const DefPtr& d, std::vector<Name>& out) {
  std::visit(Overloaded{
    [&](const FieldDefD& n) { out.push_back(n.label); },
    [&](const TypeDefD& n) { out.push_back(n.label); },
    [&](const AndDefD& n) { def_labels(n.lhs, out); def_labels(n.rhs, out); },
  }, d->node);
}

inline bool contains_location(const TermPtr& t);
inline bool contains_location(const ValuePtr& v);
inline bool contains_location(const DefPtr& d);

inline bool contains_location(const ValuePtr& v) {
  return std::visit(Overloaded{
    [&](const ObjV& n) { return contains_location(n.defs); },
    [&](const LamV& n) { return contains_location(n.body); },
    [&](const LocV&) { return true; },
  }, v->node);
}

inline bool contains_location(const TermPtr& t) {
  return std::visit(Overloaded{
    [&](const VarE&) { return false; },
    [&](const ValE& n) { return contains_location(n.value); },
    [&](const FieldSelE&) { return false; },
    [&](const AppE&) { return false; },
    [&](const LetE& n) { return contains_location(n.head) || contains_location(n.body); },
    [&](const RefNewE&) { return false; },
    [&](const DerefE&) { return false; },
    [&](const AsgnE&) { return false; },
  }, t->node);
}

inline bool contains_location(const DefPtr& d) {
  return std::visit(Overloaded{
    [&](const FieldDefD& n) { return contains_location(n.term); },
    [&](const TypeDefD&) { return false; },
    [&](const AndDefD& n) { return contains_location(n.lhs) || contains_location(n.rhs); },
  }, d->node);
}

} // namespace mdot
