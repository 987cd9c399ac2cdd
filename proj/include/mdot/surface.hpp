#pragma once
// Surface terms: the parsed form, a superset of the core syntax in which
// selection, application, reference operations and sequencing may take
// arbitrary subterms. Type-level sugar is already expanded by the parser,
// so types here are core TypeExpr values.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mdot/syntax.hpp"

namespace mdot {

struct SurfaceTerm;
using SurfacePtr = std::shared_ptr<const SurfaceTerm>;

struct Pos {
  int line = 0;
  int column = 0;
};

struct SVar { Name name; };
struct SSel { SurfacePtr subject; Name label; };
struct SApp { SurfacePtr fn; SurfacePtr arg; };
struct SLet { Name binder; SurfacePtr head; SurfacePtr body; };
struct SRefNew { SurfacePtr subject; TypePtr type; };
struct SDeref { SurfacePtr subject; };
struct SAsgn { SurfacePtr target; SurfacePtr source; };
struct SSeq { SurfacePtr first; SurfacePtr second; };

struct SDefField { Name label; SurfacePtr term; };
struct SDefType { Name label; TypePtr type; };
struct SDefs {
  // Flattened aggregate definition, left to right.
  std::vector<std::variant<SDefField, SDefType>> members;
};

struct SObj { Name self; TypePtr type; SDefs defs; };
struct SLam { Name param; TypePtr domain; SurfacePtr body; };

struct SurfaceTerm {
  std::variant<SVar, SObj, SLam, SSel, SApp, SLet, SRefNew, SDeref, SAsgn, SSeq> node;
  Pos pos;
};

namespace surface {
template <class N>
SurfacePtr make(N n, Pos p = {}) {
  return std::make_shared<const SurfaceTerm>(SurfaceTerm{std::move(n), p});
}
} // namespace surface

// ---------------------------------------------------------------------------
// Desugaring into core terms.
//
// ref t T   ==  let x = t in ref x T
// t := u    ==  let x = t in let y = u in x := y
// !t        ==  let x = t in !x
// t; u      ==  let x = t in u
// t u       ==  let x = t in let y = u in x y
// t.a       ==  let x = t in x.a
//
// Core-shaped input maps to itself; introduced binders use the reserved "%"
// prefix, which the parser rejects, so they can never collide with source
// names.
// ---------------------------------------------------------------------------

namespace detail {
struct DesugarState {
  int counter = 0;
  Name fresh() { return "%" + std::to_string(counter++); }
};

inline TermPtr desugar_term(const SurfacePtr& s, DesugarState& st);

inline bool is_var(const SurfacePtr& s) { return std::holds_alternative<SVar>(s->node); }
inline const Name& var_name(const SurfacePtr& s) { return std::get<SVar>(s->node).name; }

inline DefPtr desugar_defs(const SDefs& defs, DesugarState& st) {
  DefPtr acc;
  for (const auto& m : defs.members) {
    DefPtr one = std::visit(Overloaded{
      [&](const SDefField& f) { return terms::field_def(f.label, desugar_term(f.term, st)); },
      [&](const SDefType& t) { return terms::type_def(t.label, t.type); },
    }, m);
    acc = acc ? terms::and_def(acc, one) : one;
  }
  return acc;
}

// Bind `s` to a fresh variable unless it is one already; `k` receives the
// variable name and builds the remainder of the term.
template <class K>
TermPtr bind_atom(const SurfacePtr& s, DesugarState& st, K k) {
  if (is_var(s)) return k(var_name(s));
  Name x = st.fresh();
  return terms::let_(x, desugar_term(s, st), k(x));
}

inline TermPtr desugar_term(const SurfacePtr& s, DesugarState& st) {
  using namespace terms;
  return std::visit(Overloaded{
    [&](const SVar& n) { return var(n.name); },
    [&](const SObj& n) { return val(obj(n.self, n.type, desugar_defs(n.defs, st))); },
    [&](const SLam& n) { return val(lam(n.param, n.domain, desugar_term(n.body, st))); },
    [&](const SSel& n) {
      return bind_atom(n.subject, st, [&](const Name& x) { return field_sel(x, n.label); });
    },
    [&](const SApp& n) -> TermPtr {
      if (is_var(n.fn) && is_var(n.arg)) return app(var_name(n.fn), var_name(n.arg));
      Name x = st.fresh();
      Name y = st.fresh();
      return let_(x, desugar_term(n.fn, st),
                  let_(y, desugar_term(n.arg, st), app(x, y)));
    },
    [&](const SLet& n) {
      return let_(n.binder, desugar_term(n.head, st), desugar_term(n.body, st));
    },
    [&](const SRefNew& n) {
      return bind_atom(n.subject, st, [&](const Name& x) { return ref_new(x, n.type); });
    },
    [&](const SDeref& n) {
      return bind_atom(n.subject, st, [&](const Name& x) { return deref(x); });
    },
    [&](const SAsgn& n) -> TermPtr {
      if (is_var(n.target) && is_var(n.source))
        return asgn(var_name(n.target), var_name(n.source));
      Name x = st.fresh();
      Name y = st.fresh();
      return let_(x, desugar_term(n.target, st),
                  let_(y, desugar_term(n.source, st), asgn(x, y)));
    },
    [&](const SSeq& n) {
      Name x = st.fresh();
      return let_(x, desugar_term(n.first, st), desugar_term(n.second, st));
    },
  }, s->node);
}
} // namespace detail

inline TermPtr desugar(const SurfacePtr& s) {
  detail::DesugarState st;
  return detail::desugar_term(s, st);
}

// Core terms embed into the surface syntax; desugaring the embedding is the
// identity, which makes desugar idempotent.
inline SurfacePtr to_surface(const TermPtr& t);
inline SurfacePtr to_surface(const ValuePtr& v);

namespace detail {
inline SDefs to_surface_defs(const DefPtr& d) {
  SDefs out;
  std::visit(Overloaded{
    [&](const FieldDefD& n) { out.members.push_back(SDefField{n.label, to_surface(n.term)}); },
    [&](const TypeDefD& n) { out.members.push_back(SDefType{n.label, n.type}); },
    [&](const AndDefD& n) {
      auto l = to_surface_defs(n.lhs);
      auto r = to_surface_defs(n.rhs);
      out.members = std::move(l.members);
      for (auto& m : r.members) out.members.push_back(std::move(m));
    },
  }, d->node);
  return out;
}
} // namespace detail

inline SurfacePtr to_surface(const ValuePtr& v) {
  using surface::make;
  return std::visit(Overloaded{
    [&](const ObjV& n) { return make(SObj{n.self, n.type, detail::to_surface_defs(n.defs)}); },
    [&](const LamV& n) { return make(SLam{n.param, n.domain, to_surface(n.body)}); },
    [&](const LocV&) -> SurfacePtr {
      // Locations have no surface form; they are unreachable from parsing and
      // only occur in machine states.
      return make(SVar{"<loc>"});
    },
  }, v->node);
}

inline SurfacePtr to_surface(const TermPtr& t) {
  using surface::make;
  return std::visit(Overloaded{
    [&](const VarE& n) { return make(SVar{n.name}); },
    [&](const ValE& n) { return to_surface(n.value); },
    [&](const FieldSelE& n) { return make(SSel{make(SVar{n.subject}), n.label}); },
    [&](const AppE& n) { return make(SApp{make(SVar{n.fn}), make(SVar{n.arg})}); },
    [&](const LetE& n) { return make(SLet{n.binder, to_surface(n.head), to_surface(n.body)}); },
    [&](const RefNewE& n) { return make(SRefNew{make(SVar{n.subject}), n.type}); },
    [&](const DerefE& n) { return make(SDeref{make(SVar{n.subject})}); },
    [&](const AsgnE& n) { return make(SAsgn{make(SVar{n.target}), make(SVar{n.source})}); },
  }, t->node);
}

} // namespace mdot
