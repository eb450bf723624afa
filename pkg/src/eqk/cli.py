"""Command-line front end.

Every command parses all of its literals before computing anything, prints
plain text by default and, with ``--format json``, one object of the form
``{"command", "inputs", "result", "witness"}``. Exit codes: 0 success, 1
computation error, 2 usage or parse error, 3 failed acceptance check.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import EqkError, ParseError
from .perm import Group, Perm, Subgroup, build_group, parse_cycles

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_CHECK = 0, 1, 2, 3
SCHEMA_KEYS = ("command", "inputs", "result", "witness")


@dataclass
class Output:
    result: Any
    witness: Any = None
    text: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK
    raw_json: str | None = None     # pre-rendered report (check)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# literal helpers

def _group(text: str) -> Group:
    return build_group(text)


def _subgroup(G: Group, text: str) -> Subgroup:
    from .universe import parse_subgroup

    return parse_subgroup(G, text)


def _element(G: Group, text: str) -> int:
    t = text.strip()
    if t in ("e", "1", "id", "()"):
        return 0
    if t.isdigit():
        i = int(t)
        if i >= G.order:
            raise ParseError(f"element index {i} out of range for {G.name}")
        return i
    cyc = parse_cycles(t)
    if any(a >= G.degree for c in cyc for a in c):
        raise ParseError(f"{t} moves points outside degree {G.degree}")
    try:
        return G.index(Perm.from_cycles(cyc, G.degree))
    except (KeyError, ValueError):
        raise ParseError(f"{t} is not an element of {G.name}") from None


def _universe(G: Group, text: str):
    from .universe import parse_universe

    return parse_universe(G, text)


def _gset(H, text: str):
    from .gset import parse_gset

    return parse_gset(H, text)


def _based(X):
    from .gset import based

    return X if X.based else based(X)


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise ParseError(f"bad JSON for {what}: {text!r}") from None


def sub_json(S: Subgroup) -> dict:
    return {"label": S.label, "order": S.order, "elements": list(S.elements)}


def elem_json(G: Group, g: int) -> str:
    return G.elements[g].cycle_string()


# ---------------------------------------------------------------------------
# group

def cmd_group(a) -> Output:
    from .perm import conjugacy_classes_of_subgroups, double_cosets, enumerate_subgroups, normal_subgroups

    G = _group(a.group)
    if a.action == "double-cosets":
        if len(a.args) != 2:
            raise ParseError("double-cosets needs two subgroups K H")
        K, H = _subgroup(G, a.args[0]), _subgroup(G, a.args[1])
        dcs = double_cosets(G, K, H)
        rows = [{"rep": elem_json(G, d.rep), "size": len(d.elements)} for d in dcs]
        text = [f"{len(dcs)} double coset{'s' if len(dcs) != 1 else ''} {K.label}\\{G.name}/{H.label}"]
        text += [f"  {r['rep']}  size {r['size']}" for r in rows]
        return Output({"count": len(dcs), "classes": rows},
                      {"elements": [[elem_json(G, x) for x in d.elements] for d in dcs]}, text)
    if a.args:
        raise ParseError(f"{a.action} takes no further arguments")
    if a.action == "info":
        res = {"name": G.name, "order": G.order, "degree": G.degree,
               "generators": [g.cycle_string() for g in G.generators]}
        return Output(res, None, [f"{G.name}: order {G.order} on {G.degree} points, generators "
                                  + ", ".join(res["generators"])])
    if a.action == "subgroups":
        subs = enumerate_subgroups(G)
        rows = [{"id": i, **sub_json(S), "generators": [elem_json(G, g) for g in S.generators]}
                for i, S in enumerate(subs)]
        text = [f"{len(subs)} subgroups"] + [f"  [{r['id']}] order {r['order']}  {r['label']}" for r in rows]
        return Output({"count": len(subs), "subgroups": rows}, None, text)
    if a.action == "classes":
        from .perm import subgroup_id

        cls = conjugacy_classes_of_subgroups(G)
        rows = [{"rep": subgroup_id(c[0], G), "order": c[0].order, "size": len(c), "label": c[0].label,
                 "members": [subgroup_id(S, G) for S in c]} for c in cls]
        text = [f"{len(cls)} conjugacy classes of subgroups"]
        text += [f"  [{r['rep']}] order {r['order']} x{r['size']}  {r['label']}" for r in rows]
        return Output({"count": len(cls), "classes": rows}, None, text)
    if a.action == "normal":
        ns = normal_subgroups(G)
        return Output({"count": len(ns), "normal": [sub_json(N) for N in ns]}, None,
                      [f"{len(ns)} normal subgroups"] + [f"  order {N.order}  {N.label}" for N in ns])
    raise ParseError(f"unknown group action {a.action!r}")


# ---------------------------------------------------------------------------
# gset

def cmd_gset(a) -> Output:
    from .gset import (change_of_groups, double_coset_decompose_coinduction, double_coset_decompose_induction,
                       iso_test, orbits_and_stabilizers, quotient_fixed_points)
    from .perm import quotient_group

    G = _group(a.group)
    H = _subgroup(G, a.sub) if a.sub else G.full()
    if a.action in ("orbits", "induce", "coinduce", "restrict", "decompose", "decompose-coinduction"):
        if len(a.args) != 1:
            raise ParseError(f"{a.action} needs one G-set literal")
    if a.action == "orbits":
        X = _gset(H, a.args[0])
        orbs = orbits_and_stabilizers(X)
        rows = [{"size": len(o.points), "stabilizer": sub_json(o.stabilizer)} for o in orbs]
        text = [f"{len(orbs)} orbit{'s' if len(orbs) != 1 else ''} on {len(X.points)} points"]
        text += [f"  size {r['size']}  stabilizer {r['stabilizer']['label']}" for r in rows]
        return Output({"count": len(orbs), "orbits": rows}, {"gset": X.to_dict()}, text)
    if a.action in ("induce", "coinduce"):
        X = _gset(H, a.args[0])
        Y = change_of_groups(a.action, H, X, G)
        orbs = orbits_and_stabilizers(Y)
        return Output({"points": len(Y.points), "orbits": len(orbs)}, {"gset": Y.to_dict()},
                      [f"{a.action}d to {G.name}: {len(Y.points)} points in {len(orbs)} orbits"])
    if a.action == "restrict":
        if a.to is None:
            raise ParseError("restrict needs --to")
        X = _gset(G, a.args[0])
        K = _subgroup(G, a.to)
        Y = X.restrict(K)
        orbs = orbits_and_stabilizers(Y)
        return Output({"points": len(Y.points), "orbits": len(orbs)}, {"gset": Y.to_dict()},
                      [f"restricted to {K.label}: {len(orbs)} orbits"])
    if a.action in ("decompose", "decompose-coinduction"):
        if a.to is None:
            raise ParseError(f"{a.action} needs --to K")
        X = _gset(H, a.args[0])
        K = _subgroup(G, a.to)
        if a.action == "decompose":
            d = double_coset_decompose_induction(G, K, _based(X))
            ok, wit = d.verify(), d.to_dict()
        else:
            d = double_coset_decompose_coinduction(G, K, X)
            ok = d.verify()
            wit = {"double_coset_reps": list(d.reps), "bijection": d.bijection.to_dict()}
        text = [f"{len(d.reps)} double coset summands, bijection {'verified' if ok else 'FAILED'}"]
        return Output({"summands": len(d.reps), "verified": ok}, wit, text)
    if a.action == "iso":
        if len(a.args) != 2:
            raise ParseError("iso needs two G-set literals")
        X, Y = _gset(H, a.args[0]), _gset(H, a.args[1])
        f = iso_test(X, Y)
        return Output({"isomorphic": f is not None}, f.to_dict() if f is not None else None,
                      ["isomorphic" if f is not None else "not isomorphic"])
    if a.action == "quotient-fixed":
        if len(a.args) != 1 or a.normal is None or a.level is None:
            raise ParseError("quotient-fixed needs --normal K, --level H (subgroup id of G/K) and a G-set")
        K = _subgroup(G, a.normal)
        X = _based(_gset(G, a.args[0]))
        Q, proj = quotient_group(G, K)
        Hq = _subgroup(Q, a.level)
        res = quotient_fixed_points(G, K, X, Hq, quotient=(Q, proj))
        ok = res.verify()
        text = [f"(X/K)^H has {len(res.direct)} points; {len(res.lifts)} lift classes; "
                f"bijection {'verified' if ok else 'FAILED'}"]
        return Output({"direct_points": len(res.direct), "lift_classes": len(res.lifts), "verified": ok},
                      res.to_dict(), text)
    raise ParseError(f"unknown gset action {a.action!r}")


# ---------------------------------------------------------------------------
# family / universe

def cmd_family(a) -> Output:
    from .universe import family_membership, family_product, twist, untwist, untwist_then_twist

    G = _group(a.group)
    U = _universe(G, a.universe)
    if a.action in ("membership", "untwist", "round-trip"):
        if len(a.args) != 1:
            raise ParseError(f"{a.action} needs one subgroup of G x Sigma_n")
        P = family_product(U, a.n)
        L = _subgroup(P, a.args[0])
        if a.action == "membership":
            m = family_membership(L, U)
            return Output({"member": m.member}, m.to_dict(),
                          ["member" if m else f"not a member: {m.reason}"])
        if a.action == "untwist":
            w = untwist(L, U)
            return Output({"H": sub_json(w.H), "alpha": list(w.alpha.images)}, w.to_dict(),
                          [f"H = {w.H.label}, alpha images {list(w.alpha.images)}"])
        tw, x = untwist_then_twist(L, U)
        return Output({"conjugating_element": x}, tw.to_dict(), [f"conjugate back by element {x}"])
    if a.action == "twist":
        if len(a.args) != 1 or a.sub is None:
            raise ParseError("twist needs --sub H and a JSON list of universe triples")
        H = _subgroup(G, a.sub)
        data = _json_arg(a.args[0], "triples")
        if not isinstance(data, list) or any(not isinstance(t, list) or len(t) != 3 for t in data):
            raise ParseError("twist expects [[class, copy, coset], ...]")
        tw = twist(H, [tuple(t) for t in data], U)
        return Output({"K": sub_json(tw.K), "n": len(tw.M)}, tw.to_dict(),
                      [f"graph subgroup of order {tw.K.order} in {G.name} x S{len(tw.M)}"])
    if a.action == "members":
        from .perm import enumerate_subgroups

        P = family_product(U, a.n)
        subs = enumerate_subgroups(P, cap=None)
        mem = [i for i, L in enumerate(subs) if family_membership(L, U)]
        return Output({"subgroups": len(subs), "members": mem}, None,
                      [f"{len(mem)} of {len(subs)} subgroups of {P.name} are in the family"])
    raise ParseError(f"unknown family action {a.action!r}")


def cmd_universe(a) -> Output:
    from .universe import admissible_pairs, embeds, transfer_admissible

    G = _group(a.group)
    U = _universe(G, a.universe)
    if a.action == "describe":
        rows = [{"class": c, **sub_json(L), "orbit_size": len(U.orbits[c].points)} for c, L in enumerate(U.classes)]
        return Output({"name": U.name, "classes": rows}, None,
                      [f"universe {U.name}: {len(rows)} isotropy classes"]
                      + [f"  [{r['class']}] {r['label']}  orbit size {r['orbit_size']}" for r in rows])
    if a.action == "embeds":
        if len(a.args) != 1:
            raise ParseError("embeds needs one H-set literal")
        H = _subgroup(G, a.sub) if a.sub else G.full()
        M = _gset(H, a.args[0])
        e = embeds(H, M, U)
        return Output({"embeds": e.ok}, e.to_dict(), ["embeds" if e else f"does not embed: {e.reason}"])
    if a.action == "transfer-admissible":
        if len(a.args) != 2:
            raise ParseError("transfer-admissible needs H K")
        H, K = _subgroup(G, a.args[0]), _subgroup(G, a.args[1])
        t = transfer_admissible(H, K, U)
        return Output({"admissible": t.admissible}, t.to_dict(),
                      [f"{H.label} <= {K.label}: {'admissible' if t else 'not admissible'}"])
    if a.action == "admissible":
        if len(a.args) != 1:
            raise ParseError("admissible needs K")
        K = _subgroup(G, a.args[0])
        hs = admissible_pairs(K, U)
        return Output({"count": len(hs), "subgroups": [sub_json(S) for S in hs]}, None,
                      [f"{len(hs)} admissible H <= {K.label}"] + [f"  {S.label}" for S in hs])
    raise ParseError(f"unknown universe action {a.action!r}")


# ---------------------------------------------------------------------------
# mackey / monoid

def _basis_row(b) -> dict:
    return {"K": b.inner.label, "K_elements": list(b.inner.elements), "alpha": [list(u) for u in b.alpha]}


def cmd_mackey(a) -> Output:
    from .mackey import MackeyElement, MackeyStructure, basis_report, burnside_oracle_check, tomdieck_basis

    G = _group(a.group)
    U = _universe(G, a.universe)
    if a.action == "oracle-check":
        if len(a.args) != 3:
            raise ParseError("oracle-check needs K H J")
        K, H, J = (_subgroup(G, t) for t in a.args)
        rep = burnside_oracle_check(U, K, H, J)
        return Output({"pass": rep.passed}, rep.to_dict(),
                      [f"res tr vs orbit oracle: {'agree' if rep.passed else 'MISMATCH'}"],
                      EXIT_OK if rep.passed else EXIT_CHECK)
    M = _gset(G, a.M)
    level = _subgroup(G, a.level) if a.level else G.full()
    T = a.window
    extra = None
    if a.action in ("act", "res", "tr", "conj"):
        if a.index is None:
            raise ParseError(f"{a.action} needs --index of a basis element")
        if a.action == "act":
            from .injmonoid import parse_injection

            if len(a.args) != 1:
                raise ParseError("act needs an injection literal")
            extra = parse_injection(U, a.args[0])
        elif a.action == "conj":
            if len(a.args) != 1:
                raise ParseError("conj needs a group element")
            extra = _element(G, a.args[0])
        else:
            if a.to is None:
                raise ParseError(f"{a.action} needs --to")
            extra = _subgroup(G, a.to)
    elif a.args:
        raise ParseError(f"{a.action} takes no positional arguments")
    if a.action == "basis":
        rep = basis_report(level, M, U, T)
        rows = [_basis_row(b) for b in rep.basis]
        text = [f"rank {rep.rank} at level {level.label} (window {T}, "
                f"{'stable' if rep.stable else 'grows with the window'})"]
        text += [f"  [{i}] K={r['K']} alpha={r['alpha']}" for i, r in enumerate(rows)]
        return Output({"rank": rep.rank, "window": T, "window_stable": rep.stable, "basis": rows},
                      {"basis": [b.to_dict() for b in rep.basis]}, text)
    basis = tomdieck_basis(level, M, U, T)
    if not 0 <= a.index < len(basis):
        raise ParseError(f"basis index {a.index} out of range (rank {len(basis)})")
    S = MackeyStructure(U, M, window=T)
    x = MackeyElement.basis(basis[a.index])
    if a.action == "act":
        y = S.act(extra, x)
    elif a.action == "res":
        y = S.res(extra, x)
    elif a.action == "tr":
        y = S.tr(extra, x)
    elif a.action == "conj":
        y = S.conj(extra, x)
    else:
        raise ParseError(f"unknown mackey action {a.action!r}")
    d = y.to_dict()
    text = [f"{a.action} of basis element {a.index}: {len(d['terms'])} terms at level "
            f"{Subgroup(G, d['level'], check=False).label}"]
    text += [f"  {t['coeff']:+d} K={list(t['K'])} alpha={t['alpha']}" for t in d["terms"]]
    return Output(d, {"input": x.to_dict()}, text)


def _module(kind: str, M, U, level):
    from .injmonoid import EmbeddingTypeModule, InjectionModule
    from .mackey import TomDieckModule

    if kind == "P":
        return InjectionModule(M, U)
    if kind == "type":
        return EmbeddingTypeModule(M, U)
    if kind == "tomdieck":
        return TomDieckModule(level, M, U)
    raise ParseError(f"unknown module kind {kind!r} (P, type, tomdieck)")


def cmd_monoid(a) -> Output:
    from .injmonoid import compose_inj, conjugate, parse_injection, shift, triviality_check

    G = _group(a.group)
    U = _universe(G, a.universe)
    if a.action == "compose":
        if len(a.args) < 2:
            raise ParseError("compose needs at least two injections (applied right to left)")
        fs = [parse_injection(U, t) for t in a.args]
        out = fs[-1]
        for f in reversed(fs[:-1]):
            out = compose_inj(f, out)
        return Output({"literal": out.literal()}, out.to_dict(), [out.literal()])
    if a.action == "shift":
        if len(a.args) != 1:
            raise ParseError("shift needs a JSON list of copies or triples")
        data = _json_arg(a.args[0], "shift set")
        if not isinstance(data, list) or any(not isinstance(x, list) or len(x) not in (2, 3) for x in data):
            raise ParseError("shift set must list [class, copy] pairs or triples")
        f = shift(U, [tuple(x) for x in data])
        return Output({"literal": f.literal()}, f.to_dict(), [f.literal()])
    if a.action == "conjugate":
        if len(a.args) != 2:
            raise ParseError("conjugate needs phi and f")
        phi, f = parse_injection(U, a.args[0]), parse_injection(U, a.args[1])
        c = conjugate(phi, f)
        return Output({"literal": c.literal()}, c.to_dict(), [c.literal()])
    M = _gset(G, a.M)
    level = _subgroup(G, a.level) if a.level else G.full()
    if a.action == "act":
        if len(a.args) != 1 or a.index is None:
            raise ParseError("act needs an injection literal and --index")
        phi = parse_injection(U, a.args[0])
        A = _module(a.module, M, U, level)
        basis = A.basis(a.window)
        if not 0 <= a.index < len(basis):
            raise ParseError(f"basis index {a.index} out of range ({len(basis)} in window)")
        x = basis[a.index]
        y = A.act(phi, x)
        xj, yj = _plain(x), _plain(y)
        return Output({"image": yj}, {"x": xj, "phi": phi.to_dict()}, [f"{xj} -> {yj}"])
    if a.action == "triviality":
        if a.args:
            raise ParseError("triviality takes no positional arguments")
        A = _module(a.module, M, U, level)
        v = triviality_check(A, budget=a.budget, windows=max(a.window, 2))
        d = v.to_dict()
        text = [f"{v.kind} (criterion v: {v.criteria['v']}, criterion iii: {v.criteria['iii']})"]
        if v.note:
            text.append(f"  note: {v.note}")
        if "witness" in d:
            w = d["witness"]
            text.append(f"  witness: {json.dumps(w['phi'])} moves {json.dumps(w['x'])} to {json.dumps(w['phi_x'])}")
        return Output({"verdict": v.kind, "criteria": v.criteria}, d.get("witness"), text)
    raise ParseError(f"unknown monoid action {a.action!r}")


def _plain(x):
    if hasattr(x, "to_dict"):
        return x.to_dict()
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# norm

def cmd_norm(a) -> Output:
    from .gset import orbits_and_stabilizers
    from .norm import NormEmbedding, distribute_norm, distribute_smash_power, function_orbit_count, norm, \
        norm_double_coset

    G = _group(a.group)
    H = _subgroup(G, a.sub) if a.sub else G.full()
    reps = None
    if a.reps:
        data = _json_arg(a.reps, "coset representatives")
        reps = [_element(G, str(r)) for r in data]
    if a.action == "embed":
        emb = NormEmbedding(G, H, reps)
        ok = emb.check_formula() and emb.check_homomorphism() and emb.check_injective()
        return Output({"index": emb.n, "formula_holds": ok}, emb.to_dict(),
                      [f"G -> Sigma_{emb.n} wr {H.label}: formula {'holds' if ok else 'FAILS'}"])
    if a.action == "norm":
        if len(a.args) != 1:
            raise ParseError("norm needs one H-set literal")
        X = _based(_gset(H, a.args[0]))
        emb = NormEmbedding(G, H, reps)
        N = norm(emb, X)
        orbs = orbits_and_stabilizers(N, skip_base=True)
        return Output({"points": len(N.points), "orbits": len(orbs)}, {"gset": N.to_dict()},
                      [f"norm has {len(N.points)} points ({len(orbs)} non-base orbits)"])
    if a.action == "double-coset":
        if len(a.args) != 1 or a.to is None:
            raise ParseError("double-coset needs --to K and one H-set literal")
        K = _subgroup(G, a.to)
        X = _based(_gset(H, a.args[0]))
        d = norm_double_coset(K, NormEmbedding(G, H, reps), X)
        ok = d.verify()
        return Output({"factors": len(d.factors), "verified": ok}, d.to_dict(),
                      [f"{len(d.factors)} factors, bijection {'verified' if ok else 'FAILED'}"])
    if a.action == "distribute":
        if not a.args or a.args[0] not in ("smash", "norm") or len(a.args) < 2:
            raise ParseError("distribute needs 'smash' or 'norm' followed by summand literals")
        kind = a.args[0]
        if kind == "smash":
            Xs = [_based(_gset(G, t)) for t in a.args[1:]]
            d = distribute_smash_power(Xs, a.n)
            from .norm import multiset_count

            expected = multiset_count(a.n, len(Xs))
        else:
            Xs = [_based(_gset(H, t)) for t in a.args[1:]]
            emb = NormEmbedding(G, H, reps)
            d = distribute_norm(emb, Xs)
            expected = function_orbit_count(emb, len(Xs))
        ok = d.verify()
        text = [f"{len(d.descriptors)} summands (expected {expected}), bijection {'verified' if ok else 'FAILED'}"]
        return Output({"summands": len(d.descriptors), "expected": expected, "verified": ok}, d.to_dict(), text)
    raise ParseError(f"unknown norm action {a.action!r}")


# ---------------------------------------------------------------------------
# check

def cmd_check(a) -> Output:
    from . import checks

    try:
        numbers = checks.parse_selection(a.selection)
    except ValueError as e:
        raise ParseError(str(e)) from None
    results = checks.run(numbers, jobs=max(1, a.jobs))
    ok = all(r.passed for r in results)
    code = EXIT_OK if ok else EXIT_CHECK
    inputs = {"criteria": a.selection}
    if a.format == "json":
        return Output(None, raw_json=checks.render_json(results, inputs), exit_code=code)
    return Output(None, text=checks.render_text(results).rstrip("\n").split("\n"), exit_code=code)


# ---------------------------------------------------------------------------
# parser

COMMANDS: dict[str, tuple[Callable[[Any], Output], list[str]]] = {
    "group": (cmd_group, ["info", "subgroups", "classes", "normal", "double-cosets"]),
    "gset": (cmd_gset, ["orbits", "induce", "coinduce", "restrict", "decompose", "decompose-coinduction",
                        "iso", "quotient-fixed"]),
    "family": (cmd_family, ["membership", "members", "untwist", "twist", "round-trip"]),
    "universe": (cmd_universe, ["describe", "embeds", "transfer-admissible", "admissible"]),
    "mackey": (cmd_mackey, ["basis", "act", "res", "tr", "conj", "oracle-check"]),
    "monoid": (cmd_monoid, ["compose", "shift", "conjugate", "act", "triviality"]),
    "norm": (cmd_norm, ["embed", "norm", "double-coset", "distribute"]),
}


def build_parsers() -> dict[str, argparse.ArgumentParser]:
    """One parser per command; options and positionals may be interleaved."""
    parsers: dict[str, argparse.ArgumentParser] = {}

    def make(name: str, help_: str) -> argparse.ArgumentParser:
        q = _Parser(prog=f"eqk {name}", description=help_)
        q.add_argument("--format", choices=["text", "json"], default=None)
        parsers[name] = q
        return q

    g = make("group", "subgroups, conjugacy classes, double cosets")
    g.add_argument("group")
    g.add_argument("action", choices=COMMANDS["group"][1])
    g.add_argument("args", nargs="*")

    for name, help_ in (("gset", "orbits, change of groups, decompositions"),
                        ("family", "family membership, untwist and twist"),
                        ("universe", "embeddings and transfer admissibility"),
                        ("mackey", "transfer basis and structure maps"),
                        ("monoid", "injection monoid and triviality"),
                        ("norm", "norm embeddings, norms and distributive laws")):
        q = make(name, help_)
        q.add_argument("action", choices=COMMANDS[name][1])
        q.add_argument("args", nargs="*")
        q.add_argument("--group", required=True)
        if name in ("family", "universe", "mackey", "monoid"):
            q.add_argument("--universe", default="complete")
        if name in ("gset", "universe", "family", "norm"):
            q.add_argument("--sub", help="subgroup the input set lives over")
        if name in ("gset", "mackey", "norm"):
            q.add_argument("--to", help="target subgroup")
        if name == "gset":
            q.add_argument("--normal")
            q.add_argument("--level")
        if name in ("mackey", "monoid"):
            q.add_argument("--M", default="empty", help="G-set literal")
            q.add_argument("--level")
            q.add_argument("--window", type=int, default=2)
            q.add_argument("--index", type=int)
        if name == "monoid":
            q.add_argument("--module", default="P", help="P, type or tomdieck")
            q.add_argument("--budget", type=int, default=200_000)
        if name in ("family", "norm"):
            q.add_argument("--n", type=int, default=1)
        if name == "norm":
            q.add_argument("--reps", help="JSON list of coset representatives")

    c = make("check", "run the acceptance suite (all) or a subset such as 1,3-5")
    c.add_argument("selection", nargs="?", default="all")
    c.add_argument("--jobs", type=int, default=1)
    return parsers


USAGE = ("usage: eqk [--format text|json] {group,gset,family,universe,mackey,monoid,norm,check} ...\n"
         "       eqk <command> --help for the options of one command\n")


def parse_argv(argv: list[str]) -> argparse.Namespace:
    rest = list(argv)
    fmt = None
    while rest and rest[0].startswith("--format"):
        if rest[0] == "--format" and len(rest) > 1:
            fmt = rest[1]
            rest = rest[2:]
        elif rest[0].startswith("--format="):
            fmt = rest[0].split("=", 1)[1]
            rest = rest[1:]
        else:
            raise UsageError("eqk: --format needs a value")
    if not rest or rest[0] not in build_parsers():
        raise UsageError("eqk: expected a command\n" + USAGE)
    command = rest[0]
    args = build_parsers()[command].parse_intermixed_args(rest[1:])
    args.command = command
    args.format = args.format or fmt or "text"
    if args.format not in ("text", "json"):
        raise UsageError(f"eqk: unknown format {args.format!r}")
    return args


def _emit(command: str, inputs: dict, out: Output, fmt: str, stream) -> None:
    if out.raw_json is not None:
        stream.write(out.raw_json)
        return
    if fmt == "json":
        obj = {"command": command, "inputs": inputs, "result": out.result, "witness": out.witness}
        stream.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        stream.write("\n".join(out.text) + "\n")


def _error(command: str, inputs: dict, err: dict, fmt: str) -> None:
    if fmt == "json":
        obj = {"command": command, "inputs": inputs, "result": None, "witness": None, "error": err}
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stderr.write(f"error [{err['kind']}]: {err['message']}\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if any(x == "json" and i > 0 and argv[i - 1] == "--format" for i, x in enumerate(argv)) \
        or "--format=json" in argv else "text"
    if argv in (["-h"], ["--help"]):
        sys.stdout.write(USAGE)
        return EXIT_OK
    try:
        args = parse_argv(argv)
    except UsageError as e:
        _error("", {"argv": argv}, {"kind": "UsageError", "message": str(e)}, fmt)
        return EXIT_USAGE
    command = args.command + ("" if args.command == "check" else f" {args.action}")
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format", "action")}
    try:
        out = COMMANDS[args.command][0](args) if args.command != "check" else cmd_check(args)
    except ParseError as e:
        _error(command, inputs, e.to_dict(), args.format)
        return EXIT_USAGE
    except EqkError as e:
        _error(command, inputs, e.to_dict(), args.format)
        return EXIT_ERROR
    _emit(command, inputs, out, args.format, sys.stdout)
    return out.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
