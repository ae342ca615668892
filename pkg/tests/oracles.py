"""Reference computations that share no code with the package under test.

Everything here is plain Python over tuples: terms are nested tuples
("var", i) / (op, arg, ...), and normal forms are computed by hand-written
rules per theory.
"""

from __future__ import annotations

import itertools

# ---------------------------------------------------------------- term model

SIGNATURES = {
    "initial": {},
    "pointed": {"pt": 0},
    "semilattice": {"meet": 2},
    "bounded-semilattice": {"meet": 2, "top": 0},
    "z2-set": {"s": 1},
    "idempotent-set": {"e": 1},
    "free-binary": {"f": 2},
}


def _leaves(t, op):
    if t[0] == op:
        for a in t[1:]:
            yield from _leaves(a, op)
    else:
        yield t


def _depth(t, op):
    k = 0
    while t[0] == op:
        t, k = t[1], k + 1
    return t, k


def normal_form(theory: str, t):
    """A canonical representative of the class of ``t``."""
    if theory in ("initial", "pointed", "free-binary"):
        return t
    if theory == "semilattice":
        return ("set",) + tuple(sorted({leaf[1] for leaf in _leaves(t, "meet")}))
    if theory == "bounded-semilattice":
        return ("set",) + tuple(sorted({leaf[1] for leaf in _leaves(t, "meet") if leaf[0] == "var"}))
    if theory == "z2-set":
        base, k = _depth(t, "s")
        return (base, k % 2)
    if theory == "idempotent-set":
        base, k = _depth(t, "e")
        return (base, min(k, 1))
    raise KeyError(theory)


def term_classes(theory: str, n: int, cap: int = 5000) -> dict | None:
    """Normal form -> representative term, saturating under the operations.

    Returns None once more than ``cap`` classes appear (infinite theories).
    """
    sig = SIGNATURES[theory]
    reps = {}
    for t in [("var", i) for i in range(n)] + [(op,) for op, a in sig.items() if a == 0]:
        reps.setdefault(normal_form(theory, t), t)
    grew = True
    while grew:
        grew = False
        pool = list(reps.values())
        for op, a in sig.items():
            if a == 0:
                continue
            for args in itertools.product(pool, repeat=a):
                t = (op,) + args
                key = normal_form(theory, t)
                if key not in reps:
                    reps[key] = t
                    grew = True
                    if len(reps) > cap:
                        return None
    return reps


def term_model_size(theory: str, n: int, cap: int = 5000) -> int | None:
    """Number of classes of terms in n variables; None if unbounded."""
    reps = term_classes(theory, n, cap)
    return None if reps is None else len(reps)


# ------------------------------------------------------------ algebra search


def _eval(t, tables, env, q):
    if t[0] == "var":
        return env[t[1]]
    args = [_eval(a, tables, env, q) for a in t[1:]]
    code = 0
    for v in args:
        code = code * q + v
    return tables[t[0]][code]


EQUATIONS = {
    "initial": [],
    "pointed": [],
    "semilattice": [
        (("meet", ("var", 0), ("var", 0)), ("var", 0), 1),
        (("meet", ("var", 0), ("var", 1)), ("meet", ("var", 1), ("var", 0)), 2),
        (("meet", ("meet", ("var", 0), ("var", 1)), ("var", 2)), ("meet", ("var", 0), ("meet", ("var", 1), ("var", 2))), 3),
    ],
    "z2-set": [(("s", ("s", ("var", 0))), ("var", 0), 1)],
    "idempotent-set": [(("e", ("e", ("var", 0))), ("e", ("var", 0)), 1)],
    "free-binary": [],
}
EQUATIONS["bounded-semilattice"] = EQUATIONS["semilattice"] + [(("meet", ("var", 0), ("top",)), ("var", 0), 1)]


def brute_force_algebras(theory: str, q: int) -> list[dict]:
    """Every assignment of tables satisfying the equations, by exhaustive search."""
    sig = SIGNATURES[theory]
    ops = sorted(sig)
    choices = [list(itertools.product(range(q), repeat=q ** sig[o])) for o in ops]
    out = []
    for pick in itertools.product(*choices):
        tables = dict(zip(ops, pick))
        if all(_eval(l, tables, env, q) == _eval(r, tables, env, q)
               for l, r, k in EQUATIONS[theory] for env in itertools.product(range(q), repeat=k)):
            out.append(tables)
    return out


def homomorphisms(theory: str, A: dict, qa: int, B: dict, qb: int) -> list[tuple]:
    sig = SIGNATURES[theory]
    out = []
    for h in itertools.product(range(qb), repeat=qa):
        ok = True
        for o, a in sig.items():
            for xs in itertools.product(range(qa), repeat=a):
                ca = 0
                cb = 0
                for x in xs:
                    ca = ca * qa + x
                    cb = cb * qb + h[x]
                if h[A[o][ca]] != B[o][cb]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(h)
    return out


# ------------------------------------------------------------ free algebras


def free_semilattice(q: int):
    """Nonempty subsets of q with union as meet (the join written as meet)."""
    elems = [frozenset(c) for r in range(1, q + 1) for c in itertools.combinations(range(q), r)]
    index = {e: i for i, e in enumerate(elems)}
    table = [index[a | b] for a in elems for b in elems]
    return elems, table


def is_isomorphic_binary(t1, t2, q: int) -> bool:
    """Is there a bijection carrying the binary table t1 to t2?"""
    for p in itertools.permutations(range(q)):
        if all(p[t1[a * q + b]] == t2[p[a] * q + p[b]] for a in range(q) for b in range(q)):
            return True
    return False


# ------------------------------------------------------------ coends


def coend_size(values_at, act, q: int, truncation: int) -> int:
    """|sum_n A(n) x q^n / ~| by naive closure, trying every map n -> m."""
    nodes = [(n, a, xs) for n in range(truncation + 1) for a in values_at(n)
             for xs in itertools.product(range(q), repeat=n)]
    parent = {v: v for v in nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for n, a, ys in nodes:
        for m in range(truncation + 1):
            for f in itertools.product(range(m), repeat=n):
                for xs in itertools.product(range(q), repeat=m):
                    if tuple(xs[f[i]] for i in range(n)) == ys:
                        u, v = find((n, a, ys)), find((m, act(f, m, a), xs))
                        if u != v:
                            parent[u] = v
    return len({find(v) for v in nodes})
