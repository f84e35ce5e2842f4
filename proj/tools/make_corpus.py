#!/usr/bin/env python3
"""Generate the bundled CNF corpus.

Families share their symbol names so that a model trained on some members
transfers to others:

  prop_*  random 3-CNF and pigeonhole instances
  rel_*   reachability under transitivity, with distractor relations
  anc_*   ancestor closure over a parent tree, with sibling noise
  eqc_*   ground equation chains under congruence, with distractor equations
  grp_*   small group-theory lemmas
  sat_*   satisfiable problems that saturate

Output is deterministic for a given --seed.
"""

import argparse
import itertools
import random
from pathlib import Path


def cnf(name, role, body):
    return f"cnf({name}, {role}, {body}).\n"


def header(title):
    return f"% {title}\n"


def satisfiable(n, clauses):
    for bits in itertools.product([False, True], repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def prop_lit(l):
    return f"p{abs(l)}" if l > 0 else f"~p{abs(l)}"


def random_3cnf(rng, n, m):
    out = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        out.append([v if rng.random() < 0.5 else -v for v in vs])
    return out


def prop_problem(rng, n, m):
    while True:
        clauses = random_3cnf(rng, n, m)
        if not satisfiable(n, clauses):
            break
    text = header(f"random 3-CNF, {n} variables, {m} clauses")
    for i, c in enumerate(clauses):
        role = "negated_conjecture" if i == 0 else "axiom"
        text += cnf(f"c{i}", role, " | ".join(prop_lit(l) for l in c))
    return text


def php_problem(holes):
    pigeons = holes + 1
    text = header(f"pigeonhole, {pigeons} pigeons, {holes} holes")
    k = 0
    for p in range(pigeons):
        text += cnf(f"h{k}", "negated_conjecture" if p == 0 else "axiom",
                    " | ".join(f"in(c{p}, h{h})" for h in range(holes)))
        k += 1
    for h in range(holes):
        for p1, p2 in itertools.combinations(range(pigeons), 2):
            text += cnf(f"h{k}", "axiom", f"~in(c{p1}, h{h}) | ~in(c{p2}, h{h})")
            k += 1
    return text


def distractors(rng, k, text, tag):
    """Symmetric, transitive q over b-constants and a unary g map."""
    if k == 0:
        return text
    bs = [f"b{i}" for i in range(k + 1)]
    text += cnf(f"{tag}_qs", "axiom", "~q(X, Y) | q(Y, X)")
    text += cnf(f"{tag}_qt", "axiom", "~q(X, Y) | ~q(Y, Z) | q(X, Z)")
    for i in range(k):
        text += cnf(f"{tag}_q{i}", "axiom", f"q({bs[i]}, {bs[i + 1]})")
    if k >= 3:
        text += cnf(f"{tag}_g", "axiom", "~q(X, Y) | q(g(X), g(Y))")
    rng.shuffle(bs)
    return text


def rel_problem(rng, length, noise, shortcut):
    text = header(f"reachability, chain {length}, noise {noise}")
    text += cnf("trans", "axiom", "~r(X, Y) | ~r(Y, Z) | r(X, Z)")
    order = list(range(length))
    rng.shuffle(order)
    for i in order:
        text += cnf(f"e{i}", "axiom", f"r(a{i}, a{i + 1})")
    if shortcut:
        text += cnf("lift", "axiom", "~r(X, Y) | s(X, Y)")
        text = distractors(rng, noise, text, "d")
        text += cnf("goal", "negated_conjecture", f"~s(a0, a{length})")
    else:
        text = distractors(rng, noise, text, "d")
        text += cnf("goal", "negated_conjecture", f"~r(a0, a{length})")
    return text


def anc_problem(rng, depth, noise):
    text = header(f"ancestor closure, depth {depth}, noise {noise}")
    text += cnf("base", "axiom", "~par(X, Y) | anc(X, Y)")
    text += cnf("step", "axiom", "~par(X, Y) | ~anc(Y, Z) | anc(X, Z)")
    text += cnf("sib", "axiom", "~par(Z, X) | ~par(Z, Y) | sib(X, Y)")
    facts = [f"par(a{i}, a{i + 1})" for i in range(depth)]
    for i in range(noise):
        facts.append(f"par(a{rng.randrange(depth)}, n{i})")
    rng.shuffle(facts)
    for i, f in enumerate(facts):
        text += cnf(f"f{i}", "axiom", f)
    text += cnf("goal", "negated_conjecture", f"~anc(a0, a{depth})")
    return text


def eqc_problem(rng, length, noise, wrap):
    text = header(f"equation chain, length {length}, noise {noise}")
    eqs = [f"a{i} = a{i + 1}" for i in range(length)]
    for i in range(noise):
        eqs.append(f"f(b{i}) = b{i + 1}")
    rng.shuffle(eqs)
    for i, e in enumerate(eqs):
        text += cnf(f"e{i}", "axiom", e)
    if wrap == "f":
        text += cnf("goal", "negated_conjecture", f"f(a0) != f(a{length})")
    elif wrap == "p":
        text += cnf("pa", "axiom", "p(a0)")
        text += cnf("goal", "negated_conjecture", f"~p(a{length})")
    else:
        text += cnf("goal", "negated_conjecture", f"a0 != a{length}")
    return text


GROUP_AXIOMS = [
    ("left_identity", "mult(e, X) = X"),
    ("left_inverse", "mult(inv(X), X) = e"),
    ("assoc", "mult(mult(X, Y), Z) = mult(X, mult(Y, Z))"),
]

GROUP_GOALS = [
    ("identity_instance", "mult(e, a) != a"),
    ("inverse_instance", "mult(inv(a), a) != e"),
    ("assoc_instance", "mult(mult(a, b), c) != mult(a, mult(b, c))"),
    ("double_identity", "mult(e, mult(e, a)) != a"),
    ("inverse_shift", "mult(inv(a), mult(a, b)) != b"),
    ("identity_inside", "mult(a, mult(e, b)) != mult(a, b)"),
    ("cancel_hyp", None),
    ("inverse_twice", "mult(inv(a), mult(a, mult(inv(b), b))) != e"),
]


def grp_problem(goal_name, goal, with_noise):
    text = header(f"group theory, {goal_name}")
    for name, ax in GROUP_AXIOMS:
        text += cnf(name, "axiom", ax)
    if with_noise:
        text += cnf("comm_b", "axiom", "mult(b, c) = mult(c, b)")
    if goal is None:
        text += cnf("hyp", "axiom", "mult(a, b) = mult(a, c)")
        text += cnf("hyp2", "axiom", "mult(inv(a), mult(a, b)) = b")
        text += cnf("goal", "negated_conjecture", "mult(inv(a), mult(a, c)) != b")
    else:
        text += cnf("goal", "negated_conjecture", goal)
    return text


def sat_problems():
    return {
        "sat_001.p": header("satisfiable, unit facts") + cnf("a", "axiom", "p(a)") + cnf("b", "axiom", "~p(b)")
        + cnf("c", "negated_conjecture", "q(X) | ~p(X)"),
        "sat_002.p": header("satisfiable, propositional") + cnf("a", "axiom", "p1 | p2")
        + cnf("b", "axiom", "~p1 | p3") + cnf("c", "negated_conjecture", "~p2 | p3"),
        "sat_003.p": header("satisfiable, one-step rules") + cnf("t", "axiom", "~r(X, Y) | s(Y)")
        + cnf("e0", "axiom", "r(a0, a1)") + cnf("e1", "axiom", "r(a1, a2)")
        + cnf("goal", "negated_conjecture", "~s(a0)"),
        "sat_004.p": header("satisfiable, ground equations") + cnf("e0", "axiom", "a0 = a1")
        + cnf("goal", "negated_conjecture", "a1 != a2"),
    }


def build(seed):
    rng = random.Random(seed)
    problems = {}

    idx = itertools.count(1)
    for n, m in [(5, 30), (6, 36), (6, 40), (7, 42), (7, 46), (8, 48), (8, 52), (9, 54), (10, 60), (11, 64)]:
        problems[f"prop_{next(idx):03d}.p"] = prop_problem(rng, n, m)
    for holes in [2, 3]:
        problems[f"prop_{next(idx):03d}.p"] = php_problem(holes)

    idx = itertools.count(1)
    for length, noise, shortcut in [(3, 0, False), (4, 2, False), (5, 3, True), (5, 4, False), (6, 3, False),
                                    (6, 5, True), (7, 4, False), (7, 6, True), (8, 5, False), (8, 6, False),
                                    (9, 6, True), (10, 7, False), (4, 6, False), (5, 7, True), (6, 8, False)]:
        problems[f"rel_{next(idx):03d}.p"] = rel_problem(rng, length, noise, shortcut)

    idx = itertools.count(1)
    for depth, noise in [(3, 2), (4, 4), (5, 5), (6, 6), (6, 8), (7, 8), (8, 10), (9, 12), (5, 12), (10, 14)]:
        problems[f"anc_{next(idx):03d}.p"] = anc_problem(rng, depth, noise)

    idx = itertools.count(1)
    for length, noise, wrap in [(2, 0, "eq"), (3, 2, "f"), (3, 3, "p"), (4, 3, "eq"), (4, 4, "f"), (5, 4, "p"),
                                (5, 5, "f"), (6, 5, "eq"), (6, 6, "p"), (7, 6, "f"), (8, 7, "p"), (4, 8, "f")]:
        problems[f"eqc_{next(idx):03d}.p"] = eqc_problem(rng, length, noise, wrap)

    idx = itertools.count(1)
    for goal_name, goal in GROUP_GOALS:
        problems[f"grp_{next(idx):03d}.p"] = grp_problem(goal_name, goal, False)
    for goal_name, goal in GROUP_GOALS[3:6]:
        problems[f"grp_{next(idx):03d}.p"] = grp_problem(goal_name, goal, True)

    problems.update(sat_problems())
    return problems


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "corpus"))
    ap.add_argument("--seed", type=int, default=2019)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for old in out.glob("*.p"):
        old.unlink()
    problems = build(args.seed)
    for name, text in sorted(problems.items()):
        (out / name).write_text(text)
    print(f"wrote {len(problems)} problems to {out}")


if __name__ == "__main__":
    main()
