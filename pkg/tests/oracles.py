"""Brute-force references used by the tests and the acceptance run."""


def common_run_oracle(a, b):
    """Longest contiguous run of ``a`` also found in ``b``; earliest in ``a`` wins ties."""
    a, b = tuple(a), tuple(b)
    for n in range(min(len(a), len(b)), 0, -1):
        for i in range(len(a) - n + 1):
            piece = a[i:i + n]
            if any(b[j:j + n] == piece for j in range(len(b) - n + 1)):
                return piece
    return ()


def self_learn_oracle(seqs):
    """Distinct maximum-length pairwise runs with the positions they cover."""
    runs = [(i, j, common_run_oracle(seqs[i], seqs[j]))
            for i in range(len(seqs)) for j in range(i + 1, len(seqs))]
    if not runs:
        return []
    best = max(len(r) for _, _, r in runs)
    if best == 0:
        return []
    groups = {}
    for i, j, r in runs:
        if len(r) == best:
            groups.setdefault(r, set()).update((i, j))
    return sorted((r, tuple(sorted(m))) for r, m in groups.items())


def teacher_oracle(seqs):
    runs = [common_run_oracle(seqs[i], seqs[j])
            for i in range(len(seqs)) for j in range(i + 1, len(seqs))]
    shortest = min(len(r) for r in runs)
    return next(r for r in runs if len(r) == shortest)


# -- brute-force z2 resolver ---------------------------------------------------

def _locus(rep, symbol):
    binds = rep.sds[symbol].bindings
    return {j for i, j in rep.axioms.chains if i in binds} | {i for i, j in rep.axioms.chains if j in binds}


def _known(rep, s):
    return s in rep.sds and bool(rep.sds[s].bindings)


def _fits(rep, sym, pred, pos):
    d = rep.sds[sym]
    if d.kind != "object-class":
        return False
    rule = rep.rules.get(pred)
    cls = rule.slot_classes[pos] if rule is not None and pos < rule.arity else "*"
    return cls == "*" or cls in d.classes


def _ground_eval(rep, pred, args, excluded):
    facts = rep.facts.get(pred, [])
    for f in facts:
        if len(f) != len(args):
            continue
        if all(a is None or a == v for a, v in zip(args, f)) and all(f[k] != b for k, b in excluded.items()):
            return ("actually-true", None)
    if args and args[0] is not None:
        for f in facts:
            if len(f) == len(args) and f[0] == args[0]:
                if any(a is not None and a != v for a, v in zip(args[1:], f[1:])):
                    return ("false", 3)
    for a in args:
        if a is None:
            continue
        members = {a}
        for p, rule in rep.rules.items():
            if rule.kind == "set-membership" and rule.arity == 2:
                members |= {x for x, c in rep.facts.get(p, []) if c == a}
        for p, q in rep.contra:
            for other in ([q] if p == pred else []) + ([p] if q == pred else []):
                if any(f and f[0] in members for f in rep.facts.get(other, [])):
                    return ("false", 4)
    return ("actually-true", None)


def _variables(slots):
    seen = {}
    for k, (kind, val) in enumerate(slots):
        if kind == "variable":
            seen.setdefault(val, []).append(k)
    return list(seen.items())


def _positive(rep, pred, slots):
    if not _known(rep, pred) or any(k == "ground" and not _known(rep, v) for k, v in slots):
        return ("false", 1, ())
    L = _locus(rep, pred)
    excluded = {}
    for pos, (kind, val) in enumerate(slots):
        inside = _known(rep, val) and bool(rep.sds[val].bindings & L)
        if kind == "ground" and not inside:
            return ("false", 2, ())
        if kind == "negated":
            if inside:
                return ("false", 2, ())
            excluded[pos] = val
    variables = _variables(slots)
    domains = []
    for _, positions in variables:
        dom = [s for s in sorted(rep.sds) if rep.sds[s].bindings & L
               and all(_fits(rep, s, pred, p) for p in positions)]
        if not dom:
            return ("conditionally-true", None, ())
        domains.append(dom)
    first = None
    for combo in _product(domains):
        args = [v if k == "ground" else None for k, v in slots]
        for (_, positions), val in zip(variables, combo):
            for p in positions:
                args[p] = val
        status, crit = _ground_eval(rep, pred, args, excluded)
        if status == "actually-true":
            return (status, None, tuple((n, v) for (n, _), v in zip(variables, combo) if not n.startswith("_")))
        if first is None:
            first = crit
    return ("false", first, ())


def _product(domains):
    if not domains:
        yield ()
        return
    for head in domains[0]:
        for rest in _product(domains[1:]):
            yield (head,) + rest


def resolve_oracle(rep, h):
    """(status, criterion, bindings) by exhaustive enumeration."""
    pred = h.body.symbol
    slots = [(s.kind, s.value) for s in h.body.slots]
    if not rep.link_enabled:
        if h.body.ground and h.body.text() in rep.A2:
            return ("false", 2, ()) if h.negated else ("actually-true", None, ())
        return ("undecidable", None, ())
    if not h.negated:
        return _positive(rep, pred, slots)
    variables = _variables(slots)
    if not _known(rep, pred):
        return ("conditionally-true" if variables else "actually-true", None, ())
    domains = []
    for _, positions in variables:
        dom = [s for s in sorted(rep.sds) if all(_fits(rep, s, pred, p) for p in positions)]
        if not dom:
            return ("conditionally-true", None, ())
        domains.append(dom)
    for combo in _product(domains):
        filled = list(slots)
        for (_, positions), val in zip(variables, combo):
            for p in positions:
                filled[p] = ("ground", val)
        if _positive(rep, pred, filled)[0] != "actually-true":
            return ("actually-true", None, tuple((n, v) for (n, _), v in zip(variables, combo)
                                                  if not n.startswith("_")))
    return ("false", 2, ())


# -- a small taught base and a hypothesis generator ----------------------------

PEOPLE = ("Michael", "Anna", "Turing", "Bob")
PLACES = ("home", "work", "city")
TIMES = ("8:30", "14:00", "1954")


def build_base(rep, rng=None):
    rep.declare("left", 3, ("person", "place", "time"))
    rep.declare("lives", 2, ("person", "place"))
    rep.declare("died", 2, ("person", "time"))
    rep.declare("lives-eternally", 1, ("kind",))
    rep.declare("instance-of", 2, ("person", "kind"), "set-membership")
    rep.contra.add(("lives-eternally", "died"))
    for f in ("left(Michael,work,8:30)", "left(Anna,home,14:00)", "lives(Bob,city)",
              "lives(Michael,home)", "died(Turing,1954)", "instance-of(Turing,human)",
              "instance-of(Michael,human)"):
        rep.fact(f)
    rep.sd("robot")
    rep.sds["robot"].classes.add("kind")
    rep.sds["human"].classes.add("kind")
    rep.chain("lives-eternally", "human")
    rep.chain("lives-eternally", "robot")
    rep.chain("left", "home")
    rep.chain("lives", "work")
    return rep


def random_hypothesis(rng, rep):
    preds = ["left", "lives", "died", "lives-eternally", "instance-of", "flies"]
    vocab = list(PEOPLE + PLACES + TIMES) + ["human", "robot", "Zed"]
    p = rng.choice(preds)
    arity = rep.rules[p].arity if p in rep.rules else rng.randint(1, 2)
    negated = rng.random() < 0.25
    slots = []
    for k in range(arity):
        r = rng.random()
        if r < 0.55:
            slots.append(rng.choice(vocab))
        elif r < 0.8:
            slots.append("?" + rng.choice("xyz"))
        elif r < 0.9:
            slots.append("_")
        elif not negated:
            slots.append("!" + rng.choice(vocab))
        else:
            slots.append(rng.choice(vocab))
    return ("not " if negated else "") + f"{p}({', '.join(slots)})"
