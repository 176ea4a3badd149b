"""Pure-Python versions of the hot loops.

Terms are dicts mapping exponent tuples to coefficients.  When ``p`` is a
positive prime the coefficients are ints reduced mod ``p``; when ``p == 0``
they are arbitrary exact numbers (``Fraction``) and no reduction happens.
"""


def mul_terms(a, b, p):
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    bitems = list(b.items())
    for ea, ca in a.items():
        for eb, cb in bitems:
            e = tuple([x + y for x, y in zip(ea, eb)])
            out[e] = get(e, 0) + ca * cb
    if p:
        return {e: c % p for e, c in out.items() if c % p}
    return {e: c for e, c in out.items() if c}


def add_scaled_into(acc, b, scale, p):
    """acc += scale * b, in place; returns acc."""
    get = acc.get
    for e, c in b.items():
        v = get(e, 0) + scale * c
        if p:
            v %= p
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)
    return acc


def substitute_terms(terms, gens, n, p, one):
    """Expand sum c_I * prod_j gens[j]**I_j."""
    powers = [[{(0,) * n: one}, g] for g in gens]

    def power(j, k):
        cache = powers[j]
        while len(cache) <= k:
            cache.append(mul_terms(cache[-1], gens[j], p))
        return cache[k]

    acc = {}
    unit = {(0,) * n: one}
    for e, c in terms.items():
        prod = unit
        for j, k in enumerate(e):
            if k:
                prod = power(j, k) if prod is unit else mul_terms(prod, power(j, k), p)
        add_scaled_into(acc, prod, c, p)
    return acc


def weighted_max(keys, weights):
    """max over exponent tuples of the integer dot product with weights."""
    best = None
    for e in keys:
        s = 0
        for x, w in zip(e, weights):
            s += x * w
        if best is None or s > best:
            best = s
    return best
