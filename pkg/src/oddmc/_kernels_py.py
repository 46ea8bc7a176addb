"""Pure-Python automaton kernels.

Every function here operates on int-encoded automata: states and symbols
are dense nonnegative ints, transitions are (src, sym, dst) triples.
`oddmc._kernels.pyx` is the compiled twin with the same signatures; the
backend is picked once at import time in `oddmc._backend`.

All functions are deterministic given sorted inputs: result states are
numbered in BFS discovery order with symbols explored in increasing id
order, so identical inputs produce identical outputs on both backends.
"""

from __future__ import annotations

BACKEND_NAME = "python"


def _adjacency(trans):
    """src -> sym -> sorted tuple of dsts."""
    adj = {}
    for src, sym, dst in trans:
        adj.setdefault(src, {}).setdefault(sym, set()).add(dst)
    return {
        src: {sym: tuple(sorted(dsts)) for sym, dsts in sorted(row.items())}
        for src, row in adj.items()
    }


def intersect(trans_a, init_a, fin_a, trans_b, init_b, fin_b):
    """Reachable product construction for language intersection.

    Returns (n_states, trans, initial, final) with product states renamed
    to dense ints in discovery order.
    """
    adj_a = _adjacency(trans_a)
    adj_b = _adjacency(trans_b)
    fin_a = set(fin_a)
    fin_b = set(fin_b)

    ids = {}
    order = []
    for qa in sorted(set(init_a)):
        for qb in sorted(set(init_b)):
            if (qa, qb) not in ids:
                ids[(qa, qb)] = len(order)
                order.append((qa, qb))
    initial = list(range(len(order)))
    trans = []
    final = []
    i = 0
    while i < len(order):
        qa, qb = order[i]
        if qa in fin_a and qb in fin_b:
            final.append(i)
        row_a = adj_a.get(qa)
        row_b = adj_b.get(qb)
        if row_a and row_b:
            common = row_a.keys() & row_b.keys()
            for sym in sorted(common):
                for da in row_a[sym]:
                    for db in row_b[sym]:
                        key = (da, db)
                        j = ids.get(key)
                        if j is None:
                            j = len(order)
                            ids[key] = j
                            order.append(key)
                        trans.append((i, sym, j))
        i += 1
    return len(order), trans, initial, final


def difference(trans_u, init_u, fin_u, trans_b, init_b, fin_b):
    """Reachable construction for L(u) minus L(b).

    Pairs every state of `u` with an on-the-fly determinized subset of
    `b` (as an int bitmask), so the subtrahend's support is never
    enumerated: only symbols occurring on `u`-transitions are explored.
    """
    adj_u = _adjacency(trans_u)
    fin_u = set(fin_u)

    bmask = {}
    for src, sym, dst in trans_b:
        bmask.setdefault((src, sym), 0)
        bmask[(src, sym)] |= 1 << dst
    fmask_b = 0
    for q in fin_b:
        fmask_b |= 1 << q
    imask_b = 0
    for q in init_b:
        imask_b |= 1 << q

    ids = {}
    order = []
    for qu in sorted(set(init_u)):
        key = (qu, imask_b)
        if key not in ids:
            ids[key] = len(order)
            order.append(key)
    initial = list(range(len(order)))
    trans = []
    final = []
    i = 0
    while i < len(order):
        qu, mask = order[i]
        if qu in fin_u and not (mask & fmask_b):
            final.append(i)
        row_u = adj_u.get(qu)
        if row_u:
            for sym, dsts in row_u.items():
                nmask = 0
                m = mask
                while m:
                    low = m & -m
                    q = low.bit_length() - 1
                    nmask |= bmask.get((q, sym), 0)
                    m ^= low
                for du in dsts:
                    key = (du, nmask)
                    j = ids.get(key)
                    if j is None:
                        j = len(order)
                        ids[key] = j
                        order.append(key)
                    trans.append((i, sym, j))
        i += 1
    return len(order), trans, initial, final


def determinize(trans, init, fin):
    """Subset construction.

    Returns (n_states, rows, finals, sink) where rows[q] is a sorted list
    of (sym, dst) pairs omitting edges into the sink; state 0 is the
    initial subset and `sink` is the id of the empty subset (always
    materialized so the result is total over any support via implicit
    sink edges).
    """
    step = {}
    per_state_syms = {}
    for src, sym, dst in trans:
        step.setdefault((src, sym), 0)
        step[(src, sym)] |= 1 << dst
        per_state_syms.setdefault(src, set()).add(sym)
    fmask = 0
    for q in fin:
        fmask |= 1 << q
    imask = 0
    for q in init:
        imask |= 1 << q

    ids = {imask: 0}
    order = [imask]
    rows = []
    finals = []
    i = 0
    while i < len(order):
        mask = order[i]
        if mask & fmask:
            finals.append(i)
        syms = set()
        m = mask
        while m:
            low = m & -m
            q = low.bit_length() - 1
            syms |= per_state_syms.get(q, set())
            m ^= low
        row = []
        for sym in sorted(syms):
            nmask = 0
            m = mask
            while m:
                low = m & -m
                q = low.bit_length() - 1
                nmask |= step.get((q, sym), 0)
                m ^= low
            if nmask:
                j = ids.get(nmask)
                if j is None:
                    j = len(order)
                    ids[nmask] = j
                    order.append(nmask)
                row.append((sym, j))
        rows.append(row)
        i += 1
    sink = ids.get(0)
    if sink is None:
        sink = len(order)
        rows.append([])
    return len(rows), rows, finals, sink


def shortest_accepted(trans, init, fin, max_len=None):
    """Symbol ids of the shortest accepted string (length >= 1), or None.

    BFS with one parent map per level: a shortest accepted path repeats
    no state except possibly an initial-final endpoint, so its length is
    at most the state count and per-level maps stay finite.  States are
    expanded in sorted order and symbols in increasing id order, so ties
    resolve by the fixed symbol order.  The empty string is never
    reported.
    """
    adj = _adjacency(trans)
    fin = set(fin)
    n_states = len({q for q, _s, _d in trans} | {d for _q, _s, d in trans} | set(init) | fin)
    if max_len is None:
        max_len = n_states

    # Linear pre-pass: is any final state reachable in >= 1 steps?  If
    # not, skip the level BFS entirely (emptiness in O(transitions)).
    succ = {}
    for q, _s, d in trans:
        succ.setdefault(q, set()).add(d)
    reach = set()
    stack = [d for q in init for d in succ.get(q, ())]
    while stack:
        q = stack.pop()
        if q in reach:
            continue
        reach.add(q)
        stack.extend(succ.get(q, ()))
    if not (reach & fin):
        return None

    levels = [{q: None for q in sorted(set(init))}]
    for _ in range(max_len):
        cur = levels[-1]
        nxt = {}
        hit = None
        for q in sorted(cur):
            row = adj.get(q)
            if not row:
                continue
            for sym, dsts in row.items():
                for d in dsts:
                    if d not in nxt:
                        nxt[d] = (q, sym)
                        if hit is None and d in fin:
                            hit = d
        if not nxt:
            return None
        levels.append(nxt)
        if hit is not None:
            word = []
            q = hit
            for level in range(len(levels) - 1, 0, -1):
                p, sym = levels[level][q]
                word.append(sym)
                q = p
            word.reverse()
            return word
    return None


def count_paths(n_states, trans, init, fin, length):
    """Number of length-`length` transition paths from an initial to a
    final state, with exact big-integer arithmetic.

    Counts strings when the caller guarantees at most one transition per
    (state, symbol) pair.
    """
    counts = [0] * n_states
    for q in init:
        counts[q] = 1
    for _ in range(length):
        nxt = [0] * n_states
        for src, _sym, dst in trans:
            c = counts[src]
            if c:
                nxt[dst] += c
        counts = nxt
    return sum(counts[q] for q in fin)
