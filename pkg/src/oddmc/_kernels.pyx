# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled automaton kernels: the Cython twin of `_kernels_py`.

Same signatures, same deterministic construction orders, same results;
only the loops are typed.  Subset masks stay Python ints (arbitrary
width), path counts stay Python ints (they outgrow machine words fast).
"""

BACKEND_NAME = "cython"


def _adjacency(trans):
    adj = {}
    for src, sym, dst in trans:
        row = adj.get(src)
        if row is None:
            row = adj[src] = {}
        dsts = row.get(sym)
        if dsts is None:
            dsts = row[sym] = set()
        dsts.add(dst)
    return {
        src: {sym: tuple(sorted(dsts)) for sym, dsts in sorted(row.items())}
        for src, row in adj.items()
    }


def intersect(trans_a, init_a, fin_a, trans_b, init_b, fin_b):
    cdef Py_ssize_t i, j
    adj_a = _adjacency(trans_a)
    adj_b = _adjacency(trans_b)
    fset_a = set(fin_a)
    fset_b = set(fin_b)

    ids = {}
    order = []
    for qa in sorted(set(init_a)):
        for qb in sorted(set(init_b)):
            key = (qa, qb)
            if key not in ids:
                ids[key] = len(order)
                order.append(key)
    initial = list(range(len(order)))
    trans = []
    final = []
    i = 0
    while i < len(order):
        qa, qb = order[i]
        if qa in fset_a and qb in fset_b:
            final.append(i)
        row_a = adj_a.get(qa)
        row_b = adj_b.get(qb)
        if row_a is not None and row_b is not None:
            common = row_a.keys() & row_b.keys()
            for sym in sorted(common):
                for da in row_a[sym]:
                    for db in row_b[sym]:
                        key = (da, db)
                        jj = ids.get(key)
                        if jj is None:
                            jj = len(order)
                            ids[key] = jj
                            order.append(key)
                        trans.append((i, sym, jj))
        i += 1
    return len(order), trans, initial, final


def difference(trans_u, init_u, fin_u, trans_b, init_b, fin_b):
    cdef Py_ssize_t i
    adj_u = _adjacency(trans_u)
    fset_u = set(fin_u)

    bmask = {}
    for src, sym, dst in trans_b:
        key = (src, sym)
        bmask[key] = bmask.get(key, 0) | (1 << dst)
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
        if qu in fset_u and not (mask & fmask_b):
            final.append(i)
        row_u = adj_u.get(qu)
        if row_u is not None:
            for sym, dsts in row_u.items():
                nmask = 0
                m = mask
                while m:
                    low = m & -m
                    nmask |= bmask.get(((<object>low).bit_length() - 1, sym), 0)
                    m ^= low
                for du in dsts:
                    key = (du, nmask)
                    jj = ids.get(key)
                    if jj is None:
                        jj = len(order)
                        ids[key] = jj
                        order.append(key)
                    trans.append((i, sym, jj))
        i += 1
    return len(order), trans, initial, final


def determinize(trans, init, fin):
    cdef Py_ssize_t i
    step = {}
    per_state_syms = {}
    for src, sym, dst in trans:
        key = (src, sym)
        step[key] = step.get(key, 0) | (1 << dst)
        syms = per_state_syms.get(src)
        if syms is None:
            syms = per_state_syms[src] = set()
        syms.add(sym)
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
            extra = per_state_syms.get((<object>low).bit_length() - 1)
            if extra is not None:
                syms |= extra
            m ^= low
        row = []
        for sym in sorted(syms):
            nmask = 0
            m = mask
            while m:
                low = m & -m
                nmask |= step.get(((<object>low).bit_length() - 1, sym), 0)
                m ^= low
            if nmask:
                jj = ids.get(nmask)
                if jj is None:
                    jj = len(order)
                    ids[nmask] = jj
                    order.append(nmask)
                row.append((sym, jj))
        rows.append(row)
        i += 1
    sink = ids.get(0)
    if sink is None:
        sink = len(order)
        rows.append([])
    return len(rows), rows, finals, sink


def shortest_accepted(trans, init, fin, max_len=None):
    cdef Py_ssize_t level, steps
    adj = _adjacency(trans)
    fset = set(fin)
    all_states = {q for q, _s, _d in trans} | {d for _q, _s, d in trans} | set(init) | fset
    cdef Py_ssize_t n_states = len(all_states)
    if max_len is None:
        max_len = n_states

    succ = {}
    for q, _s, d in trans:
        dsts = succ.get(q)
        if dsts is None:
            dsts = succ[q] = set()
        dsts.add(d)
    reach = set()
    stack = [d for q in init for d in succ.get(q, ())]
    while stack:
        q = stack.pop()
        if q in reach:
            continue
        reach.add(q)
        stack.extend(succ.get(q, ()))
    if not (reach & fset):
        return None

    levels = [{q: None for q in sorted(set(init))}]
    for steps in range(max_len):
        cur = levels[len(levels) - 1]
        nxt = {}
        hit = None
        for q in sorted(cur):
            row = adj.get(q)
            if row is None:
                continue
            for sym, dsts in row.items():
                for d in dsts:
                    if d not in nxt:
                        nxt[d] = (q, sym)
                        if hit is None and d in fset:
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
    cdef Py_ssize_t step, n = n_states
    cdef Py_ssize_t src, dst
    counts = [0] * n
    for q in init:
        counts[q] = 1
    srcs = [t[0] for t in trans]
    dsts = [t[2] for t in trans]
    cdef Py_ssize_t m = len(srcs)
    cdef Py_ssize_t e
    for step in range(length):
        nxt = [0] * n
        for e in range(m):
            src = srcs[e]
            c = counts[src]
            if c:
                dst = dsts[e]
                nxt[dst] = nxt[dst] + c
        counts = nxt
    total = 0
    for q in fin:
        total += counts[q]
    return total
