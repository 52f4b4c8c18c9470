"""Compiled inner loops: the reduced-table search and canonical relabeling.

Everything in here works on 0-based tables (identity = 0) stored as int8
numpy arrays. The public modules translate to and from 1-based labels.
"""

import numpy as np
from numba import njit

OP_E = -1
OP_INV = -2
OP_MUL = -3

EMPTY = -1


@njit(cache=True, nogil=True)
def eval_program(prog, plen, g, inv, assign):
    """Evaluate a postfix term program; returns -1 if a lookup is still empty."""
    stack = np.empty(64, np.int64)
    sp = 0
    for p in range(plen):
        op = prog[p]
        if op >= 0:
            stack[sp] = assign[op]
            sp += 1
        elif op == OP_E:
            stack[sp] = 0
            sp += 1
        elif op == OP_INV:
            v = inv[stack[sp - 1]]
            if v < 0:
                return -1
            stack[sp - 1] = v
        else:
            b = stack[sp - 1]
            a = stack[sp - 2]
            v = g[a, b]
            if v < 0:
                return -1
            sp -= 1
            stack[sp - 1] = v
    return stack[0]


@njit(cache=True, nogil=True)
def constraints_ok(n, g, inv, progs, plens, nvars):
    """Check every fully-determined instance of every constraint."""
    assign = np.zeros(4, np.int64)
    for c in range(progs.shape[0]):
        nv = nvars[c]
        total = 1
        for _ in range(nv):
            total *= n
        for idx in range(total):
            r = idx
            for q in range(nv - 1, -1, -1):
                assign[q] = r % n
                r //= n
            lhs = eval_program(progs[c, 0], plens[c, 0], g, inv, assign)
            if lhs < 0:
                continue
            rhs = eval_program(progs[c, 1], plens[c, 1], g, inv, assign)
            if rhs < 0:
                continue
            if lhs != rhs:
                return False
    return True


@njit(cache=True, nogil=True)
def is_associative(g, n):
    for a in range(1, n):
        for b in range(1, n):
            ab = g[a, b]
            for c in range(1, n):
                if g[ab, c] != g[a, g[b, c]]:
                    return False
    return True


@njit(cache=True, nogil=True)
def eval_blocking(prog, plen, g, inv, assign, n):
    """Like eval_program, but an undefined lookup returns -1 - cell.

    ``cell`` is the flat index of the first empty cell met. An unknown
    inverse of x blocks on cell (x, n-1): by the time the last cell of row x
    is filled that row is complete, so its 0 and hence the inverse is known.
    """
    stack = np.empty(64, np.int64)
    sp = 0
    for p in range(plen):
        op = prog[p]
        if op >= 0:
            stack[sp] = assign[op]
            sp += 1
        elif op == OP_E:
            stack[sp] = 0
            sp += 1
        elif op == OP_INV:
            x = stack[sp - 1]
            v = inv[x]
            if v < 0:
                return -1 - (x * n + n - 1)
            stack[sp - 1] = v
        else:
            b = stack[sp - 1]
            a = stack[sp - 2]
            v = g[a, b]
            if v < 0:
                return -1 - (a * n + b)
            sp -= 1
            stack[sp - 1] = v
    return stack[0]


@njit(cache=True, nogil=True)
def eval_instance(inst, inst_c, inst_idx, progs, plens, nvars, g, inv, n, assign):
    """-1: determined and satisfied; -2: violated; r >= 0: blocked on cell r."""
    c = inst_c[inst]
    r = inst_idx[inst]
    for q in range(nvars[c] - 1, -1, -1):
        assign[q] = r % n
        r //= n
    lhs = eval_blocking(progs[c, 0], plens[c, 0], g, inv, assign, n)
    if lhs < 0:
        return -1 - lhs
    rhs = eval_blocking(progs[c, 1], plens[c, 1], g, inv, assign, n)
    if rhs < 0:
        return -1 - rhs
    return -1 if lhs == rhs else -2


@njit(cache=True, nogil=True)
def init_watches(n, g, inv, inst_c, inst_idx, progs, plens, nvars, watch, wl):
    """Put every undetermined instance on the watch list of its blocking cell.

    Returns False if some instance is already determined and violated.
    """
    assign = np.zeros(4, np.int64)
    for q in range(wl.shape[0]):
        wl[q] = 0
    for inst in range(inst_c.shape[0]):
        r = eval_instance(inst, inst_c, inst_idx, progs, plens, nvars, g, inv, n, assign)
        if r == -2:
            return False
        if r >= 0:
            watch[r, wl[r]] = inst
            wl[r] += 1
    return True


@njit(cache=True, nogil=True)
def _fill(cell, n, g, inv, inst_c, inst_idx, progs, plens, nvars,
          watch, wl, saved, moves, frec, ptr, assign):
    # frec[f] = (cell, saved_start, saved_len, moves_start); ptr = [fsp, ssp, msp]
    f = ptr[0]
    L = wl[cell]
    ssp = ptr[1]
    for p in range(L):
        saved[ssp + p] = watch[cell, p]
    frec[f, 0] = cell
    frec[f, 1] = ssp
    frec[f, 2] = L
    frec[f, 3] = ptr[2]
    ptr[0] = f + 1
    ptr[1] = ssp + L
    keep = 0
    ok = True
    for p in range(L):
        inst = saved[ssp + p]
        r = eval_instance(inst, inst_c, inst_idx, progs, plens, nvars, g, inv, n, assign)
        if r == -2:
            ok = False
            # leave the remaining instances where they were
            for q in range(p, L):
                watch[cell, keep] = saved[ssp + q]
                keep += 1
            break
        if r == -1:
            watch[cell, keep] = inst
            keep += 1
        else:
            watch[r, wl[r]] = inst
            wl[r] += 1
            moves[ptr[2]] = r
            ptr[2] += 1
    wl[cell] = keep
    return ok


@njit(cache=True, nogil=True)
def _unfill(watch, wl, saved, moves, frec, ptr):
    f = ptr[0] - 1
    cell = frec[f, 0]
    ssp = frec[f, 1]
    L = frec[f, 2]
    m0 = frec[f, 3]
    for q in range(ptr[2] - 1, m0 - 1, -1):
        wl[moves[q]] -= 1
    ptr[2] = m0
    for p in range(L):
        watch[cell, p] = saved[ssp + p]
    wl[cell] = L
    ptr[1] = ssp
    ptr[0] = f


@njit(cache=True, nogil=True)
def search(n, g, rowm, colm, inv, ci, cj, cur, forced, passthru, nfills, st,
           inv_req, nonassoc_req, inst_c, inst_idx, progs, plens, nvars,
           watch, wl, saved, moves, frec, ptr, out):
    """Resumable depth-first search over the cells listed in (ci, cj).

    All search state lives in the arrays passed in, so the caller can stop
    when ``out`` is full and call again to continue. ``st[0]`` is the depth,
    ``st[1]`` is 0 when entering a level and 1 when advancing it, and
    ``st[2]`` is set to 1 once the tree is exhausted. Returns the number of
    tables written to ``out``.

    Constraint instances sit on the watch list of the first empty cell they
    read (see init_watches) and are re-evaluated only when that cell is
    filled; every instance is therefore checked as soon as it is determined.
    """
    ncells = ci.shape[0]
    cap = out.shape[0]
    has_constraints = inst_c.shape[0] > 0
    assign = np.zeros(4, np.int64)
    k = st[0]
    mode = st[1]
    emitted = 0
    if st[2] == 1:
        return 0
    while True:
        if mode == 0:
            if k == ncells:
                if (not nonassoc_req) or (not is_associative(g, n)):
                    out[emitted, :, :] = g
                    emitted += 1
                mode = 1
                k -= 1
                if emitted == cap:
                    st[0] = k
                    st[1] = mode
                    return emitted
                continue
            i = ci[k]
            j = cj[k]
            if g[i, j] != EMPTY:
                passthru[k] = 1
                k += 1
                continue
            passthru[k] = 0
            cur[k] = -1
            nfills[k] = 0
            mode = 1
            continue

        if k < 0:
            st[0] = k
            st[1] = mode
            st[2] = 1
            return emitted
        if passthru[k] == 1:
            k -= 1
            continue
        i = ci[k]
        j = cj[k]
        v = cur[k]
        if v >= 0:
            for _ in range(nfills[k]):
                _unfill(watch, wl, saved, moves, frec, ptr)
            nfills[k] = 0
            g[i, j] = EMPTY
            rowm[i] ^= 1 << v
            colm[j] ^= 1 << v
            if forced[k] == 1:
                g[j, i] = EMPTY
                rowm[j] ^= 1
                colm[i] ^= 1
                inv[i] = -1
                inv[j] = -1
                forced[k] = 0
            elif v == 0:
                inv[i] = -1
        used = rowm[i] | colm[j]
        v += 1
        placed = False
        while v < n:
            if (used >> v) & 1:
                v += 1
                continue
            if v == 0 and inv_req:
                if i > j:
                    v += 1
                    continue
                if i < j and (g[j, i] != EMPTY or (rowm[j] & 1) or (colm[i] & 1)):
                    v += 1
                    continue
            g[i, j] = v
            rowm[i] |= 1 << v
            colm[j] |= 1 << v
            if v == 0:
                if inv_req and i < j:
                    g[j, i] = 0
                    rowm[j] |= 1
                    colm[i] |= 1
                    inv[i] = j
                    inv[j] = i
                    forced[k] = 1
                elif i == j:
                    inv[i] = i
            cur[k] = v
            if has_constraints:
                nf = 1
                ok = _fill(i * n + j, n, g, inv, inst_c, inst_idx, progs, plens, nvars,
                           watch, wl, saved, moves, frec, ptr, assign)
                if ok and forced[k] == 1:
                    nf = 2
                    ok = _fill(j * n + i, n, g, inv, inst_c, inst_idx, progs, plens, nvars,
                               watch, wl, saved, moves, frec, ptr, assign)
                if not ok:
                    for _ in range(nf):
                        _unfill(watch, wl, saved, moves, frec, ptr)
                    g[i, j] = EMPTY
                    rowm[i] ^= 1 << v
                    colm[j] ^= 1 << v
                    if forced[k] == 1:
                        g[j, i] = EMPTY
                        rowm[j] ^= 1
                        colm[i] ^= 1
                        inv[i] = -1
                        inv[j] = -1
                        forced[k] = 0
                    elif v == 0:
                        inv[i] = -1
                    v += 1
                    continue
                nfills[k] = nf
            placed = True
            break
        if placed:
            k += 1
            mode = 0
        else:
            cur[k] = -1
            k -= 1


@njit(cache=True, nogil=True)
def canonical(m, n, best, best_lab):
    """Lexicographically least relabeling of a normal loop table.

    Relabelings fix 0. Row 1 of the relabeled table is built column by
    column; a column whose preimage is still free is a branch point, and a
    product whose label is still free takes the smallest free label (any
    other choice makes that cell larger). Once row 1 is finished every label
    is assigned and the remaining rows are compared against the incumbent.
    Writes the result into ``best`` and the old->new map into ``best_lab``.
    """
    lab = np.empty(n, np.int64)
    pre = np.empty(n, np.int64)
    stk_j = np.empty(n, np.int64)
    stk_c = np.empty(n, np.int64)
    stk_next = np.empty(n, np.int64)
    stk_cmp = np.empty(n, np.int64)
    have_best = False
    if n == 1:
        best[0, 0] = 0
        best_lab[0] = 0
        return
    for a in range(1, n):
        for q in range(n):
            lab[q] = -1
            pre[q] = -1
        lab[0] = 0
        pre[0] = 0
        lab[a] = 1
        pre[1] = a
        nxt = 2
        sp = 0
        j = 1
        cmp = 0 if have_best else -1
        forward = True
        while True:
            if forward:
                pruned = False
                while j < n:
                    if pre[j] == -1:
                        stk_j[sp] = j
                        stk_c[sp] = 1
                        stk_next[sp] = nxt
                        stk_cmp[sp] = cmp
                        sp += 1
                        break
                    x = m[a, pre[j]]
                    if lab[x] == -1:
                        lab[x] = nxt
                        pre[nxt] = x
                        nxt += 1
                    v = lab[x]
                    if cmp == 0:
                        if v > best[1, j]:
                            pruned = True
                            break
                        elif v < best[1, j]:
                            cmp = -1
                    j += 1
                if not pruned and j == n:
                    # full relabeling known; finish the comparison
                    take = cmp == -1
                    if not take:
                        decided = False
                        for r in range(2, n):
                            pr = pre[r]
                            for c in range(1, n):
                                v = lab[m[pr, pre[c]]]
                                if v < best[r, c]:
                                    take = True
                                    decided = True
                                    break
                                elif v > best[r, c]:
                                    decided = True
                                    break
                            if decided:
                                break
                    if take:
                        for r in range(n):
                            pr = pre[r]
                            for c in range(n):
                                best[r, c] = lab[m[pr, pre[c]]]
                        for q in range(n):
                            best_lab[q] = lab[q]
                        have_best = True
                        # every open branch point is a prefix of the new best
                        for q in range(sp):
                            stk_cmp[q] = 0
                forward = False
            # choose the next candidate at the top branch point
            found = False
            while sp > 0:
                top = sp - 1
                cp = stk_next[top]
                for q in range(cp, nxt):
                    lab[pre[q]] = -1
                    pre[q] = -1
                nxt = cp
                j = stk_j[top]
                cmp = stk_cmp[top]
                c = stk_c[top]
                while c < n and lab[c] != -1:
                    c += 1
                if c < n:
                    stk_c[top] = c + 1
                    pre[j] = c
                    lab[c] = j
                    nxt = j + 1
                    found = True
                    break
                sp -= 1
            if not found:
                break
            forward = True


@njit(cache=True, nogil=True)
def canonical_batch(tables, n, out):
    lab = np.empty(n, np.int64)
    buf = np.empty((n, n), np.int64)
    for t in range(tables.shape[0]):
        canonical(tables[t], n, buf, lab)
        for r in range(n):
            for c in range(n):
                out[t, r, c] = buf[r, c]
