"""Two-clock region graph of the product of two complete one-clock automata.

A clock bounded by constant ``K`` is tracked by its region code: ``2n`` is
the point ``n``, ``2n+1`` the interval ``(n, n+1)`` and ``2K+1`` everything
above ``K``.  When both clocks sit in bounded open intervals the order of
their fractional parts is kept as ``o`` in {-1, 0, 1} (sign of
frac(x) - frac(y)); otherwise ``o`` is 0.

The search kernels are compiled with numba unless disabled (see ``_jit``).
"""
from __future__ import annotations

import numpy as np

from ._jit import njit

STATUS_EQUIVALENT = 0
STATUS_FOUND = 1
STATUS_CAP = 2


@njit
def norm_order(rx, ry, o, topx, topy):
    if rx % 2 == 1 and rx < topx and ry % 2 == 1 and ry < topy:
        return o
    return 0


@njit
def time_successor(rx, ry, o, topx, topy):
    """Next region under time elapse; returns (rx, ry, o, moved)."""
    bx = rx < topx
    by = ry < topy
    if not bx and not by:
        return rx, ry, o, False
    px = bx and rx % 2 == 0
    py = by and ry % 2 == 0
    if px or py:
        nx = rx + 1 if px else rx
        ny = ry + 1 if py else ry
        if px and py:
            no = 0
        elif px:
            no = -1
        else:
            no = 1
        return nx, ny, norm_order(nx, ny, no, topx, topy), True
    nx, ny = rx, ry
    if bx and by:
        if o >= 0:
            nx = rx + 1
        if o <= 0:
            ny = ry + 1
    elif bx:
        nx = rx + 1
    else:
        ny = ry + 1
    return nx, ny, 0, True


@njit
def _state_index(qh, qa, rx, ry, o, na, cx, cy):
    return (((qh * na + qa) * cx + rx) * cy + ry) * 3 + (o + 1)


@njit
def product_search(tgt_h, rst_h, acc_h, q0_h, tgt_a, rst_a, acc_a, q0_a, kx, ky, cap):
    """Level-order search for a state where the two automata disagree on acceptance.

    Returns ``(status, sign, actions, steps)``.  ``sign`` is -1 when the
    first automaton accepts and the second rejects, +1 for the converse.
    ``actions[i]``/``steps[i]`` give the i-th macro step: let time pass
    through ``steps[i]`` successor regions, then perform action
    ``actions[i]``.  Among shortest witnesses sign -1 is preferred, then
    the first in (action, step) lexicographic order.
    """
    nh, m, cx = tgt_h.shape
    na = tgt_a.shape[0]
    cy = tgt_a.shape[2]
    topx = 2 * kx + 1
    topy = 2 * ky + 1
    total = nh * na * cx * cy * 3
    empty = np.zeros(0, dtype=np.int64)

    if acc_h[q0_h] != acc_a[q0_a]:
        return STATUS_FOUND, (-1 if acc_h[q0_h] else 1), empty, empty

    parent = np.full(total, -1, dtype=np.int64)
    lab_a = np.zeros(total, dtype=np.int64)
    lab_j = np.zeros(total, dtype=np.int64)
    seen = np.zeros(total, dtype=np.uint8)
    queue = np.zeros(total, dtype=np.int64)

    s0 = _state_index(q0_h, q0_a, 0, 0, 0, na, cx, cy)
    seen[s0] = 1
    queue[0] = s0
    head = 0
    tail = 1
    count = 1
    maxchain = cx + cy + 2
    chx = np.zeros(maxchain, dtype=np.int64)
    chy = np.zeros(maxchain, dtype=np.int64)
    cho = np.zeros(maxchain, dtype=np.int64)

    while head < tail:
        level_end = tail
        bad_neg = -1
        bad_pos = -1
        while head < level_end:
            s = queue[head]
            head += 1
            rest = s
            o = rest % 3 - 1
            rest //= 3
            ry = rest % cy
            rest //= cy
            rx = rest % cx
            rest //= cx
            qa = rest % na
            qh = rest // na

            # the chain of time successors of this state
            n = 0
            chx[0] = rx
            chy[0] = ry
            cho[0] = o
            n = 1
            while True:
                nx, ny, no, moved = time_successor(chx[n - 1], chy[n - 1], cho[n - 1], topx, topy)
                if not moved:
                    break
                chx[n] = nx
                chy[n] = ny
                cho[n] = no
                n += 1

            for a in range(m):
                for j in range(n):
                    x = chx[j]
                    y = chy[j]
                    th = tgt_h[qh, a, x]
                    ta = tgt_a[qa, a, y]
                    if rst_h[qh, a, x]:
                        x = 0
                    if rst_a[qa, a, y]:
                        y = 0
                    no = norm_order(x, y, cho[j], topx, topy)
                    t = _state_index(th, ta, x, y, no, na, cx, cy)
                    if seen[t]:
                        continue
                    seen[t] = 1
                    parent[t] = s
                    lab_a[t] = a
                    lab_j[t] = j
                    count += 1
                    if count > cap:
                        return STATUS_CAP, 0, empty, empty
                    if acc_h[th] != acc_a[ta]:
                        if acc_h[th]:
                            if bad_neg < 0:
                                bad_neg = t
                        elif bad_pos < 0:
                            bad_pos = t
                        continue
                    queue[tail] = t
                    tail += 1

        bad = bad_neg if bad_neg >= 0 else bad_pos
        if bad >= 0:
            length = 0
            t = bad
            while t != s0:
                length += 1
                t = parent[t]
            actions = np.zeros(length, dtype=np.int64)
            steps = np.zeros(length, dtype=np.int64)
            t = bad
            i = length - 1
            while t != s0:
                actions[i] = lab_a[t]
                steps[i] = lab_j[t]
                i -= 1
                t = parent[t]
            return STATUS_FOUND, (-1 if bad == bad_neg else 1), actions, steps
    return STATUS_EQUIVALENT, 0, empty, empty


def region_code(value, kappa: int) -> int:
    """Region code of an exact clock value under constant ``kappa``."""
    if value > kappa:
        return 2 * kappa + 1
    if value.denominator == 1:
        return 2 * int(value)
    return 2 * int(value) + 1


def encode(A, alphabet, kappa: int):
    """Dense transition tables of a complete automaton: target, reset and acceptance arrays."""
    index = {q: i for i, q in enumerate(A.locations)}
    width = 2 * kappa + 2
    tgt = np.full((len(A.locations), len(alphabet), width), -1, dtype=np.int64)
    rst = np.zeros((len(A.locations), len(alphabet), width), dtype=np.uint8)
    act = {a: i for i, a in enumerate(alphabet)}
    for t in A.transitions:
        lo, hi = t.guard.codes(kappa)
        q, a = index[t.source], act[t.action]
        tgt[q, a, lo : hi + 1] = index[t.target]
        rst[q, a, lo : hi + 1] = 1 if t.reset else 0
    if (tgt < 0).any():
        raise ValueError("encode() needs a complete automaton")
    acc = np.array([1 if q in A.accepting else 0 for q in A.locations], dtype=np.uint8)
    return tgt, rst, acc, index[A.initial]


def state_bound(n_h: int, n_a: int, kx: int, ky: int) -> int:
    return n_h * n_a * (2 * kx + 2) * (2 * ky + 2) * 3
