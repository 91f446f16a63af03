"""Numba kernels: incremental quality updates and the flat-histogram walk.

All randomness is consumed from pre-drawn uniform arrays (one row of four
uniforms per step) so that the Python layer keeps full control of the RNG
streams and reproducibility.  Layout per row: u0 selects the move type,
u1/u2 parameterize the proposal, u3 decides acceptance.
"""

import numpy as np
from numba import njit

# indices into the float scalar-state vector
F_Q = 0
F_QMAX = 1
F_QMIN = 2
# indices into the int scalar-state vector
I_T = 0
I_BIN = 1


@njit(cache=True, nogil=True)
def node_to_group_edges_scan(edges, labels, node, K):
    """Edge counts from `node` into each group, by scanning the edge list.

    A self-loop contributes 2 to the node's own group.  Returns (s, a_ii)
    where a_ii is the adjacency-diagonal entry (2 per self-loop).
    """
    s = np.zeros(K, np.int64)
    aii = 0
    for e in range(edges.shape[0]):
        u = edges[e, 0]
        v = edges[e, 1]
        if u == node:
            if v == node:
                aii += 2
            else:
                s[labels[v]] += 1
        elif v == node:
            s[labels[u]] += 1
    s[labels[node]] += aii
    return s, aii


@njit(cache=True, nogil=True)
def node_to_group_edges_csr(indptr, stubs, labels, node, K):
    """Same as the edge scan but O(degree) via static incidence lists."""
    s = np.zeros(K, np.int64)
    aii = 0
    for p in range(indptr[node], indptr[node + 1]):
        j = stubs[p]
        if j == node:
            aii += 1
        s[labels[j]] += 1
    return s, aii


@njit(cache=True, nogil=True)
def delta_label_swap(S, T, B, s_i, aii, ki, a, b, two_e):
    """Exact change in Q when a node with group profile s_i moves a -> b."""
    K = T.shape[0]
    d_sb = 0.0
    d_tb = 0.0
    for x in range(K):
        if x != a and x != b:
            d_sb += 2.0 * s_i[x] * (B[b, x] - B[a, x])
            d_tb += 2.0 * ki * T[x] * (B[b, x] - B[a, x])
    d_sb += (-2.0 * s_i[a] + aii) * B[a, a]
    d_sb += (2.0 * s_i[b] + aii) * B[b, b]
    d_sb += 2.0 * (s_i[a] - aii - s_i[b]) * B[a, b]
    ta = T[a]
    tb = T[b]
    tan = ta - ki
    tbn = tb + ki
    d_tb += float(tan * tan - ta * ta) * B[a, a]
    d_tb += float(tbn * tbn - tb * tb) * B[b, b]
    d_tb += 2.0 * float(tan * tbn - ta * tb) * B[a, b]
    return (d_sb - d_tb / two_e) / two_e


@njit(cache=True, nogil=True)
def apply_label_swap(S, T, labels, group_size, s_i, aii, node, a, b, ki):
    K = T.shape[0]
    for x in range(K):
        if x != a and x != b:
            S[a, x] -= s_i[x]
            S[x, a] -= s_i[x]
            S[b, x] += s_i[x]
            S[x, b] += s_i[x]
    S[a, a] += -2 * s_i[a] + aii
    S[b, b] += 2 * s_i[b] + aii
    d = s_i[a] - aii - s_i[b]
    S[a, b] += d
    S[b, a] += d
    T[a] -= ki
    T[b] += ki
    labels[node] = b
    group_size[a] -= 1
    group_size[b] += 1


@njit(cache=True, nogil=True)
def delta_edge_swap(edges, labels, B, e1, e2, two_e):
    """Q change for the end swap (i,j),(k,l) -> (i,l),(k,j)."""
    i = edges[e1, 0]
    j = edges[e1, 1]
    k = edges[e2, 0]
    l = edges[e2, 1]
    ci = labels[i]
    cj = labels[j]
    ck = labels[k]
    cl = labels[l]
    return 2.0 * (B[ci, cl] + B[ck, cj] - B[ci, cj] - B[ck, cl]) / two_e


@njit(cache=True, nogil=True)
def apply_edge_swap(edges, labels, S, e1, e2):
    i = edges[e1, 0]
    j = edges[e1, 1]
    k = edges[e2, 0]
    l = edges[e2, 1]
    ci = labels[i]
    cj = labels[j]
    ck = labels[k]
    cl = labels[l]
    S[ci, cj] -= 1
    S[cj, ci] -= 1
    S[ck, cl] -= 1
    S[cl, ck] -= 1
    S[ci, cl] += 1
    S[cl, ci] += 1
    S[ck, cj] += 1
    S[cj, ck] += 1
    edges[e1, 1] = l
    edges[e2, 1] = j


@njit(cache=True, nogil=True)
def delta_block_flip(S, T, B, a, b, two_e):
    """Q change when B_ab (and B_ba) flips sign from its current value."""
    mult = 1.0 if a == b else 2.0
    q_ab = S[a, b] - T[a] * T[b] / two_e
    return -2.0 * B[a, b] * mult * q_ab / two_e


@njit(cache=True, nogil=True)
def apply_block_flip(B, a, b):
    B[a, b] = -B[a, b]
    if a != b:
        B[b, a] = -B[b, a]


@njit(cache=True, nogil=True)
def compute_stats(edges, degrees, labels, K):
    """Block edge sums S and group degree sums T from scratch."""
    S = np.zeros((K, K), np.int64)
    T = np.zeros(K, np.int64)
    for e in range(edges.shape[0]):
        cu = labels[edges[e, 0]]
        cv = labels[edges[e, 1]]
        S[cu, cv] += 1
        S[cv, cu] += 1
    for i in range(labels.shape[0]):
        T[labels[i]] += degrees[i]
    return S, T


@njit(cache=True, nogil=True)
def compute_q(S, T, B, two_e):
    K = T.shape[0]
    sb = 0.0
    tb = 0.0
    for a in range(K):
        for b in range(K):
            sb += S[a, b] * B[a, b]
            tb += float(T[a]) * T[b] * B[a, b]
    return (sb - tb / two_e) / two_e


@njit(cache=True, nogil=True, inline="always")
def _decode_block_pair(u, K):
    idx = int(u * (K * (K + 1) // 2))
    if idx >= K * (K + 1) // 2:
        idx = K * (K + 1) // 2 - 1
    a = 0
    r = idx
    while r >= K - a:
        r -= K - a
        a += 1
    return a, a + r


@njit(cache=True, nogil=True)
def run_chunk(draws, edges, indptr, stubs, use_csr, degrees, labels, group_size,
              B, S, T, fstate, istate, entropy, hist, active,
              lo, hi, q_lo, inv_w, n_bins, f, one_over_t,
              p_swap, p_rewire, two_e):
    """Advance the flat-histogram walk by len(draws) steps.

    Proposals landing outside [lo, hi] (or the grid) are rejected-as-stay;
    every step, including no-ops, bumps the histogram and entropy of the
    current bin.  Returns the possibly updated modification factor f.
    """
    q = fstate[F_Q]
    qmax = fstate[F_QMAX]
    qmin = fstate[F_QMIN]
    t = istate[I_T]
    cur = istate[I_BIN]
    E = edges.shape[0]
    N = labels.shape[0]
    K = group_size.shape[0]
    for n in range(draws.shape[0]):
        u0 = draws[n, 0]
        u1 = draws[n, 1]
        u2 = draws[n, 2]
        u3 = draws[n, 3]
        if u0 < p_swap:
            node = int(u1 * N)
            if node >= N:
                node = N - 1
            a = labels[node]
            if group_size[a] > 1:
                off = int(u2 * (K - 1))
                if off >= K - 1:
                    off = K - 2
                b = off if off < a else off + 1
                if use_csr:
                    s_i, aii = node_to_group_edges_csr(indptr, stubs, labels, node, K)
                else:
                    s_i, aii = node_to_group_edges_scan(edges, labels, node, K)
                ki = degrees[node]
                dq = delta_label_swap(S, T, B, s_i, aii, ki, a, b, two_e)
                qn = q + dq
                nb = int(np.floor((qn - q_lo) * inv_w))
                if lo <= nb <= hi and nb < n_bins:
                    de = entropy[cur] - entropy[nb]
                    if de >= 0.0 or u3 < np.exp(de):
                        apply_label_swap(S, T, labels, group_size, s_i, aii,
                                         node, a, b, ki)
                        q = qn
                        cur = nb
        elif u0 < p_swap + p_rewire:
            if E >= 2:
                e1 = int(u1 * E)
                if e1 >= E:
                    e1 = E - 1
                e2 = int(u2 * (E - 1))
                if e2 >= E - 1:
                    e2 = E - 2
                if e2 >= e1:
                    e2 += 1
                dq = delta_edge_swap(edges, labels, B, e1, e2, two_e)
                qn = q + dq
                nb = int(np.floor((qn - q_lo) * inv_w))
                if lo <= nb <= hi and nb < n_bins:
                    de = entropy[cur] - entropy[nb]
                    if de >= 0.0 or u3 < np.exp(de):
                        apply_edge_swap(edges, labels, S, e1, e2)
                        q = qn
                        cur = nb
        else:
            a, b = _decode_block_pair(u1, K)
            dq = delta_block_flip(S, T, B, a, b, two_e)
            qn = q + dq
            nb = int(np.floor((qn - q_lo) * inv_w))
            if lo <= nb <= hi and nb < n_bins:
                de = entropy[cur] - entropy[nb]
                if de >= 0.0 or u3 < np.exp(de):
                    apply_block_flip(B, a, b)
                    q = qn
                    cur = nb
        if one_over_t:
            f = 1.0 / (t + 1.0)
        entropy[cur] += f
        hist[cur] += 1
        active[cur] = True
        if q > qmax:
            qmax = q
        if q < qmin:
            qmin = q
        t += 1
    fstate[F_Q] = q
    fstate[F_QMAX] = qmax
    fstate[F_QMIN] = qmin
    istate[I_T] = t
    istate[I_BIN] = cur
    return f


@njit(cache=True, nogil=True)
def drive_chunk(draws, edges, indptr, stubs, use_csr, degrees, labels,
                group_size, B, S, T, fstate, istate,
                lo, hi, q_lo, inv_w, n_bins, p_swap, p_rewire, two_e):
    """Greedy walk towards the bin window [lo, hi].

    Accepts any proposal that does not increase the bin distance to the
    window; stops as soon as the state is inside.  Returns True on arrival.
    """
    q = fstate[F_Q]
    cur = istate[I_BIN]
    E = edges.shape[0]
    N = labels.shape[0]
    K = group_size.shape[0]
    arrived = False
    for n in range(draws.shape[0]):
        if lo <= cur <= hi:
            arrived = True
            break
        dist_cur = lo - cur if cur < lo else cur - hi
        u0 = draws[n, 0]
        u1 = draws[n, 1]
        u2 = draws[n, 2]
        if u0 < p_swap:
            node = int(u1 * N)
            if node >= N:
                node = N - 1
            a = labels[node]
            if group_size[a] > 1:
                off = int(u2 * (K - 1))
                if off >= K - 1:
                    off = K - 2
                b = off if off < a else off + 1
                if use_csr:
                    s_i, aii = node_to_group_edges_csr(indptr, stubs, labels, node, K)
                else:
                    s_i, aii = node_to_group_edges_scan(edges, labels, node, K)
                ki = degrees[node]
                dq = delta_label_swap(S, T, B, s_i, aii, ki, a, b, two_e)
                qn = q + dq
                nb = int(np.floor((qn - q_lo) * inv_w))
                if 0 <= nb < n_bins:
                    dist_new = lo - nb if nb < lo else (nb - hi if nb > hi else 0)
                    if dist_new <= dist_cur:
                        apply_label_swap(S, T, labels, group_size, s_i, aii,
                                         node, a, b, ki)
                        q = qn
                        cur = nb
        elif u0 < p_swap + p_rewire:
            if E >= 2:
                e1 = int(u1 * E)
                if e1 >= E:
                    e1 = E - 1
                e2 = int(u2 * (E - 1))
                if e2 >= E - 1:
                    e2 = E - 2
                if e2 >= e1:
                    e2 += 1
                dq = delta_edge_swap(edges, labels, B, e1, e2, two_e)
                qn = q + dq
                nb = int(np.floor((qn - q_lo) * inv_w))
                if 0 <= nb < n_bins:
                    dist_new = lo - nb if nb < lo else (nb - hi if nb > hi else 0)
                    if dist_new <= dist_cur:
                        apply_edge_swap(edges, labels, S, e1, e2)
                        q = qn
                        cur = nb
        else:
            a, b = _decode_block_pair(u1, K)
            dq = delta_block_flip(S, T, B, a, b, two_e)
            qn = q + dq
            nb = int(np.floor((qn - q_lo) * inv_w))
            if 0 <= nb < n_bins:
                dist_new = lo - nb if nb < lo else (nb - hi if nb > hi else 0)
                if dist_new <= dist_cur:
                    apply_block_flip(B, a, b)
                    q = qn
                    cur = nb
    if lo <= cur <= hi:
        arrived = True
    fstate[F_Q] = q
    istate[I_BIN] = cur
    return arrived


@njit(cache=True, nogil=True)
def fuzz_moves(draws, edges, degrees, labels, group_size, B, S, T, q0,
               p_swap, p_rewire, two_e):
    """Apply mixed moves unconditionally, comparing the incremental q
    against a full recompute after every move.  Returns (max_err, q_final)."""
    q = q0
    E = edges.shape[0]
    N = labels.shape[0]
    K = group_size.shape[0]
    max_err = 0.0
    for n in range(draws.shape[0]):
        u0 = draws[n, 0]
        u1 = draws[n, 1]
        u2 = draws[n, 2]
        if u0 < p_swap:
            node = int(u1 * N)
            if node >= N:
                node = N - 1
            a = labels[node]
            if group_size[a] > 1:
                off = int(u2 * (K - 1))
                if off >= K - 1:
                    off = K - 2
                b = off if off < a else off + 1
                s_i, aii = node_to_group_edges_scan(edges, labels, node, K)
                ki = degrees[node]
                q += delta_label_swap(S, T, B, s_i, aii, ki, a, b, two_e)
                apply_label_swap(S, T, labels, group_size, s_i, aii, node, a, b, ki)
        elif u0 < p_swap + p_rewire:
            if E >= 2:
                e1 = int(u1 * E)
                if e1 >= E:
                    e1 = E - 1
                e2 = int(u2 * (E - 1))
                if e2 >= E - 1:
                    e2 = E - 2
                if e2 >= e1:
                    e2 += 1
                q += delta_edge_swap(edges, labels, B, e1, e2, two_e)
                apply_edge_swap(edges, labels, S, e1, e2)
        else:
            a, b = _decode_block_pair(u1, K)
            q += delta_block_flip(S, T, B, a, b, two_e)
            apply_block_flip(B, a, b)
        S2, T2 = compute_stats(edges, degrees, labels, K)
        q2 = compute_q(S2, T2, B, two_e)
        err = abs(q - q2)
        if err > max_err:
            max_err = err
    return max_err, q


@njit(cache=True, nogil=True)
def enumerate_labellings_q(edges, degrees, n_nodes, K, B, two_e):
    """Exact Q for every surjective K-labelling, as (values, counts) arrays.

    Iterates the full K^N mixed-radix space and skips non-surjective
    assignments; Q values are keyed after rounding to 12 decimals.
    """
    labels = np.zeros(n_nodes, np.int64)
    counts = {}
    total = 0
    n_states = 1
    for _ in range(n_nodes):
        n_states *= K
    for state in range(n_states):
        s = state
        occupied = np.zeros(K, np.int64)
        for i in range(n_nodes):
            labels[i] = s % K
            occupied[labels[i]] += 1
            s //= K
        surjective = True
        for a in range(K):
            if occupied[a] == 0:
                surjective = False
                break
        if not surjective:
            continue
        S, T = compute_stats(edges, degrees, labels, K)
        q = compute_q(S, T, B, two_e)
        key = np.round(q, 12)
        if key in counts:
            counts[key] += 1
        else:
            counts[key] = 1
        total += 1
    vals = np.empty(len(counts), np.float64)
    cnts = np.empty(len(counts), np.int64)
    i = 0
    for k, v in counts.items():
        vals[i] = k
        cnts[i] = v
        i += 1
    order = np.argsort(vals)
    return vals[order], cnts[order], total
