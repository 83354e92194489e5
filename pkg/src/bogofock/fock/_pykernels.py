"""Vectorized numpy implementation of the sparse Fock kernels.

States are occupation bitmasks stored as uint64 (bit p set <=> mode p
occupied).  Every kernel returns unmerged (keys, amplitudes) arrays; merging
of duplicate keys happens in :mod:`bogofock.fock.kernels`.
"""

import numpy as np

ONE = np.uint64(1)


def _bit(p):
    return ONE << np.uint64(p)


def _sign_below(states, p):
    """(-1)^(number of occupied modes below p) for each state."""
    below = states & (_bit(p) - ONE)
    return 1 - 2 * (np.bitwise_count(below) & 1).astype(np.int64)


def one_body(keys, amps, modes, coefs, create):
    """Apply sum_i coefs[i] * c_{modes[i]} with c = a^+ (create) or a."""
    out_k, out_a = [], []
    for p, c in zip(modes, coefs):
        bit = _bit(p)
        occ = (keys & bit) != 0
        sel = ~occ if create else occ
        if not np.any(sel):
            continue
        k = keys[sel]
        out_k.append(k ^ bit)
        out_a.append(c * _sign_below(k, p) * amps[sel])
    if not out_k:
        return np.zeros(0, np.uint64), np.zeros(0, complex)
    return np.concatenate(out_k), np.concatenate(out_a)


def pair(keys, amps, ps, qs, coefs, create):
    """Apply sum_i coefs[i] a^+_{p_i} a^+_{q_i} (create) or coefs[i] a_{p_i} a_{q_i}.

    The mode q is acted on first in both cases.
    """
    out_k, out_a = [], []
    for p, q, c in zip(ps, qs, coefs):
        if p == q:
            continue
        bp, bq = _bit(p), _bit(q)
        if create:
            sel = (keys & (bp | bq)) == 0
        else:
            sel = (keys & (bp | bq)) == (bp | bq)
        if not np.any(sel):
            continue
        k = keys[sel]
        mid = k ^ bq
        sign = _sign_below(k, q) * _sign_below(mid, p)
        out_k.append(mid ^ bp)
        out_a.append(c * sign * amps[sel])
    if not out_k:
        return np.zeros(0, np.uint64), np.zeros(0, complex)
    return np.concatenate(out_k), np.concatenate(out_a)


def highest_bit(x):
    """Index of the highest set bit of each nonzero entry (exact for uint64)."""
    x = x.copy()
    hb = np.zeros(len(x), np.int64)
    for sh in (32, 16, 8, 4, 2, 1):
        mask = x >= (ONE << np.uint64(sh))
        hb[mask] += sh
        x[mask] >>= np.uint64(sh)
    return hb


def lift_step(rem, out, amps, colptr, rowind, vals):
    """One step of the exterior-algebra lift.

    For each entry the highest remaining mode s of ``rem`` is removed and the
    orbital M f_s (column s of M in CSC form) is created on top of ``out``.
    Entries with nothing remaining pass through unchanged.
    """
    done = rem == 0
    res_r = [rem[done]]
    res_o = [out[done]]
    res_a = [amps[done]]
    act = np.flatnonzero(~done)
    if len(act):
        hb = highest_bit(rem[act])
        for s in np.unique(hb):
            idx = act[hb == s]
            r = rem[idx] ^ _bit(s)
            o = out[idx]
            a = amps[idx]
            for k in range(colptr[s], colptr[s + 1]):
                p = rowind[k]
                free = (o & _bit(p)) == 0
                if not np.any(free):
                    continue
                of = o[free]
                res_r.append(r[free])
                res_o.append(of | _bit(p))
                res_a.append(vals[k] * _sign_below(of, p) * a[free])
    return np.concatenate(res_r), np.concatenate(res_o), np.concatenate(res_a)
