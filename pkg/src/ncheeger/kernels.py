"""Hot numeric kernels with a numba path and a pure numpy/python fallback.

Set ``NCHEEGER_DISABLE_NUMBA=1`` to force the fallback path. Both paths
are always importable as ``*_numba`` / ``*_numpy`` so they can be compared
directly; the unsuffixed names dispatch on the flag.

The cut scan works on integer data: callers scale rational weights to a
common denominator and guarantee ``sum(W) * sum(meas) < 2**62`` so every
cross-multiplication below fits in int64.
"""

from __future__ import annotations

import os

import numpy as np

_FALSY = {"", "0", "false", "no", "off"}


def _numba_disabled() -> bool:
    return os.environ.get("NCHEEGER_DISABLE_NUMBA", "").strip().lower() not in _FALSY


try:
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _numba_disabled()

INT64_SAFE = 1 << 62
SMALL_SCAN = 14


def worker_count() -> int:
    """Worker cap from ``NCHEEGER_THREADS``; 0 or unset means all cores."""
    raw = os.environ.get("NCHEEGER_THREADS", "").strip()
    try:
        n = int(raw) if raw else 0
    except ValueError:
        n = 0
    cores = os.cpu_count() or 1
    return cores if n <= 0 else min(n, cores)


def _apply_thread_cap() -> None:
    if HAVE_NUMBA:
        numba.set_num_threads(min(worker_count(), numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# exhaustive cut scan
# ---------------------------------------------------------------------------
#
# Vertex 0 is never placed in S, so every unordered two-block partition is
# visited exactly once and the returned masks are canonical keys.


def _scan_chunk(W, meas, total, c, low, best_num, best_den, collect, out, pos):
    """Gray-code walk over one chunk of free masks.

    With ``collect`` false, returns (num, den, ties) of the chunk minimum.
    With ``collect`` true, writes masks whose ratio equals best_num/best_den
    into ``out`` starting at ``pos`` and returns the new position.
    """
    n = W.shape[0]
    mask = np.int64(c) << np.int64(low + 1)
    in_s = np.zeros(n, dtype=np.bool_)
    ms = 0
    for i in range(n):
        if (mask >> i) & 1:
            in_s[i] = True
            ms += meas[i]
    cut = 0
    for i in range(n):
        for j in range(i + 1, n):
            if in_s[i] != in_s[j]:
                cut += W[i, j]

    bn = best_num
    bd = best_den
    ties = 0
    for g in range(1 << low):
        if g > 0:
            b = 0
            while ((g >> b) & 1) == 0:
                b += 1
            v = b + 1
            d = 0
            side = in_s[v]
            for u in range(n):
                w = W[v, u]
                if w != 0 and u != v:
                    if in_s[u] == side:
                        d += w
                    else:
                        d -= w
            cut += d
            in_s[v] = not side
            if side:
                ms -= meas[v]
            else:
                ms += meas[v]
            mask ^= np.int64(1) << np.int64(v)
        other = total - ms
        den = ms if ms < other else other
        if den <= 0:
            continue
        if collect:
            if cut * bd == bn * den:
                out[pos] = mask
                pos += 1
        elif bn < 0 or cut * bd < bn * den:
            bn = cut
            bd = den
            ties = 1
        elif cut * bd == bn * den:
            ties += 1
    if collect:
        return pos, 0, 0
    return bn, bd, ties


if HAVE_NUMBA:
    _scan_chunk_nb = njit(cache=True, nogil=True)(_scan_chunk)

    @njit(cache=True, parallel=True)
    def _best_per_chunk_nb(W, meas, total, k, low):
        nchunks = 1 << k
        nums = np.empty(nchunks, dtype=np.int64)
        dens = np.empty(nchunks, dtype=np.int64)
        ties = np.empty(nchunks, dtype=np.int64)
        dummy = np.empty(0, dtype=np.int64)
        for c in prange(nchunks):
            a, b, t = _scan_chunk_nb(W, meas, total, c, low, -1, 1, False, dummy, 0)
            nums[c] = a
            dens[c] = b
            ties[c] = t
        return nums, dens, ties

    @njit(cache=True, parallel=True)
    def _collect_nb(W, meas, total, low, chunks, offsets, best_num, best_den, out):
        for i in prange(chunks.shape[0]):
            _scan_chunk_nb(W, meas, total, chunks[i], low, best_num, best_den,
                           True, out, offsets[i])


def _prepare(W, meas):
    W = np.ascontiguousarray(W, dtype=np.int64)
    meas = np.ascontiguousarray(meas, dtype=np.int64)
    n = W.shape[0]
    if W.shape != (n, n) or meas.shape != (n,):
        raise ValueError("weight matrix and measure vector disagree in size")
    if n < 2:
        raise ValueError("need at least two vertices")
    if n > 62:
        raise ValueError("cut scan supports at most 62 vertices")
    if int(np.abs(W).sum()) * max(int(meas.sum()), 1) >= INT64_SAFE:
        raise OverflowError("integer weights too large for the int64 cut scan")
    W = W.copy()
    np.fill_diagonal(W, 0)
    return W, meas


def _empty_result():
    return -1, 1, np.empty(0, dtype=np.int64)


def cut_scan_numba(W, meas, chunk_bits: int = 8):
    """Minimum of cut/min(meas(S), meas(S^c)) over canonical masks.

    Returns ``(num, den, masks)`` with ``masks`` sorted ascending, or
    ``num == -1`` when every partition has a zero denominator.
    """
    W, meas = _prepare(W, meas)
    _apply_thread_cap()
    n = W.shape[0]
    total = int(meas.sum())
    free = n - 1
    k = min(chunk_bits, free)
    low = free - k
    nums, dens, ties = _best_per_chunk_nb(W, meas, total, k, low)

    best = None
    for a, b in zip(nums.tolist(), dens.tolist()):
        if a >= 0 and (best is None or a * best[1] < best[0] * b):
            best = (a, b)
    if best is None:
        return _empty_result()
    bn, bd = best
    sel = [c for c in range(len(nums)) if nums[c] >= 0 and nums[c] * bd == bn * dens[c]]
    counts = np.array([ties[c] for c in sel], dtype=np.int64)
    offsets = np.zeros(len(sel), dtype=np.int64)
    if len(sel) > 1:
        offsets[1:] = np.cumsum(counts)[:-1]
    out = np.empty(int(counts.sum()), dtype=np.int64)
    _collect_nb(W, meas, total, low, np.array(sel, dtype=np.int64), offsets, bn, bd, out)
    out.sort()
    return bn, bd, out


def cut_scan_numpy(W, meas):
    """Vectorized equivalent of :func:`cut_scan_numba`.

    Cut values of all canonical masks are built by doubling: adding vertex
    v to every subset of {1..v-1} changes the cut by deg(v) - 2 w(v, S).
    """
    W, meas = _prepare(W, meas)
    n = W.shape[0]
    deg = W.sum(axis=1)
    cut = np.zeros(1, dtype=np.int64)
    ms = np.zeros(1, dtype=np.int64)
    for v in range(1, n):
        wv = np.zeros(1, dtype=np.int64)
        for u in range(1, v):
            wv = np.concatenate([wv, wv + W[v, u]])
        cut = np.concatenate([cut, cut + deg[v] - 2 * wv])
        ms = np.concatenate([ms, ms + meas[v]])
    total = int(meas.sum())
    den = np.minimum(ms, total - ms)
    valid = den > 0
    if not valid.any():
        return _empty_result()

    ratio = np.full(cut.shape, np.inf)
    ratio[valid] = cut[valid] / den[valid]
    i = int(np.argmin(ratio))
    bn, bd = int(cut[i]), int(den[i])
    while True:
        lower = valid & (cut * bd < bn * den)
        if not lower.any():
            break
        idx = np.flatnonzero(lower)
        i = int(idx[np.argmin(ratio[idx])])
        bn, bd = int(cut[i]), int(den[i])
    masks = np.flatnonzero(valid & (cut * bd == bn * den)).astype(np.int64) << 1
    return bn, bd, masks


# ---------------------------------------------------------------------------
# cyclic Jacobi eigenvalue sweeps
# ---------------------------------------------------------------------------


def _max_offdiag(a):
    n = a.shape[0]
    off = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            x = abs(a[p, q])
            if x > off:
                off = x
    return off


def _rotation(app, aqq, apq):
    diff = aqq - app
    if abs(apq) < abs(diff) * 1e-150:
        # theta would overflow; t = 1 / (2 theta) to full precision
        t = apq / diff
    else:
        theta = diff / (2.0 * apq)
        t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c


if HAVE_NUMBA:
    _max_offdiag_nb = njit(cache=True)(_max_offdiag)
    _rotation_nb = njit(cache=True)(_rotation)

    @njit(cache=True)
    def _jacobi_nb(a, v, tol, max_sweeps):
        """In-place cyclic Jacobi; returns sweeps used or -1 at the limit."""
        n = a.shape[0]
        for sweep in range(max_sweeps + 1):
            if _max_offdiag_nb(a) < tol:
                return sweep
            if sweep == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    c, s = _rotation_nb(a[p, p], a[q, q], apq)
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[k, q] = s * akp + c * akq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * aqk
                        a[q, k] = s * apk + c * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - s * vkq
                        v[k, q] = s * vkp + c * vkq
        return -1


def _jacobi_vectorized(a, v, tol, max_sweeps):
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        if n < 2 or np.abs(a[iu]).max() < tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                c, s = _rotation(a[p, p], a[q, q], apq)
                rot = np.array([[c, s], [-s, c]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ rot
                a[cols, :] = rot.T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                v[:, cols] = v[:, cols] @ rot
    return -1


def jacobi_eigh(matrix, tol: float = 1e-12, max_sweeps: int = 100, use_numba: bool | None = None):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` unsorted, with
    eigenvectors as columns; ``sweeps == -1`` signals the sweep limit.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    if use_numba is None:
        use_numba = USE_NUMBA
    if use_numba:
        sweeps = _jacobi_nb(a, v, float(tol), int(max_sweeps))
    else:
        sweeps = _jacobi_vectorized(a, v, float(tol), int(max_sweeps))
    return np.diag(a).copy(), v, int(sweeps)


# ---------------------------------------------------------------------------
# reflected random walk
# ---------------------------------------------------------------------------


def _pick(indptr, nbr, cum, x, u):
    lo = indptr[x]
    hi = indptr[x + 1] - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return nbr[lo]


if HAVE_NUMBA:
    _pick_nb = njit(cache=True)(_pick)

    @njit(cache=True)
    def _walk_nb(indptr, nbr, cum, pos, x, uniforms, counts):
        # pos[i] is the Omega index of closure vertex i, -1 on the boundary
        for i in range(uniforms.shape[0]):
            y = _pick_nb(indptr, nbr, cum, x, uniforms[i, 0])
            if pos[y] < 0:
                y = _pick_nb(indptr, nbr, cum, y, uniforms[i, 1])
            counts[pos[x], pos[y]] += 1
            x = y
        return x


def _walk_fallback(indptr, nbr, cum, pos, x, uniforms, counts):
    # python lists are several times faster than numpy scalars in this loop
    from bisect import bisect_right

    ip = indptr.tolist()
    nb = nbr.tolist()
    cm = cum.tolist()
    ps = pos.tolist()
    local = [[0] * counts.shape[1] for _ in range(counts.shape[0])]
    for u0, u1 in uniforms.tolist():
        j = bisect_right(cm, u0, ip[x], ip[x + 1] - 1)
        y = nb[j]
        if ps[y] < 0:
            y = nb[bisect_right(cm, u1, ip[y], ip[y + 1] - 1)]
        local[ps[x]][ps[y]] += 1
        x = y
    counts += np.array(local, dtype=np.int64)
    return x


def reflected_walk(indptr, nbr, cum, pos, start, uniform_blocks, n_omega, use_numba=None):
    """Run the chain over an iterable of uniform blocks, return count matrix."""
    if use_numba is None:
        use_numba = USE_NUMBA
    step = _walk_nb if use_numba else _walk_fallback
    counts = np.zeros((n_omega, n_omega), dtype=np.int64)
    x = int(start)
    for block in uniform_blocks:
        x = int(step(indptr, nbr, cum, pos, x, block, counts))
    return counts


def cut_scan(W, meas):
    # JIT dispatch overhead exceeds the whole vectorized scan on small inputs
    if USE_NUMBA and np.shape(meas)[0] > SMALL_SCAN:
        return cut_scan_numba(W, meas)
    return cut_scan_numpy(W, meas)
