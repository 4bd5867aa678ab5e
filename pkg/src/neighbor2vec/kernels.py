"""Hot numeric kernels shared by the sampler, trainer and propagation stages.

Every function in this module is written as a plain scalar loop over numpy
arrays and compiled with numba's ``@njit(nogil=True)`` when the "numba"
backend is active.  Setting the environment variable ``NEIGHBOR2VEC_NUMBA=0``
(before import) selects the pure-numpy fallback: the exact same source runs
uncompiled.  Both backends produce identical corpora (integer arithmetic) and
identical single-threaded training results (all float math is done in float64
with explicit casts around float32 storage, so neither backend is allowed to
change promotion rules).

Because the kernels release the GIL under numba, callers parallelize by
running shard ranges ``[start, end)`` on ordinary ``threading.Thread``
workers.  Shard boundaries never change results for the sampler (every
sentence has its own RNG stream and output row); the trainer is hogwild-style
and only single-threaded runs are bit-reproducible.

Randomness inside kernels comes from a Lehmer / MINSTD generator
(``state = state * 48271 mod 2**31-1``).  All intermediates fit in int64, so
python ints and numba int64 agree exactly.  Sub-streams are derived with
:func:`mix_seed`, the documented mixing function used across the package.
"""

import importlib
import os
import sys

import numpy as np

BACKEND_ENV = "NEIGHBOR2VEC_NUMBA"

#: Lehmer generator modulus (2**31 - 1, prime) and multiplier.
M31 = 2147483647
LEHMER_MUL = 48271


def _resolve_backend() -> str:
    raw = os.environ.get(BACKEND_ENV, "auto").strip().lower()
    if raw in {"0", "false", "no", "off", "numpy"}:
        return "numpy"
    if raw not in {"", "1", "true", "yes", "on", "auto", "numba"}:
        raise ValueError(f"unrecognized {BACKEND_ENV} value: {raw!r}")
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


BACKEND = _resolve_backend()

if BACKEND == "numba":
    from numba import njit as _njit

    def _jit(fn):
        return _njit(cache=True, nogil=True)(fn)

else:

    def _jit(fn):
        return fn


def set_backend(backend: str):
    """Re-import this module under the given backend ("numba" or "numpy").

    Intended for benchmarking and backend-equivalence tests.  Callers that
    hold the module object (``from neighbor2vec import kernels``) see the new
    functions immediately; ``from ... import fn`` references go stale.
    """
    if backend not in {"numba", "numpy"}:
        raise ValueError(f"unknown backend: {backend!r}")
    os.environ[BACKEND_ENV] = backend
    return importlib.reload(sys.modules[__name__])


# --------------------------------------------------------------------------
# RNG


@_jit
def mix_seed(seed, a, b):
    """Fold ``(seed, a, b)`` into a Lehmer state in ``[1, 2**31-2]``.

    This is the package-wide sub-seed derivation: corpus streams use
    ``mix_seed(seed, node, round)``, trainer threads ``mix_seed(seed, thread,
    epoch)`` and evaluation runs ``mix_seed(seed, run, 0)``.
    """
    h = seed % M31
    h = (h * LEHMER_MUL + a % M31 + 1) % M31
    h = (h * LEHMER_MUL + b % M31 + 1) % M31
    h = (h * LEHMER_MUL) % M31
    h = (h * LEHMER_MUL) % M31
    if h == 0:
        h = 1
    return h


@_jit
def _rng_uniform(state):
    """Advance the stream; returns (state, u) with u in the open (0, 1)."""
    state = (state * LEHMER_MUL) % M31
    return state, state / M31


@_jit
def _rng_below(state, n):
    """Advance the stream; returns (state, r) with r uniform in [0, n)."""
    state, u = _rng_uniform(state)
    r = int(u * n)
    if r >= n:
        r = n - 1
    return state, r


@_jit
def _shuffle(arr, length, state):
    """Fisher-Yates shuffle of arr[:length]; returns the new RNG state."""
    for i in range(length - 1, 0, -1):
        state, j = _rng_below(state, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp
    return state


@_jit
def _sorted_contains(arr, x):
    lo = 0
    hi = arr.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < arr.shape[0] and arr[lo] == x


# --------------------------------------------------------------------------
# No-walk neighborhood sampling


@_jit
def sample_sentences(offsets, targets, num, n_sample, seed, tokens, lengths, start, end, origin):
    """Fill sentence rows for centers ``start <= v < end``.

    Row ``(v - origin) * n_sample + r`` holds round ``r`` for center ``v``:
    the center followed by a uniform shuffle of its one-hop neighbors,
    extended by a uniform no-replacement draw from the deduplicated two-hop
    frontier when the one-hop set is smaller than ``num``, then truncated to
    ``num``.  ``lengths`` is 1 for isolated centers (the row is dropped by
    the caller).  Each (center, round) pair has its own RNG stream, so output
    does not depend on how [start, end) ranges are sharded across threads.
    """
    for v in range(start, end):
        lo = offsets[v]
        deg = offsets[v + 1] - lo
        for r in range(n_sample):
            row = (v - origin) * n_sample + r
            tokens[row, 0] = v
            if deg == 0:
                lengths[row] = 1
                continue
            state = mix_seed(seed, v, r)

            hop1 = np.empty(deg, np.int32)
            for e in range(deg):
                hop1[e] = targets[lo + e]
            state = _shuffle(hop1, deg, state)

            if deg >= num:
                for i in range(num):
                    tokens[row, 1 + i] = hop1[i]
                lengths[row] = 1 + num
                continue

            for i in range(deg):
                tokens[row, 1 + i] = hop1[i]

            total = 0
            for i in range(deg):
                u = hop1[i]
                total += offsets[u + 1] - offsets[u]
            if total == 0:
                lengths[row] = 1 + deg
                continue

            cand = np.empty(total, np.int32)
            pos = 0
            for i in range(deg):
                u = hop1[i]
                for e in range(offsets[u], offsets[u + 1]):
                    cand[pos] = targets[e]
                    pos += 1
            cand.sort()
            hop1_sorted = np.sort(hop1)

            frontier = np.empty(total, np.int32)
            fcount = 0
            prev = -1
            for i in range(total):
                c = cand[i]
                if c == prev:
                    continue
                prev = c
                if c == v or _sorted_contains(hop1_sorted, c):
                    continue
                frontier[fcount] = c
                fcount += 1

            take = num - deg
            if take > fcount:
                take = fcount
            for i in range(take):
                state, j = _rng_below(state, fcount - i)
                tmp = frontier[i]
                frontier[i] = frontier[i + j]
                frontier[i + j] = tmp
                tokens[row, 1 + deg + i] = frontier[i]
            lengths[row] = 1 + deg + take


@_jit
def random_walk_sentences(offsets, targets, walk_len, walks_per_node, seed, tokens, lengths, start, end, origin):
    """Uniform random walks; a walk truncates at a node with no out-edges."""
    for v in range(start, end):
        for r in range(walks_per_node):
            row = (v - origin) * walks_per_node + r
            tokens[row, 0] = v
            state = mix_seed(seed, v, r)
            cur = v
            steps = 1
            for _ in range(walk_len - 1):
                lo = offsets[cur]
                deg = offsets[cur + 1] - lo
                if deg == 0:
                    break
                state, j = _rng_below(state, deg)
                cur = targets[lo + j]
                tokens[row, steps] = cur
                steps += 1
            lengths[row] = steps


# --------------------------------------------------------------------------
# Skip-gram negative-sampling trainer


@_jit
def _sgns_pair(w_in, w_out, center, target, label, alpha, g_in):
    """One (center, target) update against the output matrix.

    Accumulates the center gradient into ``g_in`` (applied by the caller once
    per positive pair) and updates the target's output row in place.  Returns
    the pair's loss term.  All arithmetic is float64 over float32 storage.
    """
    dim = w_in.shape[1]
    dot = 0.0
    for q in range(dim):
        dot += float(w_in[center, q]) * float(w_out[target, q])
    z = dot
    if z > 60.0:
        z = 60.0
    elif z < -60.0:
        z = -60.0
    sig = 1.0 / (1.0 + np.exp(-z))
    g = (label - sig) * alpha
    for q in range(dim):
        tmp = float(w_out[target, q])
        g_in[q] += g * tmp
        w_out[target, q] = np.float32(tmp + g * float(w_in[center, q]))
    if label > 0.5:
        return np.log1p(np.exp(-z))
    return np.log1p(np.exp(z))


@_jit
def sgns_train_shard(
    w_in,
    w_out,
    noise_cum,
    tokens,
    lengths,
    window,
    negatives,
    alpha0,
    min_alpha,
    linear_decay,
    total_pairs,
    progress,
    state,
    loss_out,
    slot,
    start,
    end,
):
    """Run SGNS updates for sentences ``start <= s < end`` (one shard).

    Every ordered in-window (center, context) pair of distinct positions gets
    one positive update plus ``negatives`` noise updates; draws that collide
    with the positive context are resampled.  The learning rate decays
    linearly with the shared pair counter ``progress`` (racy increments are
    tolerated under hogwild threading).  Loss for the shard accumulates into
    ``loss_out[slot]``; the pair count processed is returned.
    """
    dim = w_in.shape[1]
    g_in = np.empty(dim, np.float64)
    loss = 0.0
    done = 0
    for s in range(start, end):
        length = lengths[s]
        frac = progress[0] / total_pairs
        if frac > 1.0:
            frac = 1.0
        if linear_decay != 0:
            alpha = alpha0 + (min_alpha - alpha0) * frac
        else:
            alpha = alpha0
        sent_pairs = 0
        for i in range(length):
            center = tokens[s, i]
            lo = i - window
            if lo < 0:
                lo = 0
            hi = i + window
            if hi > length - 1:
                hi = length - 1
            for j in range(lo, hi + 1):
                if j == i:
                    continue
                ctx = tokens[s, j]
                for q in range(dim):
                    g_in[q] = 0.0
                loss += _sgns_pair(w_in, w_out, center, ctx, 1.0, alpha, g_in)
                for _ in range(negatives):
                    neg = -1
                    for _try in range(100):
                        state, u = _rng_uniform(state)
                        cand = np.searchsorted(noise_cum, u)
                        if cand != ctx:
                            neg = cand
                            break
                    if neg < 0:
                        continue
                    loss += _sgns_pair(w_in, w_out, center, neg, 0.0, alpha, g_in)
                for q in range(dim):
                    w_in[center, q] = np.float32(float(w_in[center, q]) + g_in[q])
                sent_pairs += 1
        progress[0] += sent_pairs
        done += sent_pairs
    loss_out[slot] += loss
    return done


# --------------------------------------------------------------------------
# Feature propagation


@_jit
def propagate_average_rows(offsets, targets, weights, has_weights, rate, src, dst, start, end):
    """One synchronous average-propagation step for rows [start, end).

    dst[v] = (1 - rate) * src[v] + rate * weighted_mean(src[neighbors(v)]).
    Rows with no neighbors (or all-zero weights) pass through unchanged.
    """
    dim = src.shape[1]
    acc = np.empty(dim, np.float64)
    for v in range(start, end):
        lo = offsets[v]
        hi = offsets[v + 1]
        if hi == lo:
            for q in range(dim):
                dst[v, q] = src[v, q]
            continue
        for q in range(dim):
            acc[q] = 0.0
        wsum = 0.0
        for e in range(lo, hi):
            w = weights[e] if has_weights != 0 else 1.0
            wsum += w
            u = targets[e]
            for q in range(dim):
                acc[q] += w * float(src[u, q])
        if wsum <= 0.0:
            for q in range(dim):
                dst[v, q] = src[v, q]
            continue
        for q in range(dim):
            dst[v, q] = np.float32((1.0 - rate) * float(src[v, q]) + rate * (acc[q] / wsum))


@_jit
def propagate_attention_rows(offsets, targets, weights, has_weights, rate, src, dst, start, end):
    """One synchronous attention-propagation step for rows [start, end).

    Neighbor weights are a softmax over dot(src[v], src[u]); explicit edge
    weights multiply the exponentials before renormalization.
    """
    dim = src.shape[1]
    acc = np.empty(dim, np.float64)
    for v in range(start, end):
        lo = offsets[v]
        hi = offsets[v + 1]
        deg = hi - lo
        if deg == 0:
            for q in range(dim):
                dst[v, q] = src[v, q]
            continue
        dots = np.empty(deg, np.float64)
        mx = -1.0e308
        for e in range(deg):
            u = targets[lo + e]
            d = 0.0
            for q in range(dim):
                d += float(src[v, q]) * float(src[u, q])
            dots[e] = d
            if d > mx:
                mx = d
        for q in range(dim):
            acc[q] = 0.0
        total = 0.0
        for e in range(deg):
            w = weights[lo + e] if has_weights != 0 else 1.0
            ew = w * np.exp(dots[e] - mx)
            total += ew
            u = targets[lo + e]
            for q in range(dim):
                acc[q] += ew * float(src[u, q])
        if total <= 0.0:
            for q in range(dim):
                dst[v, q] = src[v, q]
            continue
        for q in range(dim):
            dst[v, q] = np.float32((1.0 - rate) * float(src[v, q]) + rate * (acc[q] / total))


def warm_up():
    """Trigger JIT compilation of every kernel on tiny inputs.

    No-op under the numpy backend.  Benchmarks and timed acceptance checks
    call this first so compile time never lands inside a measured section.
    """
    offsets = np.array([0, 1, 2], np.int64)
    targets = np.array([1, 0], np.int32)
    tokens = np.full((2, 3), -1, np.int32)
    lengths = np.zeros(2, np.int32)
    sample_sentences(offsets, targets, 2, 1, 1, tokens, lengths, 0, 2, 0)
    random_walk_sentences(offsets, targets, 3, 1, 1, tokens, lengths, 0, 2, 0)
    w_in = np.zeros((2, 4), np.float32)
    w_out = np.zeros((2, 4), np.float32)
    cum = np.array([0.5, 1.0])
    loss_out = np.zeros(1)
    progress = np.zeros(1, np.int64)
    sgns_train_shard(
        w_in, w_out, cum, tokens, lengths, 3, 1, 0.025, 1e-4, 1, 4, progress, 1, loss_out, 0, 0, 2
    )
    weights = np.ones(2)
    propagate_average_rows(offsets, targets, weights, 0, 0.1, w_in, w_out, 0, 2)
    propagate_attention_rows(offsets, targets, weights, 1, 0.1, w_in, w_out, 0, 2)
    mix_seed(1, 2, 3)
