"""Compiled inner loops for the SVM, tree and nearest-neighbour learners."""
import numpy as np
from numba import njit

_TAU = 1e-12
_FEATURE_EPS = 1e-7


# ---------------------------------------------------------------------------
# RBF kernel SVM, dual solved by SMO with second-order working-set selection
# ---------------------------------------------------------------------------

@njit(cache=True)
def _rbf_row(X, i, gamma, out):
    n, d = X.shape
    for t in range(n):
        s = 0.0
        for k in range(d):
            diff = X[i, k] - X[t, k]
            s += diff * diff
        out[t] = np.exp(-gamma * s)


@njit(cache=True)
def _cached_row(X, i, gamma, cache, slot_of, row_of, last_used, clock, stats):
    s = slot_of[i]
    if s >= 0:
        last_used[s] = clock
        return s
    cap = cache.shape[0]
    if stats[1] < cap:
        s = stats[1]
        stats[1] += 1
    else:
        s = 0
        oldest = last_used[0]
        for t in range(1, cap):
            if last_used[t] < oldest:
                oldest = last_used[t]
                s = t
        slot_of[row_of[s]] = -1
    _rbf_row(X, i, gamma, cache[s])
    slot_of[i] = s
    row_of[s] = i
    last_used[s] = clock
    stats[0] += 1
    return s


@njit(cache=True)
def smo_solve(X, y, C, gamma, eps, cache_rows, max_iter):
    """Solve min 1/2 a'Qa - e'a s.t. 0 <= a <= C, y'a = 0 with Q = yy'K.

    Returns (alpha, rho, iterations, converged, kernel_row_evaluations,
    final_violation).  The decision function is sum_t a_t y_t K(x_t, x) - rho.
    """
    n = X.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    cap = max(2, min(cache_rows, n))
    cache = np.empty((cap, n))
    slot_of = -np.ones(n, dtype=np.int64)
    row_of = np.zeros(cap, dtype=np.int64)
    last_used = np.zeros(cap, dtype=np.int64)
    stats = np.zeros(2, dtype=np.int64)  # row evaluations, slots in use

    it = 0
    converged = False
    violation = np.inf
    while it < max_iter:
        gmax = -np.inf
        i = -1
        for t in range(n):
            if y[t] > 0:
                if alpha[t] < C and -G[t] >= gmax:
                    gmax = -G[t]
                    i = t
            else:
                if alpha[t] > 0 and G[t] >= gmax:
                    gmax = G[t]
                    i = t
        if i < 0:
            converged = True
            violation = 0.0
            break
        si = _cached_row(X, i, gamma, cache, slot_of, row_of, last_used, it, stats)
        Ki = cache[si]

        gmax2 = -np.inf
        j = -1
        obj_min = np.inf
        for t in range(n):
            if y[t] > 0:
                if alpha[t] > 0:
                    if G[t] >= gmax2:
                        gmax2 = G[t]
                    grad_diff = gmax + G[t]
                    if grad_diff > 0:
                        quad = 2.0 - 2.0 * Ki[t]
                        if quad <= 0:
                            quad = _TAU
                        obj = -(grad_diff * grad_diff) / quad
                        if obj <= obj_min:
                            obj_min = obj
                            j = t
            else:
                if alpha[t] < C:
                    if -G[t] >= gmax2:
                        gmax2 = -G[t]
                    grad_diff = gmax - G[t]
                    if grad_diff > 0:
                        quad = 2.0 - 2.0 * Ki[t]
                        if quad <= 0:
                            quad = _TAU
                        obj = -(grad_diff * grad_diff) / quad
                        if obj <= obj_min:
                            obj_min = obj
                            j = t
        violation = gmax + gmax2
        if violation < eps or j < 0:
            converged = True
            break

        sj = _cached_row(X, j, gamma, cache, slot_of, row_of, last_used, it, stats)
        Kj = cache[sj]
        Ki = cache[slot_of[i]]
        old_ai = alpha[i]
        old_aj = alpha[j]
        kij = Ki[j]
        quad = 2.0 - 2.0 * kij
        if quad <= 0:
            quad = _TAU
        if y[i] != y[j]:
            delta = (-G[i] - G[j]) / quad
            diff = alpha[i] - alpha[j]
            alpha[i] += delta
            alpha[j] += delta
            if diff > 0:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = diff
            else:
                if alpha[i] < 0:
                    alpha[i] = 0.0
                    alpha[j] = -diff
            if diff > 0:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = C - diff
            else:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = C + diff
        else:
            delta = (G[i] - G[j]) / quad
            total = alpha[i] + alpha[j]
            alpha[i] -= delta
            alpha[j] += delta
            if total > C:
                if alpha[i] > C:
                    alpha[i] = C
                    alpha[j] = total - C
            else:
                if alpha[j] < 0:
                    alpha[j] = 0.0
                    alpha[i] = total
            if total > C:
                if alpha[j] > C:
                    alpha[j] = C
                    alpha[i] = total - C
            else:
                if alpha[i] < 0:
                    alpha[i] = 0.0
                    alpha[j] = total

        dai = (alpha[i] - old_ai) * y[i]
        daj = (alpha[j] - old_aj) * y[j]
        for t in range(n):
            G[t] += y[t] * (Ki[t] * dai + Kj[t] * daj)
        it += 1

    # bias from free variables, or the midpoint of the feasible interval
    ub = np.inf
    lb = -np.inf
    sum_free = 0.0
    n_free = 0
    for t in range(n):
        yg = y[t] * G[t]
        if alpha[t] >= C:
            if y[t] < 0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        elif alpha[t] <= 0:
            if y[t] > 0:
                ub = min(ub, yg)
            else:
                lb = max(lb, yg)
        else:
            n_free += 1
            sum_free += yg
    if n_free > 0:
        rho = sum_free / n_free
    else:
        rho = 0.5 * (ub + lb)
    return alpha, rho, it, converged, stats[0], violation


@njit(cache=True)
def rbf_decision(SV, coef, rho, gamma, X):
    m, d = X.shape
    nsv = SV.shape[0]
    out = np.empty(m)
    for p in range(m):
        acc = 0.0
        for t in range(nsv):
            s = 0.0
            for k in range(d):
                diff = X[p, k] - SV[t, k]
                s += diff * diff
            acc += coef[t] * np.exp(-gamma * s)
        out[p] = acc - rho
    return out


# ---------------------------------------------------------------------------
# CART classification trees (Gini), grown to purity
# ---------------------------------------------------------------------------

@njit(cache=True)
def _splitmix64(state):
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def build_tree(X, y, samples, max_features, seed):
    """Grow one tree on the multiset ``samples`` of row indices.

    ``y`` holds 0/1 class codes.  Returns (feature, threshold, left, right,
    value, n_nodes) where leaves carry feature -1 and value in {0, 1}.
    """
    d = X.shape[1]
    n = samples.shape[0]
    cap = 2 * n + 1
    feature = -np.ones(cap, dtype=np.int32)
    threshold = np.zeros(cap)
    left = -np.ones(cap, dtype=np.int32)
    right = -np.ones(cap, dtype=np.int32)
    value = np.zeros(cap, dtype=np.int8)

    idx = samples.copy()
    stack_node = np.empty(cap, dtype=np.int64)
    stack_lo = np.empty(cap, dtype=np.int64)
    stack_hi = np.empty(cap, dtype=np.int64)
    top = 0
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = n
    top = 1
    n_nodes = 1

    state = np.uint64(seed)
    perm = np.arange(d)
    vals = np.empty(n)
    labs = np.empty(n, dtype=np.int8)

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        m = hi - lo
        pos = 0
        for t in range(lo, hi):
            pos += y[idx[t]]
        value[node] = 1 if 2 * pos >= m else 0
        if pos == 0 or pos == m or m < 2:
            continue

        # visit features in a random order until max_features were tried
        # and at least one of them admitted a split
        for a in range(d - 1, 0, -1):
            state, r = _splitmix64(state)
            b = np.int64(r % np.uint64(a + 1))
            tmp = perm[a]
            perm[a] = perm[b]
            perm[b] = tmp

        best_score = -1.0
        best_f = -1
        best_thr = 0.0
        visited = 0
        for fi in range(d):
            if visited >= max_features and best_f >= 0:
                break
            f = perm[fi]
            visited += 1
            for t in range(m):
                vals[t] = X[idx[lo + t], f]
            order = np.argsort(vals[:m], kind="mergesort")
            if vals[order[m - 1]] <= vals[order[0]] + _FEATURE_EPS:
                continue
            for t in range(m):
                labs[t] = y[idx[lo + order[t]]]
            lpos = 0
            for t in range(m - 1):
                lpos += labs[t]
                v0 = vals[order[t]]
                v1 = vals[order[t + 1]]
                if v1 <= v0 + _FEATURE_EPS:
                    continue
                nl = t + 1
                nr = m - nl
                lneg = nl - lpos
                rpos = pos - lpos
                rneg = nr - rpos
                score = (lpos * lpos + lneg * lneg) / nl + (rpos * rpos + rneg * rneg) / nr
                if score > best_score:
                    best_score = score
                    best_f = f
                    thr = 0.5 * (v0 + v1)
                    if thr >= v1:
                        thr = v0
                    best_thr = thr
        if best_f < 0:
            continue

        # partition idx[lo:hi] in place
        i = lo
        j = hi - 1
        while i <= j:
            if X[idx[i], best_f] <= best_thr:
                i += 1
            else:
                tmp2 = idx[i]
                idx[i] = idx[j]
                idx[j] = tmp2
                j -= 1
        feature[node] = best_f
        threshold[node] = best_thr
        left[node] = n_nodes
        right[node] = n_nodes + 1
        stack_node[top] = n_nodes + 1
        stack_lo[top] = i
        stack_hi[top] = hi
        top += 1
        stack_node[top] = n_nodes
        stack_lo[top] = lo
        stack_hi[top] = i
        top += 1
        n_nodes += 2

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), value[:n_nodes].copy(), n_nodes)


@njit(cache=True)
def forest_votes(offsets, feature, threshold, left, right, value, X):
    """Number of trees voting for class 1 at each row of X."""
    m = X.shape[0]
    n_trees = offsets.shape[0] - 1
    votes = np.zeros(m, dtype=np.int64)
    for p in range(m):
        for tr in range(n_trees):
            base = offsets[tr]
            node = 0
            while feature[base + node] >= 0:
                if X[p, feature[base + node]] <= threshold[base + node]:
                    node = left[base + node]
                else:
                    node = right[base + node]
            votes[p] += value[base + node]
    return votes


# ---------------------------------------------------------------------------
# brute-force k nearest neighbours
# ---------------------------------------------------------------------------

@njit(cache=True)
def knn_vote(Xtr, ytr, X, k):
    """Sum of the +/-1 labels of the k nearest training rows (Euclidean).

    Equal distances are ordered by training index, lower first.
    """
    m, d = X.shape
    n = Xtr.shape[0]
    out = np.empty(m, dtype=np.int64)
    best_d = np.empty(k)
    best_i = np.empty(k, dtype=np.int64)
    for p in range(m):
        for q in range(k):
            best_d[q] = np.inf
            best_i[q] = -1
        worst = np.inf
        for t in range(n):
            s = 0.0
            for c in range(d):
                diff = X[p, c] - Xtr[t, c]
                s += diff * diff
            if s < worst:
                q = k - 1
                while q > 0 and best_d[q - 1] > s:
                    best_d[q] = best_d[q - 1]
                    best_i[q] = best_i[q - 1]
                    q -= 1
                best_d[q] = s
                best_i[q] = t
                worst = best_d[k - 1]
        acc = 0
        for q in range(k):
            if best_i[q] >= 0:
                acc += ytr[best_i[q]]
        out[p] = acc
    return out
