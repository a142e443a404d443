"""Hot kernels for the ensemble-search optimizer.

The backend is fixed at import time by the ``ENTMONO_BACKEND``
environment variable: "numba" compiles everything below with
``numba.njit(cache=True)``, "numpy" leaves the same source as plain
Python over numpy scalars/arrays, and unset means numba when it is
importable.  ``benchmarks/bench_roof.py`` compares the two by spawning
one subprocess per backend.

Everything here works on the optimizer's internal representation: a
(K, D) complex matrix of unnormalized ensemble members, kept equal to
``v @ basis`` for a (K, r) isometry ``v`` and the scaled-eigenvector
matrix ``basis``.  Member weights are degree-2 homogeneous, so no
normalization happens in the inner loop.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

ENV_VAR = "ENTMONO_BACKEND"

_GOLDEN = 0.6180339887498949
_HALF_PI = np.pi / 2.0


def _pick_backend():
    requested = os.environ.get(ENV_VAR, "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        warnings.warn(
            f"{ENV_VAR}={requested!r} not recognized; expected 'numba' or 'numpy'",
            RuntimeWarning,
        )
        requested = ""
    if requested == "numpy":
        return "numpy", (lambda f: f)
    try:
        from numba import njit
    except ImportError:
        if requested == "numba":
            raise ImportError(f"{ENV_VAR}=numba but numba is not importable")
        warnings.warn("numba unavailable; falling back to pure-numpy kernels", RuntimeWarning)
        return "numpy", (lambda f: f)
    return "numba", njit(cache=True)


BACKEND_NAME, _jit = _pick_backend()


@_jit
def member_weight(row, d_a, d_b, code):
    """p * m(psi / ||psi||) for one unnormalized member of length d_a*d_b.

    code 0 is concurrence, 1 is negativity.  With a dimension-2 side
    both reduce to 2*sqrt(det G) of the 2x2 Gram matrix, computed in
    closed form; larger cuts go through a small Hermitian eigensolve.
    """
    psi = row.reshape(d_a, d_b)
    if d_a == 2 or d_b == 2:
        g00 = 0.0
        g11 = 0.0
        gr = 0.0
        gi = 0.0
        if d_a == 2:
            for j in range(d_b):
                x = psi[0, j]
                y = psi[1, j]
                g00 += x.real * x.real + x.imag * x.imag
                g11 += y.real * y.real + y.imag * y.imag
                c = x * y.conjugate()
                gr += c.real
                gi += c.imag
        else:
            for j in range(d_a):
                x = psi[j, 0]
                y = psi[j, 1]
                g00 += x.real * x.real + x.imag * x.imag
                g11 += y.real * y.real + y.imag * y.imag
                c = x * y.conjugate()
                gr += c.real
                gi += c.imag
        det = g00 * g11 - (gr * gr + gi * gi)
        if det < 0.0:
            det = 0.0
        return 2.0 * np.sqrt(det)
    if d_a <= d_b:
        gram = np.dot(psi, psi.conj().T)
    else:
        gram = np.dot(psi.conj().T, psi)
    lam = np.linalg.eigvalsh(gram)
    p = 0.0
    for value in lam:
        if value > 0.0:
            p += value
    if code == 0:
        # cross-term form of 2(p^2 - sum(lam^2)): no cancellation near 0
        cross = 0.0
        for i in range(lam.shape[0]):
            li = lam[i]
            if li <= 0.0:
                continue
            for j in range(i + 1, lam.shape[0]):
                lj = lam[j]
                if lj > 0.0:
                    cross += li * lj
        return 2.0 * np.sqrt(cross)
    roots = 0.0
    for value in lam:
        if value > 0.0:
            roots += np.sqrt(value)
    total = roots * roots - p
    if total < 0.0:
        total = 0.0
    return total


@_jit
def _eval_rotation(members, a, b, theta, phi, ta, tb, d_a, d_b, code):
    c = np.cos(theta)
    s = np.sin(theta)
    e = complex(np.cos(phi), np.sin(phi))
    ec = e.conjugate()
    for idx in range(members.shape[1]):
        x = members[a, idx]
        y = members[b, idx]
        ta[idx] = c * x + s * (e * y)
        tb[idx] = c * y - s * (ec * x)
    return member_weight(ta, d_a, d_b, code) + member_weight(tb, d_a, d_b, code)


@_jit
def _line_search(members, a, b, mode, fixed, lo, hi, tol, ta, tb, d_a, d_b, code):
    # coarse scan to bracket the best local minimum, then golden section;
    # mode 0 varies the angle at fixed phase, mode 1 the phase at fixed angle
    n_scan = 9
    step = (hi - lo) / (n_scan - 1)
    best_x = lo
    best_g = 1e300
    for i in range(n_scan):
        x = lo + step * i
        if mode == 0:
            g = _eval_rotation(members, a, b, x, fixed, ta, tb, d_a, d_b, code)
        else:
            g = _eval_rotation(members, a, b, fixed, x, ta, tb, d_a, d_b, code)
        if g < best_g:
            best_g = g
            best_x = x
    left = best_x - step
    right = best_x + step
    x1 = right - _GOLDEN * (right - left)
    x2 = left + _GOLDEN * (right - left)
    if mode == 0:
        f1 = _eval_rotation(members, a, b, x1, fixed, ta, tb, d_a, d_b, code)
        f2 = _eval_rotation(members, a, b, x2, fixed, ta, tb, d_a, d_b, code)
    else:
        f1 = _eval_rotation(members, a, b, fixed, x1, ta, tb, d_a, d_b, code)
        f2 = _eval_rotation(members, a, b, fixed, x2, ta, tb, d_a, d_b, code)
    while right - left > tol:
        if f1 <= f2:
            right = x2
            x2 = x1
            f2 = f1
            x1 = right - _GOLDEN * (right - left)
            if mode == 0:
                f1 = _eval_rotation(members, a, b, x1, fixed, ta, tb, d_a, d_b, code)
            else:
                f1 = _eval_rotation(members, a, b, fixed, x1, ta, tb, d_a, d_b, code)
        else:
            left = x1
            x1 = x2
            f1 = f2
            x2 = left + _GOLDEN * (right - left)
            if mode == 0:
                f2 = _eval_rotation(members, a, b, x2, fixed, ta, tb, d_a, d_b, code)
            else:
                f2 = _eval_rotation(members, a, b, fixed, x2, ta, tb, d_a, d_b, code)
    xm = 0.5 * (left + right)
    if mode == 0:
        gm = _eval_rotation(members, a, b, xm, fixed, ta, tb, d_a, d_b, code)
    else:
        gm = _eval_rotation(members, a, b, fixed, xm, ta, tb, d_a, d_b, code)
    if gm < best_g:
        return xm, gm
    return best_x, best_g


@_jit
def _pair_search(members, v, a, b, d_a, d_b, code, angle_tol, use_phase, ta, tb):
    # optimize one two-row unitary rotation and apply it in place to both
    # the member matrix and the isometry when it improves the pair objective
    g0 = member_weight(members[a], d_a, d_b, code) + member_weight(members[b], d_a, d_b, code)
    best_theta, best_g = _line_search(
        members, a, b, 0, 0.0, -_HALF_PI, _HALF_PI, angle_tol, ta, tb, d_a, d_b, code
    )
    best_phi = 0.0
    if use_phase:
        theta2, g2 = _line_search(
            members, a, b, 0, _HALF_PI, -_HALF_PI, _HALF_PI, angle_tol, ta, tb, d_a, d_b, code
        )
        if g2 < best_g:
            best_theta = theta2
            best_phi = _HALF_PI
            best_g = g2
        phi3, g3 = _line_search(
            members, a, b, 1, best_theta, -np.pi, np.pi, angle_tol, ta, tb, d_a, d_b, code
        )
        if g3 < best_g:
            best_phi = phi3
            best_g = g3
        theta4, g4 = _line_search(
            members, a, b, 0, best_phi, -_HALF_PI, _HALF_PI, angle_tol, ta, tb, d_a, d_b, code
        )
        if g4 < best_g:
            best_theta = theta4
            best_g = g4
    if best_g >= g0 - 1e-15 * (1.0 + g0):
        return g0, False
    c = np.cos(best_theta)
    s = np.sin(best_theta)
    e = complex(np.cos(best_phi), np.sin(best_phi))
    ec = e.conjugate()
    for idx in range(members.shape[1]):
        x = members[a, idx]
        y = members[b, idx]
        members[a, idx] = c * x + s * (e * y)
        members[b, idx] = c * y - s * (ec * x)
    for idx in range(v.shape[1]):
        x = v[a, idx]
        y = v[b, idx]
        v[a, idx] = c * x + s * (e * y)
        v[b, idx] = c * y - s * (ec * x)
    return best_g, True


@_jit
def run_restart(
    members, v, basis, d_a, d_b, code, max_sweeps, rel_tol, stall_limit, angle_tol, use_phase, history
):
    """Sweep pairwise rotations until stalled or the sweep cap.

    A sweep visits every member pair, then re-orthonormalizes the
    isometry (keeping column phases so the ensemble is unchanged up to
    roundoff) and resyncs the members from the eigenbasis.  A sweep
    whose relative objective decrease is below ``rel_tol`` counts as
    stalled; ``stall_limit`` consecutive stalls terminate.  history[0:n]
    receives the objective after each sweep (entry 0 is the start);
    returns (n, converged, final objective).
    """
    n_members = members.shape[0]
    width = members.shape[1]
    ta = np.empty(width, dtype=np.complex128)
    tb = np.empty(width, dtype=np.complex128)
    obj = 0.0
    for j in range(n_members):
        obj += member_weight(members[j], d_a, d_b, code)
    history[0] = obj
    n_rec = 1
    converged = False
    stall = 0
    for _sweep in range(max_sweeps):
        for a in range(n_members - 1):
            for b in range(a + 1, n_members):
                _pair_search(members, v, a, b, d_a, d_b, code, angle_tol, use_phase, ta, tb)
        q, r = np.linalg.qr(v)
        for j in range(v.shape[1]):
            diag = r[j, j]
            mag = abs(diag)
            if mag > 0.0:
                ph = diag / mag
            else:
                ph = complex(1.0, 0.0)
            for i in range(v.shape[0]):
                v[i, j] = q[i, j] * ph
        resync = np.dot(v, basis)
        for i in range(n_members):
            for j in range(width):
                members[i, j] = resync[i, j]
        new_obj = 0.0
        for j in range(n_members):
            new_obj += member_weight(members[j], d_a, d_b, code)
        history[n_rec] = new_obj
        n_rec += 1
        denom = obj if obj > 1e-300 else 1e-300
        if (obj - new_obj) / denom < rel_tol:
            stall += 1
        else:
            stall = 0
        obj = new_obj
        if obj <= 1e-13:
            converged = True
            break
        if stall >= stall_limit:
            converged = True
            break
    return n_rec, converged, obj
