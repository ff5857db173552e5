"""Independent reference implementations used as test oracles.

Nothing here imports fpix: each oracle is a deliberately naive second route to
the quantity under test (enumeration, brute-force division, textbook loops).
"""

import hashlib
import math
import struct

import numpy as np

# -- elliptic curves by enumeration ---------------------------------------------

INF = "inf"


def curve_points(p, a, b):
    """Every affine point of y^2 = x^3 + ax + b over F_p, plus INF."""
    pts = [INF]
    for x in range(p):
        rhs = (x**3 + a * x + b) % p
        for y in range(p):
            if (y * y) % p == rhs:
                pts.append((x, y))
    return pts


def brute_div(num, den, p):
    """num / den mod p by searching for the quotient."""
    den %= p
    for q in range(p):
        if (q * den - num) % p == 0:
            return q
    raise ZeroDivisionError


def oracle_add(P, Q, p, a):
    """Chord-tangent law written from the textbook, with brute-force division."""
    if P == INF:
        return Q
    if Q == INF:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return INF
    if P == Q:
        lam = brute_div(3 * x1 * x1 + a, 2 * y1, p)
    else:
        lam = brute_div(y2 - y1, x2 - x1, p)
    # the line meets the curve at x1, x2, x3 with x1 + x2 + x3 = lam^2
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def addition_table(p, a, b):
    pts = curve_points(p, a, b)
    return pts, {(P, Q): oracle_add(P, Q, p, a) for P in pts for Q in pts}


def oracle_mul(k, P, p, a):
    R = INF
    for _ in range(k):
        R = oracle_add(R, P, p, a)
    return R


def is_probable_prime(n, rounds=32):
    """Miller-Rabin with fixed bases (deterministic far beyond 2^192 for these bases)."""
    if n < 2:
        return False
    small = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in small[:rounds]:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# -- hybrid encryption pipeline, written out longhand ----------------------------------


def hmac_sha256(key, msg):
    """HMAC from its definition: H((K ^ opad) || H((K ^ ipad) || m))."""
    block = 64
    if len(key) > block:
        key = hashlib.sha256(key).digest()
    key = key.ljust(block, b"\0")
    inner = hashlib.sha256(bytes(k ^ 0x36 for k in key) + msg).digest()
    return hashlib.sha256(bytes(k ^ 0x5C for k in key) + inner).digest()


def reference_ciphertext(mode_byte, components, e, Q, G, p, a):
    """Ciphertext bytes for ephemeral scalar ``e`` on a curve with 1..n-byte coordinates."""
    L = (p.bit_length() + 7) // 8
    R = oracle_mul(e, G, p, a)
    S = oracle_mul(e, Q, p, a)
    plain = bytes([mode_byte]) + len(components).to_bytes(4, "big")
    for c in components:
        plain += struct.pack(">d", c)
    xs = S[0].to_bytes(L, "big")
    stream = b""
    i = 0
    while len(stream) < len(plain):
        stream += hashlib.sha256(xs + i.to_bytes(4, "big")).digest()
        i += 1
    body = bytes(u ^ v for u, v in zip(plain, stream))
    enc_r = b"\x04" + R[0].to_bytes(L, "big") + R[1].to_bytes(L, "big")
    tag = hmac_sha256(hashlib.sha256(xs + b"mac").digest(), enc_r + body)
    return enc_r + body + tag


# -- numerical oracles -----------------------------------------------------------------


def jacobi_eigvals(S, max_sweeps=100):
    """Textbook cyclic two-sided Jacobi on a symmetric matrix, one rotation at a time.

    An entry is treated as zero once it is below machine precision relative to
    its two diagonal entries; iteration stops after a sweep with no rotation.
    """
    S = np.array(S, dtype=float)
    n = S.shape[0]
    eps = np.finfo(float).eps
    floor = eps * eps * max(float(np.sum(S * S)), 1e-300)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[p, q]
                if apq * apq <= eps * eps * abs(S[p, p] * S[q, q]) or apq * apq <= floor:
                    continue
                rotated = True
                theta = 0.5 * math.atan2(2.0 * apq, S[q, q] - S[p, p])
                c, s = math.cos(theta), math.sin(theta)
                rp, rq = S[p].copy(), S[q].copy()
                S[p], S[q] = c * rp - s * rq, s * rp + c * rq
                cp, cq = S[:, p].copy(), S[:, q].copy()
                S[:, p], S[:, q] = c * cp - s * cq, s * cp + c * cq
        if not rotated:
            break
    return np.sort(np.diag(S))[::-1]


def singular_values_via_gram(A):
    A = np.asarray(A, dtype=float)
    G = A.T @ A if A.shape[0] >= A.shape[1] else A @ A.T
    return np.sqrt(np.maximum(jacobi_eigvals(G), 0.0))


def naive_distance(x, y):
    total = 0.0
    for u, v in zip(x, y):
        total += (u - v) * (u - v)
    return math.sqrt(total)


def naive_histogram(pixels):
    counts = [0] * 256
    flat = [int(v) for row in pixels for v in row]
    for v in flat:
        counts[v] += 1
    return [c / len(flat) for c in counts]
