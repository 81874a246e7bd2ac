"""Regenerate crates/core/tests/golden/*.json with numpy/scipy.

Independent of the Rust implementation: every matrix is rebuilt here from
its closed form on the torus of circumference 2*pi.
"""

import json
import pathlib

import numpy as np
from scipy.linalg import eigh, solve

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/golden"


def modes(n):
    return np.arange(-n, n + 1)


def moment(intervals, theta):
    total = 0j
    for a, b in intervals:
        if abs(theta) < 1e-12:
            total += b - a
        else:
            total += (np.exp(-1j * theta * b) - np.exp(-1j * theta * a)) / (-1j * theta)
    return total


def spatial_gramian(n, omega):
    j = modes(n)
    d = j[:, None] - j[None, :]
    g = np.zeros(d.shape, dtype=complex)
    for a, b in omega:
        with np.errstate(divide="ignore", invalid="ignore"):
            block = (np.exp(1j * d * b) - np.exp(1j * d * a)) / (1j * d)
        block[d == 0] = b - a
        g += block
    return g / (2 * np.pi)


def obs_gramian(n, omega, intervals):
    j = modes(n)
    lam = (j**2).astype(float)
    g = spatial_gramian(n, omega)
    t = np.array([[moment(intervals, lj - lk) for lk in lam] for lj in lam])
    return t * g


def fat_cantor(depth, r, base):
    ivs = [base]
    length = base[1] - base[0]
    for k in range(1, depth + 1):
        gap = r**k * length
        nxt = []
        for a, b in ivs:
            m = 0.5 * (a + b)
            nxt += [(a, m - gap / 2), (m + gap / 2, b)]
        ivs = nxt
    return ivs


def main():
    golden = {}

    a = obs_gramian(8, [(0.0, np.pi)], [(0.0, 1.0)])
    lmin = eigh(a, eigvals_only=True)[0]
    golden["obs_constant_torus1d_n8"] = {"lambda_min": lmin, "obs_constant": 1.0 / lmin}

    a = obs_gramian(8, [(0.0, 1.0)], [(-0.1, 0.1)]) / 0.2
    lam = modes(8) ** 2
    mu = eigh(a + np.diag(1.0 / (1.0 + lam) ** 2), eigvals_only=True)[0]
    golden["weak_certificate_torus1d_n8"] = {"mu": mu}

    g = spatial_gramian(200, [(0.0, np.pi)])
    lam = modes(200) ** 2
    b2 = eigh(g + np.diag((0.1 * (100.0 - lam)) ** 2), eigvals_only=True)[0]
    golden["resolvent_torus1d_n200"] = {"bound": np.sqrt(b2)}

    e = fat_cantor(4, 0.25, (0.0, 1.0))
    a = obs_gramian(32, [(0.0, np.pi)], e)
    j = modes(32)
    u0 = (j == 0).astype(complex)
    u1 = (j == 1).astype(complex)
    w = np.exp(1j * j**2 * 1.0) * u1 - u0
    # form(phi) = sum phi_j A_jk conj(phi_k); the solve is against A^T
    phi = solve(a.T, w)
    golden["hum_torus1d_n32"] = {"cost": float(np.real(np.vdot(phi, w)))}

    OUT.mkdir(parents=True, exist_ok=True)
    for name, values in golden.items():
        body = {k: float(v) for k, v in values.items()}
        (OUT / f"{name}.json").write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
