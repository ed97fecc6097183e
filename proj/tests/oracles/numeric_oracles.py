"""Independent numpy / mpmath reference values for the dense building blocks.

Writes tests/data/numeric_oracles.json. Inputs are generated here from a
fixed seed and stored alongside the expected outputs.
"""
import functools
import json
import pathlib

import mpmath
import numpy as np
import scipy.linalg

P = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1.0, -1])}
DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def dense(s):
    return functools.reduce(np.kron, [P[c] for c in s], np.array([[1.0]]))


def cmat(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def ptrace(rho, n, keep):
    t = rho.reshape([2] * (2 * n))
    idx = list(range(2 * n))
    for q in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=q, axis2=q + t.ndim // 2)
    d = 2 ** len(keep)
    return t.reshape(d, d)


def rel_entropy(r, s):
    return float(np.real(np.trace(r @ (scipy.linalg.logm(r) - scipy.linalg.logm(s)))))


def main():
    rng = np.random.default_rng(7)
    n = 3
    g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    herm = (g + g.conj().T) / 2
    strings = ["III", "XII", "IYZ", "ZZZ", "YXI", "XYZ", "IIY"]
    coeffs = {s: float(np.real(np.trace(herm @ dense(s))) / 8) for s in strings}

    products = []
    for a, b in [("XYZ", "YZX"), ("XX", "YY"), ("XZ", "ZX"), ("YIZ", "XZY")]:
        m = dense(a) @ dense(b)
        for c in ["".join(t) for t in np.array(np.meshgrid(*[list("IXYZ")] * len(a))).T.reshape(-1, len(a))]:
            ov = np.trace(dense(c).conj().T @ m) / 2 ** len(a)
            if abs(ov) > 0.5:
                products.append({"a": a, "b": b, "string": c, "phase": [float(ov.real), float(ov.imag)]})
                break

    w = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    rho4 = w @ w.conj().T
    rho4 /= np.trace(rho4).real
    v = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    sigma4 = v @ v.conj().T + 0.1 * np.eye(16)
    sigma4 /= np.trace(sigma4).real
    keeps = [[0], [1, 3], [0, 2, 3]]
    traces = [{"keep": k, "reduced": cmat(ptrace(rho4, 4, k))} for k in keeps]

    h = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = (h + h.conj().T) / 2
    evals = np.linalg.eigvalsh(h)
    expm = scipy.linalg.expm(h)
    pd = h @ h.conj().T + np.eye(6)
    logm = scipy.linalg.logm(pd)

    mpmath.mp.dps = 40

    def fannes(delta, d):
        delta, d = mpmath.mpf(delta), mpmath.mpf(d)
        return -delta * mpmath.log(delta / (d - 1)) - (1 - delta) * mpmath.log(1 - delta)

    def gamma(delta, d):
        delta, d = mpmath.mpf(delta), mpmath.mpf(d)
        r = 1 - (d - 1) * delta
        return -r * mpmath.log(r) - (d - 1) * delta * mpmath.log(delta)

    entropy_cases = []
    for delta, d in [(mpmath.mpf(1) / 32, 32), (mpmath.mpf("0.01"), 8), (mpmath.mpf("1e-4"), 64), (mpmath.mpf(1) / 4096, 4096)]:
        entropy_cases.append({"delta": float(delta), "D": d, "C": float(fannes(delta, d)), "Gamma": float(gamma(delta, d)),
                              "F": float(gamma(delta, d) - 2 * fannes(delta, d))})

    out = {
        "herm3": cmat(herm),
        "pauli_coefficients": coeffs,
        "pauli_products": products,
        "rho4": cmat(rho4),
        "sigma4": cmat(sigma4),
        "partial_traces": traces,
        "von_neumann_rho4": float(-np.sum([x * np.log(x) for x in np.linalg.eigvalsh(rho4) if x > 1e-14])),
        "relative_entropy_rho4_sigma4": rel_entropy(rho4, sigma4),
        "trace_distance_rho4_sigma4": float(0.5 * np.abs(np.linalg.eigvalsh(rho4 - sigma4)).sum()),
        "herm6": cmat(h),
        "herm6_eigenvalues": [float(x) for x in evals],
        "herm6_exp": cmat(expm),
        "pd6": cmat(pd),
        "pd6_log": cmat(logm),
        "entropy_functions": entropy_cases,
        "neg_log_31_32": float(-mpmath.log(mpmath.mpf(31) / 32)),
        "neg_log_63_64": float(-mpmath.log(mpmath.mpf(63) / 64)),
    }
    (DATA / "numeric_oracles.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
