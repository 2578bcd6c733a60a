#!/usr/bin/env python3
# Copyright 2026 The wcorr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Independent brute-force oracle for frozen test values.
#
# Everything here is built from explicit numpy arrays (full density-matrix
# evolution, grid-discretized pointer wavefunctions) and shares no code with
# the C++ library. Run it to regenerate the constants quoted in the tests.
import itertools

import numpy as np

np.set_printoptions(precision=17)


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2)] = 1.0
    return v


def dm(v):
    return np.outer(v, v.conj())


def ptrace(rho, dims, keep):
    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # move kept to front in order, traced after
    perm = list(keep) + traced
    t = t.transpose(perm + [p + n for p in perm])
    dk = int(np.prod([dims[i] for i in keep]))
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def hadamard_rows(n):
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    rows = []
    for k in range(2 ** n):
        bits = [(k >> (n - 1 - q)) & 1 for q in range(n)]
        facs = [minus if b else plus for b in bits]
        v = facs[0]
        for f in facs[1:]:
            v = np.kron(v, f)
        rows.append((v.astype(complex), [f.astype(complex) for f in facs]))
    return rows


def correlation_analytic(rho, n=3):
    dims = [2] * n
    marg = [ptrace(rho, dims, [p]) for p in range(n)]
    total = 0.0
    skipped = []
    for k, (b, facs) in enumerate(hadamard_rows(n)):
        P = np.real(b.conj() @ rho @ b)
        if P < 1e-14:
            skipped.append(k + 1)
            continue
        s = 0.0
        for i in range(2 ** n):
            A = np.zeros((2 ** n, 2 ** n)); A[i, i] = 1
            w1 = (b.conj() @ A @ rho @ b) / P
            bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
            prod = 1.0
            for p in range(n):
                f = facs[p]
                a = np.zeros((2, 2)); a[bits[p], bits[p]] = 1
                prod *= (f.conj() @ a @ marg[p] @ f) / (f.conj() @ marg[p] @ f)
            s += abs(w1 - prod)
        total += P * s
    return total, skipped


def oracle_diag(rho, n=3):
    dims = [2] * n
    marg = [ptrace(rho, dims, [p]) for p in range(n)]
    s = 0.0
    for i in range(2 ** n):
        bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
        s += abs(rho[i, i] - np.prod([marg[p][bits[p], bits[p]] for p in range(n)]))
    return float(np.real(s))


def cshift(dims, c, t):
    # |..x_c..m_t..> -> |..x_c..(m+x)_t..>
    D = int(np.prod(dims))
    U = np.zeros((D, D))
    for idx in itertools.product(*[range(d) for d in dims]):
        out = list(idx)
        out[t] = (idx[t] + idx[c]) % dims[t]
        i = np.ravel_multi_index(idx, dims)
        o = np.ravel_multi_index(out, dims)
        U[o, i] = 1
    return U


def project(rho, dims, sub, label):
    D = int(np.prod(dims))
    Pm = np.zeros((D, D))
    for idx in itertools.product(*[range(d) for d in dims]):
        if idx[sub] == label:
            i = np.ravel_multi_index(idx, dims)
            Pm[i, i] = 1
    r = Pm @ rho @ Pm
    p = np.real(np.trace(r))
    return r / p, p


def literal_convey(rho, nu1=0, nu2=0):
    bell = (ket([0, 0]) + ket([1, 1])) / np.sqrt(2)
    # A,B,C,A_N,C_N1,B_N,C_N2
    full = np.kron(np.kron(rho, dm(bell)), dm(bell))
    dims = [2] * 7
    U = cshift(dims, 0, 3); full = U @ full @ U.T
    U = cshift(dims, 1, 5); full = U @ full @ U.T
    full, p1 = project(full, dims, 3, nu1)
    full, p2 = project(full, dims, 5, nu2)
    return ptrace(full, dims, [4, 6, 2]), p1 * p2


def main():
    ghz = (ket([0, 0, 0]) + ket([1, 1, 1])) / np.sqrt(2)
    rho_ghz = dm(ghz)
    classical = 0.5 * (dm(ket([0, 0, 0])) + dm(ket([1, 1, 1])))
    print("GHZ analytic C, skipped:", correlation_analytic(rho_ghz))
    print("classical analytic C, skipped:", correlation_analytic(classical))
    print("GHZ oracle_diag:", oracle_diag(rho_ghz))
    prod = np.kron(np.kron(dm(np.array([0.6, 0.8j])), np.diag([0.3, 0.7])), dm(np.array([1, 1]) / np.sqrt(2)))
    print("product analytic C:", correlation_analytic(prod))
    ghz4 = np.zeros(16, dtype=complex); ghz4[0] = ghz4[15] = 1 / np.sqrt(2)
    print("GHZ_4 analytic C, skipped:", correlation_analytic(dm(ghz4), 4), "oracle_diag:", oracle_diag(dm(ghz4), 4))

    # trace distance |0> vs |+>
    d = dm(np.array([1, 0])) - dm(np.array([1, 1]) / np.sqrt(2))
    print("D(|0>,|+>):", 0.5 * np.sum(np.abs(np.linalg.eigvalsh(d))))
    # diagonal distance GHZ vs I/8
    print("diag distance GHZ vs I/8:", 0.5 * np.sum(np.abs(np.diag(rho_ghz).real - 1 / 8)))
    print("trace distance GHZ vs I/8:", 0.5 * np.sum(np.abs(np.linalg.eigvalsh(rho_ghz - np.eye(8) / 8))))

    out, p = literal_convey(rho_ghz)
    print("literal convey GHZ diag:", np.diag(out).real, "prob", p)
    print("literal convey GHZ off-diag (000,111):", out[0, 7])

    # weak value anomalous example
    pin = np.array([1, 1]) / np.sqrt(2)
    pfin = np.array([2, -1]) / np.sqrt(5)
    A = np.diag([1, 0])
    print("weak value anomalous:", (pfin.conj() @ A @ pin) / (pfin.conj() @ pin))

    # Grid-discretized Gaussian pointer: single qubit, single device A=|0><0|,
    # complex pre-state, postselection b. Evolve exactly on a grid and read
    # the conditional pointer mean position and momentum.
    psi = np.array([0.6, 0.8 * np.exp(0.7j)])
    b = np.array([np.cos(0.4), np.sin(0.4) * np.exp(-1.1j)])
    Aw = np.diag([1.0, 0.0])
    W = (b.conj() @ Aw @ psi) / (b.conj() @ psi)
    print("synthetic weak value:", W)
    for g, sigma in [(0.3, 1 / np.sqrt(2)), (0.3, 0.9), (1e-4, 1 / np.sqrt(2))]:
        q = np.linspace(-40, 40, 2 ** 16)
        dq = q[1] - q[0]
        phi = lambda x: (2 * np.pi * sigma ** 2) ** -0.25 * np.exp(-(q - x) ** 2 / (4 * sigma ** 2))
        # ket after coupling: sum_x psi_x |x> |phi_{g s(x)}>, s = [1,0]
        # postselect on b: pointer wavefunction f(q) = sum_x conj(b_x) psi_x phi_{g s(x)}
        f = np.conj(b[0]) * psi[0] * phi(g) + np.conj(b[1]) * psi[1] * phi(0.0)
        P = np.sum(np.abs(f) ** 2) * dq
        mq = np.sum(q * np.abs(f) ** 2) * dq / P
        # spectral derivative: p = -i d/dq
        kgrid = 2 * np.pi * np.fft.fftfreq(q.size, d=dq)
        pf = np.fft.ifft(kgrid * np.fft.fft(f))
        mp = np.real(np.sum(np.conj(f) * pf) * dq) / P
        print(f"grid pointer g={g} sigma={sigma}: P={P!r} dq={mq!r} dp={mp!r}"
              f" ReW~{mq / g!r} ImW~{2 * sigma ** 2 * mp / g!r}")


if __name__ == "__main__":
    main()
