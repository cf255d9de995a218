"""Reference values for crates/core/tests/oracles.rs, computed with numpy/scipy
independently of the Rust code paths (ODE integration instead of
superoperators, LAPACK instead of Jacobi, scipy least squares instead of
Gauss-Newton). Run: python3 tools/oracles.py
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm, eigvalsh
from scipy.optimize import least_squares

np.set_printoptions(precision=17)


def lindblad_rhs(h, jumps):
    def f(_t, y):
        d = h.shape[0]
        rho = y.reshape(d, d)
        out = -1j * (h @ rho - rho @ h)
        for l in jumps:
            ld = l.conj().T
            out += l @ rho @ ld - 0.5 * (ld @ l @ rho + rho @ ld @ l)
        return out.reshape(-1)
    return f


def evolve(h, jumps, rho0, t):
    sol = solve_ivp(lindblad_rhs(h, jumps), (0, t), rho0.reshape(-1).astype(complex),
                    method="DOP853", rtol=1e-13, atol=1e-15)
    return sol.y[:, -1].reshape(rho0.shape)


def case_propagation():
    h = np.array([[1, 0.3 - 0.2j, 0], [0.3 + 0.2j, -0.5, 0.1j], [0, -0.1j, 2]])
    l1 = np.array([[0, 0.5, 0], [0, 0, 0.3], [0.2, 0, 0]], dtype=complex)
    l2 = np.diag([0.4, -0.1j, 0.3])
    rho0 = np.array([[0.5, 0.1, 0], [0.1, 0.3, 0.05j], [0, -0.05j, 0.2]])
    rho = evolve(h, [l1, l2], rho0, 0.7)
    print("propagation rho(0.7):")
    for row in rho:
        print("  ", [(z.real, z.imag) for z in row])
    w = eigvalsh(rho0)
    print("entropy rho0:", -sum(x * np.log(x) for x in w if x > 0))


def case_expm():
    a = np.array([[0.3 + 1j, -2, 0.5j], [1.5, -0.7j, 2 - 1j], [0, 0.4, 1 + 0.2j]]) * 3
    e = expm(a)
    print("expm:")
    for row in e:
        print("  ", [(z.real, z.imag) for z in row])


def case_eigen():
    m = np.array([[2, 1 - 1j, 0, 0.5j], [1 + 1j, -1, 0.3, 0], [0, 0.3, 0.5, 2j],
                  [-0.5j, 0, -2j, 1]])
    print("eigvalsh:", eigvalsh(m))


def case_choi_negated():
    # Channel of rho' = -i[H, rho] - D[L](rho) built column by column from ODE solves.
    h = np.diag([0.0, 1.0]).astype(complex)
    l = 0.8 * np.array([[0, 1], [0, 0]], dtype=complex)

    def rhs(_t, y):
        rho = y.reshape(2, 2)
        ld = l.conj().T
        d = l @ rho @ ld - 0.5 * (ld @ l @ rho + rho @ ld @ l)
        return (-1j * (h @ rho - rho @ h) - d).reshape(-1)

    choi = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1
            sol = solve_ivp(rhs, (0, 0.5), e.reshape(-1), method="DOP853", rtol=1e-13, atol=1e-15)
            img = sol.y[:, -1].reshape(2, 2)
            choi += np.kron(e, img)
    print("negated-dissipator Choi min eigenvalue:", eigvalsh(choi)[0])


def case_fit():
    x = np.linspace(-2 * np.pi, 2 * np.pi, 101)
    y = 0.5 * (1 + np.exp(-0.6) * np.cos(x - 0.2)) + 0.02 * np.sin(3.3 * x) + 0.01 * np.cos(7.1 * x)
    r = least_squares(lambda q: q[0] * (1 + np.exp(-q[1]) * np.cos(x - q[2])) - y,
                      [0.45, 0.5, 0.1], xtol=1e-15, ftol=1e-15, gtol=1e-15)
    print("fit (A, GammaT, EshiftT):", r.x)


def case_rwa(ratio):
    omega = 1.0
    tau = np.pi / 2 / omega
    t_dark = 10 * tau
    w0 = ratio * omega
    h0 = np.diag([0.0, w0])

    def rhs(t, y, on):
        psi = y
        h = h0.astype(complex).copy()
        if on:
            v = omega * np.cos(w0 * t)  # 2 cos(wt) * Omega/2
            h[0, 1] = h[1, 0] = v
        return -1j * (h @ psi)

    psi = np.array([1, 0], dtype=complex)
    t = 0.0
    for dur, on in [(tau, True), (t_dark, False), (tau, True)]:
        sol = solve_ivp(rhs, (t, t + dur), psi, args=(on,), method="DOP853",
                        rtol=1e-13, atol=1e-15)
        psi = sol.y[:, -1]
        t += dur
    pe = abs(psi[1]) ** 2
    print(f"exact P_e at w/Omega={ratio:g}: {pe!r}  |P_e - 1| = {abs(pe - 1):.6e}")


if __name__ == "__main__":
    case_propagation()
    case_expm()
    case_eigen()
    case_choi_negated()
    case_fit()
    case_rwa(100)
    case_rwa(1000)
