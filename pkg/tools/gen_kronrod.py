"""Regenerate the G10/K21 node table embedded in quadrature.py.

The Kronrod extension nodes are the zeros of the Stieltjes polynomial
E_{n+1}, defined by orthogonality of E_{n+1} x^j against P_n for j <= n.
Coefficients are solved exactly over the rationals, roots and weights are
polished with mpmath.
"""
import mpmath as mp
import sympy as sp

N = 10
mp.mp.dps = 60
x = sp.Symbol("x")
pn = sp.legendre(N, x)
cs = sp.symbols(f"c0:{N + 1}")
e = x ** (N + 1) + sum(c * x**i for i, c in enumerate(cs))
eqs = [sp.integrate(sp.expand(pn * e * x**j), (x, -1, 1)) for j in range(N + 1)]
sol = sp.solve(eqs, cs, dict=True)[0]
e = sp.Poly(sp.expand(e.subs(sol)), x)

def roots(poly):
    coeffs = [mp.mpf(sp.Rational(c).p) / sp.Rational(c).q for c in poly.all_coeffs()]
    return sorted(mp.polyroots(coeffs, maxsteps=500, extraprec=400), key=lambda r: mp.re(r))

g_nodes = [mp.re(r) for r in roots(sp.Poly(pn, x))]
k_nodes = sorted(g_nodes + [mp.re(r) for r in roots(e)])

def legendre_weights(nodes):
    n = len(nodes)
    A = mp.matrix(n, n)
    b = mp.matrix(n, 1)
    for i in range(n):
        for j, t in enumerate(nodes):
            A[i, j] = mp.legendre(i, t)
        b[i] = 2 if i == 0 else 0
    return list(mp.lu_solve(A, b))

gw = legendre_weights(g_nodes)
kw = legendre_weights(k_nodes)
print("# node, kronrod weight, gauss weight (0 where not a gauss node)")
for t, w in zip(k_nodes, kw):
    gi = [i for i, g in enumerate(g_nodes) if abs(g - t) < mp.mpf(10) ** -40]
    gww = gw[gi[0]] if gi else mp.mpf(0)
    if t >= -mp.mpf(10) ** -50:
        print(f'    ("{mp.nstr(abs(t) if abs(t) > 1e-50 else 0, 34)}", "{mp.nstr(w, 34)}", "{mp.nstr(gww, 34)}"),')
