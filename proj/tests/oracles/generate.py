"""Freezes reference values computed with mpmath into oracle_values.hpp.

Roots come from mpmath.polyroots on Q(z) - q P(z) expanded with sympy, the
Mellin transform from gamma products at 40 digits, and the density and CDF
from mpmath.meijerg, which shares no code with the series in the library.

    python3 tests/oracles/generate.py > tests/oracles/oracle_values.hpp
"""

import json
import pathlib
import sys

import mpmath as mp
import sympy as sp

mp.mp.dps = 40
HERE = pathlib.Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"

# (fixture, q, density points, Mellin points, cdf points)
CASES = [
    ("dufresne", 0, [0.2, 0.5, 1, 2, 10], [0.25, 0.5, 1.5, 1.9], [0.5, 1, 3]),
    ("bm_q2", 2, [0.1, 0.5, 1, 3], [0.5, 1.5, 2.5], [0.3, 1]),
    ("kou", 1, [0.05, 0.5, 1.5, 4, 30], [0.5, 1.2, 1.3, 2.5], [0.5, 1.5]),
    ("drift_up", 1, [0.3, 1.5, 2.5, 10], [0.5, 1.3, 2.2], [1.5]),
    ("drift_down", 1, [0.3, 1.5, 2.5, 10], [0.5, 1.3, 2.5], [1.5]),
    ("pure_jump", 1, [0.05, 0.5, 1.5, 4, 30], [0.5, 1.3, 2.5], [0.5, 1.5]),
    ("erlang2", 0.5, [0.2, 1, 3, 20], [0.5, 1.3, 2.4], [1]),
    ("complex_pair", 1.5, [0.2, 1, 3, 20], [0.5, 1.2, 1.6], [1]),
]


def to_c(v):
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v), 0.0)


def sym(c):
    # Exact binary value of the double, so the oracle sees the same model.
    return sp.Rational(c.real) + sp.I * sp.Rational(c.imag)


def load(name):
    j = json.loads((FIXTURES / f"{name}.json").read_text())
    pos = [(to_c(t["rho"]), [to_c(a) for a in t["alphas"]]) for t in j.get("positive_jumps", [])]
    neg = [(to_c(t["rho"]), [to_c(a) for a in t["alphas"]]) for t in j.get("negative_jumps", [])]
    return float(j.get("sigma", 0.0)), float(j.get("mu", 0.0)), pos, neg


def rational_form(sigma, mu, pos, neg, q):
    z = sp.Symbol("z")
    lam = 0
    for rho, al in pos + neg:
        for i, a in enumerate(al, start=1):
            lam += sym(a) * sp.factorial(i - 1) / sym(rho) ** i
    den = 1
    for rho, al in pos:
        den *= (sym(rho) - z) ** len(al)
    for rho, al in neg:
        den *= (sym(rho) + z) ** len(al)
    s2 = sp.Rational(sigma) ** 2
    num = (s2 * z**2 / 2 + sp.Rational(mu) * z - lam - sp.Rational(q)) * den
    for rho, al in pos:
        for i, a in enumerate(al, start=1):
            num += sym(a) * sp.factorial(i - 1) * sp.cancel(den / (sym(rho) - z) ** i)
    for rho, al in neg:
        for i, a in enumerate(al, start=1):
            num += sym(a) * sp.factorial(i - 1) * sp.cancel(den / (sym(rho) + z) ** i)
    poly = sp.Poly(sp.expand(num), z)
    return poly, lam


def roots(poly):
    rs = mp.polyroots([mp.mpmathify(sp.N(c, 60)) for c in poly.all_coeffs()], maxsteps=500,
                      extraprec=400)
    out = []
    for r in rs:
        r = mp.mpc(r)
        if abs(r.imag) < mp.mpf(10) ** -30:
            r = mp.mpc(r.real, 0)
        out.append(r)
    return out


def split(rs, q):
    zeta = sorted([r for r in rs if r.real > mp.mpf(10) ** -25], key=lambda r: (r.real, r.imag))
    hat = sorted([-r for r in rs if r.real <= mp.mpf(10) ** -25], key=lambda r: (r.real, r.imag))
    if q == 0:
        hat = [mp.mpc(0) if abs(h) < mp.mpf(10) ** -25 else h for h in hat]
    return zeta, hat


def scale(sigma, mu, lam, q):
    if sigma > 0:
        return mp.mpf(sigma) ** 2 / 2
    if mu != 0:
        return abs(mp.mpf(mu))
    return q + lam


def mp_c(c):
    return mp.mpc(c.real, c.imag)


def log_G(s, zeta, hat, pos, neg):
    v = mp.mpc(0)
    for zj in zeta:
        v += mp.loggamma(1 + zj - s)
    for rho, al in pos:
        v -= len(al) * mp.loggamma(1 + mp_c(rho) - s)
    for rho, al in neg:
        v += len(al) * mp.loggamma(mp_c(rho) + s)
    for hj in hat:
        v -= mp.loggamma(hj + s)
    return v


def mellin(s, A, zeta, hat, pos, neg):
    s = mp.mpf(s)
    lg = (1 - s) * mp.log(A) + mp.loggamma(s) + log_G(s, zeta, hat, pos, neg)
    return mp.re(mp.exp(lg - log_G(mp.mpf(1), zeta, hat, pos, neg)))


def density(x, A, zeta, hat, pos, neg):
    # M(s) = A^{1-s}/G(1) * Gamma(s) prod Gamma(rho_hat + s) prod Gamma(1 + zeta - s)
    #        / (prod Gamma(1 + rho - s)^m prod Gamma(zeta_hat + s)), i.e. a Meijer G.
    a_n = [-zj for zj in zeta]
    a_p = list(hat)
    b_m = [mp.mpf(0)] + [mp_c(rho) for rho, al in neg for _ in al]
    b_q = [-mp_c(rho) for rho, al in pos for _ in al]
    g1 = mp.exp(log_G(mp.mpf(1), zeta, hat, pos, neg))
    y = A * mp.mpf(x)
    return mp.re(A / g1 * mp.meijerg([a_n, a_p], [b_m, b_q], y))


def cdf(x, A, zeta, hat, pos, neg):
    # The survival function has Mellin transform M(s + 1)/s, again a Meijer G.
    a_n = [1 - zj for zj in zeta]
    a_p = [hj + 1 for hj in hat]
    b_m = [mp.mpf(0)] + [mp_c(rho) + 1 for rho, al in neg for _ in al]
    b_q = [1 - mp_c(rho) for rho, al in pos for _ in al]
    g1 = mp.exp(log_G(mp.mpf(1), zeta, hat, pos, neg))
    y = A * mp.mpf(x)
    return 1 - mp.re(mp.meijerg([a_n, a_p], [b_m, b_q], y) / g1)


def cpp_double(v):
    return mp.nstr(mp.mpf(v), 17, min_fixed=-mp.inf, max_fixed=mp.inf).replace("e", "e")


def emit(lines):
    print("#pragma once")
    print()
    print("// Generated by tests/oracles/generate.py (mpmath " + mp.__version__ + ", 40 digits).")
    print("// Do not edit by hand.")
    print()
    print("#include <complex>")
    print("#include <vector>")
    print()
    print("namespace oracle {")
    print()
    print("struct Point {")
    print("  double x;")
    print("  double value;")
    print("};")
    print()
    print("struct Case {")
    print("  const char* fixture;")
    print("  double q;")
    print("  double A;")
    print("  double theta;")
    print("  std::vector<std::complex<double>> zeta;")
    print("  std::vector<std::complex<double>> zeta_hat;")
    print("  std::vector<Point> density;")
    print("  std::vector<Point> mellin;")
    print("  std::vector<Point> cdf;")
    print("};")
    print()
    print("inline const std::vector<Case>& cases() {")
    print("  static const std::vector<Case> all = {")
    for line in lines:
        print(line)
    print("  };")
    print("  return all;")
    print("}")
    print()
    print("}  // namespace oracle")


def cplx_list(vs):
    return "{" + ", ".join(f"{{{cpp_double(v.real)}, {cpp_double(v.imag)}}}" for v in vs) + "}"


def point_list(ps):
    return "{" + ", ".join(f"{{{cpp_double(x)}, {cpp_double(v)}}}" for x, v in ps) + "}"


def main():
    lines = []
    for name, q, xs, ss, cs in CASES:
        sigma, mu, pos, neg = load(name)
        poly, lam = rational_form(sigma, mu, pos, neg, q)
        zeta, hat = split(roots(poly), q)
        A = scale(sigma, mu, mp.mpf(sp.N(sp.re(lam), 50)), q)
        dens = [(x, density(x, A, zeta, hat, pos, neg)) for x in xs]
        mel = [(s, mellin(s, A, zeta, hat, pos, neg)) for s in ss]
        cd = [(x, cdf(x, A, zeta, hat, pos, neg)) for x in cs]
        print(f"{name}: theta={mp.nstr(zeta[0].real, 12)}", file=sys.stderr)
        lines.append(
            f'      {{"{name}", {q}, {cpp_double(A)}, {cpp_double(zeta[0].real)},\n'
            f"       {cplx_list(zeta)},\n"
            f"       {cplx_list(hat)},\n"
            f"       {point_list(dens)},\n"
            f"       {point_list(mel)},\n"
            f"       {point_list(cd)}}},"
        )
    emit(lines)


if __name__ == "__main__":
    main()
