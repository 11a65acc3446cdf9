"""Independent reference computations, built on sympy or brute force."""
from sympy import GF, Matrix, Poly, ZZ, symbols
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form

x = symbols("x")


def gf_mul(p, modulus, a, b):
    """Multiply residues through sympy polynomial remainder."""
    mod = Poly(list(reversed(modulus)), x, modulus=p)
    pa = Poly(list(reversed(a)) or [0], x, modulus=p)
    pb = Poly(list(reversed(b)) or [0], x, modulus=p)
    r = (pa * pb).rem(mod)
    coeffs = [int(c) % p for c in reversed(r.all_coeffs())]
    return tuple(coeffs + [0] * (len(modulus) - 1 - len(coeffs)))


def is_irreducible(p, modulus):
    return Poly(list(reversed(modulus)), x, modulus=p).is_irreducible


def smith_diagonal(rows):
    n = len(rows)
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(n))


def hnf_membership(rows, vec):
    """Z-span membership via sympy: the HNF is unchanged when vec is appended."""
    base = hermite_normal_form(Matrix(rows).T)
    ext = hermite_normal_form(Matrix([list(r) for r in rows] + [list(vec)]).T)
    return base == ext


def rational_coords(rows, vec):
    sol = Matrix(rows).T.solve(Matrix(vec))
    return [sol[i] for i in range(len(rows))]
