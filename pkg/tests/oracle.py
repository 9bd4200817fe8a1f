"""Independent reference Grassmann algebra for cross-checking the kernel.

Polynomials over Q in a few even variables and odd generators.  Monomials
are (even exponent tuple, sorted odd index tuple); signs come from counting
inversions when two odd words are concatenated.
"""
from fractions import Fraction

EVEN_NAMES = ("x", "t", "a", "b")
ODD_NAMES = ("theta", "phi", "!o1", "!o2", "!o3")


def _sort_sign(word):
    """Sign of the permutation sorting ``word``; 0 on a repeated letter."""
    if len(set(word)) != len(word):
        return 0, ()
    inv = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    return (-1) ** inv, tuple(sorted(word))


class Poly:
    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def const(c):
        return Poly({((0,) * len(EVEN_NAMES), ()): Fraction(c)})

    @staticmethod
    def even(name):
        exps = tuple(1 if n == name else 0 for n in EVEN_NAMES)
        return Poly({(exps, ()): Fraction(1)})

    @staticmethod
    def odd(name):
        return Poly({((0,) * len(EVEN_NAMES), (ODD_NAMES.index(name),)): Fraction(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for (e1, o1), c1 in self.terms.items():
            for (e2, o2), c2 in other.terms.items():
                s, word = _sort_sign(o1 + o2)
                if not s:
                    continue
                k = (tuple(a + b for a, b in zip(e1, e2)), word)
                out[k] = out.get(k, 0) + s * c1 * c2
        return Poly(out)

    def __eq__(self, other):
        return self.terms == other.terms

    def __repr__(self):
        return f"Poly({self.terms})"

    def diff_odd(self, name):
        """Left derivative along an odd generator."""
        i = ODD_NAMES.index(name)
        out = {}
        for (e, o), c in self.terms.items():
            if i in o:
                p = o.index(i)
                k = (e, o[:p] + o[p + 1:])
                out[k] = out.get(k, 0) + (-1) ** p * c
        return Poly(out)

    def diff_even(self, name):
        i = EVEN_NAMES.index(name)
        out = {}
        for (e, o), c in self.terms.items():
            if e[i]:
                k = (e[:i] + (e[i] - 1,) + e[i + 1:], o)
                out[k] = out.get(k, 0) + e[i] * c
        return Poly(out)


def word_to_poly(coeff, letters):
    """Product ``coeff * letters[0] * letters[1] * ...`` in the given order."""
    p = Poly.const(coeff)
    for n in letters:
        p = p * (Poly.odd(n) if n in ODD_NAMES else Poly.even(n))
    return p


def expr_to_poly(e):
    """Rebuild a kernel expression factor by factor inside the oracle."""
    from superhydro.grassmann import Symbol

    total = Poly()
    for (even, odd), c in e.terms:
        letters = []
        for a, k in even:
            assert type(a) is Symbol and k.denominator == 1 and k > 0, a
            letters += [a.name] * int(k)
        letters += [("!" + a.name) if a.kind == "fconst" else a.name for a in odd]
        total = total + word_to_poly(c, letters)
    return total
