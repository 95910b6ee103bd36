"""Pre-Lie systems on multilinear maps, their sum products and brackets.

Two gradings coexist.  The *degree* grading uses the plain insertions
``f o_k g`` with Koszul signs, and its sum product is ``star``.  The *weight*
grading (``|f| = degree + arity - 1``) twists each insertion by
``(-1)**((j+m-1)(n-1) + (m-1)(k-1))`` and its sum product is ``circle``.
Because the twist is a sign, applying it twice gives back the original
system.

``theta`` transports maps on a suspension ``sV`` to maps on ``V`` and turns
``star`` on ``sV`` into ``circle`` on ``V``.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .complexes import (
    DgModule,
    GradedMap,
    MultiMap,
    boundary,
    dgmodule,
    desuspension_map,
    koszul_tensor_of_maps,
    multimap_basis,
    same_module,
    suspend,
    suspension_map,
)
from .errors import EvenDegree, EvenWeight, NotADifferential, SourceNotASuspension
from .scalars import RingSpec

GRADED = "graded"
WEIGHT = "weight"


def weight(f: MultiMap) -> int:
    return f.degree + f.arity - 1


def weight_sign(f: MultiMap, k: int, g: MultiMap) -> int:
    """Parity of the twist turning ``f o_k g`` into its weight-graded version."""
    n, m = f.arity, g.arity
    return ((g.degree + m - 1) * (n - 1) + (m - 1) * (k - 1)) & 1


# -- abstract systems --------------------------------------------------------------


class PreLieSystem(ABC):
    """A bigraded family with composition maps ``o_k``.

    ``convention`` says which grading enters the signs of the defining
    relations: ``"graded"`` uses the degree, ``"weight"`` the weight.
    """

    convention: str = GRADED

    @abstractmethod
    def compose(self, f, k: int, g):
        ...

    def arity(self, f) -> int:
        return f.arity

    def degree(self, f) -> int:
        return f.degree

    def grading(self, f) -> int:
        return self.degree(f) if self.convention == GRADED else self.degree(f) + self.arity(f) - 1

    def product(self, f, g):
        """``sum_k f o_k g``."""
        out = None
        for k in range(1, self.arity(f) + 1):
            term = self.compose(f, k, g)
            out = term if out is None else out + term
        return out

    def bracket(self, f, g):
        a = self.product(f, g)
        b = self.product(g, f)
        return a - b.signed(self.grading(f) * self.grading(g))


class EndSystem(PreLieSystem):
    """Multilinear endomorphisms of one module with Koszul-signed insertions."""

    convention = GRADED

    def __init__(self, V: DgModule | None = None):
        self.V = V

    def compose(self, f: MultiMap, k: int, g: MultiMap) -> MultiMap:
        return f.compose(k, g)


class SignTwisted(PreLieSystem):
    """The system with the other grading obtained by the twisting sign.

    Wrapping a degree-graded system gives a weight-graded one and vice versa.
    """

    def __init__(self, base: PreLieSystem):
        self.base = base
        self.convention = WEIGHT if base.convention == GRADED else GRADED

    def compose(self, f, k, g):
        return self.base.compose(f, k, g).signed(weight_sign(f, k, g))


class FunctionSystem(PreLieSystem):
    """A system given by an arbitrary composition function (used for negative controls)."""

    def __init__(self, fn, convention: str = GRADED):
        self.fn = fn
        self.convention = convention

    def compose(self, f, k, g):
        return self.fn(f, k, g)


def convert_graded_to_weight(system: PreLieSystem) -> PreLieSystem:
    if system.convention != GRADED:
        raise ValueError("expected a degree-graded system")
    return SignTwisted(system)


def convert_weight_to_graded(system: PreLieSystem) -> PreLieSystem:
    if system.convention != WEIGHT:
        raise ValueError("expected a weight-graded system")
    if isinstance(system, SignTwisted):
        return system.base
    return SignTwisted(system)


END = EndSystem()
END_WEIGHT = SignTwisted(END)


# -- products and brackets on End(V) -------------------------------------------------


def star(f: MultiMap, g: MultiMap) -> MultiMap:
    return END.product(f, g)


def circle(f: MultiMap, g: MultiMap) -> MultiMap:
    """``(-1)**(|g|(n-1)) sum_k (-1)**((m-1)(k-1)) f o_k g``."""
    return END_WEIGHT.product(f, g)


def brace(f: MultiMap, g: MultiMap) -> MultiMap:
    """``f star g - (-1)**(ij) g star f``."""
    return END.bracket(f, g)


def bracket(f: MultiMap, g: MultiMap) -> MultiMap:
    """``f circle g - (-1)**(|f||g|) g circle f``."""
    return END_WEIGHT.bracket(f, g)


def prelie_differential(f: MultiMap, m1: MultiMap | None = None) -> MultiMap:
    """``df = {m1, f}``; with no ``m1`` given the differential of the module is used."""
    if m1 is None:
        m1 = MultiMap.differential(f.source)
    if (m1.arity, m1.degree) != (1, -1):
        raise NotADifferential("m1 must be linear of degree -1")
    if not m1.compose(1, m1).is_zero():
        raise NotADifferential("m1 o m1 != 0")
    return brace(m1, f)


# -- property reports -------------------------------------------------------------


@dataclass
class PropertyReport:
    name: str
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, passed: bool, what: str) -> None:
        self.trials += 1
        if not passed:
            self.failures.append(what)

    def merge(self, other: "PropertyReport") -> "PropertyReport":
        self.trials += other.trials
        self.failures.extend(f"{other.name}: {x}" for x in other.failures)
        return self

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "ok": self.ok, "failures": list(self.failures)}


def check_system(system: PreLieSystem, triples, name: str | None = None) -> PropertyReport:
    """Check both defining relations on every triple and every admissible ``u, v``.

    * ``f o_u (g o_v h) = (f o_u g) o_{v+u-1} h``
    * ``(f o_u g) o_{v+m-1} h = eps (f o_v h) o_u g`` for ``u < v``, with
      ``eps = (-1)**(grading(g) grading(h))``.
    """
    rep = PropertyReport(name or f"{system.convention} pre-Lie system")
    for t, (f, g, h) in enumerate(triples):
        n, m = system.arity(f), system.arity(g)
        for u in range(1, n + 1):
            for v in range(1, m + 1):
                lhs = system.compose(f, u, system.compose(g, v, h))
                rhs = system.compose(system.compose(f, u, g), v + u - 1, h)
                rep.record(lhs == rhs, f"triple {t}: sequential u={u} v={v}")
        eps = system.grading(g) * system.grading(h)
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                lhs = system.compose(system.compose(f, u, g), v + m - 1, h)
                rhs = system.compose(system.compose(f, v, h), u, g).signed(eps)
                rep.record(lhs == rhs, f"triple {t}: parallel u={u} v={v}")
    return rep


def check_graded_system(system: PreLieSystem, triples) -> PropertyReport:
    if system.convention != GRADED:
        raise ValueError("expected a degree-graded system")
    return check_system(system, triples, "graded pre-Lie system")


def check_weight_system(system: PreLieSystem, triples) -> PropertyReport:
    if system.convention != WEIGHT:
        raise ValueError("expected a weight-graded system")
    return check_system(system, triples, "weight pre-Lie system")


def check_prelie_algebra(system: PreLieSystem, triples) -> PropertyReport:
    """Symmetric associator, bracket antisymmetry and Jacobi for the sum product."""
    rep = PropertyReport(f"{system.convention} pre-Lie algebra")
    P, Bk, gr = system.product, system.bracket, system.grading
    for t, (f, g, h) in enumerate(triples):
        a, b, c = gr(f), gr(g), gr(h)
        assoc1 = P(P(f, g), h) - P(f, P(g, h))
        assoc2 = P(P(f, h), g) - P(f, P(h, g))
        rep.record(assoc1 == assoc2.signed(b * c), f"triple {t}: associator symmetry")
        rep.record(Bk(f, g) == (-Bk(g, f)).signed(a * b), f"triple {t}: antisymmetry")
        jac = (Bk(f, Bk(g, h)).signed(a * c) + Bk(g, Bk(h, f)).signed(b * a)
               + Bk(h, Bk(f, g)).signed(c * b))
        rep.record(jac.is_zero(), f"triple {t}: Jacobi")
    return rep


def odd_square_identities(f: MultiMap, g: MultiMap) -> PropertyReport:
    """``(f o g) o g = f o (g o g)`` and ``[f, g o g] = -[g, [g, f]]`` for odd-weight ``g``."""
    if weight(g) % 2 == 0:
        raise EvenWeight(f"g has even weight {weight(g)}")
    rep = PropertyReport("odd-weight square")
    gg = circle(g, g)
    rep.record(circle(circle(f, g), g) == circle(f, gg), "(f o g) o g = f o (g o g)")
    rep.record(bracket(f, gg) == -bracket(g, bracket(g, f)), "[f, g o g] = -[g, [g, f]]")
    return rep


def odd_degree_square_identities(f: MultiMap, g: MultiMap) -> PropertyReport:
    """The same two identities for ``star`` and ``brace`` when ``g`` has odd degree."""
    if g.degree % 2 == 0:
        raise EvenDegree(f"g has even degree {g.degree}")
    rep = PropertyReport("odd-degree square")
    gg = star(g, g)
    rep.record(star(star(f, g), g) == star(f, gg), "(f * g) * g = f * (g * g)")
    rep.record(brace(f, gg) == -brace(g, brace(g, f)), "{f, g * g} = -{g, {g, f}}")
    return rep


def check_derivation(f: MultiMap, g: MultiMap) -> PropertyReport:
    """The differential squares to zero and is a derivation of both products and brackets."""
    rep = PropertyReport("derivation")
    D = prelie_differential
    rep.record(D(f) == boundary(f), "{m1, f} equals the Hom differential")
    rep.record(D(D(f)).is_zero(), "d^2 f = 0")
    rep.record(D(star(f, g)) == star(D(f), g) + star(f, D(g)).signed(f.degree), "d(f * g)")
    rep.record(D(circle(f, g)) == circle(D(f), g) + circle(f, D(g)).signed(weight(f)), "d(f o g)")
    rep.record(D(bracket(f, g)) == bracket(D(f), g) + bracket(f, D(g)).signed(weight(f)), "d[f, g]")
    return rep


# -- suspension -----------------------------------------------------------------------


def _theta_sign(F: MultiMap, V: DgModule, ins) -> int:
    n = F.arity
    degs = V.basis_degrees
    return (n * (n - 1) // 2 + sum((n - a) * degs[x] for a, x in enumerate(ins, start=1))) & 1


def theta(F: MultiMap, V: DgModule | None = None) -> MultiMap:
    """Transport ``F`` on ``sV`` to ``V``: ``theta(F) = (-1)**(n(n-1)/2) s^-1 F s^{(x) n}``.

    The degree goes from ``i`` to ``i + n - 1``.
    """
    sV = F.source
    V = V or sV.suspension_of
    if V is None or not same_module(F.target, sV) or not same_module(suspend(V), sV):
        raise SourceNotASuspension("F must be a map on a suspension")
    ring = F.ring
    terms = {(o, ins): ring.sign(_theta_sign(F, V, ins), c) for (o, ins), c in F.terms.items()}
    return MultiMap(V, V, F.arity, F.degree + F.arity - 1, terms, check=False)


def theta_inv(G: MultiMap, sV: DgModule | None = None) -> MultiMap:
    """Inverse of :func:`theta`; the sign factor is the same."""
    V = G.source
    sV = sV or suspend(V)
    ring = G.ring
    terms = {(o, ins): ring.sign(_theta_sign(G, V, ins), c) for (o, ins), c in G.terms.items()}
    return MultiMap(sV, sV, G.arity, G.degree - G.arity + 1, terms, check=False)


def tensor_power_of_map(f: GradedMap, n: int) -> GradedMap:
    """``f^{(x) n}`` with Koszul signs, built left to right."""
    out = f
    for _ in range(n - 1):
        out = koszul_tensor_of_maps(out, f)
    return out


def suspension_constant(V: DgModule, n: int) -> tuple[GradedMap, object]:
    """Return ``(s^-1)^{(x) n} o s^{(x) n}`` together with the expected constant ``(-1)**(n(n-1)/2)``."""
    sV = suspend(V)
    S = tensor_power_of_map(suspension_map(V, sV), n)
    Sinv = tensor_power_of_map(desuspension_map(V, sV), n)
    return Sinv @ S, V.ring.sign(n * (n - 1) // 2, V.ring.one)


# -- random sampling -------------------------------------------------------------------


def random_scalar(ring: RingSpec, rng: random.Random, nonzero: bool = True):
    if ring.kind == "prime_field":
        return rng.randrange(1 if nonzero else 0, ring.p)
    if ring.kind == "integers":
        choices = [-2, -1, 1, 2] if nonzero else [-2, -1, 0, 1, 2]
        return rng.choice(choices)
    choices = [Fraction(x) for x in (-2, -1, 1, 2, 3)] + [Fraction(1, 2), Fraction(-2, 3)]
    if not nonzero:
        choices.append(Fraction(0))
    return rng.choice(choices)


def random_dgmodule(ring: RingSpec, rng: random.Random, max_rank: int = 3,
                    degrees=(-1, 0, 1), with_differential: bool = True) -> DgModule:
    """A module of total rank ``1..max_rank`` spread over ``degrees`` with a random ``d``."""
    total = rng.randint(1, max_rank)
    dims = {}
    for _ in range(total):
        d = rng.choice(degrees)
        dims[d] = dims.get(d, 0) + 1
    blocks = {}
    if with_differential:
        for n in sorted(dims):
            rows, cols = dims.get(n - 1, 0), dims[n]
            if not rows:
                continue
            prev = blocks.get(n - 1)
            if prev is None:
                basis = linalg._standard_basis(ring, rows)
            else:
                basis = linalg.nullspace(ring, prev, rows)
            M = linalg.zeros(ring, rows, cols)
            for c in range(cols):
                for b in basis:
                    if rng.random() < 0.5:
                        coef = random_scalar(ring, rng, nonzero=False)
                        for r in range(rows):
                            M[r][c] = ring.add(M[r][c], ring.mul(coef, b[r]))
            blocks[n] = M
    return dgmodule(ring, dims, blocks)


def random_multimap(V: DgModule, rng: random.Random, arity: int | None = None, degree: int | None = None,
                    max_arity: int = 3, degrees=range(-2, 3), max_terms: int = 4,
                    parity: tuple | None = None, allow_zero: bool = False) -> MultiMap:
    """A sparse random map with at most ``max_terms`` coefficients.

    ``parity=("weight", 1)`` or ``("degree", 1)`` restricts to odd weight or odd degree.
    Shapes with no basis are skipped, so the result is nonzero unless
    ``allow_zero`` or no shape admits a basis element.
    """
    shapes = []
    for n in ([arity] if arity else range(1, max_arity + 1)):
        for i in ([degree] if degree is not None else degrees):
            if parity:
                kind, p = parity
                val = i + n - 1 if kind == "weight" else i
                if val % 2 != p % 2:
                    continue
            shapes.append((n, i))
    rng.shuffle(shapes)
    for n, i in shapes:
        keys = multimap_basis(V, V, n, i)
        if not keys:
            continue
        count = rng.randint(0 if allow_zero else 1, min(max_terms, len(keys)))
        chosen = rng.sample(keys, count)
        return MultiMap(V, V, n, i, {k: random_scalar(V.ring, rng) for k in chosen}, check=False)
    n, i = shapes[0] if shapes else (arity or 1, degree or 0)
    return MultiMap.zero(V, V, n, i)


def random_triples(V: DgModule, rng: random.Random, count: int, **kw):
    return [tuple(random_multimap(V, rng, **kw) for _ in range(3)) for _ in range(count)]
