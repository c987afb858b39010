"""Finite presentations of Chow rings, classes, and proper push-forwards.

A ring here is a graded basis with rational structure constants, a
degree map on the top graded piece, and optionally a total tangent
Chern class and a designated point class. Catalog constructors cover
projective spaces, binary products of projective spaces, and iterated
point blow-ups; anything else enters through a literal presentation
that is validated exhaustively before use.

Class coefficients live in Q(m), so one class value can carry a whole
family of computations; evaluation at a rational m specializes it.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import (
    DivisionByZero,
    MissingTangentClass,
    NotADivisor,
    ParseError,
    PresentationError,
    RingMismatch,
    UnsupportedCatalog,
)
from .exactnum import RF_ONE, RF_ZERO, RationalFunction, as_fraction, rf
from .exprparse import parse_expression


class ChowRing:
    """Graded basis presentation with rational structure constants.

    Instances compare by identity; two rings built from the same data
    are still distinct carriers, and classes never cross between them.
    """

    __slots__ = (
        "dim",
        "basis",
        "codim_of",
        "index_of",
        "all_names",
        "products",
        "degree_values",
        "fundamental",
        "tangent_chern",
        "point",
        "kind",
        "meta",
    )

    def __init__(self, dim, basis, products, degree_values, tangent_chern_coeffs,
                 point, kind, meta=None):
        self.dim = dim
        self.basis = tuple(tuple(level) for level in basis)
        self.codim_of = {}
        self.index_of = {}
        names = []
        for codim, level in enumerate(self.basis):
            for name in level:
                if name in self.codim_of:
                    raise PresentationError(f"duplicate basis name {name!r}")
                self.codim_of[name] = codim
                self.index_of[name] = len(names)
                names.append(name)
        self.all_names = tuple(names)
        if len(self.basis) != dim + 1:
            raise PresentationError(
                f"expected {dim + 1} graded pieces, found {len(self.basis)}"
            )
        if len(self.basis[0]) != 1:
            raise PresentationError(
                "codimension 0 must hold exactly one basis element"
            )
        self.fundamental = self.basis[0][0]
        self.products = products
        self.degree_values = dict(degree_values)
        self.point = point
        self.kind = kind
        self.meta = dict(meta or {})
        self.tangent_chern = None
        self._validate()
        if tangent_chern_coeffs is not None:
            self.tangent_chern = ChowClass(self, {
                name: rf(c) for name, c in tangent_chern_coeffs.items()
            })
            self._validate_chern()

    def _validate(self):
        for level in self.basis:
            for name in level:
                if not name or "," in name or any(ch.isspace() for ch in name):
                    raise PresentationError(f"invalid basis name {name!r}")
        for (a, b), table in self.products.items():
            for x in (a, b):
                if x not in self.codim_of:
                    raise PresentationError(f"product key names unknown element {x!r}")
            if self.index_of[a] > self.index_of[b]:
                raise PresentationError(f"product key ({a},{b}) is not in canonical order")
            total = self.codim_of[a] + self.codim_of[b]
            for name, c in table.items():
                if name not in self.codim_of:
                    raise PresentationError(
                        f"product {a}*{b} names unknown element {name!r}"
                    )
                if total > self.dim:
                    raise PresentationError(
                        f"product {a}*{b} exceeds the dimension but is nonzero"
                    )
                if self.codim_of[name] != total:
                    raise PresentationError(
                        f"product {a}*{b} violates the grading at {name!r}"
                    )
        top = self.basis[self.dim]
        for name in top:
            if name not in self.degree_values:
                raise PresentationError(f"degree map is missing {name!r}")
        for name, value in self.degree_values.items():
            if name not in self.codim_of or self.codim_of[name] != self.dim:
                raise PresentationError(
                    f"degree map defined on non-top element {name!r}"
                )
            self.degree_values[name] = as_fraction(value)
        if self.point is not None:
            if self.point not in self.codim_of:
                raise PresentationError(f"point class {self.point!r} is not a basis element")
            if self.codim_of[self.point] != self.dim:
                raise PresentationError(f"point class {self.point!r} has wrong codimension")
            if self.degree_values[self.point] != 1:
                raise PresentationError(f"point class {self.point!r} must have degree 1")
        nonunit = [n for n in self.all_names if n != self.fundamental]
        for a in nonunit:
            for b in nonunit:
                ab = self.mul_basis(a, b)
                for c in nonunit:
                    left = self._mul_dict_basis(ab, c)
                    right = self._mul_basis_dict(a, self.mul_basis(b, c))
                    if left != right:
                        raise PresentationError(
                            f"associativity fails on ({a}*{b})*{c}"
                        )

    def _validate_chern(self):
        chern = self.tangent_chern
        for name, c in chern.coeffs.items():
            if not c.is_constant():
                raise PresentationError(
                    f"tangent Chern coefficient on {name!r} must be constant"
                )
        if chern.coefficient(self.fundamental) != RF_ONE:
            raise PresentationError(
                "tangent Chern class must have codimension-0 part 1"
            )

    def mul_basis(self, a: str, b: str) -> dict:
        if a == self.fundamental:
            return {b: Fraction(1)}
        if b == self.fundamental:
            return {a: Fraction(1)}
        if self.index_of[a] > self.index_of[b]:
            a, b = b, a
        return self.products.get((a, b), {})

    def _mul_dict_basis(self, d: dict, c: str) -> dict:
        out = {}
        for name, coeff in d.items():
            for res, f in self.mul_basis(name, c).items():
                v = out.get(res, Fraction(0)) + coeff * f
                if v == 0:
                    out.pop(res, None)
                else:
                    out[res] = v
        return out

    def _mul_basis_dict(self, a: str, d: dict) -> dict:
        out = {}
        for name, coeff in d.items():
            for res, f in self.mul_basis(a, name).items():
                v = out.get(res, Fraction(0)) + coeff * f
                if v == 0:
                    out.pop(res, None)
                else:
                    out[res] = v
        return out

    def zero(self) -> "ChowClass":
        return ChowClass(self, {})

    def one(self) -> "ChowClass":
        return ChowClass(self, {self.fundamental: RF_ONE})

    def basis_class(self, name: str) -> "ChowClass":
        if name not in self.codim_of:
            raise RingMismatch(f"{name!r} is not a basis element of this ring")
        return ChowClass(self, {name: RF_ONE})

    def require_tangent_chern(self) -> "ChowClass":
        if self.tangent_chern is None:
            raise MissingTangentClass(
                "this ring carries no tangent Chern class"
            )
        return self.tangent_chern

    def describe(self) -> str:
        lines = [f"dimension {self.dim}"]
        for codim, level in enumerate(self.basis):
            lines.append(f"codim {codim}: " + ", ".join(level))
        if self.tangent_chern is not None:
            lines.append(f"tangent chern: {self.tangent_chern.render()}")
        if self.point is not None:
            lines.append(f"point class: {self.point}")
        return "\n".join(lines)


class ChowClass:
    """Linear combination of basis elements with coefficients in Q(m)."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring: ChowRing, coeffs: dict):
        object.__setattr__(self, "ring", ring)
        clean = {}
        for name, c in coeffs.items():
            if name not in ring.codim_of:
                raise RingMismatch(f"{name!r} is not a basis element of this ring")
            c = rf(c)
            if not c.is_zero():
                clean[name] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(
            self, "_hash", hash((id(ring), frozenset(clean.items())))
        )

    def __setattr__(self, name, value):
        raise AttributeError("ChowClass is immutable")

    def _check_ring(self, other: "ChowClass"):
        if self.ring is not other.ring:
            raise RingMismatch("classes live in different rings")

    def coefficient(self, name: str) -> RationalFunction:
        return self.coeffs.get(name, RF_ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return (
            isinstance(other, ChowClass)
            and self.ring is other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return self._hash

    def __add__(self, other: "ChowClass") -> "ChowClass":
        self._check_ring(other)
        out = dict(self.coeffs)
        for name, c in other.coeffs.items():
            out[name] = out.get(name, RF_ZERO) + c
        return ChowClass(self.ring, out)

    def __neg__(self) -> "ChowClass":
        return ChowClass(self.ring, {n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other: "ChowClass") -> "ChowClass":
        return self + (-other)

    def scale(self, c) -> "ChowClass":
        c = rf(c)
        if c.is_zero():
            return self.ring.zero()
        return ChowClass(self.ring, {n: v * c for n, v in self.coeffs.items()})

    def __mul__(self, other: "ChowClass") -> "ChowClass":
        self._check_ring(other)
        out = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                table = self.ring.mul_basis(a, b)
                if not table:
                    continue
                cab = ca * cb
                for name, f in table.items():
                    out[name] = out.get(name, RF_ZERO) + cab * rf(f)
        return ChowClass(self.ring, out)

    def __pow__(self, k: int) -> "ChowClass":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def graded_piece(self, codim: int) -> "ChowClass":
        return ChowClass(self.ring, {
            n: c for n, c in self.coeffs.items()
            if self.ring.codim_of[n] == codim
        })

    def positive_part(self) -> "ChowClass":
        return ChowClass(self.ring, {
            n: c for n, c in self.coeffs.items()
            if self.ring.codim_of[n] > 0
        })

    def inverse(self) -> "ChowClass":
        """Inverse of a class whose codimension-0 part is nonzero.

        The positive-codimension part is nilpotent, so the geometric
        series terminates after dim steps.
        """
        c0 = self.coefficient(self.ring.fundamental)
        if c0.is_zero():
            raise DivisionByZero(
                "cannot invert a class with zero codimension-0 part"
            )
        n = self.positive_part()
        result = self.ring.one().scale(RF_ONE / c0)
        power = self.ring.one()
        sign = RF_ONE
        for k in range(1, self.ring.dim + 1):
            power = power * n
            if power.is_zero():
                break
            sign = -sign
            result = result + power.scale(sign / c0 ** (k + 1))
        return result

    def __truediv__(self, other: "ChowClass") -> "ChowClass":
        self._check_ring(other)
        return self * other.inverse()

    def degree(self) -> RationalFunction:
        total = RF_ZERO
        for name, c in self.coeffs.items():
            if self.ring.codim_of[name] == self.ring.dim:
                total = total + c * rf(self.ring.degree_values[name])
        return total

    def evaluate(self, x) -> "ChowClass":
        return ChowClass(self.ring, {
            n: rf(c.evaluate(x)) for n, c in self.coeffs.items()
        })

    def is_pure_codim(self, codim: int) -> bool:
        return all(self.ring.codim_of[n] == codim for n in self.coeffs)

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for name in self.ring.all_names:
            c = self.coeffs.get(name)
            if c is None:
                continue
            pieces.append(_render_term(c, name))
        neg, body = pieces[0]
        out = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ChowClass({self.render()!r})"


def _render_term(c: RationalFunction, name: str):
    """Return (negated, body) so callers can join terms with signs."""
    if c.is_constant():
        f = c.as_fraction()
        neg = f < 0
        a = abs(f)
        if a == 1:
            return neg, name
        if a.denominator == 1:
            return neg, f"{a.numerator}*{name}"
        return neg, f"({a.numerator}/{a.denominator})*{name}"
    lead = c.num.leading()
    neg = lead < 0
    cabs = -c if neg else c
    s = cabs.render()
    if cabs.den.degree == 0 and sum(1 for x in cabs.num.coeffs if x != 0) > 1:
        s = f"({s})"
    return neg, f"{s}*{name}"


class PushForwardMap:
    """Proper push-forward between two ring presentations.

    Carries the forward images of the source basis and the pullback
    images of the target basis; validation checks the projection
    formula, forward-after-pullback identity, pullback
    multiplicativity, grading, and degree preservation on every basis
    combination.
    """

    __slots__ = ("source", "target", "forward", "pullback", "label", "meta")

    def __init__(self, source, target, forward, pullback, label="", meta=None):
        self.source = source
        self.target = target
        self.forward = dict(forward)
        self.pullback = dict(pullback)
        self.label = label
        self.meta = dict(meta or {})
        self._validate()

    def push(self, c: ChowClass) -> ChowClass:
        if c.ring is not self.source:
            raise RingMismatch("class does not live in the source ring of this map")
        out = self.target.zero()
        for name, coeff in c.coeffs.items():
            out = out + self.forward[name].scale(coeff)
        return out

    def pull(self, c: ChowClass) -> ChowClass:
        if c.ring is not self.target:
            raise RingMismatch("class does not live in the target ring of this map")
        out = self.source.zero()
        for name, coeff in c.coeffs.items():
            out = out + self.pullback[name].scale(coeff)
        return out

    def then(self, other: "PushForwardMap") -> "PushForwardMap":
        """Compose with a further push-forward applied after this one."""
        if self.target is not other.source:
            raise RingMismatch("maps do not compose: target and source differ")
        forward = {n: other.push(cls) for n, cls in self.forward.items()}
        pullback = {n: self.pull(cls) for n, cls in other.pullback.items()}
        label = f"{self.label}+{other.label}" if self.label and other.label else ""
        return PushForwardMap(self.source, other.target, forward, pullback, label)

    def _validate(self):
        src, tgt = self.source, self.target
        if set(self.forward) != set(src.all_names):
            raise PresentationError("forward map must be given on every source basis element")
        if set(self.pullback) != set(tgt.all_names):
            raise PresentationError("pullback must be given on every target basis element")
        for name, cls in self.forward.items():
            if cls.ring is not tgt:
                raise PresentationError(f"forward image of {name!r} lives in the wrong ring")
            for res, c in cls.coeffs.items():
                if not c.is_constant():
                    raise PresentationError(f"forward image of {name!r} must have constant coefficients")
                if tgt.codim_of[res] != src.codim_of[name]:
                    raise PresentationError(f"forward image of {name!r} violates the grading")
        for name, cls in self.pullback.items():
            if cls.ring is not src:
                raise PresentationError(f"pullback of {name!r} lives in the wrong ring")
            for res, c in cls.coeffs.items():
                if not c.is_constant():
                    raise PresentationError(f"pullback of {name!r} must have constant coefficients")
                if src.codim_of[res] != tgt.codim_of[name]:
                    raise PresentationError(f"pullback of {name!r} violates the grading")
        for name in tgt.all_names:
            if self.push(self.pullback[name]) != tgt.basis_class(name):
                raise PresentationError(
                    f"forward of pullback fails to be the identity on {name!r}"
                )
        for a in tgt.all_names:
            pa = self.pullback[a]
            for b in tgt.all_names:
                if tgt.index_of[a] > tgt.index_of[b]:
                    continue
                left = pa * self.pullback[b]
                right = self.pull(tgt.basis_class(a) * tgt.basis_class(b))
                if left != right:
                    raise PresentationError(
                        f"pullback fails multiplicativity on {a!r}*{b!r}"
                    )
        for b in tgt.all_names:
            pb = self.pullback[b]
            bcls = tgt.basis_class(b)
            for a in src.all_names:
                left = self.push(pb * src.basis_class(a))
                right = bcls * self.forward[a]
                if left != right:
                    raise PresentationError(
                        f"projection formula fails on pull({b!r})*{a!r}"
                    )
        for name in src.basis[src.dim]:
            before = rf(src.degree_values[name])
            after = self.forward[name].degree()
            if before != after:
                raise PresentationError(
                    f"push-forward does not preserve the degree of {name!r}"
                )


def identity_map(ring: ChowRing) -> PushForwardMap:
    ident = {n: ring.basis_class(n) for n in ring.all_names}
    return PushForwardMap(ring, ring, ident, dict(ident), label="id")


def ring_point() -> ChowRing:
    return ChowRing(
        dim=0,
        basis=[["[V]"]],
        products={},
        degree_values={"[V]": Fraction(1)},
        tangent_chern_coeffs={"[V]": Fraction(1)},
        point="[V]",
        kind=("projective", 0),
    )


def _proj_name(i: int) -> str:
    if i == 0:
        return "[V]"
    return "h" if i == 1 else f"h^{i}"


def ring_projective(n: int) -> ChowRing:
    """Projective space of dimension n; n = 0 is the point ring."""
    if n < 0:
        raise UnsupportedCatalog("projective space needs dimension >= 0")
    if n == 0:
        return ring_point()
    basis = [[_proj_name(i)] for i in range(n + 1)]
    products = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if i + j <= n:
                products[(_proj_name(i), _proj_name(j))] = {
                    _proj_name(i + j): Fraction(1)
                }
    chern = {_proj_name(k): Fraction(comb(n + 1, k)) for k in range(n + 1)}
    return ChowRing(
        dim=n,
        basis=basis,
        products=products,
        degree_values={_proj_name(n): Fraction(1)},
        tangent_chern_coeffs=chern,
        point=_proj_name(n),
        kind=("projective", n),
    )


def _product_name(i: int, j: int) -> str:
    parts = []
    if i > 0:
        parts.append("h1" if i == 1 else f"h1^{i}")
    if j > 0:
        parts.append("h2" if j == 1 else f"h2^{j}")
    return "*".join(parts) if parts else "[V]"


def ring_product(r1: ChowRing, r2: ChowRing) -> ChowRing:
    """Product of two projective spaces from the catalog."""
    for r in (r1, r2):
        if r.kind[0] != "projective":
            raise UnsupportedCatalog(
                "ring products are supported for projective factors only"
            )
    a, b = r1.dim, r2.dim
    basis = []
    for c in range(a + b + 2 - 1):
        level = []
        for i in range(min(c, a), max(0, c - b) - 1, -1):
            level.append(_product_name(i, c - i))
        basis.append(level)
    products = {}
    index = {}
    for codim, level in enumerate(basis):
        for name in level:
            index[name] = len(index)
    pairs = [(i, j) for i in range(a + 1) for j in range(b + 1) if i + j > 0]
    for i1, j1 in pairs:
        for i2, j2 in pairs:
            n1, n2 = _product_name(i1, j1), _product_name(i2, j2)
            if index[n1] > index[n2]:
                continue
            if i1 + i2 <= a and j1 + j2 <= b:
                products[(n1, n2)] = {
                    _product_name(i1 + i2, j1 + j2): Fraction(1)
                }
    chern = {}
    for i in range(a + 1):
        for j in range(b + 1):
            chern[_product_name(i, j)] = Fraction(comb(a + 1, i) * comb(b + 1, j))
    top = _product_name(a, b)
    return ChowRing(
        dim=a + b,
        basis=basis,
        products=products,
        degree_values={top: Fraction(1)},
        tangent_chern_coeffs=chern,
        point=top,
        kind=("product", (a, b)),
    )


def _epower_name(e: str, k: int) -> str:
    return e if k == 1 else f"{e}^{k}"


def ring_blowup_point(base: ChowRing):
    """Blow up the designated point class of a catalog or literal ring.

    Returns (new ring, blow-down push-forward, exceptional divisor
    class). Every positive-codimension pulled-back class is orthogonal
    to the exceptional powers, which is what makes iterated and
    infinitely-near centers work with the same presentation; the top
    power of the exceptional collapses onto the point class.
    """
    if base.point is None:
        raise UnsupportedCatalog("blow-up needs a ring with a designated point class")
    n = base.dim
    if n == 0:
        raise UnsupportedCatalog("cannot blow up a point of a zero-dimensional ring")
    if n == 1:
        m = identity_map(base)
        return base, m, base.basis_class(base.point)
    depth = base.meta.get("blowup_depth", 0) + 1
    e = f"e{depth}"
    if e in base.codim_of:
        raise PresentationError(f"name {e!r} already used in the base ring")
    basis = [list(level) for level in base.basis]
    for k in range(1, n):
        basis[k].append(_epower_name(e, k))
    products = dict(base.products)
    sign = Fraction((-1) ** (n - 1))
    for i in range(1, n):
        for j in range(i, n):
            key = (_epower_name(e, i), _epower_name(e, j))
            if i + j < n:
                products[key] = {_epower_name(e, i + j): Fraction(1)}
            elif i + j == n:
                products[key] = {base.point: sign}
    chern = None
    if base.tangent_chern is not None:
        chern = {
            name: c.as_fraction() for name, c in base.tangent_chern.coeffs.items()
        }
        for k in range(1, n + 1):
            coeff = Fraction((-1) ** (k - 1) * (comb(n, k - 1) - comb(n, k)))
            if coeff == 0:
                continue
            if k < n:
                name = _epower_name(e, k)
                chern[name] = chern.get(name, Fraction(0)) + coeff
            else:
                chern[base.point] = chern.get(base.point, Fraction(0)) + coeff * sign
    ring = ChowRing(
        dim=n,
        basis=basis,
        products=products,
        degree_values=dict(base.degree_values),
        tangent_chern_coeffs=chern,
        point=base.point,
        kind=("blowup",) + base.kind,
        meta={"blowup_depth": depth},
    )
    forward = {}
    for name in base.all_names:
        forward[name] = base.basis_class(name)
    for k in range(1, n):
        forward[_epower_name(e, k)] = base.zero()
    pullback = {name: ring.basis_class(name) for name in base.all_names}
    blowdown = PushForwardMap(
        ring, base, forward, pullback,
        label=f"blowdown_{e}",
        meta={"exceptional": e},
    )
    return ring, blowdown, ring.basis_class(e)


class _LinCombAlgebra:
    """Expression values for literal ring data: constant + linear basis part."""

    @staticmethod
    def const(c: Fraction):
        return (c, {})

    @staticmethod
    def name(name: str):
        return (Fraction(0), {name: Fraction(1)})

    @staticmethod
    def add(a, b):
        ca, va = a
        cb, vb = b
        out = dict(va)
        for k, v in vb.items():
            out[k] = out.get(k, Fraction(0)) + v
        return (ca + cb, {k: v for k, v in out.items() if v != 0})

    @staticmethod
    def sub(a, b):
        return _LinCombAlgebra.add(a, _LinCombAlgebra.neg(b))

    @staticmethod
    def neg(a):
        c, v = a
        return (-c, {k: -x for k, x in v.items()})

    @staticmethod
    def mul(a, b):
        ca, va = a
        cb, vb = b
        if va and vb:
            raise ParseError(
                "literal ring data must be linear in the basis names"
            )
        if va:
            return (ca * cb, {k: v * cb for k, v in va.items() if v * cb != 0})
        return (ca * cb, {k: v * ca for k, v in vb.items() if v * ca != 0})

    @staticmethod
    def div(a, b):
        cb, vb = b
        if vb or cb == 0:
            raise ParseError("literal ring data may divide by nonzero constants only")
        ca, va = a
        return (ca / cb, {k: v / cb for k, v in va.items()})

    @staticmethod
    def pow(a, k: int):
        c, v = a
        if v:
            if k == 1:
                return a
            raise ParseError("literal ring data cannot raise basis names to powers")
        if k < 0 and c == 0:
            raise ParseError("zero to a negative power in literal ring data")
        return (c**k, {})


def _parse_lincomb(text: str, fundamental: str | None) -> dict:
    c, vec = parse_expression(text, _LinCombAlgebra)
    out = dict(vec)
    if c != 0:
        if fundamental is None:
            raise ParseError("constant term is not allowed here")
        out[fundamental] = out.get(fundamental, Fraction(0)) + c
    return {k: v for k, v in out.items() if v != 0}


def ring_literal(spec: dict) -> ChowRing:
    """Build a ring from a literal JSON presentation, validating every axiom."""
    if not isinstance(spec, dict):
        raise PresentationError("literal ring presentation must be an object")
    try:
        dim = int(spec["dim"])
        basis = spec["basis"]
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationError(f"literal ring is missing valid dim/basis: {exc}")
    if not isinstance(basis, list) or not all(isinstance(level, list) for level in basis):
        raise PresentationError("literal basis must be a list of lists by codimension")
    if len(basis) != dim + 1 or not basis or len(basis[0]) != 1:
        raise PresentationError(
            "literal basis must have dim+1 graded pieces with a single codimension-0 element"
        )
    fundamental = basis[0][0]
    known = {name for level in basis for name in level}
    index = {}
    for level in basis:
        for name in level:
            index[name] = len(index)
    products = {}
    for key, value in (spec.get("products") or {}).items():
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 2:
            raise PresentationError(f"product key {key!r} must name two elements")
        a, b = parts
        for x in (a, b):
            if x not in known:
                raise PresentationError(f"product key {key!r} names unknown element {x!r}")
        table = _parse_lincomb(str(value), fundamental) if value != 0 else {}
        for name in table:
            if name not in known:
                raise PresentationError(
                    f"product {key!r} result names unknown element {name!r}"
                )
        if fundamental in (a, b):
            other = b if a == fundamental else a
            if table != {other: Fraction(1)}:
                raise PresentationError(f"product {key!r} breaks the unit law")
            continue
        if index[a] > index[b]:
            a, b = b, a
        if (a, b) in products and products[(a, b)] != table:
            raise PresentationError(
                f"products {a},{b} and {b},{a} disagree: commutativity fails"
            )
        products[(a, b)] = table
    degree = {}
    for name, value in (spec.get("degree") or {}).items():
        try:
            degree[name] = Fraction(value)
        except (TypeError, ValueError):
            raise PresentationError(f"degree of {name!r} must be rational")
    chern = None
    if spec.get("chern") is not None:
        chern = _parse_lincomb(str(spec["chern"]), fundamental)
    point = spec.get("point")
    return ChowRing(
        dim=dim,
        basis=basis,
        products=products,
        degree_values=degree,
        tangent_chern_coeffs=chern,
        point=point,
        kind=("literal",),
    )


class _ClassAlgebra:
    """Full expression algebra over one ring: names are basis elements or m."""

    def __init__(self, ring: ChowRing):
        self.ring = ring

    def const(self, c: Fraction) -> ChowClass:
        return self.ring.one().scale(rf(c))

    def name(self, name: str) -> ChowClass:
        if name == "m" and "m" not in self.ring.codim_of:
            from .exactnum import RF_M

            return self.ring.one().scale(RF_M)
        if name in self.ring.codim_of:
            return self.ring.basis_class(name)
        raise ParseError(f"unknown name {name!r} in class expression")

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def pow(a, k: int):
        return a**k


def parse_class(text: str, ring: ChowRing) -> ChowClass:
    """Parse a class expression whose names are basis elements of the ring."""
    return parse_expression(text, _ClassAlgebra(ring))


def push_forward_class(f: PushForwardMap, c: ChowClass) -> ChowClass:
    return f.push(c)


def pull_back_class(f: PushForwardMap, c: ChowClass) -> ChowClass:
    return f.pull(c)


def proper_transform(f: PushForwardMap, divisor: ChowClass,
                     center_multiplicity) -> ChowClass:
    """Pull back a divisor class and subtract the center multiplicity on the exceptional."""
    if "exceptional" not in f.meta:
        raise UnsupportedCatalog(
            "proper transform needs a blow-down map with a recorded exceptional class"
        )
    if divisor.ring is not f.target:
        raise RingMismatch("divisor class does not live in the blow-down target")
    if not divisor.is_pure_codim(1):
        raise NotADivisor("proper transform applies to codimension-1 classes only")
    e = f.source.basis_class(f.meta["exceptional"])
    return f.pull(divisor) - e.scale(rf(center_multiplicity))


def degree_of_class(c: ChowClass) -> RationalFunction:
    return c.degree()
