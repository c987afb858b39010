"""The integral and its derived invariants.

Everything here evaluates one expression and its relatives: the total
log-twisted Chern class of a resolution paired against a selection of
open strata, with each stratum weighted by the reciprocals 1/(1+m_i)
of its component multiplicities. Degree-level versions work from Euler
characteristic tables alone; push-forward chains move class-level
answers to any other model of the same space.
"""

from __future__ import annotations

from fractions import Fraction

from .chow import ChowClass, PushForwardMap
from .errors import (
    MissingDecomposition,
    NotADivisor,
    NotLogTerminal,
    PreconditionViolated,
    RingMismatch,
    SchemaError,
    UniverseMismatch,
)
from .exactnum import (
    RF_ONE,
    RF_ZERO,
    PoleReport,
    RationalFunction,
    as_fraction,
    rational_poles,
    rf,
)
from .model import DegreeConfig, FiberedConfig, NCConfig, StratumSelection


class ConstructibleFunction:
    """Rational-function values attached to named base strata."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        seen = set()
        clean = []
        for label, value in entries:
            if label in seen:
                raise SchemaError(f"duplicate stratum label {label!r}")
            seen.add(label)
            clean.append((str(label), rf(value)))
        self.entries = tuple(clean)

    def value(self, label: str) -> RationalFunction:
        for name, v in self.entries:
            if name == label:
                return v
        raise SchemaError(f"unknown stratum {label!r}")

    def labels(self):
        return tuple(name for name, _ in self.entries)

    def paired_total(self, chis: dict) -> RationalFunction:
        """Sum of value * Euler characteristic over the strata."""
        total = RF_ZERO
        for name, v in self.entries:
            if name not in chis:
                raise SchemaError(f"no Euler characteristic given for {name!r}")
            total = total + v * rf(as_fraction(chis[name]))
        return total

    def __eq__(self, other):
        return (
            isinstance(other, ConstructibleFunction)
            and dict(self.entries) == dict(other.entries)
        )

    def __hash__(self):
        return hash(frozenset(self.entries))

    def render(self) -> str:
        return "\n".join(f"{name}: {v.render()}" for name, v in self.entries)


class ManifestationChain:
    """Composable sequence of push-forward maps."""

    __slots__ = ("maps",)

    def __init__(self, maps):
        self.maps = tuple(maps)
        for first, second in zip(self.maps, self.maps[1:]):
            if first.target is not second.source:
                raise RingMismatch("chain maps do not compose")

    @property
    def source(self):
        return self.maps[0].source if self.maps else None

    @property
    def target(self):
        return self.maps[-1].target if self.maps else None

    def push(self, c: ChowClass) -> ChowClass:
        for f in self.maps:
            c = f.push(c)
        return c


def _as_chain(chain) -> ManifestationChain:
    if chain is None:
        return ManifestationChain(())
    if isinstance(chain, ManifestationChain):
        return chain
    if isinstance(chain, PushForwardMap):
        return ManifestationChain((chain,))
    return ManifestationChain(tuple(chain))


def manifest(c: ChowClass, chain) -> ChowClass:
    """Push a class through a chain; the empty chain is the identity."""
    chain = _as_chain(chain)
    if chain.source is not None and c.ring is not chain.source:
        raise RingMismatch("class does not live at the start of the chain")
    return chain.push(c)


def log_chern(config: NCConfig) -> ChowClass:
    """c(TV) divided by the product of (1 + E_j) over the components."""
    # configurations never change after construction, so the class is
    # computed once and kept on the configuration
    if config._log_chern is None:
        total = config.ring.require_tangent_chern()
        for comp in config.components:
            total = total * (config.ring.one() + comp.divisor).inverse()
        config._log_chern = total
    return config._log_chern


def _selection_for(config, selection) -> StratumSelection:
    if selection is None:
        return StratumSelection.whole(config.names)
    if frozenset(selection.universe) != frozenset(config.names):
        raise UniverseMismatch(
            "selection universe differs from the configuration components"
        )
    return selection


def selection_class(config: NCConfig, selection: StratumSelection) -> ChowClass:
    """Sum over selected index sets of the product of E_i/(1+m_i)."""
    selection = _selection_for(config, selection)
    total = config.ring.zero()
    for index in selection.strata:
        term = config.ring.one()
        weight = RF_ONE
        for name in index:
            term = term * config.divisor_of(name)
            weight = weight / (RF_ONE + config.mult_of(name))
        total = total + term.scale(weight)
    return total


def integrate_class(config: NCConfig, selection: StratumSelection = None) -> ChowClass:
    """The integral at the resolving ring, as a class with Q(m) coefficients."""
    config.warn_if_outside()
    return log_chern(config) * selection_class(config, selection)


def integrate_degree(config: DegreeConfig,
                     selection: StratumSelection = None) -> RationalFunction:
    """Degree of the integral from Euler characteristics of open strata."""
    config.warn_if_outside()
    if selection is None:
        selection = StratumSelection.whole(config.names)
    elif frozenset(selection.universe) != frozenset(config.names):
        raise UniverseMismatch(
            "selection universe differs from the configuration components"
        )
    total = RF_ZERO
    for index in selection.strata:
        chi = config.chi_of_open(index)
        if chi == 0:
            continue
        weight = rf(chi)
        for name in index:
            weight = weight / (RF_ONE + config.mults[name])
        total = total + weight
    return total


def _subsets(names):
    out = [frozenset()]
    for name in names:
        out += [s | {name} for s in out]
    return out


def alternate_form2(config: NCConfig) -> ChowClass:
    """Whole-space integral as a signed combination of Chern classes of
    the closed strata, each weighted by products of m_i/(1+m_i)."""
    ring = config.ring
    ctv = ring.require_tangent_chern()
    total = ring.zero()
    for index in _subsets(config.names):
        weight = RF_ONE
        cls = ctv
        for name in index:
            m = config.mult_of(name)
            weight = weight * (m / (RF_ONE + m))
            div = config.divisor_of(name)
            cls = cls * div * (ring.one() + div).inverse()
        sign = RF_ONE if len(index) % 2 == 0 else -RF_ONE
        total = total + cls.scale(sign * weight)
    return total


def alternate_form3(config: NCConfig) -> ChowClass:
    """Whole-space integral as a weighted average of log-twisted Chern
    classes of the sub-configurations."""
    ring = config.ring
    ctv = ring.require_tangent_chern()
    prefactor = RF_ONE
    for comp in config.components:
        prefactor = prefactor / (RF_ONE + comp.mult)
    total = ring.zero()
    for index in _subsets(config.names):
        weight = RF_ONE
        cls = ctv
        for name in index:
            weight = weight * config.mult_of(name)
            cls = cls * (ring.one() + config.divisor_of(name)).inverse()
        total = total + cls.scale(weight)
    return total.scale(prefactor)


def _require_decompositions_nc(config: NCConfig):
    for comp in config.components:
        if comp.decomposition is None:
            raise MissingDecomposition(
                f"component {comp.name!r} has no a*m + k decomposition"
            )


def zeta_class(config: NCConfig, selection: StratumSelection = None) -> ChowClass:
    """Class-level zeta value: the integral with multiplicities a_j*m + k_j."""
    _require_decompositions_nc(config)
    return integrate_class(config, selection)


def zeta_degree(config: DegreeConfig, selection: StratumSelection = None):
    """Degree-level zeta function with its rational pole report."""
    for name in config.names:
        if name not in config.decompositions:
            raise MissingDecomposition(
                f"component {name!r} has no a*m + k decomposition"
            )
    value = integrate_degree(config, selection)
    return value, rational_poles(value)


def zeta(config, selection: StratumSelection = None):
    """Dispatch on the configuration kind; see zeta_class and zeta_degree."""
    if isinstance(config, NCConfig):
        return zeta_class(config, selection)
    if isinstance(config, DegreeConfig):
        return zeta_degree(config, selection)
    raise SchemaError("zeta needs an NCConfig or a DegreeConfig")


def csm_stratum(config: NCConfig, index) -> ChowClass:
    """CSM class of one open stratum: the log-twisted Chern class times
    the product of the components in the index set. Multiplicities do
    not enter."""
    index = frozenset(index)
    unknown = index - frozenset(config.names)
    if unknown:
        raise SchemaError(f"unknown components {sorted(unknown)} in stratum index")
    cls = log_chern(config)
    for name in index:
        cls = cls * config.divisor_of(name)
    return cls


def _require_constant_mults(config: NCConfig, what: str):
    for comp in config.components:
        if not comp.mult.is_constant():
            raise PreconditionViolated(
                f"{what} needs constant discrepancy multiplicities; "
                f"component {comp.name!r} depends on m"
            )


def csm_set(config: NCConfig, selection: StratumSelection = None,
            chain=None) -> ChowClass:
    """CSM class of the selected constructible set, manifested through
    the chain. The configuration must carry the discrepancies of the
    resolving map as its (constant) multiplicities."""
    _require_constant_mults(config, "csm_set")
    return manifest(integrate_class(config, selection), chain)


def ix_function(config: FiberedConfig,
                selection: StratumSelection = None) -> ConstructibleFunction:
    """The stratumwise constructible function of a fibered configuration."""
    entries = []
    for label in config.base_strata:
        if selection is None:
            entries.append((label, config.value_at(label)))
        else:
            if frozenset(selection.universe) != frozenset(config.names):
                raise UniverseMismatch(
                    "selection universe differs from the configuration components"
                )
            total = RF_ZERO
            for index in selection.strata:
                c = config.fiber.get((label, index))
                if c is None or c == 0:
                    continue
                weight = rf(c)
                for name in index:
                    weight = weight / (RF_ONE + config.mults[name])
                total = total + weight
            entries.append((label, total))
    return ConstructibleFunction(entries)


def stringy_class(config: NCConfig, chain=None) -> ChowClass:
    """Identity manifestation of the whole-space integral of discrepancy
    data; its degree is the stringy Euler number."""
    _require_constant_mults(config, "stringy_class")
    return manifest(integrate_class(config, None), chain)


def stringy_hypersurface(n: int, d: int, k: int, csm_x: ChowClass,
                         c_b: ChowClass, flavor: str) -> ChowClass:
    """Closed form for a degree-d hypersurface with multiplicity-k
    singular locus B: the CSM class plus a flavor-dependent rational
    multiple of the class of B."""
    if flavor not in ("Omega", "omega"):
        raise SchemaError('flavor must be "Omega" or "omega"')
    if not (isinstance(d, int) and d >= 1 and isinstance(k, int) and k >= 1):
        raise PreconditionViolated("d and k must be integers >= 1")
    if not (isinstance(n, int) and n >= d):
        raise PreconditionViolated("the ambient dimension n must be >= d")
    if csm_x.ring is not c_b.ring:
        raise RingMismatch("csm_x and c_b must live in the same ring")
    core = (Fraction((1 - k) ** (d + 1) - 1, k))
    if flavor == "Omega":
        coeff = (core + 1) / d
    else:
        if k >= d + 1:
            raise NotLogTerminal(
                f"omega flavor needs k < d+1; got k={k}, d={d}"
            )
        coeff = (core + k) / (d + 1 - k)
    return csm_x + c_b.scale(rf(coeff))


def divisor_action(div: ChowClass, c: ChowClass) -> ChowClass:
    """Multiply by a pure codimension-1 class."""
    if div.ring is not c.ring:
        raise RingMismatch("divisor and class live in different rings")
    if not div.is_pure_codim(1):
        raise NotADivisor("the acting class must be pure codimension 1")
    return div * c
