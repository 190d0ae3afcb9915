"""
Free-energy extraction over diffusion polytopes.

The objective is a linear functional with positive, pairwise-distinct
weights (energies per level).  Minimizing it over the diffusion polytope
gives the best population rearrangement the graph's averaging operations
allow; the Gardner limit -- populations sorted decreasingly against
increasing weights -- is the unrestricted-rearrangement baseline, and the
report states which fraction of that limit the graph recovers.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    DiffusionGraph,
    OperationSequence,
    PopulationVector,
    apply_sequence,
    complete,
    format_rational,
    path,
)
from .enumeration import ClassifiedVertex, PolytopeConfig, polytope

__all__ = [
    "Objective",
    "energy",
    "gardner_limit",
    "EnergyReport",
    "optimize_over",
    "monotone_extremal_check",
    "exponential_populations",
]


@dataclass(frozen=True)
class Objective:
    """Per-level weights: positive and pairwise distinct."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be positive")
        if len(set(ws)) != len(ws):
            raise ValueError("weights must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.weights)


def _weights(w: Objective | Sequence) -> tuple[Fraction, ...]:
    if isinstance(w, Objective):
        return w.weights
    return Objective(tuple(Fraction(x) for x in w)).weights


def energy(w: Objective | Sequence, rho: Sequence[Fraction]) -> Fraction:
    """
    Exact objective value  sum_i w_i rho_i.

    >>> energy((1, 2, 3), PopulationVector(["1/3", "1/3", "1/3"]))
    Fraction(2, 1)
    """
    ws = _weights(w)
    if len(ws) != len(rho):
        raise ValueError("weight/state dimension mismatch")
    return sum(a * b for a, b in zip(ws, rho))


def gardner_limit(w: Objective | Sequence, rho0: Sequence[Fraction]) -> Fraction:
    """
    Minimum objective over arbitrary rearrangements of the populations:
    sort populations decreasingly against increasing weights.  No
    averaging process can do better, since every attainable state is a
    doubly-stochastic image of the start.
    """
    ws = _weights(w)
    if len(ws) != len(rho0):
        raise ValueError("weight/state dimension mismatch")
    return sum(a * b for a, b in zip(sorted(ws), sorted(rho0, reverse=True)))


def _decimal_str(x: Fraction, digits: int = 15) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


@dataclass(frozen=True)
class EnergyReport:
    """Outcome of one optimization run over a diffusion polytope."""

    graph: DiffusionGraph
    rho0: PopulationVector
    weights: tuple[Fraction, ...]
    initial_energy: Fraction
    optimal_energy: Fraction
    gardner_energy: Fraction
    recovered_fraction: Fraction
    optimal_vertices: tuple[ClassifiedVertex, ...]
    method: str
    completeness: str
    lower_bound_only: bool

    def __post_init__(self) -> None:
        if not (self.gardner_energy <= self.optimal_energy <= self.initial_energy):
            raise AssertionError("energy ordering violated")
        if not (0 <= self.recovered_fraction <= 1):
            raise AssertionError("recovered fraction out of [0, 1]")

    def recovered_percent(self) -> float:
        return float(self.recovered_fraction * 100)

    def display_optimal(self) -> str:
        return _decimal_str(self.optimal_energy)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "rho0": self.rho0.to_json(),
            "weights": [format_rational(w) for w in self.weights],
            "initial_energy": format_rational(self.initial_energy),
            "optimal_energy": format_rational(self.optimal_energy),
            "gardner_energy": format_rational(self.gardner_energy),
            "recovered_fraction": format_rational(self.recovered_fraction),
            "display": {
                "initial_energy": _decimal_str(self.initial_energy),
                "optimal_energy": _decimal_str(self.optimal_energy),
                "gardner_energy": _decimal_str(self.gardner_energy),
                "recovered_fraction": _decimal_str(self.recovered_fraction),
            },
            "optimal_vertices": [v.to_json() for v in self.optimal_vertices],
            "method": self.method,
            "completeness": self.completeness,
            "lower_bound_only": self.lower_bound_only,
        }


def _structured_vertices(graph: DiffusionGraph, rho0: PopulationVector):
    """Closed-form vertex lists for the graphs that have one."""
    n = graph.n
    if graph.edges == complete(n).edges:
        from .structured.complete import kn_extreme_points

        return [
            ClassifiedVertex(point=p, sequence=seq, kind="nonlocal")
            for p, seq in kn_extreme_points(rho0)
        ]
    if n >= 2 and graph.edges == path(n).edges:
        if any(rho0[t] > rho0[t + 1] for t in range(n - 1)):
            raise ValueError("structured path solver needs non-decreasing populations")
        from .structured.ordered_path import pn_polytope

        return [
            ClassifiedVertex(point=v.point, sequence=v.sequence, kind=v.kind)
            for v in pn_polytope(rho0).vertices
        ]
    raise ValueError("no structured solver for this graph; use method='enumerate'")


def optimize_over(graph: DiffusionGraph, rho0: Sequence[Fraction],
                  w: Objective | Sequence, method: str = "enumerate",
                  config: PolytopeConfig | None = None) -> EnergyReport:
    """
    Minimize the objective over the diffusion polytope of (graph, rho0).

    method "enumerate" runs the generic vertex search; "structured" uses
    the closed-form vertex lists (complete graph via commutation classes,
    ordered path via subset points).  If the enumeration was truncated the
    optimum is only a bound, and the report says so.
    """
    rho0 = PopulationVector(rho0)
    ws = _weights(w)
    if len(ws) != graph.n:
        raise ValueError("weight vector does not match the graph size")

    if method == "structured":
        vertices = _structured_vertices(graph, rho0)
        completeness = "proven"
        truncated = False
    elif method == "enumerate":
        if config is None:
            config = PolytopeConfig(classify=False)  # kinds are not part of the report
        result = polytope(graph, rho0, config)
        vertices = list(result.vertices)
        completeness = result.completeness
        truncated = result.truncated
    else:
        raise ValueError(f"unknown method {method!r}")

    values = [energy(ws, v.point) for v in vertices]
    best = min(values)
    argmin = tuple(
        sorted(
            (v for v, val in zip(vertices, values) if val == best),
            key=lambda v: v.point,
        )
    )
    e0 = energy(ws, rho0)
    gardner = gardner_limit(ws, rho0)
    fraction = Fraction(0) if e0 == gardner else (e0 - best) / (e0 - gardner)
    return EnergyReport(
        graph=graph,
        rho0=rho0,
        weights=ws,
        initial_energy=e0,
        optimal_energy=best,
        gardner_energy=gardner,
        recovered_fraction=fraction,
        optimal_vertices=argmin,
        method=method,
        completeness=completeness,
        lower_bound_only=truncated,
    )


def monotone_extremal_check(sequence: Iterable, w: Objective | Sequence,
                            rho0: Sequence[Fraction]) -> bool:
    """
    Does the objective decrease (weakly) after every prefix of the word?
    Extremal sequences never absorb energy back from the waves.
    """
    ws = _weights(w)
    state = PopulationVector(rho0)
    previous = energy(ws, state)
    for op in sequence:
        state = op.apply(state)
        current = energy(ws, state)
        if current > previous:
            return False
        previous = current
    return True


def exponential_populations(n: int, digits: int = 40) -> PopulationVector:
    """
    Exact-rational stand-in for populations proportional to (e^1, ..., e^n):
    each e^i is a correctly-rounded `digits`-digit decimal, converted
    exactly and normalized exactly.  The library never approximates
    internally; callers choose the precision once, here.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if digits < 30:
        raise ValueError("use at least 30 digits")
    with localcontext() as ctx:
        ctx.prec = digits
        raw = [Fraction(Decimal(i).exp()) for i in range(1, n + 1)]
    return PopulationVector.normalized(raw)
