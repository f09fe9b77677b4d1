"""Built-in potentials and the string addressing used by the CLI.

Addresses:

* plain catalog ids: ``cos-saddle``, ``cubic-degenerate``,
  ``counterexample-iii``, ``quad-saddle``, ``wavy-plane``, ``plane``
* named separable families: ``separable:x1-cos``, ``separable:cos-cos``,
  ``separable:drift-cos``
* a small component grammar, axes separated by ``|`` and terms by ``+``:
  ``separable:lin(1)|sin(0.3,1)`` builds u = x + 0.3 sin y.  Atoms are
  ``const(c)``, ``lin(a)``, ``quad(b)`` (b·t²/2), ``cub(e)`` (e·t³/3),
  ``cos(A,w)`` and ``sin(A,w)``; one trig frequency per axis.
* gridded samples: ``grid:<path.csv>`` or ``grid:<path.csv>:1`` for linear
  interpolation (cubic is the default).
"""

from __future__ import annotations

import re
from math import pi

from .errors import DomainError
from .geometry import Box
from .potentials import (
    LogSquaredComponent,
    Potential,
    PolyTrigComponent,
    SeparablePotential,
    make_separable,
)

__all__ = [
    "catalog_cos_saddle",
    "catalog_cubic",
    "catalog_counterexample_iii",
    "quad_saddle",
    "wavy_plane",
    "plane",
    "catalog_ids",
    "get_potential",
]

TWO_PI = 2.0 * pi


def catalog_cos_saddle() -> SeparablePotential:
    """u(x, y) = cos y - cos x on [-pi, pi]^2; saddle at the origin."""
    comps = (
        PolyTrigComponent(g=-1.0, omega=1.0, known_dzeros=(0.0, pi)),
        PolyTrigComponent(g=1.0, omega=1.0, known_dzeros=(0.0, pi)),
    )
    return SeparablePotential(comps, Box.make([-pi, -pi], [pi, pi]),
                              name="cos-saddle", smoothness="C-inf")


def catalog_cubic() -> SeparablePotential:
    """u(x, y) = (y^3 - x^3)/3 on (-1, 1)^2; zero Hessian at the origin."""
    comps = (PolyTrigComponent(e=-1.0), PolyTrigComponent(e=1.0))
    return SeparablePotential(comps, Box.make([-1, -1], [1, 1]),
                              name="cubic-degenerate", smoothness="C-inf")


def catalog_counterexample_iii() -> SeparablePotential:
    """Even log-squared profile plus -y^2/2 on [-1, 1]^2.

    A C² saddle with vanishing Laplacian at the origin whose conductivity
    synthesis is nevertheless unbounded near the stable axis.
    """
    comps = (LogSquaredComponent(), PolyTrigComponent(b=-1.0, known_dzeros=(0.0,)))
    return SeparablePotential(comps, Box.make([-1, -1], [1, 1]),
                              name="counterexample-iii", smoothness="C2")


def quad_saddle(a: float = 1.0, b: float = -1.0) -> SeparablePotential:
    """u(x, y) = a x^2/2 + b y^2/2 on [-2, 2]^2 (harmonic saddle for b=-a)."""
    comps = (PolyTrigComponent(b=a, known_dzeros=(0.0,)),
             PolyTrigComponent(b=b, known_dzeros=(0.0,)))
    name = "quad-saddle" if (a, b) == (1.0, -1.0) else f"quad-saddle:{a:g},{b:g}"
    return SeparablePotential(comps, Box.make([-2, -2], [2, 2]),
                              name=name, smoothness="C-inf")


def wavy_plane(a: float = 0.3) -> SeparablePotential:
    """u(x, y) = x + a sin y on [-2, 2]^2; gradient never vanishes for a<1."""
    comps = (PolyTrigComponent(a=1.0), PolyTrigComponent(s=a, omega=1.0))
    name = "wavy-plane" if a == 0.3 else f"wavy-plane:{a:g}"
    return SeparablePotential(comps, Box.make([-2, -2], [2, 2]),
                              name=name, smoothness="C-inf")


def plane(a: float = 1.0, b: float = 1.0) -> SeparablePotential:
    """u(x, y) = a x + b y on [-4, 4]^2."""
    comps = (PolyTrigComponent(a=a), PolyTrigComponent(a=b))
    name = "plane" if (a, b) == (1.0, 1.0) else f"plane:{a:g},{b:g}"
    return SeparablePotential(comps, Box.make([-4, -4], [4, 4]),
                              name=name, smoothness="C-inf")


def _sep_x1_cos() -> SeparablePotential:
    # u = x1 - cos(2 pi x2) on the unit cell
    comps = (
        PolyTrigComponent(a=1.0, dperiod=1.0),
        PolyTrigComponent(g=-1.0, omega=TWO_PI, known_dzeros=(0.0, 0.5)),
    )
    return SeparablePotential(comps, Box.make([0, 0], [1, 1]),
                              name="separable:x1-cos", smoothness="C-inf")


def _sep_cos_cos() -> SeparablePotential:
    # u = -cos(2 pi x1) - cos(2 pi x2)
    c = PolyTrigComponent(g=-1.0, omega=TWO_PI, known_dzeros=(0.0, 0.5))
    return SeparablePotential((c, c), Box.make([0, 0], [1, 1]),
                              name="separable:cos-cos", smoothness="C-inf")


def _sep_drift_cos() -> SeparablePotential:
    # u_i'(t) = 2 + cos(2 pi t) on both axes: the gradient never vanishes
    c = PolyTrigComponent(a=2.0, s=1.0 / TWO_PI, omega=TWO_PI, known_dzeros=())
    return SeparablePotential((c, c), Box.make([0, 0], [1, 1]),
                              name="separable:drift-cos", smoothness="C-inf")


_CATALOG = {
    "cos-saddle": catalog_cos_saddle,
    "cubic-degenerate": catalog_cubic,
    "counterexample-iii": catalog_counterexample_iii,
    "quad-saddle": quad_saddle,
    "wavy-plane": wavy_plane,
    "plane": plane,
}

_NAMED_SEPARABLE = {
    "x1-cos": _sep_x1_cos,
    "cos-cos": _sep_cos_cos,
    "drift-cos": _sep_drift_cos,
}

_FORMULAS = {
    "cos-saddle": "u = cos y - cos x",
    "cubic-degenerate": "u = (y^3 - x^3)/3",
    "counterexample-iii": "u = f(x) - y^2/2 with log-squared warped even f",
    "quad-saddle": "u = a x^2/2 + b y^2/2   (a=1, b=-1)",
    "wavy-plane": "u = x + a sin y   (a=0.3)",
    "plane": "u = a x + b y   (a=b=1)",
    "separable:x1-cos": "u = x1 - cos(2 pi x2)",
    "separable:cos-cos": "u = -cos(2 pi x1) - cos(2 pi x2)",
    "separable:drift-cos": "u_i' = 2 + cos(2 pi t) on both axes",
}


def catalog_ids() -> list[tuple[str, str]]:
    """(id, formula) pairs for everything addressable by plain name."""
    return [(k, _FORMULAS[k]) for k in _FORMULAS]


_ATOM = re.compile(r"^(const|lin|quad|cub|cos|sin)\(([^)]*)\)$")


def _parse_axis(text: str) -> PolyTrigComponent:
    kw = {"c0": 0.0, "a": 0.0, "b": 0.0, "e": 0.0, "g": 0.0, "s": 0.0}
    omega = None
    for term in text.split("+"):
        m = _ATOM.match(term.strip())
        if m is None:
            raise DomainError(f"cannot parse separable term {term!r}")
        kind, argtext = m.group(1), m.group(2)
        args = [float(v) for v in argtext.split(",")] if argtext.strip() else []
        if kind in ("const", "lin", "quad", "cub") and len(args) != 1:
            raise DomainError(f"{kind}() takes one coefficient")
        if kind in ("cos", "sin") and len(args) != 2:
            raise DomainError(f"{kind}() takes amplitude and frequency")
        if kind == "const":
            kw["c0"] += args[0]
        elif kind == "lin":
            kw["a"] += args[0]
        elif kind == "quad":
            kw["b"] += args[0]
        elif kind == "cub":
            kw["e"] += args[0]
        else:
            if args[1] <= 0:
                raise DomainError("trig frequency must be positive")
            if omega is not None and omega != args[1]:
                raise DomainError("one trig frequency per axis")
            omega = args[1]
            kw["g" if kind == "cos" else "s"] += args[0]
    return PolyTrigComponent(omega=omega if omega is not None else 0.0, **kw)


def _parse_separable(spec: str) -> SeparablePotential:
    if spec in _NAMED_SEPARABLE:
        return _NAMED_SEPARABLE[spec]()
    comps = [_parse_axis(axis) for axis in spec.split("|")]
    if len(comps) not in (2, 3):
        raise DomainError("separable spec needs 2 or 3 axes separated by '|'")
    pot = make_separable(comps, domain=Box.make([-2.0] * len(comps), [2.0] * len(comps)))
    return SeparablePotential(pot.components, pot.domain,
                              name=f"separable:{spec}", smoothness="C-inf")


def get_potential(spec: str) -> Potential:
    """Resolve a potential address (catalog id, separable spec or grid file)."""
    spec = spec.strip()
    if spec in _CATALOG:
        return _CATALOG[spec]()
    if spec.startswith("separable:"):
        return _parse_separable(spec[len("separable:"):])
    if spec.startswith("grid:"):
        from .gridded import load_grid_potential

        rest = spec[len("grid:"):]
        order = 3
        if rest.endswith(":1") or rest.endswith(":3"):
            order = int(rest[-1])
            rest = rest[:-2]
        return load_grid_potential(rest, order=order)
    raise DomainError(f"unknown potential spec {spec!r}; see `list-potentials`")
