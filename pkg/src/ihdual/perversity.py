"""Perversities: integer functions on the singular strata of a space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional

from .complex import StratifiedComplex

GM_NAMES = ("zero", "lower-middle", "upper-middle", "top")

_ALIASES = {
    "0": "zero", "zero": "zero", "0bar": "zero",
    "m": "lower-middle", "lower-middle": "lower-middle", "lower": "lower-middle",
    "n": "upper-middle", "upper-middle": "upper-middle", "upper": "upper-middle",
    "t": "top", "top": "top",
}


def gm_value(name: str, codim: int) -> int:
    name = _ALIASES.get(name, name)
    if name == "zero":
        return 0
    if name == "lower-middle":
        return (codim - 2) // 2
    if name == "upper-middle":
        return -((2 - codim) // 2)
    if name == "top":
        return codim - 2
    raise ValueError("unknown perversity name %r" % name)


@dataclass(frozen=True, eq=False)
class Perversity:
    space: StratifiedComplex
    values: Mapping[int, int]
    name: str = ""

    def __post_init__(self):
        singular = {st.index for st in self.space.singular_strata}
        if set(self.values) != singular:
            raise ValueError("perversity must be defined on exactly the singular strata %s"
                             % sorted(singular))

    def __call__(self, stratum) -> int:
        idx = stratum if isinstance(stratum, int) else stratum.index
        return self.values[idx]

    def _same_space(self, other: "Perversity"):
        if other.space is not self.space:
            raise ValueError("perversities live on different spaces")

    def dual(self) -> "Perversity":
        vals = {st.index: st.codim - 2 - self.values[st.index] for st in self.space.singular_strata}
        return Perversity(self.space, vals, _dual_name(self.name))

    def is_complementary(self, other: "Perversity") -> bool:
        self._same_space(other)
        return all(self.values[st.index] + other.values[st.index] == st.codim - 2
                   for st in self.space.singular_strata)

    def __le__(self, other: "Perversity") -> bool:
        self._same_space(other)
        return all(self.values[k] <= other.values[k] for k in self.values)

    def __ge__(self, other: "Perversity") -> bool:
        return other <= self

    def __eq__(self, other):
        if not isinstance(other, Perversity):
            return NotImplemented
        return self.space is other.space and dict(self.values) == dict(other.values)

    def __hash__(self):
        return hash((id(self.space), tuple(sorted(self.values.items()))))

    def __add__(self, other: "Perversity") -> "Perversity":
        self._same_space(other)
        return Perversity(self.space, {k: v + other.values[k] for k, v in self.values.items()},
                          "%s+%s" % (self.name, other.name))

    def table(self) -> Dict[int, int]:
        return dict(sorted(self.values.items()))

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return "{" + ",".join("%d:%d" % kv for kv in sorted(self.values.items())) + "}"

    def __repr__(self):
        return "Perversity(%s on %s)" % (self.label, self.space.name)


def _dual_name(name: str) -> str:
    swap = {"zero": "top", "top": "zero", "lower-middle": "upper-middle",
            "upper-middle": "lower-middle"}
    if name in swap:
        return swap[name]
    if not name:
        return ""
    if name.startswith("D(") and name.endswith(")"):
        return name[2:-1]
    return "D(%s)" % name


def gm_perversity(name: str, X: StratifiedComplex) -> Perversity:
    """A Goresky-MacPherson perversity, evaluated per stratum from its codimension."""
    canon = _ALIASES.get(name)
    if canon is None:
        raise ValueError("unknown perversity name %r" % name)
    return Perversity(X, {st.index: gm_value(canon, st.codim) for st in X.singular_strata}, canon)


def constant(X: StratifiedComplex, value: int, name=None) -> Perversity:
    return Perversity(X, {st.index: value for st in X.singular_strata}, name or "const%d" % value)


def from_table(X: StratifiedComplex, table: Mapping, name: str = "") -> Perversity:
    return Perversity(X, {int(k): int(v) for k, v in table.items()}, name)


def random_perversity(X: StratifiedComplex, rng, low: Optional[int] = None,
                      high: Optional[int] = None, name: str = "") -> Perversity:
    """A general perversity with values drawn from ``[low, high]``.

    The default range is ``[-1, codim - 1]`` per stratum, which straddles the
    GM range on both sides.
    """
    vals = {}
    for st in X.singular_strata:
        lo = -1 if low is None else low
        hi = st.codim - 1 if high is None else high
        vals[st.index] = rng.randint(lo, hi)
    return Perversity(X, vals, name)


def parse_perversity(spec, X: StratifiedComplex) -> Perversity:
    """Accept a GM name, a constant like ``const:1``, or a ``{stratum: value}`` map."""
    if isinstance(spec, Perversity):
        return spec
    if isinstance(spec, Mapping):
        return from_table(X, spec)
    spec = str(spec).strip()
    if spec.startswith("{"):
        import json
        return from_table(X, json.loads(spec))
    if spec.startswith("const:"):
        return constant(X, int(spec[6:]))
    if spec.startswith("D(") and spec.endswith(")"):
        return parse_perversity(spec[2:-1], X).dual()
    return gm_perversity(spec, X)


def cup_condition(p: Perversity, q: Perversity, r: Perversity) -> bool:
    """True when ``D r >= D p + D q`` pointwise."""
    p._same_space(q)
    p._same_space(r)
    dp, dq, dr = p.dual(), q.dual(), r.dual()
    return all(dr.values[k] >= dp.values[k] + dq.values[k] for k in dr.values)
