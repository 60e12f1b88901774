"""Activity signatures and concrete diagrams.

A signature is a hierarchy of named, kinded activity nodes together with a
set of kinded edge names.  A diagram attaches a topology (and guard atoms on
routing edges) to the edges of a signature.  Everything here is an immutable
value; validators return violation lists instead of raising.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .errors import UnknownNameError


class NodeKind(enum.Enum):
    EXECUTABLE = "executable"
    INITIAL = "initial"
    FINAL = "final"
    DECISION = "decision"
    MERGE = "merge"
    FORK = "fork"
    JOIN = "join"
    OBJECT = "object"

    @property
    def is_branch_node(self) -> bool:
        """Guard-routing nodes: decisions and merges."""
        return self in (NodeKind.DECISION, NodeKind.MERGE)

    @property
    def is_concurrency_node(self) -> bool:
        """Token-splitting/synchronising nodes: forks and joins."""
        return self in (NodeKind.FORK, NodeKind.JOIN)


class EdgeKind(enum.Enum):
    CONTROL_FLOW = "control"
    OBJECT_FLOW = "object"


class Violation(NamedTuple):
    """One invariant violation: a stable code plus a human-readable message."""

    code: str
    message: str


@dataclass(frozen=True)
class ActivityHierarchy:
    """Activity names with kinds and a declared subclass relation.

    Queries use the reflexive-transitive closure of the declared pairs; the
    closure must be a partial order for the hierarchy to validate.
    """

    names: frozenset[str]
    kind_of: Mapping[str, NodeKind]
    sub: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", frozenset(self.names))
        object.__setattr__(self, "kind_of", dict(self.kind_of))
        object.__setattr__(self, "sub", frozenset(tuple(p) for p in self.sub))


@dataclass(frozen=True)
class Signature:
    hierarchy: ActivityHierarchy
    edges: frozenset[str]
    edge_kind: Mapping[str, EdgeKind]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "edge_kind", dict(self.edge_kind))

    @property
    def node_names(self) -> frozenset[str]:
        return self.hierarchy.names


@dataclass(frozen=True)
class Diagram:
    """A signature plus a topology and guard atoms on routing edges."""

    signature: Signature
    topology: Mapping[str, tuple[str, str]]
    guards: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "topology", {e: (s, t) for e, (s, t) in self.topology.items()}
        )
        object.__setattr__(self, "guards", dict(self.guards))

    def incoming(self, node: str) -> list[str]:
        """Edges targeting ``node``, sorted by edge name."""
        return sorted(e for e, (_, tgt) in self.topology.items() if tgt == node)

    def outgoing(self, node: str) -> list[str]:
        """Edges leaving ``node``, sorted by edge name."""
        return sorted(e for e, (src, _) in self.topology.items() if src == node)


def make_signature(
    nodes: Mapping[str, NodeKind],
    edges: Mapping[str, EdgeKind] | None = None,
    sub: Iterable[tuple[str, str]] = (),
) -> Signature:
    """Convenience constructor used by fixtures and tests."""
    edges = edges or {}
    hierarchy = ActivityHierarchy(
        names=frozenset(nodes), kind_of=dict(nodes), sub=frozenset(sub)
    )
    return Signature(
        hierarchy=hierarchy, edges=frozenset(edges), edge_kind=dict(edges)
    )


def hierarchy_closure(h: ActivityHierarchy) -> set[tuple[str, str]]:
    """Reflexive-transitive closure of the declared subclass pairs."""
    closure = {(a, a) for a in h.names}
    closure.update(p for p in h.sub if p[0] in h.names and p[1] in h.names)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return closure


def hierarchy_leq(h: ActivityHierarchy, a: str, b: str) -> bool:
    """True iff ``a`` is below ``b`` in the closure of the declared pairs."""
    for name in (a, b):
        if name not in h.names:
            raise UnknownNameError(f"undeclared activity name: {name}")
    return (a, b) in hierarchy_closure(h)


def validate_signature(sig: Signature) -> list[Violation]:
    """Check all signature invariants; an empty report means valid."""
    report: list[Violation] = []
    h = sig.hierarchy

    clash = sorted(h.names & sig.edges)
    for name in clash:
        report.append(
            Violation("name-clash", f"{name!r} is declared both as node and edge")
        )

    for name in sorted(h.names - set(h.kind_of)):
        report.append(Violation("missing-kind", f"node {name!r} has no kind"))
    for name in sorted(set(h.kind_of) - h.names):
        report.append(
            Violation("unknown-name", f"kind declared for undeclared node {name!r}")
        )

    for a, b in sorted(h.sub):
        for name in (a, b):
            if name not in h.names:
                report.append(
                    Violation(
                        "unknown-name",
                        f"subclass pair ({a!r}, {b!r}) mentions undeclared {name!r}",
                    )
                )

    closure = hierarchy_closure(h)
    seen_cycles = set()
    for a, b in sorted(closure):
        if a != b and (b, a) in closure and (b, a) not in seen_cycles:
            seen_cycles.add((a, b))
            report.append(
                Violation(
                    "antisymmetry",
                    f"subclass order has a cycle through {a!r} and {b!r}",
                )
            )

    for name in sorted(sig.edges - set(sig.edge_kind)):
        report.append(Violation("missing-kind", f"edge {name!r} has no kind"))
    for name in sorted(set(sig.edge_kind) - sig.edges):
        report.append(
            Violation("unknown-name", f"kind declared for undeclared edge {name!r}")
        )

    return report


# Arity rules per node kind: (incoming, outgoing) where each bound is either
# an exact count or a minimum ("2+").  Executable and object nodes are free.
_ARITY_RULES: dict[NodeKind, tuple[str | None, str | None]] = {
    NodeKind.INITIAL: ("0", None),
    NodeKind.FINAL: (None, "0"),
    NodeKind.FORK: ("1", "2+"),
    NodeKind.JOIN: ("2+", "1"),
    NodeKind.DECISION: ("1", "2+"),
    NodeKind.MERGE: ("2+", "1"),
}


def _arity_ok(rule: str | None, count: int) -> bool:
    if rule is None:
        return True
    if rule.endswith("+"):
        return count >= int(rule[:-1])
    return count == int(rule)


def validate_diagram(d: Diagram) -> list[Violation]:
    """Check topology totality, arity rules, and guard placement."""
    report: list[Violation] = []
    sig = d.signature
    nodes = sig.node_names

    for e in sorted(sig.edges - set(d.topology)):
        report.append(Violation("topology-missing", f"edge {e!r} has no topology"))
    for e in sorted(set(d.topology) - sig.edges):
        report.append(
            Violation("unknown-edge", f"topology given for undeclared edge {e!r}")
        )

    usable: dict[str, tuple[str, str]] = {}
    for e in sorted(set(d.topology) & sig.edges):
        src, tgt = d.topology[e]
        bad = False
        for endpoint in (src, tgt):
            if endpoint not in nodes:
                report.append(
                    Violation(
                        "unknown-node",
                        f"edge {e!r} endpoint {endpoint!r} is not a declared node",
                    )
                )
                bad = True
        if not bad:
            usable[e] = (src, tgt)

    incoming: dict[str, list[str]] = {n: [] for n in nodes}
    outgoing: dict[str, list[str]] = {n: [] for n in nodes}
    for e, (src, tgt) in usable.items():
        outgoing[src].append(e)
        incoming[tgt].append(e)

    for node in sorted(nodes):
        kind = sig.hierarchy.kind_of.get(node)
        if kind is None or kind not in _ARITY_RULES:
            continue
        in_rule, out_rule = _ARITY_RULES[kind]
        n_in, n_out = len(incoming[node]), len(outgoing[node])
        if not _arity_ok(in_rule, n_in):
            report.append(
                Violation(
                    "arity",
                    f"{kind.value} node {node!r} has {n_in} incoming edges"
                    f" (expected {in_rule})",
                )
            )
        if not _arity_ok(out_rule, n_out):
            report.append(
                Violation(
                    "arity",
                    f"{kind.value} node {node!r} has {n_out} outgoing edges"
                    f" (expected {out_rule})",
                )
            )

    guarded_required: set[str] = set()
    for node in nodes:
        kind = sig.hierarchy.kind_of.get(node)
        if kind is NodeKind.DECISION:
            guarded_required.update(outgoing[node])
        elif kind is NodeKind.MERGE:
            guarded_required.update(incoming[node])

    for e in sorted(guarded_required - set(d.guards)):
        report.append(
            Violation("guard-missing", f"routing edge {e!r} has no guard atom")
        )
    for e in sorted(set(d.guards) - guarded_required):
        if e not in sig.edges:
            report.append(
                Violation("unknown-edge", f"guard given for undeclared edge {e!r}")
            )
        else:
            report.append(
                Violation(
                    "guard-misplaced",
                    f"edge {e!r} carries a guard but is not decision-outgoing"
                    " or merge-incoming",
                )
            )

    return report
