"""Formula ASTs, sentence checks, signature morphisms, and translation.

Atomic formulas are either ``Skip`` or a single sequencing step between two
terms across an edge.  Full formulas close the atoms under the classical
connectives, equality of atoms, and sorted quantifiers.  Morphisms rename
node and edge names between signatures and extend homomorphically to
formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .core import (
    ActivityHierarchy,
    Signature,
    Violation,
    hierarchy_closure,
    hierarchy_leq,
)
from .errors import BoundaryMismatchError, SortMismatchError, UnknownNameError


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    ident: str
    sort: str


Term = Union[Const, Var]


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Seq:
    src: Term
    edge: str
    dst: Term


Atom = Union[Skip, Seq]


@dataclass(frozen=True)
class Eq:
    left: Atom
    right: Atom


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    ident: str
    sort: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    ident: str
    sort: str
    body: "Formula"


Formula = Union[Skip, Seq, Eq, Not, And, Or, Implies, Iff, Exists, Forall]

_BINARY = (And, Or, Implies, Iff)
_QUANT = (Exists, Forall)


@dataclass(frozen=True)
class Sentence:
    """A formula intended to be closed; checked by :func:`validate_sentence`."""

    formula: Formula


@dataclass(frozen=True)
class SignatureMorphism:
    """Kind- and order-preserving rename of node and edge names."""

    source: Signature
    target: Signature
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_map", dict(self.node_map))
        object.__setattr__(self, "edge_map", dict(self.edge_map))


def _term_vars(t: Term) -> set[tuple[str, str]]:
    return {(t.ident, t.sort)} if isinstance(t, Var) else set()


def _free_vars(f: Formula) -> set[tuple[str, str]]:
    if isinstance(f, Skip):
        return set()
    if isinstance(f, Seq):
        return _term_vars(f.src) | _term_vars(f.dst)
    if isinstance(f, Eq):
        return _free_vars(f.left) | _free_vars(f.right)
    if isinstance(f, Not):
        return _free_vars(f.body)
    if isinstance(f, _BINARY):
        return _free_vars(f.left) | _free_vars(f.right)
    if isinstance(f, _QUANT):
        return _free_vars(f.body) - {(f.ident, f.sort)}
    raise TypeError(f"not a formula: {f!r}")


def free_vars(f: Formula) -> set[tuple[str, str]]:
    """Variables occurring outside any binder of matching identifier and sort.

    A binder only captures occurrences that agree on both the identifier and
    the sort; an occurrence with a different sort escapes it.
    """
    result = _free_vars(f)
    by_ident: dict[str, set[str]] = {}
    for ident, sort in result:
        by_ident.setdefault(ident, set()).add(sort)
    for ident, sorts in sorted(by_ident.items()):
        if len(sorts) > 1:
            raise SortMismatchError(
                f"variable {ident!r} occurs free with sorts {sorted(sorts)}"
            )
    return result


def check_formula(sig: Signature, f: Formula) -> list[Violation]:
    """Well-formedness of a formula against a signature (names and sorts)."""
    report: list[Violation] = []
    nodes = sig.node_names

    def check_term(t: Term) -> None:
        if isinstance(t, Const):
            if t.name not in nodes:
                report.append(
                    Violation("unknown-name", f"undeclared activity {t.name!r}")
                )
        else:
            if t.sort not in nodes:
                report.append(
                    Violation(
                        "unknown-name",
                        f"variable {t.ident!r} has undeclared sort {t.sort!r}",
                    )
                )

    def walk(g: Formula) -> None:
        if isinstance(g, Skip):
            return
        if isinstance(g, Seq):
            check_term(g.src)
            check_term(g.dst)
            if g.edge not in sig.edges:
                report.append(
                    Violation("unknown-name", f"undeclared edge {g.edge!r}")
                )
        elif isinstance(g, Eq):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Not):
            walk(g.body)
        elif isinstance(g, _BINARY):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, _QUANT):
            if g.sort not in nodes:
                report.append(
                    Violation(
                        "unknown-name",
                        f"quantifier binds {g.ident!r} at undeclared sort {g.sort!r}",
                    )
                )
            walk(g.body)
        else:
            raise TypeError(f"not a formula: {g!r}")

    walk(f)
    return report


def validate_sentence(sig: Signature, s: Sentence) -> list[Violation]:
    """A sentence must be well-formed over ``sig`` and closed."""
    report = check_formula(sig, s.formula)
    try:
        remaining = free_vars(s.formula)
    except SortMismatchError as exc:
        report.append(Violation("sort-mismatch", str(exc)))
        return report
    for ident, sort in sorted(remaining):
        report.append(
            Violation("free-variable", f"free variable {ident!r} of sort {sort!r}")
        )
    return report


def validate_morphism(m: SignatureMorphism) -> list[Violation]:
    """Totality, kind preservation, and order preservation."""
    report: list[Violation] = []
    src, tgt = m.source, m.target

    for name in sorted(src.node_names - set(m.node_map)):
        report.append(Violation("totality", f"node {name!r} is not mapped"))
    for name in sorted(set(m.node_map) - src.node_names):
        report.append(
            Violation("unknown-name", f"map given for undeclared node {name!r}")
        )
    for name in sorted(src.edges - set(m.edge_map)):
        report.append(Violation("totality", f"edge {name!r} is not mapped"))
    for name in sorted(set(m.edge_map) - src.edges):
        report.append(
            Violation("unknown-name", f"map given for undeclared edge {name!r}")
        )

    for name in sorted(src.node_names & set(m.node_map)):
        image = m.node_map[name]
        if image not in tgt.node_names:
            report.append(
                Violation(
                    "unknown-name", f"node {name!r} maps to undeclared {image!r}"
                )
            )
            continue
        if src.hierarchy.kind_of[name] is not tgt.hierarchy.kind_of[image]:
            report.append(
                Violation(
                    "kind-preservation",
                    f"node {name!r} ({src.hierarchy.kind_of[name].value}) maps to"
                    f" {image!r} ({tgt.hierarchy.kind_of[image].value})",
                )
            )

    for name in sorted(src.edges & set(m.edge_map)):
        image = m.edge_map[name]
        if image not in tgt.edges:
            report.append(
                Violation(
                    "unknown-name", f"edge {name!r} maps to undeclared {image!r}"
                )
            )
            continue
        if src.edge_kind[name] is not tgt.edge_kind[image]:
            report.append(
                Violation(
                    "kind-preservation",
                    f"edge {name!r} ({src.edge_kind[name].value}) maps to"
                    f" {image!r} ({tgt.edge_kind[image].value})",
                )
            )

    # Checking the declared pairs suffices: a chain of declared pairs maps to
    # a chain in the target closure.
    for a, b in sorted(src.hierarchy.sub):
        fa, fb = m.node_map.get(a), m.node_map.get(b)
        if fa is None or fb is None:
            continue
        if fa not in tgt.node_names or fb not in tgt.node_names:
            continue
        if not hierarchy_leq(tgt.hierarchy, fa, fb):
            report.append(
                Violation(
                    "order-preservation",
                    f"{a!r} <= {b!r} in the source but {fa!r} <= {fb!r} fails"
                    " in the target",
                )
            )

    return report


def identity_morphism(sig: Signature) -> SignatureMorphism:
    return SignatureMorphism(
        source=sig,
        target=sig,
        node_map={n: n for n in sig.node_names},
        edge_map={e: e for e in sig.edges},
    )


def compose_morphisms(
    m1: SignatureMorphism, m2: SignatureMorphism
) -> SignatureMorphism:
    """Diagrammatic composition: first ``m1``, then ``m2``."""
    if m1.target != m2.source:
        raise BoundaryMismatchError(
            "cannot compose: target of the first morphism differs from the"
            " source of the second"
        )
    return SignatureMorphism(
        source=m1.source,
        target=m2.target,
        node_map={a: m2.node_map[b] for a, b in m1.node_map.items()},
        edge_map={e: m2.edge_map[f] for e, f in m1.edge_map.items()},
    )


def morphism_image(m: SignatureMorphism) -> Signature:
    """The image of the source signature inside the target."""
    names = frozenset(m.node_map[a] for a in m.source.node_names)
    edges = frozenset(m.edge_map[e] for e in m.source.edges)
    hierarchy = ActivityHierarchy(
        names=names,
        kind_of={n: m.target.hierarchy.kind_of[n] for n in names},
        sub=frozenset(
            (m.node_map[a], m.node_map[b]) for a, b in m.source.hierarchy.sub
        ),
    )
    return Signature(
        hierarchy=hierarchy,
        edges=edges,
        edge_kind={e: m.target.edge_kind[e] for e in edges},
    )


def _map_term(m: SignatureMorphism, t: Term) -> Term:
    if isinstance(t, Const):
        if t.name not in m.node_map:
            raise UnknownNameError(f"undeclared activity {t.name!r}")
        return Const(m.node_map[t.name])
    if t.sort not in m.node_map:
        raise UnknownNameError(f"undeclared sort {t.sort!r}")
    return Var(t.ident, m.node_map[t.sort])


def translate_atomic(m: SignatureMorphism, t: Atom) -> Atom:
    """Skip is fixed; a sequencing atom maps componentwise."""
    if isinstance(t, Skip):
        return t
    if t.edge not in m.edge_map:
        raise UnknownNameError(f"undeclared edge {t.edge!r}")
    return Seq(_map_term(m, t.src), m.edge_map[t.edge], _map_term(m, t.dst))


def translate_formula(m: SignatureMorphism, f: Formula) -> Formula:
    """Homomorphic extension of atom translation to full formulas."""
    if isinstance(f, (Skip, Seq)):
        return translate_atomic(m, f)
    if isinstance(f, Eq):
        return Eq(translate_atomic(m, f.left), translate_atomic(m, f.right))
    if isinstance(f, Not):
        return Not(translate_formula(m, f.body))
    if isinstance(f, _BINARY):
        return type(f)(translate_formula(m, f.left), translate_formula(m, f.right))
    if isinstance(f, _QUANT):
        if f.sort not in m.node_map:
            raise UnknownNameError(f"undeclared sort {f.sort!r}")
        return type(f)(f.ident, m.node_map[f.sort], translate_formula(m, f.body))
    raise TypeError(f"not a formula: {f!r}")


def conjoin(atoms: list[Formula]) -> Formula:
    """Left-folded conjunction; a single formula is returned unchanged."""
    if not atoms:
        return Skip()
    result = atoms[0]
    for a in atoms[1:]:
        result = And(result, a)
    return result


__all__ = [
    "Const",
    "Var",
    "Term",
    "Skip",
    "Seq",
    "Atom",
    "Eq",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Exists",
    "Forall",
    "Formula",
    "Sentence",
    "SignatureMorphism",
    "free_vars",
    "check_formula",
    "validate_sentence",
    "validate_morphism",
    "identity_morphism",
    "compose_morphisms",
    "morphism_image",
    "translate_atomic",
    "translate_formula",
    "conjoin",
]
