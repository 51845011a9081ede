"""Hasse diagrams of ``M_n`` and ``M(w)`` as DOT graphs or JSON documents."""

from __future__ import annotations

from .partitions import adapted_covers, enumerate_adapted
from .words import MotzkinWord, enumerate_reduced, word_covers

__all__ = ["hasse_words", "hasse_adapted", "to_dot"]


def hasse_words(n: int) -> dict:
    """Nodes and covering edges of the pointwise lattice ``M_n``."""
    nodes = [str(w) for w in enumerate_reduced(n)]
    edges = [[str(a), str(b)] for a, b in word_covers(n)]
    return {"kind": "hasse-words", "n": n, "nodes": nodes, "edges": edges}


def hasse_adapted(w: MotzkinWord, irreducible_only: bool = False) -> dict:
    """Nodes and covering edges of ``M(w)`` (or ``M_irr(w)``) under refinement."""
    nodes = [str(a.partition) for a in enumerate_adapted(w, irreducible_only)]
    edges = [[str(a.partition), str(b.partition)] for a, b in adapted_covers(w, irreducible_only)]
    return {
        "kind": "hasse-adapted",
        "word": str(w),
        "irreducible": irreducible_only,
        "nodes": nodes,
        "edges": edges,
    }


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(diagram: dict) -> str:
    """Render a diagram from :func:`hasse_words` / :func:`hasse_adapted`; edges point upward."""
    name = "M_" + str(diagram["n"]) if diagram["kind"] == "hasse-words" else "M(" + diagram["word"] + ")"
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    ids = {node: f"n{k}" for k, node in enumerate(diagram["nodes"])}
    for node, ident in ids.items():
        lines.append(f"  {ident} [label={_quote(node)}];")
    for lo, hi in diagram["edges"]:
        lines.append(f"  {ids[lo]} -> {ids[hi]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
