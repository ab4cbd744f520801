"""Line-oriented instance files, partition/certificate files and reports.

Instance grammar (vertices and classes are 1-based in files)::

    c <comment>
    p digraph <n> <m> <p>
    a <u> <v>
    f <v> <x1> ... <xp>
    l <v> <c1> ... <ck>

An instance carries either ``f`` lines for every vertex, ``l`` lines (the
colour universe is then 1..p), or neither (a bare digraph).

Partitions and certificates use the same style::

    s partition <n> <p>
    v <vertex> <class>

    s certificate <p> <blocks>
    b <id> M <j> | b <id> K <n1> ... <np> | b <id> C <k> <l>
    g <id> <vertex> <x1> ... <xp>
    e <vertex> <id> <id>

Reports are either this text form with ``r key value`` lines or one JSON
document (``--format structured``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .degeneracy import Partition, VectorFunction
from .digraph import Digraph
from .hardpairs import BlockType, CertificateBlock, HardPairCertificate
from .reductions import ListAssignment


class FormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Instance:
    D: Digraph
    p: int
    f: Optional[VectorFunction] = None
    lists: Optional[ListAssignment] = None
    comments: tuple[str, ...] = field(default=(), compare=False)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _vertex(tok: int, n: int, lineno: int) -> int:
    if not 1 <= tok <= n:
        raise FormatError(f"vertex {tok} outside 1..{n}", lineno)
    return tok - 1


def parse_instance(text: str) -> Instance:
    header: Optional[tuple[int, int, int]] = None
    arcs: list[tuple[int, int]] = []
    seen_arcs: set[tuple[int, int]] = set()
    vectors: dict[int, tuple[int, ...]] = {}
    lists: dict[int, frozenset[int]] = {}
    comments: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        kind, *rest = line.split()
        if kind == "c":
            comments.append(line[1:].strip())
            continue
        if kind == "p":
            if header is not None:
                raise FormatError("second header line", lineno)
            if len(rest) != 4 or rest[0] != "digraph":
                raise FormatError("header must be 'p digraph <n> <m> <p>'", lineno)
            n, m, p = _ints(rest[1:], lineno)
            if n < 0 or m < 0 or p < 0:
                raise FormatError("header values must be non-negative", lineno)
            header = (n, m, p)
            continue
        if header is None:
            raise FormatError(f"'{kind}' line before the header", lineno)
        n, m, p = header
        if kind == "a":
            if len(rest) != 2:
                raise FormatError("arc line must be 'a <u> <v>'", lineno)
            u, v = (_vertex(x, n, lineno) for x in _ints(rest, lineno))
            if u == v:
                raise FormatError(f"loop at vertex {u + 1}", lineno)
            if (u, v) in seen_arcs:
                raise FormatError(f"duplicate arc {u + 1} {v + 1}", lineno)
            seen_arcs.add((u, v))
            arcs.append((u, v))
        elif kind == "f":
            vals = _ints(rest, lineno)
            if not vals:
                raise FormatError("function line needs a vertex", lineno)
            v = _vertex(vals[0], n, lineno)
            if len(vals) - 1 != p:
                raise FormatError(f"vector of length {len(vals) - 1}, expected p = {p}", lineno)
            if any(x < 0 for x in vals[1:]):
                raise FormatError("function values must be non-negative", lineno)
            if v in vectors:
                raise FormatError(f"second vector for vertex {v + 1}", lineno)
            vectors[v] = tuple(vals[1:])
        elif kind == "l":
            vals = _ints(rest, lineno)
            if not vals:
                raise FormatError("list line needs a vertex", lineno)
            v = _vertex(vals[0], n, lineno)
            cols = vals[1:]
            bad = [c for c in cols if not 1 <= c <= p]
            if bad:
                raise FormatError(f"colours {bad} outside 1..{p}", lineno)
            if len(set(cols)) != len(cols):
                raise FormatError("repeated colour in list", lineno)
            if v in lists:
                raise FormatError(f"second list for vertex {v + 1}", lineno)
            lists[v] = frozenset(cols)
        else:
            raise FormatError(f"unknown line type '{kind}'", lineno)
    if header is None:
        raise FormatError("missing header 'p digraph <n> <m> <p>'")
    n, m, p = header
    if len(arcs) != m:
        raise FormatError(f"header announces {m} arcs, found {len(arcs)}")
    if vectors and lists:
        raise FormatError("an instance has either function lines or list lines, not both")
    D = Digraph(n, arcs)
    f = None
    L = None
    if vectors:
        missing = [v + 1 for v in range(n) if v not in vectors]
        if missing:
            raise FormatError(f"no function line for vertices {missing}")
        if p < 1:
            raise FormatError("function lines need p >= 1")
        f = VectorFunction([vectors[v] for v in range(n)], p=p)
    elif lists:
        L = ListAssignment([lists.get(v, frozenset()) for v in range(n)], universe=range(1, p + 1))
    return Instance(D, p, f, L, tuple(comments))


def render_instance(inst: Instance) -> str:
    D = inst.D
    lines = [f"c {c}" if c else "c" for c in inst.comments]
    lines.append(f"p digraph {D.n} {len(D.arcs)} {inst.p}")
    lines.extend(f"a {u + 1} {v + 1}" for u, v in sorted(D.arcs))
    if inst.f is not None:
        lines.extend(
            f"f {v + 1} " + " ".join(str(x) for x in inst.f[v]) for v in range(D.n)
        )
    if inst.lists is not None:
        for v in range(D.n):
            cols = " ".join(str(c) for c in sorted(inst.lists[v]))
            lines.append(f"l {v + 1} {cols}".rstrip())
    return "\n".join(lines) + "\n"


# -- partitions and certificates ------------------------------------------------


def render_partition(P: Partition, n: int) -> list[str]:
    lines = [f"s partition {n} {P.p}"]
    lines.extend(f"v {v + 1} {c + 1}" for v, c in sorted(P.class_of.items()))
    return lines


def render_certificate(cert: HardPairCertificate) -> list[str]:
    lines = [f"s certificate {cert.p} {len(cert.blocks)}"]
    for i, b in enumerate(cert.blocks, start=1):
        t = b.type
        params = t.params if t.kind == "K" else tuple(x + 1 for x in t.params)
        lines.append(f"b {i} {t.kind} " + " ".join(str(x) for x in params))
        for v, vec in zip(b.vertices, b.values):
            lines.append(f"g {i} {v + 1} " + " ".join(str(x) for x in vec))
    lines.extend(f"e {c + 1} {a + 1} {b + 1}" for c, a, b in cert.merges)
    return lines


def partition_to_dict(P: Partition) -> dict[str, Any]:
    return {"p": P.p, "classes": [[v + 1, c + 1] for v, c in sorted(P.class_of.items())]}


def certificate_to_dict(cert: HardPairCertificate) -> dict[str, Any]:
    blocks = []
    for b in cert.blocks:
        t = b.type
        blocks.append(
            {
                "type": t.kind,
                "params": list(t.params) if t.kind == "K" else [x + 1 for x in t.params],
                "vertices": [v + 1 for v in b.vertices],
                "f_B": [list(vec) for vec in b.values],
            }
        )
    merges = [[c + 1, a + 1, b + 1] for c, a, b in cert.merges]
    return {"p": cert.p, "blocks": blocks, "merges": merges}


def partition_from_dict(data: dict[str, Any]) -> Partition:
    return Partition(int(data["p"]), {int(v) - 1: int(c) - 1 for v, c in data["classes"]})


def _block_type(kind: str, params: list[int]) -> BlockType:
    if kind == "K":
        return BlockType("K", tuple(params))
    if kind in ("M", "C"):
        return BlockType(kind, tuple(x - 1 for x in params))
    raise ValueError(f"unknown block type {kind!r}")


def certificate_from_dict(data: dict[str, Any]) -> HardPairCertificate:
    blocks = []
    for b in data["blocks"]:
        blocks.append(
            CertificateBlock(
                tuple(int(v) - 1 for v in b["vertices"]),
                tuple(tuple(int(x) for x in vec) for vec in b["f_B"]),
                _block_type(b["type"], [int(x) for x in b["params"]]),
            )
        )
    merges = tuple((int(c) - 1, int(a) - 1, int(b) - 1) for c, a, b in data["merges"])
    return HardPairCertificate(int(data["p"]), tuple(blocks), merges)


@dataclass(frozen=True)
class Artifacts:
    """Partitions and certificates found in a partition file or report."""

    partitions: tuple[Partition, ...]
    certificates: tuple[HardPairCertificate, ...]


def parse_artifacts(text: str) -> Artifacts:
    """Read partitions/certificates from a text file or a structured report."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e}") from None
        try:
            parts = []
            certs = []
            if data.get("partition") is not None:
                parts.append(partition_from_dict(data["partition"]))
            for comp in data.get("components", []):
                if "certificate" in comp:
                    certs.append(certificate_from_dict(comp["certificate"]))
                elif "partition" in comp and data.get("partition") is None:
                    parts.append(partition_from_dict(comp["partition"]))
            return Artifacts(tuple(parts), tuple(certs))
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"malformed report: {e}") from None
    return _parse_text_artifacts(text)


def _parse_text_artifacts(text: str) -> Artifacts:
    parts: list[Partition] = []
    certs: list[HardPairCertificate] = []
    current: Optional[str] = None
    p = 0
    class_of: dict[int, int] = {}
    btypes: dict[int, BlockType] = {}
    bvals: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    merges: list[tuple[int, int, int]] = []

    def flush() -> None:
        nonlocal class_of, btypes, bvals, merges
        if current == "partition":
            parts.append(Partition(p, dict(class_of)))
        elif current == "certificate":
            blocks = []
            for i in sorted(btypes):
                rows = sorted(bvals.get(i, []))
                blocks.append(
                    CertificateBlock(tuple(v for v, _ in rows), tuple(x for _, x in rows), btypes[i])
                )
            certs.append(HardPairCertificate(p, tuple(blocks), tuple(merges)))
        class_of, btypes, bvals, merges = {}, {}, {}, []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "r")):
            continue
        kind, *rest = line.split()
        try:
            if kind == "s":
                flush()
                current = rest[0]
                if current == "partition":
                    p = int(rest[2])
                elif current == "certificate":
                    p = int(rest[1])
                else:
                    raise FormatError(f"unknown section '{current}'", lineno)
            elif kind == "v" and current == "partition":
                v, c = _ints(rest, lineno)
                class_of[v - 1] = c - 1
            elif kind == "b" and current == "certificate":
                btypes[int(rest[0]) - 1] = _block_type(rest[1], _ints(rest[2:], lineno))
            elif kind == "g" and current == "certificate":
                vals = _ints(rest, lineno)
                bvals.setdefault(vals[0] - 1, []).append((vals[1] - 1, tuple(vals[2:])))
            elif kind == "e" and current == "certificate":
                c, a, b = _ints(rest, lineno)
                merges.append((c - 1, a - 1, b - 1))
            else:
                raise FormatError(f"unexpected '{kind}' line", lineno)
        except (IndexError, ValueError) as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(str(e) or "malformed line", lineno) from None
    flush()
    return Artifacts(tuple(parts), tuple(certs))


# -- reports --------------------------------------------------------------------


def _text_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(_text_value(x) for x in value)
    return str(value)


def render_report(report: dict[str, Any], fmt: str = "text") -> str:
    """Serialise a report dict.

    Structured output is JSON with keys in insertion order. Text output lists
    scalar fields as ``r key value`` lines followed by any partition and
    certificate sections.
    """
    if fmt == "structured":
        return json.dumps(report, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    for key, value in report.items():
        if key in ("partition", "components"):
            continue
        if isinstance(value, dict):
            for k2, v2 in value.items():
                lines.append(f"r {key}.{k2} {_text_value(v2)}")
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            for k, item in enumerate(value, start=1):
                lines.append(f"r {key}.{k} {json.dumps(item, separators=(',', ':'))}")
        else:
            lines.append(f"r {key} {_text_value(value)}")
    if report.get("partition") is not None:
        P = partition_from_dict(report["partition"])
        lines.extend(render_partition(P, report.get("n", len(P.class_of))))
    for comp in report.get("components", []):
        if "certificate" in comp:
            lines.extend(render_certificate(certificate_from_dict(comp["certificate"])))
        elif "partition" in comp and report.get("partition") is None:
            P = partition_from_dict(comp["partition"])
            lines.extend(render_partition(P, report.get("n", len(P.class_of))))
    return "\n".join(lines) + "\n"
