"""Lattice files and deterministic text reports.

A lattice file is a UTF-8 JSON object::

    {"format_version": "1.0", "p": 3, "n": 1, "rank": 3,
     "action": [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]],
     "label": "Z[G/G0]", "provenance": "hand written"}

Matrix entries are decimal strings (plain JSON integers are accepted too).
The action is re-verified on load.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import (
    FileSyntaxError,
    InvalidLattice,
    OracleMismatch,
    ValidationError,
    VersionError,
)
from .exact_linalg import IntMatrix
from .lattice import Lattice, c_value, character_profile, max_free_rank
from .modrep import kappa as kappa_count
from .modrep import kernel_type, min_gens
from .tate import FModule, h0_hat, h1
from .yakovlev import YakovlevDiagram, build_diagram

FORMAT_VERSION = "1.0"
SUPPORTED_MAJOR = "1"
REQUIRED_FIELDS = ("format_version", "p", "n", "rank", "action")
OPTIONAL_FIELDS = ("label", "provenance")


def _as_int(value: Any, field: str) -> int:
    if isinstance(value, bool):
        raise ValidationError("expected an integer, got a boolean", field)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        body = text[1:] if text[:1] in "+-" else text
        if body.isdigit() and body.isascii():
            return int(text)
    raise ValidationError(f"expected a decimal integer, got {value!r}", field)


def parse_lattice(data: bytes | str, strict: bool = False) -> Lattice:
    """Parse and validate a lattice file."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FileSyntaxError(f"invalid UTF-8: {exc.reason}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise FileSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ValidationError("top level must be a JSON object")
    for name in REQUIRED_FIELDS:
        if name not in doc:
            raise ValidationError("missing required field", name)
    unknown = sorted(set(doc) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS))
    if strict and unknown:
        raise ValidationError(f"unknown field(s) {', '.join(unknown)}", unknown[0])
    version = doc["format_version"]
    if not isinstance(version, str) or version.split(".")[0] != SUPPORTED_MAJOR:
        raise VersionError(f"unsupported format_version {version!r}; expected {FORMAT_VERSION}")
    p = _as_int(doc["p"], "p")
    n = _as_int(doc["n"], "n")
    rank = _as_int(doc["rank"], "rank")
    action = doc["action"]
    if not isinstance(action, list) or len(action) != rank:
        raise ValidationError(f"expected {rank} rows", "action")
    rows = []
    for r, row in enumerate(action):
        if not isinstance(row, list) or len(row) != rank:
            raise ValidationError(f"row {r} must have {rank} entries", "action")
        rows.append([_as_int(x, f"action[{r}][{c}]") for c, x in enumerate(row)])
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ValidationError("expected a string", "label")
    try:
        return Lattice(p, n, IntMatrix(rows, rank), label=label)
    except InvalidLattice as exc:
        raise ValidationError(str(exc), "action") from None


def serialize_lattice(M: Lattice, provenance: str | None = None) -> str:
    """Canonical lattice file text; parse followed by serialize is idempotent."""
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "p": M.p,
        "n": M.n,
        "rank": M.rank,
        "action": [[str(x) for x in row] for row in M.action.rows],
    }
    if M.label:
        doc["label"] = M.label
    if provenance:
        doc["provenance"] = provenance
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_lattice(path: str, strict: bool = False) -> Lattice:
    with open(path, "rb") as fh:
        return parse_lattice(fh.read(), strict=strict)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _matrix_text(A: IntMatrix) -> str:
    if A.nrows == 0 or A.ncols == 0:
        return f"[] ({A.nrows}x{A.ncols})"
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in A.rows) + "]"


def _fixed_by(M: FModule, power: int) -> IntMatrix:
    return M.action_power(power) - IntMatrix.identity(M.rank)


def diagram_statistics(D: YakovlevDiagram) -> list[str]:
    """Per-level counts feeding the refined counting bound."""
    p, n = D.p, D.n
    lines = []
    for i, M in enumerate(D.modules, start=1):
        fixed = kernel_type(M, _fixed_by(M, 1)) if M.rank else None
        v_fixed = fixed.v_p if fixed else 0
        gamma = min_gens(M) if M.rank else 0
        kappa = "-"
        if M.rank == 0:
            kappa = "0"
        elif M.group.exponent == p:
            kappa = str(kappa_count(M))
        lines.append(f"  M{i}: rk_p={M.group.rank} v_p={M.group.v_p} v_p(fixed)={v_fixed} "
                     f"gamma={gamma} kappa={kappa}")
        if gamma > v_fixed:
            raise OracleMismatch(f"generator count exceeds v_p of the fixed part at level {i}")
    for i in range(1, n):
        Mi, Mj = D.module(i), D.module(i + 1)
        gi = min_gens(Mi) if Mi.rank else 0
        gj = min_gens(Mj) if Mj.rank else 0
        res_order = kernel_type(Mi, _fixed_by(Mi, p ** (n - i - 1))).order if Mi.rank else 1
        tors = (kernel_type(Mj, IntMatrix.identity(Mj.rank).scale(p ** i)).order
                if Mj.rank else 1)
        lines.append(f"  restriction maps {i + 1}->{i}: <= {res_order}^{gj} = {res_order ** gj}")
        lines.append(f"  corestriction maps {i}->{i + 1}: <= {tors}^{gi} = {tors ** gi}")
    return lines


def run_pipeline(M: Lattice, source: str = "<input>", seed: int = 0) -> str:
    """Full deterministic report for one lattice."""
    lines = ["pcyclic report", f"source: {source}", f"seed: {seed}",
             f"p={M.p} n={M.n} rank={M.rank} label={M.label or '-'}",
             f"action: {_matrix_text(M.action)}"]
    profile = character_profile(M)
    lines.append("character profile (kernel Gamma_0..Gamma_n): "
                 + " ".join(str(m) for m in profile.multiplicities))
    lines.append("cohomology:")
    for i in range(1, M.n + 1):
        H1 = h1(M, i).module
        H0 = h0_hat(M, i).module
        lines.append(f"  level {i}: H1 = {H1.group}; H0hat = {H0.group}; "
                     f"c = {c_value(M, i)}; free rank = {max_free_rank(M, i).rank}")
    D = build_diagram(M)
    lines.append("diagram (axioms checked):")
    lines.extend("  " + line for line in D.serialize().splitlines())
    lines.append("diagram statistics:")
    lines.extend(diagram_statistics(D))
    return "\n".join(lines) + "\n"
