"""File formats bridging real pipelines into the engine.

All CSV files share one dialect: UTF-8, LF line endings, comma separator,
no quoting (ids are restricted to ``[A-Za-z0-9_.-]+`` so none is needed).
Parsers are strict and report offending line numbers; writers produce
byte-stable output so equal inputs yield equal files.
"""
from __future__ import annotations

import json
import re
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evaluation import EvalReport, HistogramExport, PRCurve
from .identity import DatasetSpec
from .neighbors import EmbeddingSet

PREDICTION_HEADER = ["sample_id", "predicted_identity"]
MANIFEST_HEADER = ["identity_id", "in_train", "in_biased_subset", "samples"]
EMBEDDING_MAGIC = b"GLKE"

_SAMPLE_ID_RE = re.compile(r"^[A-Za-z0-9_.-]+$")


class FormatError(ValueError):
    """A file violated its schema; the message carries the line number."""


@dataclass(frozen=True)
class PredictionLog:
    """Ordered classifier outputs loaded from disk.

    Confidence values are parsed when the column exists but ignored by the
    counting attack; they are retained for downstream tooling.
    """

    path: str
    sample_ids: tuple[str, ...]
    predictions: np.ndarray  # int64
    confidences: tuple[float | None, ...] | None

    @property
    def row_count(self) -> int:
        return len(self.sample_ids)


def _read_lines(path: str | Path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _check_sample_id(value: str, lineno: int) -> str:
    if not _SAMPLE_ID_RE.match(value):
        raise FormatError(f"line {lineno}: invalid sample id {value!r}")
    return value


def load_prediction_log(path: str | Path) -> PredictionLog:
    """Parse a prediction log CSV (``sample_id,predicted_identity[,confidence]``)."""
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty file, expected header {','.join(PREDICTION_HEADER)}")
    header = lines[0].split(",")
    with_conf = header == PREDICTION_HEADER + ["confidence"]
    if not with_conf and header != PREDICTION_HEADER:
        raise FormatError(
            f"line 1: bad header {lines[0]!r}, expected "
            f"{','.join(PREDICTION_HEADER)}[,confidence]"
        )
    sample_ids: list[str] = []
    predictions: list[int] = []
    confidences: list[float | None] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise FormatError(f"line {lineno}: expected {len(header)} fields, got {len(fields)}")
        sample_ids.append(_check_sample_id(fields[0], lineno))
        try:
            predictions.append(int(fields[1]))
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer identity {fields[1]!r}") from None
        if with_conf:
            if fields[2] == "":
                confidences.append(None)
            else:
                try:
                    c = float(fields[2])
                except ValueError:
                    raise FormatError(f"line {lineno}: bad confidence {fields[2]!r}") from None
                if not 0.0 <= c <= 1.0:
                    raise FormatError(f"line {lineno}: confidence {c} outside [0, 1]")
                confidences.append(c)
    return PredictionLog(
        path=str(path),
        sample_ids=tuple(sample_ids),
        predictions=np.array(predictions, dtype=np.int64),
        confidences=tuple(confidences) if with_conf else None,
    )


def write_prediction_log(
    path: str | Path,
    sample_ids: list[str],
    predictions: list[int] | np.ndarray,
    confidences: list[float | None] | None = None,
) -> None:
    header = ",".join(PREDICTION_HEADER + (["confidence"] if confidences is not None else []))
    lines = [header]
    for i, (sid, pred) in enumerate(zip(sample_ids, predictions)):
        row = f"{sid},{int(pred)}"
        if confidences is not None:
            row += "," + (repr(confidences[i]) if confidences[i] is not None else "")
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_membership_manifest(path: str | Path) -> DatasetSpec:
    """Parse experimenter-side ground truth into a dataset spec.

    The manifest must list every identity of the pool exactly once with
    dense ids; members carry their training sample counts, non-members
    must have zero.
    """
    lines = _read_lines(path)
    if not lines or lines[0].split(",") != MANIFEST_HEADER:
        raise FormatError(
            f"line 1: bad header {(lines[0] if lines else '')!r}, expected "
            f"{','.join(MANIFEST_HEADER)}"
        )
    seen: dict[int, tuple[int, int, int]] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != 4:
            raise FormatError(f"line {lineno}: expected 4 fields, got {len(fields)}")
        try:
            identity, in_train, in_biased, samples = (int(f) for f in fields)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field in {line!r}") from None
        if in_train not in (0, 1) or in_biased not in (0, 1):
            raise FormatError(f"line {lineno}: flags must be 0 or 1")
        if identity in seen:
            raise FormatError(f"line {lineno}: duplicate identity {identity}")
        if in_biased and not in_train:
            raise FormatError(
                f"line {lineno}: identity {identity} flagged biased but not in training set"
            )
        if in_train and samples < 1:
            raise FormatError(f"line {lineno}: member {identity} needs samples >= 1")
        if not in_train and samples != 0:
            raise FormatError(f"line {lineno}: non-member {identity} must have samples = 0")
        seen[identity] = (in_train, in_biased, samples)
    if not seen:
        raise FormatError("manifest has no identity rows")
    if set(seen) != set(range(len(seen))):
        raise FormatError(f"identity ids must be dense in [0, {len(seen)})")
    members = frozenset(y for y, (t, _, _) in seen.items() if t)
    biased = frozenset(y for y, (_, b, _) in seen.items() if b)
    return DatasetSpec(
        yf_size=len(seen),
        members=members,
        samples_per_identity={y: seen[y][2] for y in members},
        biased_members=biased if biased else None,
    )


def write_membership_manifest(spec: DatasetSpec, path: str | Path) -> None:
    biased = spec.biased_members or frozenset()
    lines = [",".join(MANIFEST_HEADER)]
    for y in range(spec.yf_size):
        lines.append(
            f"{y},{int(y in spec.members)},{int(y in biased)},"
            f"{spec.samples_per_identity.get(y, 0)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# report serialization
# --------------------------------------------------------------------------

def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


def eval_report_to_dict(report: EvalReport) -> dict:
    return {
        "lambda": report.lam,
        "threshold": report.threshold,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f1,
        "baseline": report.baseline,
        "mode": report.mode,
        "seed": report.seed,
        "positives_count": report.positives_count,
        "truth_size": report.truth_size,
    }


def eval_report_from_dict(data: dict) -> EvalReport:
    return EvalReport(
        threshold=data["threshold"],
        precision=data["precision"],
        recall=data["recall"],
        f1=data["f1"],
        positives_count=data["positives_count"],
        truth_size=data["truth_size"],
        mode=data["mode"],
        lam=data["lambda"],
        baseline=data["baseline"],
        seed=data["seed"],
    )


def write_report(
    report: EvalReport | PRCurve | HistogramExport, path: str | Path, format: str = "json"
) -> None:
    """Serialize a report with stable field ordering (json or csv)."""
    if format not in ("json", "csv"):
        raise ValueError(f"unknown format {format!r}")
    path = Path(path)
    if isinstance(report, EvalReport):
        data = eval_report_to_dict(report)
        if format == "json":
            path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        else:
            keys = list(data)
            values = [_fmt(v) if isinstance(v, float) or v is None else str(v) for v in data.values()]
            path.write_text(",".join(keys) + "\n" + ",".join(values) + "\n", encoding="utf-8")
    elif isinstance(report, PRCurve):
        if format == "json":
            data = {
                "mode": report.mode,
                "baseline": report.baseline,
                "points": [
                    {"threshold": t, "precision": p, "recall": r} for t, p, r in report.points
                ],
            }
            path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        else:
            lines = ["threshold,precision,recall"]
            lines += [f"{t},{_fmt(p)},{repr(r)}" for t, p, r in report.points]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif isinstance(report, HistogramExport):
        if format == "json":
            data = {
                "rows": [
                    {"identity_id": y, "count": c, "is_member": int(m), "is_biased": int(b)}
                    for y, c, m, b in report.rows
                ]
            }
            path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        else:
            lines = ["identity_id,count,is_member,is_biased"]
            lines += [f"{y},{c},{int(m)},{int(b)}" for y, c, m, b in report.rows]
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise TypeError(f"unsupported report type {type(report).__name__}")


def read_eval_report(path: str | Path, format: str = "json") -> EvalReport:
    if format == "json":
        return eval_report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
    lines = _read_lines(path)
    if len(lines) != 2:
        raise FormatError(f"{path}: expected header plus one row")
    keys = lines[0].split(",")
    raw = lines[1].split(",")
    data: dict = {}
    for key, value in zip(keys, raw):
        if key in ("threshold", "positives_count", "truth_size", "lambda"):
            data[key] = int(value) if value != "" else None
        elif key in ("precision", "recall", "f1", "baseline"):
            data[key] = float(value) if value != "" else None
        elif key == "seed":
            data[key] = None if value == "" else (int(value) if value.lstrip("-").isdigit() else value)
        else:
            data[key] = value
    return eval_report_from_dict(data)


def read_pr_curve(path: str | Path, format: str = "json") -> PRCurve:
    if format == "json":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        points = tuple(
            (p["threshold"], p["precision"], p["recall"]) for p in data["points"]
        )
        return PRCurve(points=points, mode=data["mode"], baseline=data["baseline"])
    lines = _read_lines(path)
    if not lines or lines[0] != "threshold,precision,recall":
        raise FormatError(f"{path}: bad header, expected threshold,precision,recall")
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        t, p, r = line.split(",")
        points.append((int(t), float(p) if p != "" else None, float(r)))
    return PRCurve(points=tuple(points))


def read_histogram(path: str | Path, format: str = "csv") -> HistogramExport:
    if format == "json":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        rows = tuple(
            (r["identity_id"], r["count"], bool(r["is_member"]), bool(r["is_biased"]))
            for r in data["rows"]
        )
        return HistogramExport(rows=rows)
    lines = _read_lines(path)
    if not lines or lines[0] != "identity_id,count,is_member,is_biased":
        raise FormatError(f"{path}: bad header, expected identity_id,count,is_member,is_biased")
    rows = []
    for line in lines[1:]:
        y, c, m, b = line.split(",")
        rows.append((int(y), int(c), bool(int(m)), bool(int(b))))
    return HistogramExport(rows=tuple(rows))


def write_nn_manifest(rows: list[tuple[str, int, str, float, bool]], path: str | Path) -> None:
    """Contact-sheet rows: ``query_id,rank,neighbor_id,distance_sq,truncated``."""
    lines = ["query_id,rank,neighbor_id,distance_sq,truncated"]
    lines += [f"{q},{rank},{n},{repr(d)},{int(trunc)}" for q, rank, n, d, trunc in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_nn_manifest(path: str | Path) -> list[tuple[str, int, str, float, bool]]:
    lines = _read_lines(path)
    if not lines or lines[0] != "query_id,rank,neighbor_id,distance_sq,truncated":
        raise FormatError(f"{path}: bad header for a contact-sheet manifest")
    rows = []
    for line in lines[1:]:
        q, rank, n, d, trunc = line.split(",")
        rows.append((q, int(rank), n, float(d), bool(int(trunc))))
    return rows


# --------------------------------------------------------------------------
# embedding files: CSV or the GLKE binary layout
# --------------------------------------------------------------------------

def load_embeddings(path: str | Path) -> EmbeddingSet:
    """Load an embedding file, auto-detecting binary vs CSV by magic bytes."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == EMBEDDING_MAGIC:
        return load_embeddings_binary(path)
    return load_embeddings_csv(path)


def load_embeddings_csv(path: str | Path) -> EmbeddingSet:
    """CSV form: ``sample_id,identity_id,v0,...,v{dim-1}`` with decimal floats."""
    lines = _read_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty embedding file")
    header = lines[0].split(",")
    if header[:2] != ["sample_id", "identity_id"] or len(header) < 3:
        raise FormatError(f"line 1: bad header, expected sample_id,identity_id,v0,...")
    dim = len(header) - 2
    expected = ["sample_id", "identity_id"] + [f"v{i}" for i in range(dim)]
    if header != expected:
        raise FormatError(f"line 1: vector columns must be v0..v{dim - 1} in order")
    entries: list[tuple[str, int, np.ndarray]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != dim + 2:
            raise FormatError(f"line {lineno}: expected {dim + 2} fields, got {len(fields)}")
        sid = _check_sample_id(fields[0], lineno)
        try:
            identity = int(fields[1])
            vector = np.array([float(v) for v in fields[2:]], dtype=np.float64)
        except ValueError:
            raise FormatError(f"line {lineno}: malformed numeric field") from None
        entries.append((sid, identity, vector))
    return EmbeddingSet.from_entries(entries)


def write_embeddings_csv(embeddings: EmbeddingSet, path: str | Path) -> None:
    header = ["sample_id", "identity_id"] + [f"v{i}" for i in range(embeddings.dim)]
    lines = [",".join(header)]
    for i, sid in enumerate(embeddings.sample_ids):
        vec = ",".join(repr(float(v)) for v in embeddings.vectors[i])
        lines.append(f"{sid},{int(embeddings.identities[i])},{vec}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_embeddings_binary(path: str | Path) -> EmbeddingSet:
    """Binary form: magic ``GLKE``, then little-endian u32 version=1, u32 dim,
    u32 entry count, and per entry u32 id length, the UTF-8 id bytes, u32
    identity id, and dim float32 values.
    """
    blob = Path(path).read_bytes()
    if blob[:4] != EMBEDDING_MAGIC:
        raise FormatError(f"{path}: bad magic {blob[:4]!r}, expected {EMBEDDING_MAGIC!r}")
    offset = 4
    try:
        version, dim, count = struct.unpack_from("<III", blob, offset)
        offset += 12
        if version != 1:
            raise FormatError(f"{path}: unsupported version {version}")
        entries: list[tuple[str, int, np.ndarray]] = []
        for i in range(count):
            (id_len,) = struct.unpack_from("<I", blob, offset)
            offset += 4
            sid = blob[offset : offset + id_len].decode("utf-8")
            offset += id_len
            (identity,) = struct.unpack_from("<I", blob, offset)
            offset += 4
            vector = np.frombuffer(blob, dtype="<f4", count=dim, offset=offset).astype(np.float64)
            offset += 4 * dim
            entries.append((sid, identity, vector))
    except (struct.error, ValueError):
        raise FormatError(f"{path}: truncated or corrupt embedding file") from None
    if offset != len(blob):
        raise FormatError(f"{path}: {len(blob) - offset} trailing bytes")
    return EmbeddingSet.from_entries(entries)


def write_embeddings_binary(embeddings: EmbeddingSet, path: str | Path) -> None:
    parts = [EMBEDDING_MAGIC, struct.pack("<III", 1, embeddings.dim, len(embeddings))]
    for i, sid in enumerate(embeddings.sample_ids):
        raw = sid.encode("utf-8")
        parts.append(struct.pack("<I", len(raw)))
        parts.append(raw)
        parts.append(struct.pack("<I", int(embeddings.identities[i])))
        parts.append(embeddings.vectors[i].astype("<f4").tobytes())
    Path(path).write_bytes(b"".join(parts))
