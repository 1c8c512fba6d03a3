"""Dataset ingestion, validation, and the persistent run ledger.

A dataset manifest is a UTF-8 line-delimited JSON file (one video entry per
line) plus a small JSON header carrying the dataset name and schema version.
``load_manifest`` accepts either the header path or a bare ``.jsonl`` file;
in the latter case the header defaults are synthesized from the filename.

The run ledger stores one JSON document per run under
``<store_dir>/runs/<run_id>.json``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import A11yBenchError, MissingFile

SCHEMA_VERSION = 1

ENTRY_KEYS = {"id", "video_path", "environment", "human_annotations", "ground_truth"}


class ManifestError(A11yBenchError):
    """Base class for manifest loading/validation failures."""


class ParseError(ManifestError):
    """Malformed document; message carries the file and line locus."""


class DuplicateId(ManifestError):
    pass


class UnknownEnvironment(ManifestError):
    pass


class UnsupportedSchema(ManifestError):
    pass


class DuplicateRunId(A11yBenchError):
    pass


class Environment(str, Enum):
    INDOOR = "indoor"
    OUTDOOR = "outdoor"


@dataclass(frozen=True)
class VideoEntry:
    """One dataset video with its human annotations and environment tag."""

    id: str
    video_path: str
    environment: Environment
    human_annotations: List[str] = field(default_factory=list)
    ground_truth: Optional[str] = None

    def to_json_obj(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "video_path": self.video_path,
            "environment": self.environment.value,
            "human_annotations": list(self.human_annotations),
            "ground_truth": self.ground_truth,
        }


@dataclass
class DatasetManifest:
    name: str
    entries: List[VideoEntry]
    schema_version: int = SCHEMA_VERSION

    def by_id(self, video_id: str) -> VideoEntry:
        for entry in self.entries:
            if entry.id == video_id:
                return entry
        raise KeyError(video_id)

    def environment_counts(self) -> Dict[str, int]:
        counts = {env.value: 0 for env in Environment}
        for entry in self.entries:
            counts[entry.environment.value] += 1
        return counts

    def missing_ground_truth(self) -> List[str]:
        """Ids of entries that cannot be scored because ground_truth is absent."""
        return [e.id for e in self.entries if not e.ground_truth]


def _parse_entry(obj: Any, locus: str) -> VideoEntry:
    if not isinstance(obj, dict):
        raise ParseError(f"{locus}: entry must be a JSON object, got {type(obj).__name__}")
    missing = ENTRY_KEYS - {"ground_truth", "human_annotations"} - set(obj)
    if missing:
        raise ParseError(f"{locus}: missing keys {sorted(missing)}")
    unknown = set(obj) - ENTRY_KEYS
    if unknown:
        raise ParseError(f"{locus}: unknown keys {sorted(unknown)}")

    vid = obj["id"]
    if not isinstance(vid, str) or not vid:
        raise ParseError(f"{locus}: id must be a non-empty string")
    if not isinstance(obj["video_path"], str) or not obj["video_path"]:
        raise ParseError(f"{locus}: video_path must be a non-empty string")

    env_raw = obj["environment"]
    try:
        environment = Environment(env_raw)
    except ValueError:
        raise UnknownEnvironment(
            f"{locus}: environment must be one of "
            f"{[e.value for e in Environment]}, got {env_raw!r}"
        ) from None

    annotations = obj.get("human_annotations", [])
    if not isinstance(annotations, list) or any(not isinstance(a, str) for a in annotations):
        raise ParseError(f"{locus}: human_annotations must be a list of strings")

    ground_truth = obj.get("ground_truth")
    if ground_truth is not None and not isinstance(ground_truth, str):
        raise ParseError(f"{locus}: ground_truth must be a string or null")

    return VideoEntry(
        id=vid,
        video_path=obj["video_path"],
        environment=environment,
        human_annotations=annotations,
        ground_truth=ground_truth,
    )


def _load_entries(jsonl_path: Path) -> List[VideoEntry]:
    entries: List[VideoEntry] = []
    seen: set[str] = set()
    with jsonl_path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            locus = f"{jsonl_path.name}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{locus}: invalid JSON ({exc.msg})") from exc
            entry = _parse_entry(obj, locus)
            if entry.id in seen:
                raise DuplicateId(f"{locus}: duplicate id {entry.id!r}")
            seen.add(entry.id)
            entries.append(entry)
    return entries


def load_manifest(path: str | Path) -> DatasetManifest:
    """Load and validate a manifest from a header .json or a bare .jsonl file.

    Validation is total: any malformed input raises a typed error and no
    partial manifest escapes.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"manifest not found: {path}")

    if path.suffix == ".jsonl":
        name = path.stem
        schema_version = SCHEMA_VERSION
        entries_path = path
    else:
        try:
            header = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path.name}: invalid JSON header ({exc.msg})") from exc
        if not isinstance(header, dict):
            raise ParseError(f"{path.name}: header must be a JSON object")
        name = header.get("name")
        if not isinstance(name, str) or not name:
            raise ParseError(f"{path.name}: header needs a non-empty 'name'")
        schema_version = header.get("schema_version", SCHEMA_VERSION)
        if schema_version != SCHEMA_VERSION:
            raise UnsupportedSchema(
                f"{path.name}: schema_version {schema_version} not supported "
                f"(expected {SCHEMA_VERSION})"
            )
        rel = header.get("entries")
        if not isinstance(rel, str) or not rel:
            raise ParseError(f"{path.name}: header needs an 'entries' path")
        entries_path = path.parent / rel
        if not entries_path.is_file():
            raise MissingFile(f"entries file not found: {entries_path}")

    entries = _load_entries(entries_path)
    if not entries:
        raise ParseError(f"{entries_path.name}: manifest has no entries")
    return DatasetManifest(name=name, entries=entries, schema_version=schema_version)


def save_manifest(manifest: DatasetManifest, header_path: str | Path) -> Path:
    """Write header + .jsonl next to it; returns the header path.

    ``load_manifest(save_manifest(m))`` is identity on valid manifests.
    """
    header_path = Path(header_path)
    header_path.parent.mkdir(parents=True, exist_ok=True)
    entries_name = header_path.stem + ".jsonl"
    lines = [json.dumps(e.to_json_obj(), sort_keys=True) for e in manifest.entries]
    (header_path.parent / entries_name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    header = {
        "name": manifest.name,
        "schema_version": manifest.schema_version,
        "entries": entries_name,
    }
    header_path.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return header_path


def config_digest(config: Any) -> str:
    """SHA-256 over a canonical (sorted-key, whitespace-normalized) serialization.

    Deterministic across platforms for identical configuration content.
    """
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class RunRecord:
    """One pipeline run: identity, config hash, and artifact locations."""

    run_id: str
    created_at: str
    config_digest: str
    stage_outputs: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def new(cls, run_id: str, config: Any) -> "RunRecord":
        return cls(
            run_id=run_id,
            created_at=datetime.now(timezone.utc).isoformat(),
            config_digest=config_digest(config),
        )

    def to_json_obj(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "created_at": self.created_at,
            "config_digest": self.config_digest,
            "stage_outputs": dict(self.stage_outputs),
        }


def record_run(run: RunRecord, store_dir: str | Path, overwrite: bool = False) -> str:
    """Persist a run record; re-reading yields a field-for-field equal record."""
    runs_dir = Path(store_dir) / "runs"
    runs_dir.mkdir(parents=True, exist_ok=True)
    out = runs_dir / f"{run.run_id}.json"
    if out.exists() and not overwrite:
        raise DuplicateRunId(f"run {run.run_id!r} already recorded at {out}")
    out.write_text(json.dumps(run.to_json_obj(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return run.run_id


def read_run(run_id: str, store_dir: str | Path) -> RunRecord:
    path = Path(store_dir) / "runs" / f"{run_id}.json"
    if not path.is_file():
        raise MissingFile(f"run record not found: {path}")
    obj = json.loads(path.read_text(encoding="utf-8"))
    return RunRecord(
        run_id=obj["run_id"],
        created_at=obj["created_at"],
        config_digest=obj["config_digest"],
        stage_outputs=dict(obj["stage_outputs"]),
    )
