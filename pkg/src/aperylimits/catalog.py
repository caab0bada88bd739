"""Append-only JSON-lines catalog of discovered limits.

Entries are content-addressed by a hash of (term, spec, recurrence), so
re-running a pipeline never duplicates a row; every numeric field is stored
as an exact rational string or an explicit-precision decimal string, which
makes entries replayable bit-for-bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from filelock import FileLock


class CatalogParseError(ValueError):
    def __init__(self, path, offset: int, line_no: int):
        self.offset = offset
        super().__init__(f"{path}: malformed entry at byte {offset} (line {line_no})")


def content_hash(term_json: dict, spec_json: Optional[dict], rec_json: dict) -> str:
    payload = json.dumps(
        {"term": term_json, "spec": spec_json, "recurrence": rec_json},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


@dataclass
class CatalogEntry:
    term: dict
    spec: Optional[dict]
    recurrence: dict
    init_a: list[str]
    init_b: list[str]
    limit_digits: Optional[str] = None
    alpha_estimate: Optional[str] = None
    delta_estimate: Optional[str] = None
    identification: Optional[dict] = None
    constant: Optional[str] = None
    provenance: dict = field(default_factory=dict)
    failed_stage: Optional[str] = None
    error: Optional[str] = None

    @property
    def hash(self) -> str:
        return content_hash(self.term, self.spec, self.recurrence)

    def to_json(self) -> dict:
        out = {"hash": self.hash}
        for key in (
            "term",
            "spec",
            "recurrence",
            "init_a",
            "init_b",
            "limit_digits",
            "alpha_estimate",
            "delta_estimate",
            "identification",
            "constant",
            "provenance",
            "failed_stage",
            "error",
        ):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    @staticmethod
    def from_json(obj: dict) -> "CatalogEntry":
        return CatalogEntry(
            term=obj["term"],
            spec=obj.get("spec"),
            recurrence=obj["recurrence"],
            init_a=obj.get("init_a", []),
            init_b=obj.get("init_b", []),
            limit_digits=obj.get("limit_digits"),
            alpha_estimate=obj.get("alpha_estimate"),
            delta_estimate=obj.get("delta_estimate"),
            identification=obj.get("identification"),
            constant=obj.get("constant"),
            provenance=obj.get("provenance", {}),
            failed_stage=obj.get("failed_stage"),
            error=obj.get("error"),
        )


class Catalog:
    def __init__(self, path):
        self.path = Path(path)

    def entries(self) -> list[CatalogEntry]:
        if not self.path.exists():
            return []
        out = []
        offset = 0
        with open(self.path, "rb") as fh:
            for line_no, raw in enumerate(fh, start=1):
                stripped = raw.strip()
                if stripped:
                    try:
                        out.append(CatalogEntry.from_json(json.loads(stripped)))
                    except (json.JSONDecodeError, KeyError):
                        raise CatalogParseError(self.path, offset, line_no) from None
                offset += len(raw)
        return out

    def append(self, entry: CatalogEntry) -> bool:
        """Append unless the content hash is already present; returns whether
        a row was written."""
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(str(self.path) + ".lock"):
            if any(e.hash == entry.hash for e in self.entries()):
                return False
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry.to_json(), sort_keys=True) + "\n")
            return True

    def query(
        self,
        s: Optional[int] = None,
        a: Optional[str] = None,
        constant: Optional[str] = None,
        content: Optional[str] = None,
    ) -> list[CatalogEntry]:
        got = []
        for e in self.entries():
            if content is not None and e.hash != content:
                continue
            if s is not None and (e.spec or {}).get("s") != s:
                continue
            if a is not None and (e.spec or {}).get("a") != a:
                continue
            if constant is not None and e.constant != constant:
                continue
            got.append(e)
        return got
