"""Recursive array-and-properties truncation for LLM context budgets.

Arrays are trimmed to the first n elements and objects to the first 8*n
properties (document order), recursively, halving n from 64 until the
compact-JSON UTF-8 size fits 64KB or n reaches the floor of 2.  Scalars are
never altered, only omitted.  Each iteration re-trims the original document;
by monotonicity this equals trimming the previous result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .document import DataNode, byte_size


@dataclass(frozen=True)
class TruncationConfig:
    target_bytes: int = 65536
    n_start: int = 64
    n_min: int = 2
    property_factor: int = 8

    def __post_init__(self):
        if min(self.target_bytes, self.n_start, self.n_min, self.property_factor) < 1:
            raise ValueError("all truncation parameters must be >= 1")
        if self.n_min > self.n_start:
            raise ValueError("n_min must not exceed n_start")


@dataclass(frozen=True)
class TruncationOutcome:
    doc: DataNode
    final_n: int
    iterations: int
    bytes: int
    budget_met: bool

    def summary(self) -> dict:
        return {
            "final_n": self.final_n,
            "iterations": self.iterations,
            "bytes": self.bytes,
            "budget_met": self.budget_met,
        }


def trim_at(doc: DataNode, n: int, property_factor: int = 8) -> DataNode:
    """Keep the first n array elements / property_factor*n properties, recursively."""
    if isinstance(doc, list):
        return [trim_at(item, n, property_factor) for item in doc[:n]]
    if isinstance(doc, dict):
        limit = property_factor * n
        out = {}
        for i, (key, value) in enumerate(doc.items()):
            if i >= limit:
                break
            out[key] = trim_at(value, n, property_factor)
        return out
    return doc


def truncate_document(doc: DataNode, cfg: TruncationConfig = TruncationConfig()) -> TruncationOutcome:
    size = byte_size(doc)
    if size <= cfg.target_bytes:
        return TruncationOutcome(doc, cfg.n_start, 0, size, True)
    n = cfg.n_start
    iterations = 0
    while True:
        iterations += 1
        trimmed = trim_at(doc, n, cfg.property_factor)
        size = byte_size(trimmed)
        if size <= cfg.target_bytes or n <= cfg.n_min:
            return TruncationOutcome(trimmed, n, iterations, size, size <= cfg.target_bytes)
        n = max(cfg.n_min, n // 2)
