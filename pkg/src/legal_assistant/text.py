"""Shared text normalization used by node ids, alias matching, and the reference embedder."""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def normalize(label: str) -> str:
    """Canonical node id: lowercase with runs of whitespace collapsed to one space."""
    return " ".join(label.lower().split())


def tokens(text: str) -> frozenset[str]:
    return frozenset(_TOKEN_RE.findall(text.lower()))


def token_list(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())
