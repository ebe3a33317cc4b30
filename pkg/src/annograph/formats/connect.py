"""ODBC-style connect strings: ``DSN=corpus;UID=kim;PWD=secret``.

Parts are split on semicolons, each part on its first equals sign.  Keys are
case-insensitive and stored uppercased in first-seen order; empty parts
(from doubled or trailing semicolons) are skipped.
"""

from __future__ import annotations

from ..core import AgError


class MissingEqualsError(AgError):
    code = "missing-equals"

    def __init__(self, part: str):
        super().__init__(f"no = in {part!r}")
        self.part = part


class ConnectParams(dict):
    """An ordered mapping of uppercased keys to values."""

    def get_param(self, key: str, default: str | None = None) -> str | None:
        return super().get(key.upper(), default)


def parse_connect_string(text: str) -> ConnectParams:
    params = ConnectParams()
    for part in text.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise MissingEqualsError(part)
        params[key.strip().upper()] = value
    return params


def format_connect_string(params: ConnectParams) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())
