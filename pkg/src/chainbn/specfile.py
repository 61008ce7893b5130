"""Chain spec files: a small TOML schema describing a chain of loops.

Example::

    g = 2
    bridges = ["0"]

    [[loops]]
    l = "1"
    n = "2"

    [[loops]]
    l = "1/1"
    n = "2/1"

A loop may instead read ``torsion_free = true``.  An optional
``torsion_override`` lists ``g`` nonnegative integers.
"""
from __future__ import annotations

import hashlib
import re
import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import ChainOfLoops, LoopSpec, format_rational, is_generic, parse_rational
from .errors import InvalidInput, ParseError

_POS_RE = re.compile(r"\(at line (\d+), column (\d+)\)")
_KNOWN_KEYS = {"g", "loops", "bridges", "torsion_override"}
_LOOP_KEYS = {"l", "n", "torsion_free", "torsion"}


@dataclass(frozen=True)
class ChainSpec:
    chain: ChainOfLoops
    digest: str
    path: str | None = None

    @property
    def generic(self) -> bool:
        return is_generic(self.chain)[0]


def digest_text(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _key_pos(text: str, key: str, occurrence: int = 0):
    pattern = re.compile(rf"(^|[\s{{,]){re.escape(key)}\s*=", re.M)
    matches = list(pattern.finditer(text))
    if occurrence >= len(matches):
        return None, None
    m = matches[occurrence]
    start = m.start() + len(m.group(1))
    return text.count("\n", 0, start) + 1, start - (text.rfind("\n", 0, start) + 1) + 1


def _rational(text: str, value, what: str, key: str, occurrence: int):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(f"{what} must be a rational literal such as \"3/2\", got {value!r}", *_key_pos(text, key, occurrence))
    try:
        return parse_rational(value if isinstance(value, str) else str(value))
    except InvalidInput as exc:
        raise ParseError(f"{what}: {exc}", *_key_pos(text, key, occurrence)) from None


def parse_chain_spec(text: str) -> ChainOfLoops:
    """Parse and validate spec text into a chain."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = _POS_RE.search(str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise ParseError(f"malformed spec: {_POS_RE.sub('', str(exc)).strip()}", line, col) from None
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ParseError(f"unknown key {key!r}", *_key_pos(text, key))
    if "g" not in data:
        raise ParseError("missing key 'g'")
    g = data["g"]
    if isinstance(g, bool) or not isinstance(g, int) or g < 1:
        raise ParseError(f"g must be a positive integer, got {g!r}", *_key_pos(text, "g"))
    loops_raw = data.get("loops")
    if not isinstance(loops_raw, list) or len(loops_raw) != g:
        n = len(loops_raw) if isinstance(loops_raw, list) else 0
        raise ParseError(f"expected {g} loops, got {n}", *_key_pos(text, "loops") if "loops" in data else (None, None))
    loops = []
    counts = {"l": 0, "n": 0, "torsion_free": 0}
    for idx, entry in enumerate(loops_raw, start=1):
        if not isinstance(entry, dict):
            raise ParseError(f"loop {idx} must be a table")
        extra = set(entry) - _LOOP_KEYS
        if extra:
            raise ParseError(f"loop {idx}: unknown key {sorted(extra)[0]!r}", *_key_pos(text, sorted(extra)[0]))
        explicit = entry.get("torsion")
        if explicit is not None and (isinstance(explicit, bool) or not isinstance(explicit, int) or explicit < 0):
            raise ParseError(f"loop {idx}: torsion must be a nonnegative integer", *_key_pos(text, "torsion"))
        if entry.get("torsion_free", False) is True:
            pos = _key_pos(text, "torsion_free", counts["torsion_free"])
            counts["torsion_free"] += 1
            if "l" in entry or "n" in entry:
                raise ParseError(f"loop {idx}: torsion-free loops take no lengths", *pos)
            loops.append(LoopSpec(None, None, explicit))
            continue
        if "l" not in entry or "n" not in entry:
            raise ParseError(f"loop {idx} needs both 'l' and 'n' or torsion_free = true")
        top = _rational(text, entry["l"], f"loop {idx} length l", "l", counts["l"])
        bottom = _rational(text, entry["n"], f"loop {idx} length n", "n", counts["n"])
        pos = _key_pos(text, "l", counts["l"])
        counts["l"] += 1
        counts["n"] += 1
        try:
            loops.append(LoopSpec(top, bottom, explicit))
        except InvalidInput as exc:
            raise ParseError(f"loop {idx}: {exc}", *pos) from None
    bridges_raw = data.get("bridges", [] if g == 1 else None)
    if not isinstance(bridges_raw, list) or len(bridges_raw) != g - 1:
        n = len(bridges_raw) if isinstance(bridges_raw, list) else 0
        raise ParseError(f"expected {g - 1} bridges, got {n}", *_key_pos(text, "bridges"))
    bridges = []
    for idx, b in enumerate(bridges_raw, start=1):
        value = _rational(text, b, f"bridge {idx}", "bridges", 0)
        if value < 0:
            raise ParseError(f"bridge {idx} has negative length {value}", *_key_pos(text, "bridges"))
        bridges.append(value)
    override = data.get("torsion_override")
    torsion: tuple[int, ...] = ()
    if override is not None:
        if (
            not isinstance(override, list)
            or len(override) != g
            or any(isinstance(m, bool) or not isinstance(m, int) or m < 0 for m in override)
        ):
            raise ParseError(f"torsion_override must list {g} nonnegative integers", *_key_pos(text, "torsion_override"))
        torsion = tuple(override)
    return ChainOfLoops(tuple(loops), tuple(bridges), torsion)


def load_chain_spec(path: str | Path) -> ChainSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {p}: {exc.strerror}") from None
    return ChainSpec(parse_chain_spec(text), digest_text(text), str(p))


def dump_chain_spec(chain: ChainOfLoops) -> str:
    """Spec text for ``chain``; parsing it gives back an equal chain."""
    lines = [f"g = {chain.g}"]
    lines.append("bridges = [" + ", ".join(f'"{format_rational(b)}"' for b in chain.bridges) + "]")
    derived = ChainOfLoops(chain.loops, chain.bridges).torsion
    if chain.torsion != derived:
        lines.append("torsion_override = [" + ", ".join(map(str, chain.torsion)) + "]")
    for lp in chain.loops:
        lines.append("")
        lines.append("[[loops]]")
        if lp.is_rational:
            lines.append(f'l = "{format_rational(lp.top)}"')
            lines.append(f'n = "{format_rational(lp.bottom)}"')
        else:
            lines.append("torsion_free = true")
        if lp.explicit_torsion is not None:
            lines.append(f"torsion = {lp.explicit_torsion}")
    return "\n".join(lines) + "\n"


def chain_summary(chain: ChainOfLoops) -> dict:
    generic, rows = is_generic(chain)
    return {
        "g": chain.g,
        "loops": [
            {"l": format_rational(lp.top), "n": format_rational(lp.bottom)} if lp.is_rational else {"torsion_free": True}
            for lp in chain.loops
        ],
        "bridges": [format_rational(b) for b in chain.bridges],
        "torsion": list(chain.torsion),
        "periods": [None if q is None else format_rational(q) for q in chain.periods()],
        "generic": generic,
        "genericity": [{"loop": i, "m": m, "ok": ok} for i, m, ok in rows],
    }
