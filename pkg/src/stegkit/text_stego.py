"""Plaintext schemes: keyed selected-character extraction and extra-whitespace gaps.

Words are maximal runs of non-whitespace. Only ASCII spaces carry gap
information; other whitespace is normalized away before embedding.
"""

import re

from .errors import IndexOutOfTable, KeyExhaustsCover, NotEnoughGaps, Unsatisfiable

_GAP = re.compile(r"(?<=\S)\s+(?=\S)")


def words(text):
    return text.split()


def charkey_extract(cover, key):
    """Recover a message from ``cover`` using a series of 1-based character positions.

    A 0 entry emits a space without consuming a word. A word shorter than its
    key entry is skipped together with that entry.
    """
    ws = words(cover)
    out = []
    w = 0
    for k in key:
        if k < 0:
            raise ValueError(f"key entries must be non-negative, got {k}")
        if k == 0:
            out.append(" ")
            continue
        if w >= len(ws):
            raise KeyExhaustsCover(f"cover has {len(ws)} words; key needs more")
        word = ws[w]
        w += 1
        if len(word) >= k:
            out.append(word[k - 1])
    return "".join(out)


def charkey_generate(cover, message):
    """Greedily build a key series such that ``charkey_extract(cover, key) == message``."""
    ws = words(cover)
    key = []
    w = 0
    for ch in message:
        if ch == " ":
            key.append(0)
            continue
        while True:
            if w >= len(ws):
                raise Unsatisfiable(f"character {ch!r} not found in the remaining cover words")
            word = ws[w]
            w += 1
            pos = word.find(ch)
            if pos >= 0:
                key.append(pos + 1)
                break
            key.append(len(word) + 1)
    return key


def normalize(cover):
    return " ".join(words(cover))


def gap_capacity(cover):
    return max(len(words(cover)) - 1, 0)


def gap_embed(cover, indices, table):
    """Insert ``indices[i]`` extra spaces into inter-word gap ``i``.

    Indices must lie in ``[1, len(table))``; entry 0 of the table is padding.
    """
    ws = words(cover)
    indices = list(indices)
    if len(indices) > max(len(ws) - 1, 0):
        raise NotEnoughGaps(f"{len(indices)} indices but only {max(len(ws) - 1, 0)} gaps")
    for ix in indices:
        if not 1 <= ix < len(table):
            raise IndexOutOfTable(f"index {ix} outside table of {len(table)} entries")
    if not ws:
        return ""
    parts = [ws[0]]
    for i, word in enumerate(ws[1:]):
        extra = indices[i] if i < len(indices) else 0
        parts.append(" " * (1 + extra))
        parts.append(word)
    return "".join(parts)


def gap_counts(text):
    """Number of ASCII spaces in each inter-word gap, in order."""
    return [m.group().count(" ") for m in _GAP.finditer(text)]


def gap_extract(stego, table):
    out = []
    for spaces in gap_counts(stego):
        if spaces < 2:
            continue
        ix = spaces - 1
        if ix >= len(table):
            raise IndexOutOfTable(f"gap of {spaces} spaces exceeds table of {len(table)} entries")
        out.append(table[ix])
    return out


def gap_encode_lines(cover, lines, table):
    """Embed a sequence of table entries (looked up by value) into ``cover``."""
    lookup = {entry: i for i, entry in enumerate(table) if i > 0}
    try:
        indices = [lookup[line] for line in lines]
    except KeyError as exc:
        raise IndexOutOfTable(f"{exc.args[0]!r} is not a table entry") from None
    return gap_embed(cover, indices, table)
