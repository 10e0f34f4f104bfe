"""Ordered, hash-consed labels.

Every distinct label value exists as exactly one object, so equality is
identity and hashing is O(1). The order is Hash < Int < Str < Count < Seq,
natural within a kind and lexicographic for Seq.
"""
from __future__ import annotations

import weakref
from typing import Any, Iterable

HASH_KIND, INT_KIND, STR_KIND, COUNT_KIND, SEQ_KIND = range(5)
_KIND_NAMES = ("Hash", "Int", "Str", "Count", "Seq")

_table: "weakref.WeakValueDictionary[tuple, Label]" = weakref.WeakValueDictionary()


class Label:
    __slots__ = ("kind", "value", "_hash", "__weakref__")

    def __init__(self, *args, **kwargs):
        raise TypeError("use Int, Str, Count, Seq or HASH")

    def __eq__(self, other: object) -> bool:
        return self is other

    def __ne__(self, other: object) -> bool:
        return self is not other

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Label") -> bool:
        # iterative: refinement labels nest deeper than the recursion limit
        a, b = self, other
        while a is not b:
            if a.kind != b.kind:
                return a.kind < b.kind
            if a.kind != SEQ_KIND:
                return a.value < b.value
            for x, y in zip(a.value, b.value):
                if x is not y:
                    a, b = x, y
                    break
            else:
                return len(a.value) < len(b.value)
        return False

    def __gt__(self, other: "Label") -> bool:
        return other < self

    def __le__(self, other: "Label") -> bool:
        return self is other or self < other

    def __ge__(self, other: "Label") -> bool:
        return self is other or other < self

    def __reduce__(self):
        return (_rebuild, (self.kind, self.value))

    def to_json(self) -> Any:
        if self.kind == INT_KIND or self.kind == STR_KIND:
            return self.value
        if self.kind == SEQ_KIND:
            return [x.to_json() for x in self.value]
        if self.kind == COUNT_KIND:
            return {"count": list(self.value)}
        return "#"

    def __repr__(self) -> str:
        if self.kind == INT_KIND:
            return str(self.value)
        if self.kind == STR_KIND:
            return self.value
        if self.kind == SEQ_KIND:
            return "[" + ", ".join(map(repr, self.value)) + "]"
        if self.kind == COUNT_KIND:
            return f"({self.value[0]},{self.value[1]})"
        return "#"


def _intern(kind: int, value) -> Label:
    key = (kind, value)
    lab = _table.get(key)
    if lab is None:
        lab = object.__new__(Label)
        lab.kind = kind
        lab.value = value
        lab._hash = hash(key)
        _table[key] = lab
    return lab


def _rebuild(kind: int, value) -> Label:
    return _intern(kind, value)


def Int(x: int) -> Label:
    return _intern(INT_KIND, int(x))


def Str(s: str) -> Label:
    return _intern(STR_KIND, str(s))


def Count(a: int, b: int) -> Label:
    return _intern(COUNT_KIND, (int(a), int(b)))


def Seq(items: Iterable[Label]) -> Label:
    items = tuple(items)
    for x in items:
        if not isinstance(x, Label):
            raise TypeError(f"Seq items must be labels, got {x!r}")
    return _intern(SEQ_KIND, items)


def _seq_unchecked(items: tuple) -> Label:
    return _intern(SEQ_KIND, items)


HASH = _intern(HASH_KIND, None)
ZERO = Int(0)
ONE = Int(1)
EMPTY_SEQ = Seq(())


def label_from_json(x: Any) -> Label:
    """Convert a JSON scalar/array into a user label. Hash is rejected."""
    if isinstance(x, Label):
        if x.kind == HASH_KIND:
            raise ValueError("the absence marker is not a valid user label")
        return x
    if isinstance(x, bool):
        return Int(int(x))
    if isinstance(x, int):
        return Int(x)
    if isinstance(x, str):
        return Str(x)
    if isinstance(x, (list, tuple)):
        return Seq(label_from_json(y) for y in x)
    if isinstance(x, dict) and set(x) == {"count"}:
        a, b = x["count"]
        return Count(a, b)
    raise ValueError(f"unsupported label value {x!r}")


def contains_hash(lab: Label) -> bool:
    if lab.kind == HASH_KIND:
        return True
    if lab.kind == SEQ_KIND:
        return any(contains_hash(x) for x in lab.value)
    return False
