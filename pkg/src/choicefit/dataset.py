"""Choice datasets: menus, observations, subjects and CSV I/O.

A dataset pairs each menu a subject saw with the (possibly empty) set of
alternatives chosen there.  An empty choice is a deferral.

CSV layout (UTF-8, header required)::

    subject,menu,choice[,order]
    s1,A;B,A
    s1,A;B;C,
    s1,B;C;D,C;D,D;C;B

``menu`` and ``choice`` are ``;``-joined letter labels, ``choice`` may be
blank and the optional ``order`` column gives the on-screen list order of the
menu (first item first).
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import os
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

from .relations import index_of, label


class ChoiceDataError(ValueError):
    """Malformed or inconsistent choice data."""


@dataclass(frozen=True, eq=False)
class Menu:
    """A nonempty set of alternatives plus its display order.

    Equality and hashing look at the members only.
    """

    members: frozenset[int]
    list_order: tuple[int, ...] = ()

    def __post_init__(self):
        members = frozenset(int(x) for x in self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ChoiceDataError("menu must be nonempty")
        if not self.list_order:
            object.__setattr__(self, "list_order", tuple(sorted(members)))
        else:
            order = tuple(int(x) for x in self.list_order)
            if len(order) != len(members) or set(order) != members:
                raise ChoiceDataError("list order must be a permutation of the menu")
            object.__setattr__(self, "list_order", order)

    @classmethod
    def of(cls, *items: int, order: Sequence[int] = ()) -> Menu:
        return cls(frozenset(items), tuple(order))

    @property
    def mask(self) -> int:
        out = 0
        for x in self.members:
            out |= 1 << x
        return out

    @property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members)

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Menu):
            return NotImplemented
        return self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def sort_key(self) -> tuple:
        return (len(self.members), self.sorted_members)

    def __repr__(self) -> str:
        return "{" + ",".join(label(x) for x in self.sorted_members) + "}"


@dataclass(frozen=True)
class Observation:
    menu: Menu
    choice: frozenset[int] = frozenset()

    def __post_init__(self):
        choice = frozenset(int(x) for x in self.choice)
        object.__setattr__(self, "choice", choice)
        if not choice <= self.menu.members:
            raise ChoiceDataError(f"choice {sorted(choice)} not contained in menu {self.menu!r}")

    @property
    def deferred(self) -> bool:
        return not self.choice

    @property
    def choice_mask(self) -> int:
        out = 0
        for x in self.choice:
            out |= 1 << x
        return out


@dataclass(frozen=True)
class Dataset:
    """One subject's record: a sequence of observations on distinct menus."""

    subject_id: str
    observations: tuple[Observation, ...]
    forced: bool = False
    n: int = 0

    def __post_init__(self):
        obs = tuple(self.observations)
        object.__setattr__(self, "observations", obs)
        top = max((max(o.menu.members) for o in obs), default=-1)
        if self.n == 0:
            object.__setattr__(self, "n", top + 1)
        elif top >= self.n:
            raise ChoiceDataError(f"alternative {label(top)} outside universe of size {self.n}")
        seen = set()
        for o in obs:
            if o.menu in seen:
                raise ChoiceDataError(f"subject {self.subject_id}: menu {o.menu!r} appears twice")
            seen.add(o.menu)
            if self.forced and o.deferred:
                raise ChoiceDataError(f"subject {self.subject_id}: deferral at {o.menu!r} in forced data")

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    @property
    def menus(self) -> list[Menu]:
        return [o.menu for o in self.observations]

    @property
    def universe(self) -> frozenset[int]:
        out: set[int] = set()
        for o in self.observations:
            out |= o.menu.members
        return frozenset(out)

    def choice_for(self, menu: Menu) -> frozenset[int] | None:
        for o in self.observations:
            if o.menu == menu:
                return o.choice
        return None

    @property
    def uninformative(self) -> bool:
        """Always deferred, or always chose the whole menu."""
        if not self.observations:
            return True
        return all(o.deferred for o in self.observations) or all(
            o.choice == o.menu.members for o in self.observations
        )

    def canonical(self) -> Dataset:
        """Same dataset with observations sorted by menu."""
        obs = sorted(self.observations, key=lambda o: o.menu.sort_key())
        return replace(self, observations=tuple(obs))


@dataclass(frozen=True)
class MenuCollection:
    n: int
    menus: tuple[Menu, ...] = field(default_factory=tuple)

    def __post_init__(self):
        menus = tuple(sorted(set(self.menus), key=Menu.sort_key))
        if len(menus) != len(self.menus):
            raise ChoiceDataError("menus in a collection must be distinct")
        object.__setattr__(self, "menus", menus)

    def __len__(self) -> int:
        return len(self.menus)

    def __iter__(self):
        return iter(self.menus)


def generate_menu_collection(n: int, sizes: Iterable[int]) -> MenuCollection:
    """Every subset of ``{0..n-1}`` whose size is in ``sizes``."""
    sizes = sorted(set(sizes))
    for s in sizes:
        if not 1 <= s <= n:
            raise ValueError(f"menu size {s} outside [1, {n}]")
    menus = [Menu(frozenset(c)) for s in sizes for c in itertools.combinations(range(n), s)]
    return MenuCollection(n, tuple(menus))


class Symmetry(enum.Enum):
    STRONG = "strong"
    WEAK_ONLY = "weak_only"
    ASYMMETRIC = "asymmetric"


def check_symmetry(collection: MenuCollection | Iterable[Menu], n: int | None = None) -> Symmetry:
    """Compare, across alternatives, the sizes of the menus containing them."""
    if isinstance(collection, MenuCollection):
        menus, n = collection.menus, collection.n if n is None else n
    else:
        menus = list(collection)
    if n is None:
        universe = sorted(set().union(*(m.members for m in menus))) if menus else []
    else:
        universe = list(range(n))
    profiles = {x: Counter(len(m) for m in menus if x in m) for x in universe}
    distinct = {tuple(sorted(c.items())) for c in profiles.values()}
    if len(distinct) <= 1:
        return Symmetry.STRONG
    if len({sum(c.values()) for c in profiles.values()}) == 1:
        return Symmetry.WEAK_ONLY
    return Symmetry.ASYMMETRIC


def active_subdataset(d: Dataset) -> Dataset:
    """Drop deferrals; the result is marked forced."""
    kept = tuple(o for o in d.observations if not o.deferred)
    return replace(d, observations=kept, forced=True)


# ---------------------------------------------------------------------------
# CSV


def _split_labels(field_text: str, row: int) -> list[int]:
    field_text = field_text.strip()
    if not field_text:
        return []
    try:
        return [index_of(tok) for tok in field_text.split(";")]
    except ValueError as exc:
        raise ChoiceDataError(f"row {row}: {exc}") from None


def _read_source(source) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    if hasattr(source, "read"):
        return source.read()
    if isinstance(source, str) and "\n" not in source and os.path.exists(source):
        return Path(source).read_text(encoding="utf-8")
    return source


def parse_csv(source, forced: bool = False, n: int | None = None) -> list[Dataset]:
    """Read datasets from a path, file object or CSV text.

    Subjects come out in order of first appearance; rows keep their order.
    Row numbers in error messages count the header as row 1.
    """
    text = _read_source(source)
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        raise ChoiceDataError("empty input: header row missing") from None
    if header[:3] != ["subject", "menu", "choice"] or len(header) > 4 or (
        len(header) == 4 and header[3] != "order"
    ):
        raise ChoiceDataError(f"row 1: expected header subject,menu,choice[,order], got {header}")
    has_order = len(header) == 4

    rows: dict[str, list[Observation]] = {}
    top = -1
    for rownum, rec in enumerate(reader, start=2):
        if not rec or all(not f.strip() for f in rec):
            continue
        if len(rec) < 3 or len(rec) > len(header):
            raise ChoiceDataError(f"row {rownum}: expected {len(header)} fields, got {len(rec)}")
        subject = rec[0].strip()
        if not subject:
            raise ChoiceDataError(f"row {rownum}: missing subject id")
        members = _split_labels(rec[1], rownum)
        if not members:
            raise ChoiceDataError(f"row {rownum}: empty menu")
        if len(set(members)) != len(members):
            raise ChoiceDataError(f"row {rownum}: repeated alternative in menu")
        choice = _split_labels(rec[2], rownum)
        order = _split_labels(rec[3], rownum) if has_order and len(rec) > 3 else []
        if forced and not choice:
            raise ChoiceDataError(f"row {rownum}: deferral in forced-choice data")
        missing = set(choice) - set(members)
        if missing:
            names = ",".join(label(x) for x in sorted(missing))
            raise ChoiceDataError(f"row {rownum}: chosen item(s) {names} not in menu")
        try:
            menu = Menu(frozenset(members), tuple(order))
        except ChoiceDataError as exc:
            raise ChoiceDataError(f"row {rownum}: {exc}") from None
        obs_list = rows.setdefault(subject, [])
        if any(o.menu == menu for o in obs_list):
            raise ChoiceDataError(f"row {rownum}: menu {menu!r} repeated for subject {subject}")
        obs_list.append(Observation(menu, frozenset(choice)))
        top = max(top, max(members))

    universe = top + 1 if n is None else n
    if n is not None and top >= n:
        raise ChoiceDataError(f"alternative {label(top)} outside universe of size {n}")
    return [Dataset(s, tuple(obs), forced=forced, n=universe) for s, obs in rows.items()]


def write_csv(datasets: Iterable[Dataset], dest=None, with_order: bool = True) -> str:
    """Serialise datasets; returns the text and writes it to ``dest`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["subject", "menu", "choice", "order"] if with_order else ["subject", "menu", "choice"])
    for d in datasets:
        for o in d.observations:
            row = [
                d.subject_id,
                ";".join(label(x) for x in o.menu.sorted_members),
                ";".join(label(x) for x in sorted(o.choice)),
            ]
            if with_order:
                row.append(";".join(label(x) for x in o.menu.list_order))
            w.writerow(row)
    text = buf.getvalue()
    if dest is not None:
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            Path(dest).write_text(text, encoding="utf-8")
    return text
