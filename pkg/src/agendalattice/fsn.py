"""Journal entries to financial-statements-network contexts.

Each business process (one transaction id) credits some accounts and debits
others.  Its many-valued row holds the share of every account on its own side:
credited accounts get ``-amount/total_credited``, debited accounts
``+amount/total_debited``.
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .scaling import ManyValuedContext

log = logging.getLogger(__name__)


class JournalError(ValueError):
    pass


@dataclass(frozen=True)
class JournalEntry:
    id: int
    tid: str
    account: str
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "tid", str(self.tid))
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value == 0:
            raise JournalError(f"journal entry {self.id} has zero value")


@dataclass(frozen=True)
class BusinessProcess:
    tid: str
    credited: dict[str, Fraction] = field(default_factory=dict)
    debited: dict[str, Fraction] = field(default_factory=dict)
    accounts: tuple[str, ...] = ()

    @property
    def total_credited(self) -> Fraction:
        return sum(self.credited.values(), Fraction(0))

    @property
    def total_debited(self) -> Fraction:
        return sum(self.debited.values(), Fraction(0))


def group_by_tid(entries: Sequence[JournalEntry]) -> list[BusinessProcess]:
    """One process per transaction id, in order of first appearance."""
    if not entries:
        raise JournalError("no journal entries")
    order: list[str] = []
    credited: dict[str, dict[str, Fraction]] = {}
    debited: dict[str, dict[str, Fraction]] = {}
    accounts: dict[str, list[str]] = {}
    for e in entries:
        if e.tid not in credited:
            order.append(e.tid)
            credited[e.tid], debited[e.tid], accounts[e.tid] = {}, {}, []
        if e.account not in accounts[e.tid]:
            accounts[e.tid].append(e.account)
        side = credited[e.tid] if e.value < 0 else debited[e.tid]
        side[e.account] = side.get(e.account, Fraction(0)) + abs(e.value)

    processes = []
    for tid in order:
        bp = BusinessProcess(tid, credited[tid], debited[tid], tuple(accounts[tid]))
        if not bp.credited or not bp.debited:
            raise JournalError(f"process {tid!r} must credit and debit at least one account each")
        if bp.total_credited != bp.total_debited:
            log.warning(
                "process %s is unbalanced: credited %s, debited %s",
                tid, bp.total_credited, bp.total_debited,
            )
        processes.append(bp)
    return processes


def compute_shares(bp: BusinessProcess) -> dict[str, Fraction]:
    """Signed share of each account in the process, in first-appearance order."""
    shares: dict[str, Fraction] = {}
    tc, td = bp.total_credited, bp.total_debited
    for account in bp.accounts:
        # an account both credited and debited nets its two shares
        share = Fraction(0)
        if account in bp.credited:
            share -= bp.credited[account] / tc
        if account in bp.debited:
            share += bp.debited[account] / td
        shares[account] = share
    return shares


def to_mv_context(
    processes: Sequence[BusinessProcess],
    feature_names: Mapping[str, str] | None = None,
    features: Sequence[str] | None = None,
    exact: bool = False,
) -> ManyValuedContext:
    """Business processes x accounts context of signed shares.

    ``feature_names`` renames accounts (e.g. to ``x1``..``x6``); ``features``
    fixes the column order of the renamed features, otherwise columns follow
    first appearance.  With ``exact`` the cells stay Fractions.
    """
    if not processes:
        raise JournalError("no business processes")
    rename = dict(feature_names or {})
    rows = []
    seen: list[str] = []
    for bp in processes:
        row = {}
        for account, share in compute_shares(bp).items():
            name = rename.get(account, account)
            if name not in seen:
                seen.append(name)
            row[name] = row.get(name, Fraction(0)) + share
        rows.append(row)
    columns = list(features) if features is not None else seen
    missing = set(seen) - set(columns)
    if missing:
        raise JournalError(f"accounts without a column: {sorted(missing)}")
    zero = Fraction(0) if exact else 0.0
    values = [
        tuple((r[c] if exact else float(r[c])) if c in r else zero for c in columns)
        for r in rows
    ]
    objects = [f"a{bp.tid}" for bp in processes]
    return ManyValuedContext(tuple(objects), tuple(columns), tuple(values))


def read_journal_csv(path: str) -> list[JournalEntry]:
    """Read ``id,tid,account,value`` rows (UTF-8, decimal values)."""
    entries = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        expected = {"id", "tid", "account", "value"}
        if reader.fieldnames is None or not expected <= {f.strip() for f in reader.fieldnames}:
            raise JournalError("journal CSV needs the header id,tid,account,value")
        for lineno, raw in enumerate(reader, start=2):
            rec = {k.strip(): (v or "").strip() for k, v in raw.items() if k is not None}
            try:
                entries.append(
                    JournalEntry(int(rec["id"]), rec["tid"], rec["account"], Fraction(rec["value"]))
                )
            except (ValueError, ZeroDivisionError) as exc:
                raise JournalError(f"line {lineno}: {exc}") from None
    return entries
