"""The small financial-statements example: 12 business processes, 6 accounts.

Accounts are named ``x1``..``x6`` (tax, revenue, cost of sales, personnel
expenses, inventory, other expenses).  Masses are exact Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources

from .agendas import CrispAgenda
from .fca import FormalContext
from .fsn import JournalEntry, read_journal_csv
from .mass import MassFunction
from .scaling import ManyValuedContext, ScalingSpec, interval_scale, read_mv_csv

FEATURES = ("x1", "x2", "x3", "x4", "x5", "x6")
ACCOUNT_FEATURES = {
    "tax": "x1",
    "revenue": "x2",
    "cost of sales": "x3",
    "personal expenses": "x4",
    "inventory": "x5",
    "other expenses": "x6",
}
SCALE_S = 5

F = Fraction


def data_path(name: str) -> str:
    return str(resources.files("agendalattice") / "data" / name)


def journal() -> list[JournalEntry]:
    return read_journal_csv(data_path("journal.csv"))


def share_table() -> ManyValuedContext:
    """The published share table (two-decimal rounding as printed)."""
    return read_mv_csv(data_path("shares.csv"))


def scaled_context(s: int = SCALE_S) -> FormalContext:
    return interval_scale(share_table(), ScalingSpec(s))


def crisp_agendas() -> dict[str, CrispAgenda]:
    return {
        "j1": CrispAgenda.of("j1", FEATURES, ["x1", "x2", "x5"]),
        "j2": CrispAgenda.of("j2", FEATURES, ["x1", "x2", "x3"]),
        "j3": CrispAgenda.of("j3", FEATURES, ["x1", "x3"]),
    }


def coalition_masses() -> dict[str, MassFunction]:
    """Agent agendas m1, m2, m3 over the base accounts."""
    X = FEATURES
    return {
        "m1": MassFunction.from_sets(X, [(["x1"], F(6, 10)), (X, F(4, 10))]),
        "m2": MassFunction.from_sets(X, [(["x1"], F(5, 10)), (["x1", "x2"], F(3, 10)), (X, F(2, 10))]),
        "m3": MassFunction.from_sets(X, [(["x1", "x2", "x6"], F(9, 10)), (X, F(1, 10))]),
    }


ORDER_UNIVERSE = ("y1", "y2", "y3")


def ordering_masses() -> dict[str, MassFunction]:
    """Four masses on {y1, y2, y3} separating the upward order from the q- and pl-orders."""
    U = ORDER_UNIVERSE
    return {
        "m1": MassFunction.from_sets(
            U, [(["y1", "y3"], F(3, 10)), (["y2", "y3"], F(3, 10)), (U, F(2, 10)), (["y3"], F(2, 10))]
        ),
        "m2": MassFunction.from_sets(
            U, [(["y1", "y3"], F(1, 10)), (["y2", "y3"], F(1, 10)), (U, F(5, 10)), (["y3"], F(3, 10))]
        ),
        "m3": MassFunction.from_sets(
            U, [(["y1", "y2"], F(3, 10)), (["y2", "y3"], F(4, 10)), (["y1", "y3"], F(3, 10))]
        ),
        "m4": MassFunction.from_sets(
            U, [(["y1"], F(1, 10)), (["y2"], F(2, 10)), (["y3"], F(2, 10)), (["y1", "y2"], F(5, 10))]
        ),
    }


def remark_context() -> FormalContext:
    """Two objects, three attributes: a has x, y, z; b has y only."""
    return FormalContext.from_pairs(
        ["a", "b"], ["x", "y", "z"], [("a", "x"), ("a", "y"), ("a", "z"), ("b", "y")]
    )
