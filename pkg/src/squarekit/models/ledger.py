from __future__ import annotations

from fractions import Fraction

from pydantic import BaseModel


class OpLedger(BaseModel):
    """
    Counters of the arithmetic a kernel run incurs.

    Counters only grow during a run; a ledger belongs to a single run.
    """

    squarings: int = 0
    multiplications: int = 0
    additions: int = 0

    def count_squarings(self, n: int) -> None:
        self.squarings += int(n)

    def count_multiplications(self, n: int) -> None:
        self.multiplications += int(n)

    def count_additions(self, n: int) -> None:
        self.additions += int(n)

    def merge(self, other: "OpLedger") -> None:
        """Add another ledger's counts into this one."""
        self.squarings += other.squarings
        self.multiplications += other.multiplications
        self.additions += other.additions

    def squaring_ratio(self, baseline: "OpLedger", per_multiplication: int = 1) -> Fraction:
        """
        Squarings of this run per multiplication unit of ``baseline``.

        Args:
            baseline: Ledger of the MAC oracle run.
            per_multiplication: Real multiplications per counted unit
                (4 for a schoolbook complex multiplication).

        Returns:
            Fraction: Exact ratio.
        """
        units = Fraction(baseline.multiplications, per_multiplication)
        return Fraction(self.squarings) / units
