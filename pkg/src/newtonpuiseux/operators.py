"""The two operators acting on series: ``d/dx`` and the dilation ``y(x) -> y(qx)``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .scalars import ComplexField, ExactField

DIFFERENTIAL = "diff"
Q_DIFFERENCE = "q"


@dataclass(frozen=True)
class OperatorSpec:
    """Operator kind plus, for the q-difference case, ``q`` and a fixed root.

    ``q_root`` is a chosen value of ``q**(1/root_index)``; when omitted the
    principal branch is used. Powers ``q**mu`` are taken through the fixed root
    whenever ``mu * root_index`` is an integer, so the determination is the same
    for every exponent on that lattice.
    """

    kind: str = DIFFERENTIAL
    q: object = None
    q_root: object = None
    root_index: int = 1

    def __post_init__(self):
        if self.kind not in (DIFFERENTIAL, Q_DIFFERENCE):
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == Q_DIFFERENCE:
            if self.q is None:
                raise ValueError("q-difference operator needs q")
            if abs(complex(self.q)) == 1:
                raise ValueError("q-difference operator needs |q| != 1")
            if self.root_index < 1:
                raise ValueError("root_index must be positive")
            if self.q_root is not None:
                q, r = complex(self.q), complex(self.q_root)
                if abs(r ** self.root_index - q) > 1e-12 * abs(q):
                    raise ValueError(f"q_root is not a {self.root_index}-th root of q")

    @classmethod
    def differential(cls) -> "OperatorSpec":
        return cls(DIFFERENTIAL)

    @classmethod
    def q_difference(cls, q, q_root=None, root_index: int = 1) -> "OperatorSpec":
        return cls(Q_DIFFERENCE, q, q_root, root_index)

    @property
    def is_differential(self) -> bool:
        return self.kind == DIFFERENTIAL

    @property
    def order(self) -> int:
        """Shift of the x-exponent produced by the operator on monomials."""
        return 1 if self.kind == DIFFERENTIAL else 0

    def delta(self, mu, field):
        """Factor produced on ``x**mu``: ``mu`` or ``q**mu``."""
        mu = Fraction(mu)
        if self.kind == DIFFERENTIAL:
            return field.convert(mpq(mu.numerator, mu.denominator))
        if self.q_root is not None:
            t = mu * self.root_index
            if t.denominator == 1:
                root = field.convert(self.q_root)
                e = int(t)
                return root ** e if e >= 0 else 1 / root ** (-e)
        return field.power(field.convert(self.q), mu)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == Q_DIFFERENCE:
            fld = _display_field(self.q)
            out["q"] = fld.to_json(fld.convert(self.q))
            if self.q_root is not None:
                rf = _display_field(self.q_root)
                out["q_root"] = rf.to_json(rf.convert(self.q_root))
                out["root_index"] = self.root_index
        return out


def _display_field(x):
    try:
        fld = ExactField(getattr(x, "d", None))
        fld.convert(x)
        return fld
    except Exception:
        return ComplexField()
