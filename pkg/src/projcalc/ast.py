"""AST for the line-oriented calculus DSL.

Space expressions are structural values (two product spaces are equal iff
their factors are).  Set and function expressions are frozen trees; axis
arguments stay as written (a 1-based position or a space name) and are
resolved against carriers at bind time.  Statement line numbers are carried
for diagnostics but excluded from equality so that parse(format(p)) == p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .pointclass import LevelSchedule, PointClass

# --- spaces ------------------------------------------------------------------


@dataclass(frozen=True)
class Reals:
    pass


@dataclass(frozen=True)
class Naturals:
    pass


@dataclass(frozen=True)
class Baire:
    pass


@dataclass(frozen=True)
class Cantor:
    pass


@dataclass(frozen=True)
class XRealLine:
    pass


@dataclass(frozen=True)
class ProductSpace:
    left: "SpaceExpr"
    right: "SpaceExpr"


@dataclass(frozen=True)
class MeasureSpace:
    inner: "SpaceExpr"


SpaceExpr = Reals | Naturals | Baire | Cantor | XRealLine | ProductSpace | MeasureSpace

Axis = int | str  # 1-based position, or a space name resolved at bind time

# --- set expressions ---------------------------------------------------------


@dataclass(frozen=True)
class NamedSet:
    name: str


@dataclass(frozen=True)
class Complement:
    operand: "SetExpr"


@dataclass(frozen=True)
class FiniteUnion:
    members: tuple["SetExpr", ...]


@dataclass(frozen=True)
class FiniteIntersection:
    members: tuple["SetExpr", ...]


@dataclass(frozen=True)
class CountableUnion:
    index: str
    base: str
    carrier: SpaceExpr | None
    schedule: LevelSchedule


@dataclass(frozen=True)
class CountableIntersection:
    index: str
    base: str
    carrier: SpaceExpr | None
    schedule: LevelSchedule


@dataclass(frozen=True)
class Product:
    left: "SetExpr"
    right: "SetExpr"


@dataclass(frozen=True)
class Projection:
    operand: "SetExpr"
    axis: Axis


@dataclass(frozen=True)
class BorelImage:
    func: str  # must name a level-1 function
    operand: "SetExpr"


@dataclass(frozen=True)
class Preimage:
    func: "FuncExpr"
    operand: "SetExpr"


@dataclass(frozen=True)
class Section:
    operand: "SetExpr"
    axis: Axis
    at: str | None = None  # concrete coordinate, only meaningful on models


@dataclass(frozen=True)
class Graph:
    func: "FuncExpr"


@dataclass(frozen=True)
class Sublevel:
    func: "FuncExpr"
    op: str  # one of < <= > >=
    bound: Fraction


@dataclass(frozen=True)
class MeasureThreshold:
    operand: "SetExpr"
    threshold: Fraction


SetExpr = (
    NamedSet
    | Complement
    | FiniteUnion
    | FiniteIntersection
    | CountableUnion
    | CountableIntersection
    | Product
    | Projection
    | BorelImage
    | Preimage
    | Section
    | Graph
    | Sublevel
    | MeasureThreshold
)

# --- function expressions ----------------------------------------------------


@dataclass(frozen=True)
class NamedFunc:
    name: str


@dataclass(frozen=True)
class PairFunc:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class CylinderExtend:
    func: "FuncExpr"
    factor: SpaceExpr


@dataclass(frozen=True)
class Compose:
    outer: "FuncExpr"
    inner: "FuncExpr"


@dataclass(frozen=True)
class SectionOf:
    func: "FuncExpr"
    axis: Axis
    at: str | None = None


@dataclass(frozen=True)
class Sum:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class Neg:
    operand: "FuncExpr"


@dataclass(frozen=True)
class ProdOp:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class MinOp:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class MaxOp:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class InnerProduct:
    left: "FuncExpr"
    right: "FuncExpr"


@dataclass(frozen=True)
class Power:
    operand: "FuncExpr"
    exponent: Fraction  # > 0; operand must be nonneg-annotated


@dataclass(frozen=True)
class CountableSup:
    index: str
    base: str
    carrier: SpaceExpr | None  # domain space of the family, if stated
    schedule: LevelSchedule


@dataclass(frozen=True)
class CountableInf:
    index: str
    base: str
    carrier: SpaceExpr | None
    schedule: LevelSchedule


@dataclass(frozen=True)
class PartialInf:
    func: "FuncExpr"
    dom: "SetExpr"


@dataclass(frozen=True)
class PartialSup:
    func: "FuncExpr"
    dom: "SetExpr"


@dataclass(frozen=True)
class IntegralKernel:
    func: "FuncExpr"
    kernel: str


@dataclass(frozen=True)
class Select:
    operand: "SetExpr"


@dataclass(frozen=True)
class EpsSelector:
    dom: "SetExpr"
    func: "FuncExpr"
    eps: Fraction  # > 0
    direction: str  # "inf" or "sup"


@dataclass(frozen=True)
class FromGraph:
    graph: "SetExpr"
    dom: "SetExpr"


FuncExpr = (
    NamedFunc
    | PairFunc
    | CylinderExtend
    | Compose
    | SectionOf
    | Sum
    | Neg
    | ProdOp
    | MinOp
    | MaxOp
    | InnerProduct
    | Power
    | CountableSup
    | CountableInf
    | PartialInf
    | PartialSup
    | IntegralKernel
    | Select
    | EpsSelector
    | FromGraph
)

# --- declarations and statements --------------------------------------------


@dataclass(frozen=True)
class FuncAnnot:
    """Declared measurability: origin tracks how the level arose."""

    origin: str  # declared | borel | lsa | usa
    level: int  # borel -> 1; lsa/usa collapse to 2

    def __str__(self) -> str:
        if self.origin == "declared":
            return f"delta {self.level}"
        return self.origin


@dataclass(frozen=True)
class SpaceDecl:
    name: str
    space: SpaceExpr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class SetDecl:
    name: str
    space: SpaceExpr
    cls: PointClass
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class FuncDecl:
    name: str
    dom: SpaceExpr
    cod: SpaceExpr
    annot: FuncAnnot
    domain_set: str | None = None
    nonneg: bool = False
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class KernelDecl:
    name: str
    src: SpaceExpr
    dst: SpaceExpr
    level: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetSet:
    name: str
    expr: SetExpr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LetFunc:
    name: str
    expr: FuncExpr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AssertClass:
    expr: SetExpr
    op: str  # <= or ==
    cls: PointClass
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AssertLevel:
    expr: FuncExpr
    op: str
    level: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AssertUM:
    name: str
    line: int = field(default=0, compare=False)


Statement = (
    SpaceDecl
    | SetDecl
    | FuncDecl
    | KernelDecl
    | LetSet
    | LetFunc
    | AssertClass
    | AssertLevel
    | AssertUM
)

Assertion = AssertClass | AssertLevel | AssertUM


@dataclass(frozen=True)
class Program:
    statements: tuple[Statement, ...]

    @property
    def assertions(self) -> tuple[Assertion, ...]:
        return tuple(s for s in self.statements if isinstance(s, (AssertClass, AssertLevel, AssertUM)))
