"""Request/response models and handlers shared by the HTTP service and CLI.

All orchestration lives here: the FastAPI routes and the command-line front
end are both thin clients of these functions.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from . import core, integrator
from .core import LipschitzConstants, Rectangle, UnitPair
from .expr import Expr, parse
from .expr import builtin as get_builtin
from .interval import certified_lipschitz, sampled_lipschitz
from .quad import ExprFunction, corner_average, h_value, mean_value_oracle, midpoint_value
from .verify import Report, VerifyConfig, run_suite, unit_grid

UNCERTIFIED_NOTE = ("UNCERTIFIED: sampled constants are a lower-bound "
                    "estimate; the reported error bound is not rigorous")


class RectModel(BaseModel):
    a: float
    b: float
    c: float
    d: float

    @model_validator(mode="after")
    def _ordered(self) -> "RectModel":
        if not (self.a <= self.b and self.c <= self.d):
            raise ValueError("rect requires a <= b and c <= d")
        return self

    def to_rectangle(self) -> Rectangle:
        return Rectangle(self.a, self.b, self.c, self.d)


class FunctionRequest(BaseModel):
    expr: Optional[str] = None
    builtin: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "FunctionRequest":
        if (self.expr is None) == (self.builtin is None):
            raise ValueError("exactly one of 'expr' and 'builtin' is required")
        return self

    def resolve(self) -> tuple[Expr, str]:
        if self.builtin is not None:
            return get_builtin(self.builtin), self.builtin
        return parse(self.expr), self.expr


class LipschitzInfo(BaseModel):
    mode: str
    certified: bool
    l1: Optional[float] = None  # pairwise constants when available
    l2: Optional[float] = None
    m1: float
    m2: float


def _validate_lip_values(values: Optional[list[float]], mode: str,
                         pairwise_only: bool = False) -> None:
    if mode == "manual":
        if values is None:
            raise ValueError("manual mode requires 'lip' constants")
        if pairwise_only and len(values) != 2:
            raise ValueError("'lip' must hold exactly 2 constants here")
        if len(values) not in (2, 8):
            raise ValueError("'lip' must hold 2 or 8 constants")
        if any(v < 0 for v in values):
            raise ValueError("Lipschitz constants must be >= 0")
    elif values is not None:
        raise ValueError(f"'lip' is only accepted in manual mode, not {mode!r}")


class IntegrateRequest(FunctionRequest):
    rect: RectModel
    tol: float = Field(default=1e-6, gt=0)
    rule: Literal["midpoint", "corner"] = "midpoint"
    max_cells: int = Field(default=integrator.DEFAULT_MAX_CELLS, ge=1)
    lip_mode: Literal["manual", "certified", "sampled"] = "certified"
    lip: Optional[list[float]] = None
    subdivisions: int = Field(default=16, ge=1)
    samples: int = Field(default=10000, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _lip_consistent(self) -> "IntegrateRequest":
        _validate_lip_values(self.lip, self.lip_mode)
        return self


class IntegrateResponse(BaseModel):
    estimate: float
    error_bound: float
    cells: int
    evaluations: int
    converged: bool
    lipschitz: LipschitzInfo
    note: Optional[str] = None


def _resolve_constants(mode: str, lip: Optional[list[float]], e: Expr,
                       rect: Rectangle, subdivisions: int, samples: int,
                       seed: int) -> tuple[LipschitzConstants, LipschitzInfo,
                                           Optional[str]]:
    if mode == "manual":
        L = LipschitzConstants(tuple(float(v) for v in lip))
        l1, l2 = (L.values if L.is_pairwise else (None, None))
        return L, LipschitzInfo(mode=mode, certified=False, l1=l1, l2=l2,
                                m1=L.m1(), m2=L.m2()), None
    if mode == "certified":
        l1, l2 = certified_lipschitz(e, rect, subdivisions)
        L = LipschitzConstants.pairwise(l1, l2)
        return L, LipschitzInfo(mode=mode, certified=True, l1=l1, l2=l2,
                                m1=L.m1(), m2=L.m2()), None
    # sampled: never a silent fallback; explicitly uncertified
    l1, l2 = sampled_lipschitz(ExprFunction(e), rect, samples, seed)
    L = LipschitzConstants.pairwise(l1, l2)
    return L, LipschitzInfo(mode=mode, certified=False, l1=l1, l2=l2,
                            m1=L.m1(), m2=L.m2()), UNCERTIFIED_NOTE


def integrate(req: IntegrateRequest) -> IntegrateResponse:
    e, label = req.resolve()
    rect = req.rect.to_rectangle()
    L, info, note = _resolve_constants(req.lip_mode, req.lip, e, rect,
                                       req.subdivisions, req.samples, req.seed)
    result = integrator.integrate_certified(
        ExprFunction(e, label), rect, L, req.tol, req.rule, req.max_cells)
    return IntegrateResponse(
        estimate=result.estimate,
        error_bound=result.error_bound,
        cells=result.cells,
        evaluations=result.evaluations,
        converged=result.converged,
        lipschitz=info,
        note=note,
    )


class BoundsRequest(BaseModel):
    rect: RectModel
    lip: list[float]

    @model_validator(mode="after")
    def _lip_shape(self) -> "BoundsRequest":
        _validate_lip_values(self.lip, "manual")
        return self


class BoundsResponse(BaseModel):
    m1: float
    m2: float
    midpoint_mean_bound: float
    corner_midpoint_bound: float
    corner_mean_bound: float
    h_modulus_t: Optional[float] = None  # pairwise constants only
    h_modulus_s: Optional[float] = None


def bounds(req: BoundsRequest) -> BoundsResponse:
    rect = req.rect.to_rectangle()
    L = LipschitzConstants(tuple(float(v) for v in req.lip))
    mod_t = mod_s = None
    if L.is_pairwise:
        mod_t, mod_s = core.h_lipschitz_modulus(rect, L.values[0], L.values[1])
    return BoundsResponse(
        m1=L.m1(),
        m2=L.m2(),
        midpoint_mean_bound=core.midpoint_mean_bound(rect, L),
        corner_midpoint_bound=core.corner_midpoint_bound(rect, L),
        corner_mean_bound=core.corner_mean_bound(rect, L),
        h_modulus_t=mod_t,
        h_modulus_s=mod_s,
    )


class PairModel(BaseModel):
    l1: float
    l2: float


class LipschitzRequest(FunctionRequest):
    rect: RectModel
    mode: Literal["certified", "sampled", "both"] = "certified"
    subdivisions: int = Field(default=16, ge=1)
    samples: int = Field(default=10000, ge=1)
    seed: int = 0


class LipschitzResponse(BaseModel):
    certified: Optional[PairModel] = None
    sampled: Optional[PairModel] = None
    note: Optional[str] = None


def lipschitz(req: LipschitzRequest) -> LipschitzResponse:
    e, _ = req.resolve()
    rect = req.rect.to_rectangle()
    certified = sampled = note = None
    if req.mode in ("certified", "both"):
        l1, l2 = certified_lipschitz(e, rect, req.subdivisions)
        certified = PairModel(l1=l1, l2=l2)
    if req.mode in ("sampled", "both"):
        l1, l2 = sampled_lipschitz(ExprFunction(e), rect, req.samples, req.seed)
        sampled = PairModel(l1=l1, l2=l2)
        note = UNCERTIFIED_NOTE
    return LipschitzResponse(certified=certified, sampled=sampled, note=note)


class VerifyRequest(BaseModel):
    seed: int = 0
    oracle_n: int = VerifyConfig.oracle_n
    smooth_oracle_n: int = VerifyConfig.smooth_oracle_n
    lipschitz_trials: int = Field(default=VerifyConfig.lipschitz_trials, ge=0)
    chain_trials: int = Field(default=VerifyConfig.chain_trials, ge=0)
    h_functions: int = Field(default=VerifyConfig.h_functions, ge=0)
    h_grid: int = Field(default=VerifyConfig.h_grid, ge=1)
    oned_trials: int = Field(default=VerifyConfig.oned_trials, ge=0)
    convexity_samples: int = Field(default=VerifyConfig.convexity_samples, ge=1)

    def to_config(self) -> VerifyConfig:
        return VerifyConfig(
            seed=self.seed,
            oracle_n=self.oracle_n,
            smooth_oracle_n=self.smooth_oracle_n,
            lipschitz_trials=self.lipschitz_trials,
            chain_trials=self.chain_trials,
            h_functions=self.h_functions,
            h_grid=self.h_grid,
            oned_trials=self.oned_trials,
            convexity_samples=self.convexity_samples,
        )


class CaseModel(BaseModel):
    name: str
    function: str
    rect: list[float]
    lhs: float
    rhs: float
    slack: float
    holds: bool


class VerifyResponse(BaseModel):
    seed: int
    cases: list[CaseModel]
    violations: int


def run_verify(req: VerifyRequest) -> Report:
    return run_suite(req.to_config())


def verify_response(report: Report) -> VerifyResponse:
    return VerifyResponse(
        seed=report.seed,
        cases=[CaseModel(name=c.name, function=c.function, rect=list(c.rect),
                         lhs=c.lhs, rhs=c.rhs, slack=c.slack, holds=c.holds)
               for c in report.cases],
        violations=report.violations,
    )


class HMapRequest(FunctionRequest):
    rect: RectModel
    grid: int = Field(default=9, ge=1)
    n: int = 64
    lip_mode: Literal["manual", "certified", "sampled"] = "certified"
    lip: Optional[list[float]] = None
    subdivisions: int = Field(default=16, ge=1)
    samples: int = Field(default=10000, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def _checks(self) -> "HMapRequest":
        # h bounds take scalar per-axis constants, so only pairwise applies
        _validate_lip_values(self.lip, self.lip_mode, pairwise_only=True)
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("n must be an even integer >= 2")
        return self


class HMapRow(BaseModel):
    t: float
    s: float
    h: float
    eq6_lhs: float
    eq6_rhs: float
    eq7_lhs: float
    eq7_rhs: float
    eq9_lhs: Optional[float] = None  # vs the previous grid row
    eq9_rhs: Optional[float] = None
    eq10_lhs: float
    eq10_rhs: float
    eq10_rhs_alt: float  # extra t, s factors; can undercut the true bound


class HMapResponse(BaseModel):
    l1: float
    l2: float
    lip_mode: str
    note: Optional[str] = None
    rows: list[HMapRow]


def hmap(req: HMapRequest) -> HMapResponse:
    e, label = req.resolve()
    rect = req.rect.to_rectangle()
    L, info, note = _resolve_constants(req.lip_mode, req.lip, e, rect,
                                       req.subdivisions, req.samples, req.seed)
    l1, l2 = info.l1, info.l2
    fn = ExprFunction(e, label)
    mid = midpoint_value(fn, rect)
    mean = mean_value_oracle(fn, rect, req.n)
    mod_t, mod_s = core.h_lipschitz_modulus(rect, l1, l2)
    grid = unit_grid(req.grid)
    rows = []
    prev: tuple[UnitPair, float] | None = None
    for ts in grid:
        h = h_value(fn, rect, ts, req.n)
        sub = core.shrink_toward_center(rect, ts)
        lhs10 = abs(corner_average(fn, sub) - h)
        eq9_lhs = eq9_rhs = None
        if prev is not None:
            prev_ts, prev_h = prev
            eq9_lhs = abs(h - prev_h)
            eq9_rhs = mod_t * abs(ts.t - prev_ts.t) + mod_s * abs(ts.s - prev_ts.s)
        rows.append(HMapRow(
            t=ts.t, s=ts.s, h=h,
            eq6_lhs=abs(h - mid),
            eq6_rhs=core.h_vs_midpoint_bound(ts, rect, l1, l2),
            eq7_lhs=abs(h - mean),
            eq7_rhs=core.h_vs_mean_bound(ts, rect, l1, l2),
            eq9_lhs=eq9_lhs,
            eq9_rhs=eq9_rhs,
            eq10_lhs=lhs10,
            eq10_rhs=core.subrectangle_corner_bound(ts, rect, L),
            eq10_rhs_alt=(L.m1() * sub.width() * ts.t
                          + L.m2() * sub.height() * ts.s) / 12.0,
        ))
        prev = (ts, h)
    return HMapResponse(l1=l1, l2=l2, lip_mode=req.lip_mode, note=note,
                        rows=rows)
