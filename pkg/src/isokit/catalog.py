"""Bundled catalog of isochronous-center families and their verification.

Fixture files (one per source theorem) live in data/*.cat; each entry keeps
its coefficient tables in the system-file expression grammar, the claimed
Urabe function as generator metadata, and an explicit list of checks.
verify_entry runs a single entry's plan; verify_catalog fans out over
entries and merges reports deterministically by id.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from importlib import resources

from gmpy2 import mpq

from .algebra.poly import ParamPoly, auto_weights
from .algebra.scalars import QuadNum, scalar_sqrt
from .algebra.series import XSeries
from .isochrony import c_algorithm, urabe_series, verify_urabe, zero_urabe_check
from .lienard import NotReducibleError
from .linearize import harmonic_identity_check, potential_series
from .sysfile import (PlanarSystem, SysFileError, evaluate_poly,
                      parse_system_text)
from .verify import (NumericSystem, isochronicity_probe, reversible_any_axis,
                     reversible_x_axis)

DATA_FILES = ("standard.cat", "cubic.cat", "quartic.cat")

DEFAULT_K = 15
DEFAULT_N_URABE = 20
DEFAULT_N_LIN = 30
DEFAULT_TOL = 1e-12
DEFAULT_DEV = 1e-6
DEFAULT_AMPLITUDES = (0.05, 0.1, 0.2, 0.3)


class CatalogError(ValueError):
    """Malformed catalog fixture."""

    def __init__(self, message, source="", line=None):
        loc = f" [{source}" + (f":{line}]" if line is not None else "]")
        super().__init__(message + (loc if source else ""))


@dataclass(frozen=True)
class CheckSpec:
    name: str
    args: dict


@dataclass(frozen=True)
class UrabeForm:
    """Claimed Urabe function: kind in {zero, std, poly, special}.

    std carries h = a * xi^(2n+1) / sqrt(b + c * xi^(4n+2)); poly carries an
    expression in xi; special names a coded generator.
    """

    kind: str
    data: dict


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    theorem: str
    status: str                       # exact | conjectural | float
    note: str
    system: PlanarSystem | None       # None for float-native entries
    float_xdot: dict | None
    float_ydot: dict | None
    instantiate: dict                 # param -> exact scalar for numeric work
    urabe: UrabeForm | None
    checks: tuple[CheckSpec, ...]

    @property
    def is_float(self) -> bool:
        return self.system is None

    def numeric_system(self) -> NumericSystem:
        if self.is_float:
            return NumericSystem.from_tables(self.float_xdot, self.float_ydot,
                                             provenance="float-native")
        values = {k: float(v) for k, v in self.instantiate.items()}
        missing = [v for v in self.system.vars if v not in values]
        if missing:
            raise CatalogError(f"{self.id}: no instantiation for {missing}")
        return self.system.to_numeric(values)

    def exact_instance(self) -> PlanarSystem:
        """Free parameters replaced by their exact instantiation values."""
        if self.is_float:
            def rat(table):
                return {k: ParamPoly.constant((), mpq(v))
                        for k, v in table.items() if v != 0.0}
            return PlanarSystem((), None, rat(self.float_xdot),
                                rat(self.float_ydot))
        return self.system.substitute(dict(self.instantiate))


# -- fixture parsing ------------------------------------------------------------

_ASSIGN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)=(.+)$")


def _parse_args(parts, source, lineno) -> dict:
    args = {}
    for p in parts:
        m = _ASSIGN.match(p)
        if not m:
            raise CatalogError(f"bad argument {p!r}", source, lineno)
        args[m.group(1)] = m.group(2)
    return args


def _parse_entry(block: list[tuple[int, str]], source: str) -> CatalogEntry:
    head_line, head = block[0]
    entry_id = head.split()[1]
    theorem = ""
    status = "exact"
    note = ""
    urabe: UrabeForm | None = None
    checks: list[CheckSpec] = []
    instantiate: dict = {}
    sys_lines: list[str] = []
    fx: dict = {}
    fy: dict = {}
    for lineno, body in block[1:]:
        if body.startswith("theorem "):
            theorem = body[8:].strip()
        elif body.startswith("status "):
            status = body[7:].strip()
            if status not in ("exact", "conjectural", "float"):
                raise CatalogError(f"bad status {status!r}", source, lineno)
        elif body.startswith("note "):
            note = (note + " " + body[5:]).strip()
        elif body.startswith("urabe-form "):
            parts = body.split()[1:]
            kind = parts[0]
            if kind == "zero":
                urabe = UrabeForm("zero", {})
            elif kind == "std":
                urabe = UrabeForm("std", _parse_args(parts[1:], source, lineno))
            elif kind == "poly":
                urabe = UrabeForm("poly", {"expr": body.split(None, 2)[2]})
            elif kind == "special":
                urabe = UrabeForm("special", {"name": parts[1]})
            else:
                raise CatalogError(f"bad urabe form {kind!r}", source, lineno)
        elif body.startswith("check "):
            parts = body.split()[1:]
            checks.append(CheckSpec(parts[0],
                                    _parse_args(parts[1:], source, lineno)))
        elif body.startswith("instantiate "):
            for name, val in _parse_args(body.split()[1:], source,
                                         lineno).items():
                instantiate[name] = mpq(val)
        elif body.startswith(("fx ", "fy ")):
            tgt = fx if body.startswith("fx ") else fy
            parts = body.split()
            if len(parts) != 4:
                raise CatalogError("float coefficient needs: fx i j value",
                                   source, lineno)
            tgt[(int(parts[1]), int(parts[2]))] = float(parts[3])
        elif body.startswith(("field ", "param ", "xdot", "ydot")):
            sys_lines.append(body)
        else:
            raise CatalogError(f"cannot parse {body!r}", source, lineno)

    system = None
    fxo = fyo = None
    if sys_lines:
        try:
            system = parse_system_text("\n".join(sys_lines), source)
        except SysFileError as e:
            raise CatalogError(f"{entry_id}: {e}", source, head_line)
    elif fx or fy:
        fxo, fyo = fx, fy
        if status != "float":
            raise CatalogError(f"{entry_id}: coefficient tables imply float "
                               "status", source, head_line)
    else:
        raise CatalogError(f"{entry_id}: entry has no system", source,
                           head_line)
    return CatalogEntry(entry_id, theorem, status, note, system, fxo, fyo,
                        instantiate, urabe, tuple(checks))


def _parse_catalog_text(text: str, source: str) -> list[CatalogEntry]:
    entries = []
    block: list[tuple[int, str]] | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].rstrip()
        stripped = body.strip()
        if not stripped:
            continue
        if stripped.startswith("entry "):
            if block is not None:
                raise CatalogError("nested entry", source, lineno)
            block = [(lineno, stripped)]
        elif stripped == "end":
            if block is None:
                raise CatalogError("end without entry", source, lineno)
            entries.append(_parse_entry(block, source))
            block = None
        else:
            if block is None:
                raise CatalogError(f"text outside entry: {stripped!r}",
                                   source, lineno)
            block.append((lineno, stripped))
    if block is not None:
        raise CatalogError(f"unterminated entry {block[0][1]!r}", source)
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise CatalogError(f"duplicate entry ids in {source}", source)
    return entries


def load_catalog() -> list[CatalogEntry]:
    """All bundled entries, file order fixed, ids unique across files."""
    out: list[CatalogEntry] = []
    for name in DATA_FILES:
        text = (resources.files("isokit") / "data" / name).read_text()
        out.extend(_parse_catalog_text(text, name))
    ids = [e.id for e in out]
    if len(set(ids)) != len(ids):
        raise CatalogError("duplicate ids across catalog files")
    return out


def get_entry(entry_id: str) -> CatalogEntry | None:
    for e in load_catalog():
        if e.id == entry_id:
            return e
    return None


# -- Urabe generators -------------------------------------------------------------


def urabe_from_form(form: UrabeForm, system: PlanarSystem | None,
                    order: int) -> XSeries:
    vars = system.vars if system is not None else ()
    d = system.d if system is not None else None
    if form.kind == "zero":
        return XSeries.zero(vars, order)
    if form.kind == "std":
        n = int(form.data.get("n", "0"))
        a = evaluate_poly(form.data["a"], vars, d)
        b = evaluate_poly(form.data["b"], vars, d).constant_value()
        c = evaluate_poly(form.data["c"], vars, d)
        return _std_urabe(vars, n, a, b, c, order, d)
    if form.kind == "poly":
        return _poly_urabe(vars, d, form.data["expr"], order)
    if form.kind == "special":
        name = form.data["name"]
        gen = _SPECIALS.get(name)
        if gen is None:
            raise CatalogError(f"unknown special Urabe generator {name!r}")
        return gen(order)
    raise CatalogError(f"bad urabe form {form.kind!r}")


def _std_urabe(vars, n: int, a: ParamPoly, b, c: ParamPoly,
               order: int, d: int | None = None) -> XSeries:
    """h = a xi^(2n+1) / sqrt(b + c xi^(4n+2)); b a positive scalar whose
    square root lies in the scalar field."""
    root_b = scalar_sqrt(b, d=d)
    inv_root_b = (1 / root_b) if not isinstance(root_b, QuadNum) \
        else root_b.inverse()
    # (1 + (c/b) u)^(-1/2) with u = xi^(4n+2)
    m = 4 * n + 2
    inner = XSeries.zero(vars, order)
    if m <= order:
        cb = c.scalar_div(b) if not isinstance(b, QuadNum) else c * b.inverse()
        inner.coeffs[m] = cb
    inner.coeffs[0] = ParamPoly.constant(vars, 1)
    inv_sqrt = inner.sqrt_unit().inverse()
    lead = XSeries.zero(vars, order)
    k = 2 * n + 1
    if k <= order:
        lead.coeffs[k] = a.scalar_mul(inv_root_b)
    return (lead * inv_sqrt).truncate(order)


def _radical_of(vars, *polys) -> int | None:
    from .algebra.poly import radical_tag
    for p in polys:
        t = radical_tag(p)
        if t is not None:
            return t
    return None


def _poly_urabe(vars, d, expr: str, order: int) -> XSeries:
    big = tuple(vars) + ("xi",)
    p = evaluate_poly(expr, big, d)
    cs = [ParamPoly.zero(vars) for _ in range(order + 1)]
    for exp, cval in p.iter_terms():
        k = exp[-1]
        if k > order:
            continue
        rest = {tuple(exp[:-1]): cval}
        cs[k] = cs[k] + ParamPoly.make(vars, rest)
    return XSeries(tuple(vars), cs)


# special closed forms for the one-parameter family with three solvable
# parameter values; all expansions stay in Q.

def _st26_plus(order: int) -> XSeries:
    """h = 4 xi (xi^2+12) sqrt(1+xi^2/16) / ((xi^2+4)(xi^2+16))."""
    v = ()
    xi2 = XSeries.from_scalars(v, [0, 0, 1], order)
    num = xi2 + XSeries.constant(v, 12, order)
    root = (XSeries.from_scalars(v, [1, 0, mpq(1, 16)], order)).sqrt_unit()
    den = (xi2 + XSeries.constant(v, 4, order)) * (xi2 + XSeries.constant(v, 16, order))
    unit = den.scalar_mul(mpq(1, 64))   # den(0) = 64
    res = (num * root * unit.inverse()).scalar_mul(mpq(4, 64))
    return res.shift_up(1).truncate(order)


def _st26_zero(order: int) -> XSeries:
    """h = xi sqrt(2 v) (xi^2 + 2u + 2) / ((2+xi^2)(u+6)) with
    u = sqrt(4+2 xi^2) and v = (xi^2 - 4 + 2u)/xi^2."""
    v = ()
    n = order + 2
    xi2 = XSeries.from_scalars(v, [0, 0, 1], n)
    u = XSeries.from_scalars(v, [1, 0, mpq(1, 2)], n).sqrt_unit().scalar_mul(
        mpq(2))
    w = (xi2 - XSeries.constant(v, 4, n) + u.scalar_mul(mpq(2)))
    vr = w.shift_down(2)             # (xi^2 - 4 + 2u)/xi^2, constant 2
    two_v = vr.scalar_mul(mpq(2))    # constant 4
    root = two_v.scalar_mul(mpq(1, 4)).sqrt_unit().scalar_mul(mpq(2))
    num = xi2 + u.scalar_mul(mpq(2)) + XSeries.constant(v, 2, n)
    den = (XSeries.constant(v, 2, n) + xi2) * (u + XSeries.constant(v, 6, n))
    res = root * num * den.scalar_mul(mpq(1, 16)).inverse()
    return res.scalar_mul(mpq(1, 16)).shift_up(1).truncate(order)


def _lambert_w_series(vars, order: int) -> XSeries:
    """W(z) = sum_{n>=1} (-n)^(n-1) z^n / n!."""
    cs = [ParamPoly.zero(vars)]
    fact = 1
    for n in range(1, order + 1):
        fact *= n
        cs.append(ParamPoly.constant(vars, mpq((-n) ** (n - 1), fact)))
    return XSeries(vars, cs)


def _st26_minus(order: int) -> XSeries:
    """h with L = W(xi^2/4):
    h = 4 sqrt(1+L/4) sqrt(xi^2/(4L)) (L+3) L / (2 xi (L+4)(L+1))."""
    v = ()
    n = order + 4
    w = _lambert_w_series(v, n)
    # L = W(xi^2/4): substitute z = xi^2/4
    L = XSeries.zero(v, n)
    for k in range(1, n // 2 + 1):
        c = w.coeffs[k].scalar_mul(mpq(1, 4 ** k))
        if 2 * k <= n:
            L.coeffs[2 * k] = c
    xi2_over_4L = L.scalar_mul(mpq(4)).shift_down(2).inverse()  # xi^2/(4L), c0=1
    root2 = xi2_over_4L.sqrt_unit()
    root1 = (XSeries.constant(v, 1, n)
             + L.scalar_mul(mpq(1, 4))).sqrt_unit()
    num = (L + XSeries.constant(v, 3, n)) * L
    den = (L + XSeries.constant(v, 4, n)) * (L + XSeries.constant(v, 1, n))
    # sqrt2*sqrt(2L+8)*sqrt(xi^2/L) = 8 root1 root2, so h reduces to
    # 4 root1 root2 num / (xi den) with den(0) = 4; num has valuation 2
    res = root1 * root2 * num * den.scalar_mul(mpq(1, 4)).inverse()
    return res.shift_down(1).truncate(order)


_SPECIALS = {
    "st26-plus": _st26_plus,
    "st26-zero": _st26_zero,
    "st26-minus": _st26_minus,
}


def st26_xi_squared_identity(order: int = 20) -> bool:
    """Exact check that the computed xi^2 for the one-parameter conjectural
    family matches its closed form

        xi^2 = x^2 (1-x/2)^(-2/(16b+1)) (1 - x/2 + (2b+1/8)x^2)^(-(16b-1)/(16b+1))

    written as the polynomial-coefficient identity
        (16b+1) log(xi^2/x^2) + 2 log(1-x/2) + (16b-1) log(...) = 0."""
    from .isochrony import xi_series
    entry = get_entry("ST26")
    if entry is None:
        raise CatalogError("catalog entry ST26 missing")
    lp = entry.system.to_cherkas().to_lienard()
    vars = entry.system.vars
    b = ParamPoly.variable(vars, "b22")
    one = ParamPoly.constant(vars, 1)
    xi = xi_series(lp, order + 2)
    ratio = (xi * xi).shift_down(2)
    lhs = ratio.log().poly_mul(b.scalar_mul(16) + one)
    log1 = XSeries.from_scalars(vars, [1, mpq(-1, 2)], order).log()
    inner = XSeries(vars, [one, ParamPoly.constant(vars, mpq(-1, 2)),
                           b.scalar_mul(2) + ParamPoly.constant(vars, mpq(1, 8))])
    log2 = inner.truncate(order).log()
    total = lhs + log1.scalar_mul(mpq(2)) + log2.poly_mul(
        b.scalar_mul(16) - one)
    return total.truncate(order).is_zero


# -- entry verification ------------------------------------------------------------


@dataclass(frozen=True)
class VerifyConfig:
    """Pinned parameters for a catalog run; entry checks may override."""

    k: int = DEFAULT_K
    n_urabe: int = DEFAULT_N_URABE
    n_linearize: int = DEFAULT_N_LIN
    tol: float = DEFAULT_TOL
    max_dev: float = DEFAULT_DEV
    jobs: int = 1


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str   # PASS | FAIL | ERROR
    detail: str

    def as_dict(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class EntryReport:
    id: str
    status: str   # PASS | FAIL | ERROR
    checks: tuple[CheckResult, ...]
    max_period_dev: float | None

    def line(self) -> str:
        parts = [f"{self.id:<12} {self.status:<5}"]
        for c in self.checks:
            parts.append(f"{c.name}[{c.status}]")
        if self.max_period_dev is not None:
            parts.append(f"max_period_dev={self.max_period_dev:.3e}")
        return " ".join(parts)

    def as_dict(self):
        return {"id": self.id, "status": self.status,
                "checks": [c.as_dict() for c in self.checks],
                "max_period_dev": self.max_period_dev}


def _expect_arg(args: dict, default: bool | None = None) -> bool | None:
    v = args.get("expect")
    if v is None:
        return default
    return v == "true"


def verify_entry(entry: CatalogEntry, config: VerifyConfig) -> EntryReport:
    """Run the entry's plan; verdict PASS only if every check passes.

    Sub-operation errors are recorded and mark the entry ERROR, not FAIL.
    """
    results: list[CheckResult] = []
    max_dev: float | None = None
    lp = None
    cherkas = None
    if not entry.is_float:
        try:
            cherkas = entry.system.to_cherkas()
        except Exception as e:  # malformed entry
            return EntryReport(entry.id, "ERROR",
                               (CheckResult("setup", "ERROR", str(e)),), None)

    def lienard_pair():
        nonlocal lp
        if lp is None:
            lp = cherkas.to_lienard()
        return lp

    for spec in entry.checks:
        name, args = spec.name, spec.args
        try:
            if name == "reduce":
                conds = cherkas.residual_conditions()
                ok = not conds
                detail = "residual=0" if ok else f"{len(conds)} nonzero residual coefficients"
                pair_ok = ok and lienard_pair().has_unit_g()
                if ok and not pair_ok:
                    ok, detail = False, "reduced pair lacks g(0)=0, g'(0)=1"
                results.append(CheckResult(name, "PASS" if ok else "FAIL", detail))
            elif name == "conditions":
                k = int(args.get("k", config.k))
                cset = c_algorithm(lienard_pair(), k)
                ok = cset.all_zero()
                detail = (f"c1..c{k} all zero" if ok
                          else f"first nonzero condition: c{cset.first_nonzero()}")
                results.append(CheckResult(name, "PASS" if ok else "FAIL", detail))
            elif name == "zero-urabe":
                expect = _expect_arg(args, True)
                got = zero_urabe_check(lienard_pair())
                ok = got == expect
                results.append(CheckResult(
                    name, "PASS" if ok else "FAIL",
                    f"g'+fg=1 is {str(got).lower()} (expected {str(expect).lower()})"))
            elif name == "urabe":
                n = int(args.get("n", config.n_urabe))
                if entry.urabe is None:
                    raise CatalogError(f"{entry.id}: urabe check without form")
                h = urabe_from_form(entry.urabe, entry.system, n)
                ok, first_bad = verify_urabe(lienard_pair(), h, n)
                detail = (f"closed form verified to order {n}" if ok
                          else f"identity fails at order {first_bad}")
                results.append(CheckResult(name, "PASS" if ok else "FAIL", detail))
            elif name == "linearize":
                n = int(args.get("n", config.n_linearize))
                expect = _expect_arg(args, True)
                ok_h, first_bad = harmonic_identity_check(lienard_pair(), n)
                pot = potential_series(lienard_pair(), min(n, 20))
                ok_u = pot.is_harmonic()
                ok = (ok_h == expect) and (ok_u == expect)
                detail = (f"g e^F = int e^F and U = q^2/2 both "
                          f"{str(ok_h).lower()} to order {n}"
                          if ok_h == ok_u else
                          f"harmonic identity {ok_h} but potential harmonic {ok_u}")
                if not ok_h and first_bad is not None:
                    detail += f" (first discrepancy at order {first_bad})"
                results.append(CheckResult(name, "PASS" if ok else "FAIL", detail))
            elif name == "period":
                tol = float(args.get("tol", config.tol))
                dev = float(args.get("dev", config.max_dev))
                amps = (tuple(float(a) for a in args["x0"].split(","))
                        if "x0" in args else DEFAULT_AMPLITUDES)
                report = isochronicity_probe(entry.numeric_system(), amps,
                                             tol, dev)
                max_dev = (report.max_deviation if max_dev is None
                           else max(max_dev, report.max_deviation))
                results.append(CheckResult(
                    name, "PASS" if report.passed else "FAIL",
                    f"max |T-2pi| = {report.max_deviation:.3e} over "
                    f"{len(amps)} amplitudes at tol {tol:.1e}"))
            elif name == "reversible-x":
                expect = _expect_arg(args)
                sysd = entry.system if entry.system is not None else entry.exact_instance()
                got = reversible_x_axis(sysd.xdot, sysd.ydot)
                ok = expect is None or got == expect
                results.append(CheckResult(
                    name, "PASS" if ok else "FAIL",
                    f"x-axis parity {str(got).lower()}"
                    + ("" if expect is None else f" (expected {str(expect).lower()})")))
            elif name == "reversible-any":
                expect = _expect_arg(args)
                inst = entry.exact_instance()
                got = reversible_any_axis(inst.xdot, inst.ydot)
                ok = expect is None or got == expect
                results.append(CheckResult(
                    name, "PASS" if ok else "FAIL",
                    f"symmetry axis exists: {str(got).lower()}"
                    + ("" if expect is None else f" (expected {str(expect).lower()})")))
            else:
                raise CatalogError(f"{entry.id}: unknown check {name!r}")
        except NotReducibleError as e:
            results.append(CheckResult(name, "FAIL", str(e)))
        except Exception as e:
            results.append(CheckResult(name, "ERROR", f"{type(e).__name__}: {e}"))

    if any(c.status == "ERROR" for c in results):
        verdict = "ERROR"
    elif all(c.status == "PASS" for c in results):
        verdict = "PASS"
    else:
        verdict = "FAIL"
    return EntryReport(entry.id, verdict, tuple(results), max_dev)


def verify_catalog(entries=None, config: VerifyConfig | None = None,
                   jobs: int = 1) -> list[EntryReport]:
    """Verify entries (default: whole catalog); reports ordered by id."""
    config = config or VerifyConfig()
    entries = load_catalog() if entries is None else list(entries)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_star,
                                    [(e, config) for e in entries]))
    else:
        reports = [verify_entry(e, config) for e in entries]
    reports.sort(key=lambda r: r.id)
    return reports


def _verify_star(pair):
    return verify_entry(*pair)


def reports_to_json(reports) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2,
                      sort_keys=False) + "\n"
