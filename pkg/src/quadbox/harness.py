"""Experiment engine: end-to-end pipeline runs, sweeps, and fits.

The sweep is deterministic: every random draw comes from an explicitly
seeded splitmix64 stream and the seed is recorded in each output row, so a
repeated run reproduces the CSV byte for byte.  Timing is kept on the
in-memory records only and never serialized, for the same reason.
"""

import math
import time
from dataclasses import dataclass, field

from . import boxcount, conic, decomp
from .errors import PipelineMismatch, QuadboxError, Underdetermined
from .quadform import Box, QuadraticForm, standardize

CSV_SCHEMA = "#schema=1"
CSV_COLUMNS = ("p", "M", "samples", "a", "b", "c", "d", "e", "f",
               "max_count", "mean_count", "trivial_bound",
               "estimate_main", "estimate_scale", "theorem_shape",
               "regime", "seed", "error")


class SplitMix64:
    """splitmix64 PRNG; chosen for trivial cross-language reproducibility."""

    MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.state = seed & self.MASK

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randbelow(self, n):
        limit = (1 << 64) - (1 << 64) % n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n


@dataclass
class PipelineReport:
    kind: str
    regime: str
    T: int
    pigeonhole: object
    per_part: list               # (z or n, solution count) pairs
    pipeline_count: int
    exact_count: int

    @property
    def match(self):
        return self.pipeline_count == self.exact_count


def _pullback_count(inst, points, box, collect=False):
    """Map standardized solutions back through the affine map, keeping only
    integral preimages inside the original box."""
    kept = []
    for X, Y in points:
        if not (inst.x_interval[0] <= X <= inst.x_interval[1]
                and inst.y_interval[0] <= Y <= inst.y_interval[1]):
            continue
        xy = inst.map.invert(X, Y)
        if xy is not None and box.contains(*xy):
            kept.append(xy)
    return kept


def _product_range(xI, yI):
    prods = [a * b for a in xI for b in yI]
    return min(prods), max(prods)


def run_pipeline(Q, lam, p, box):
    """standardize -> decompose -> per-part Diophantine solving -> pull back;
    asserts exact agreement with the direct counter."""
    pm = p if isinstance(p, int) else p.p
    inst = standardize(Q, lam, pm, box)
    exact = boxcount.count_exact(Q, lam, pm, box).count

    per_part = []
    pulled = set()
    if inst.kind == "norm":
        xlen = inst.x_interval[1] - inst.x_interval[0] + 1
        ylen = inst.y_interval[1] - inst.y_interval[0] + 1
        M = max(xlen, ylen)
        K, L = inst.x_interval[0] - 1, inst.y_interval[0] - 1
        sbox = Box(K, L, M)
        T, regime = decomp.choose_T(M, pm, inst.D)
        ph, instances = decomp.decompose(inst.D, inst.mu, pm, sbox, T=T)
        for eq in instances:
            pts = decomp.solve_instance(eq)
            per_part.append((eq.z, len(pts)))
            for x, y in decomp.recompose([(eq, pts)]):
                pulled.add((x + K, y + L))
    else:
        regime = "-"
        T = 0
        ph = None
        if inst.kind == "hyperbolic":
            uI, vI = inst.x_interval, inst.y_interval
        else:
            # X^2 - Y^2 = (X+Y)(X-Y): product variables U, V
            uI = (inst.x_interval[0] + inst.y_interval[0],
                  inst.x_interval[1] + inst.y_interval[1])
            vI = (inst.x_interval[0] - inst.y_interval[1],
                  inst.x_interval[1] - inst.y_interval[0])
        nlo, nhi = _product_range(uI, vI)
        n = nlo + (inst.mu - nlo) % pm
        while n <= nhi:
            if n != 0:
                pts = conic.solve_xy_in_box(n, uI, vI)
                kept = []
                for pt in pts:
                    if inst.kind == "hyperbolic":
                        kept.append((pt.x, pt.y))
                    elif (pt.x - pt.y) % 2 == 0:
                        kept.append(((pt.x + pt.y) // 2, (pt.x - pt.y) // 2))
                per_part.append((n, len(kept)))
                pulled.update(kept)
            n += pm

    count = len(_pullback_count(inst, pulled, box))
    report = PipelineReport(kind=inst.kind, regime=regime, T=T, pigeonhole=ph,
                            per_part=per_part, pipeline_count=count,
                            exact_count=exact)
    if not report.match:
        raise PipelineMismatch(
            f"pipeline count {count} != exact count {exact} for {Q}, "
            f"lam={lam}, p={pm}, box={box}")
    return report


@dataclass
class SweepSpec:
    primes: list
    m_schedule: list
    samples: int
    form: tuple                 # (a, b, c, d, e, f)
    seed: int


@dataclass
class ExperimentRecord:
    p: int
    M: int
    samples: int
    form: tuple
    max_count: int
    mean_count: float
    trivial_bound: int
    estimate_main: float
    estimate_scale: float
    theorem_shape: float
    regime: str
    seed: int
    error: str = ""
    wall_time_ms: float = 0.0
    counts: list = field(default_factory=list)


def parse_config(text):
    """Line-based `key = value` config for sweeps."""
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    spec = SweepSpec(
        primes=[int(v) for v in out["primes"].split(",")],
        m_schedule=[int(v) for v in out["m_schedule"].split(",")],
        samples=int(out.get("samples", "20")),
        form=tuple(int(v) for v in out["form"].split(",")),
        seed=int(out.get("seed", "1")),
    )
    if len(spec.form) != 6:
        raise ValueError("form needs exactly 6 coefficients a,b,c,d,e,f")
    return spec


def _sample_cell(Q, p, M, samples, rng):
    """Counts for `samples` random irreducible (K, L, lambda) draws."""
    from .quadform import is_absolutely_irreducible
    counts = []
    for _ in range(samples):
        for _ in range(64):
            K = rng.randbelow(p)
            L = rng.randbelow(p)
            lam = rng.randbelow(p)
            if is_absolutely_irreducible(Q, lam, p):
                break
        else:
            raise QuadboxError("could not draw an irreducible lambda")
        counts.append(boxcount.count_exact(Q, lam, p, Box(K, L, M)).count)
    return counts


def sweep(spec):
    """Run the grid and return ExperimentRecords in deterministic order."""
    Q = QuadraticForm(*spec.form)
    D = Q.discriminant()
    records = []
    for p in spec.primes:
        for M in spec.m_schedule:
            rng = SplitMix64(spec.seed ^ (p * 0x9E3779B97F4A7C15 + M))
            start = time.perf_counter()
            try:
                counts = _sample_cell(Q, p, M, spec.samples, rng)
                try:
                    _, regime = decomp.choose_T(M, p, abs(D))
                except QuadboxError:
                    regime = "-"
                rec = ExperimentRecord(
                    p=p, M=M, samples=spec.samples, form=spec.form,
                    max_count=max(counts),
                    mean_count=sum(counts) / len(counts),
                    trivial_bound=2 * M,
                    estimate_main=M * M / p,
                    estimate_scale=math.sqrt(p) * math.log(p) ** 2,
                    theorem_shape=M ** (4 / 3) * p ** (-1 / 3) + 1,
                    regime=regime, seed=spec.seed, counts=counts)
            except QuadboxError as exc:
                rec = ExperimentRecord(
                    p=p, M=M, samples=spec.samples, form=spec.form,
                    max_count=0, mean_count=0.0, trivial_bound=2 * M,
                    estimate_main=0.0, estimate_scale=0.0, theorem_shape=0.0,
                    regime="-", seed=spec.seed,
                    error=type(exc).__name__)
            rec.wall_time_ms = (time.perf_counter() - start) * 1e3
            records.append(rec)
    return records


def records_to_csv(records):
    """RFC-4180-style CSV with LF endings and a schema comment line.

    wall_time_ms is deliberately not serialized: identical (config, seed)
    must give byte-identical output.
    """
    lines = [CSV_SCHEMA, ",".join(CSV_COLUMNS)]
    for r in records:
        a, b, c, d, e, f = r.form
        lines.append(",".join(str(v) for v in (
            r.p, r.M, r.samples, a, b, c, d, e, f,
            r.max_count, repr(r.mean_count), r.trivial_bound,
            repr(r.estimate_main), repr(r.estimate_scale),
            repr(r.theorem_shape), r.regime, r.seed, r.error)))
    return "\n".join(lines) + "\n"


def parse_csv(text):
    """Inverse of records_to_csv, for the fit subcommand."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    records = []
    for ln in lines[1:]:
        row = dict(zip(header, ln.split(",")))
        records.append(ExperimentRecord(
            p=int(row["p"]), M=int(row["M"]), samples=int(row["samples"]),
            form=tuple(int(row[k]) for k in "abcdef"),
            max_count=int(row["max_count"]),
            mean_count=float(row["mean_count"]),
            trivial_bound=int(row["trivial_bound"]),
            estimate_main=float(row["estimate_main"]),
            estimate_scale=float(row["estimate_scale"]),
            theorem_shape=float(row["theorem_shape"]),
            regime=row["regime"], seed=int(row["seed"]),
            error=row["error"]))
    return records


def fit_exponent(records):
    """Least-squares slope of log(max_count) against log(M).

    Returns (slope, rms residual); needs >= 3 usable records.
    """
    pts = [(math.log(r.M), math.log(r.max_count))
           for r in records if r.max_count >= 1 and not r.error]
    if len(pts) < 3:
        raise Underdetermined(f"need >= 3 records with count >= 1, got {len(pts)}")
    n = len(pts)
    sx = sum(x for x, _ in pts)
    sy = sum(y for _, y in pts)
    sxx = sum(x * x for x, _ in pts)
    sxy = sum(x * y for x, y in pts)
    denom = n * sxx - sx * sx
    if denom == 0:
        raise Underdetermined("all records share the same M")
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    rss = sum((y - slope * x - intercept) ** 2 for x, y in pts)
    return slope, math.sqrt(rss / n)


def parabola_sanity(m_schedule, p, K=0, L=0, lam=0):
    """Solution counts of y = x^2 (mod p) in boxes, against the sqrt(M) shape."""
    Q = QuadraticForm(-1, 0, 0, 0, 1, 0, allow_degenerate=True)
    rows = []
    for M in m_schedule:
        count = boxcount.count_exact(Q, lam, p, Box(K, L, M)).count
        rows.append((M, count, count / math.sqrt(M)))
    return rows
