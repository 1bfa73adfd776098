"""Command-line interface.

Every alpha input must be an exact fraction "p/q" (decimal input is
rejected so nothing gets silently rounded).  All randomized commands take
a seed with a fixed default, so identical invocations produce
byte-identical output.  Invariant failures exit 1 with a one-line JSON
failure record on stderr naming the module and the violated invariant;
usage errors exit 2.
"""

from __future__ import annotations

import csv
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import click

from . import certifier, family, fourier, solver
from .hypergraph import Coloring, SumEdge

_ALPHA_RE = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")


@dataclass(frozen=True)
class RunConfig:
    """Programmatic equivalent of one CLI invocation.

    ``run(config)`` executes the named command and returns the process exit
    code (0 on success, 1 on invariant failure, 2 on usage errors).
    """

    command: str
    n: int | None = None
    out: str = "-"
    format: str = "jsonl"
    seed: int | None = None
    grid: int | None = None
    alpha: str | None = None
    method: str | None = None
    trials: int | None = None
    restarts: int | None = None
    colorings: str | None = None
    threads: int | None = None
    tol_scale: float | None = None

    def to_argv(self) -> list[str]:
        argv = [self.command]
        pairs = [("--n", self.n), ("--out", self.out), ("--seed", self.seed),
                 ("--grid", self.grid), ("--alpha", self.alpha),
                 ("--method", self.method), ("--trials", self.trials),
                 ("--restarts", self.restarts),
                 ("--colorings", self.colorings), ("--threads", self.threads),
                 ("--tol-scale", self.tol_scale)]
        if self.command == "family":
            pairs.append(("--format", self.format))
        for flag, value in pairs:
            if value is not None and not (flag == "--out" and value == "-"):
                argv += [flag, str(value)]
        return argv


def run(config: RunConfig) -> int:
    """Execute one command; never raises, returns the exit code."""
    try:
        main.main(args=config.to_argv(), standalone_mode=True)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else (0 if code is None else 1)
    return 0


def _parse_alpha(_ctx, _param, value: str) -> Fraction:
    m = _ALPHA_RE.match(value)
    if not m:
        raise click.BadParameter(
            f"alpha must be an exact fraction 'p/q', got {value!r}")
    p, q = int(m.group(1)), int(m.group(2))
    if q == 0:
        raise click.BadParameter("alpha denominator must be nonzero")
    alpha = Fraction(p, q)
    if not (0 <= alpha < 1):
        raise click.BadParameter(f"alpha {value} outside [0, 1)")
    return alpha


def _fail(module: str, invariant: str, message: str) -> None:
    record = {"module": module, "invariant": invariant, "message": message}
    click.echo(json.dumps(record), err=True)
    sys.exit(1)


def _open_out(path: str):
    if path == "-":
        return sys.stdout
    directory = os.environ.get("SUMDISC_OUT_DIR", "")
    return open(os.path.join(directory, path) if directory else path,
                "w", newline="")


@click.group()
def main() -> None:
    """Discrepancy toolkit for sums of two arithmetic progressions."""


@main.command("family")
@click.option("--n", type=int, required=True)
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]),
              default="jsonl", show_default=True)
@click.option("--family-out", "--out", "out", default="-", show_default=True)
@click.option("--stats", is_flag=True, help="print summary stats to stderr")
def family_cmd(n: int, fmt: str, out: str, stats: bool) -> None:
    """Build the structured edge family and dump it, one edge per row."""
    try:
        fam = family.build_family(family.FamilyConfig(n=n))
    except (AssertionError, family.ContainmentViolation) as exc:
        _fail("family", "construction", str(exc))
        return
    stream = _open_out(out)
    try:
        if fmt == "jsonl":
            family.write_family_jsonl(fam, stream)
        else:
            writer = csv.writer(stream)
            writer.writerow(["sub", "d1", "l1", "d2", "l2", "k", "b"])
            for rec in family.family_records(fam):
                writer.writerow([rec["sub"], rec["d1"], rec["l1"], rec["d2"],
                                 rec["l2"], rec.get("k", ""), rec.get("b", "")])
    finally:
        if stream is not sys.stdout:
            stream.close()
    if stats:
        st = family.family_stats(fam)
        click.echo(json.dumps(st.__dict__), err=True)


@main.command("certify")
@click.option("--n", type=int, required=True)
@click.option("--alpha", callback=_parse_alpha, required=True,
              help="exact fraction p/q in [0, 1)")
@click.option("--tol-scale", type=float, default=certifier.TOL_SCALE,
              show_default=True, help="numeric tolerance as a multiple of n")
@click.option("--out", default="-", show_default=True)
def certify_cmd(n: int, alpha: Fraction, tol_scale: float, out: str) -> None:
    """Certify one alpha and print the witness certificate as JSON."""
    try:
        cert = certifier.certify(alpha, n, tol_scale=tol_scale)
    except certifier.BelowMinN as exc:
        raise click.UsageError(str(exc))
    except certifier.InternalInvariantViolation as exc:
        _fail("certifier", exc.invariant, str(exc))
        return
    stream = _open_out(out)
    try:
        stream.write(json.dumps(cert.to_json_dict()) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()


def _sweep_chunk(args: tuple) -> list[list]:
    n, tol_scale, alpha_strs = args
    rows = []
    for s in alpha_strs:
        p, q = s.split("/")
        cert = certifier.certify(Fraction(int(p), int(q)), n,
                                 tol_scale=tol_scale)
        rows.append(_cert_row(cert))
    return rows


def _cert_row(cert: certifier.Certificate) -> list:
    ok = cert.measured >= cert.n / 300 - certifier.TOL_SCALE * cert.n
    return [f"{cert.alpha.numerator}/{cert.alpha.denominator}", cert.case_tag,
            cert.delta1, cert.delta2 if cert.delta2 is not None else "",
            cert.k if cert.k is not None else "",
            f"{cert.measured:.9g}", f"{cert.certified_bound:.9g}",
            int(ok)]


@main.command("sweep")
@click.option("--n", type=int, required=True)
@click.option("--grid", type=int, default=1000, show_default=True)
@click.option("--random", "n_random", type=int, default=0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--adversarial/--no-adversarial", default=True, show_default=True)
@click.option("--tol-scale", type=float, default=certifier.TOL_SCALE,
              show_default=True)
@click.option("--threads", type=int, default=os.cpu_count(), show_default="cores")
@click.option("--out", default="-", show_default=True)
def sweep_cmd(n: int, grid: int, n_random: int, seed: int, adversarial: bool,
              tol_scale: float, threads: int, out: str) -> None:
    """Certify a whole alpha sample and emit one CSV row per point."""
    alphas = certifier.sweep_alphas(n, grid, n_random=n_random, seed=seed,
                                    adversarial=adversarial)
    header = ["alpha", "case", "delta1", "delta2", "k", "measured", "bound", "ok"]
    try:
        if threads and threads > 1:
            strs = [f"{a.numerator}/{a.denominator}" for a in alphas]
            size = max(1, (len(strs) + threads - 1) // threads)
            chunks = [(n, tol_scale, strs[i:i + size])
                      for i in range(0, len(strs), size)]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                rows = [row for part in pool.map(_sweep_chunk, chunks)
                        for row in part]
        else:
            rows = [_cert_row(c)
                    for c in certifier.sweep(n, alphas, tol_scale=tol_scale)]
    except certifier.BelowMinN as exc:
        raise click.UsageError(str(exc))
    except certifier.InternalInvariantViolation as exc:
        _fail("certifier", exc.invariant, str(exc))
        return
    stream = _open_out(out)
    try:
        writer = csv.writer(stream)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if stream is not sys.stdout:
            stream.close()


@main.command("disc")
@click.option("--n", type=int, required=True)
@click.option("--method", type=click.Choice(["exact", "local", "random"]),
              required=True)
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--restarts", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default="-", show_default=True)
def disc_cmd(n: int, method: str, trials: int, restarts: int, seed: int,
             out: str) -> None:
    """Compute a discrepancy value (exact or heuristic upper bound)."""
    try:
        if method == "exact":
            report = solver.exact_discrepancy(n)
        elif method == "local":
            report = solver.local_search_upper(n, restarts=restarts, seed=seed)
        else:
            report = solver.random_coloring_upper(n, trials=trials, seed=seed)
    except Exception as exc:  # cap violations are usage-level problems
        raise click.UsageError(str(exc))
    stream = _open_out(out)
    try:
        stream.write(json.dumps(report.to_json_dict()) + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()


def _parse_colorings(spec: str, n: int, seed: int) -> list[tuple[str, Coloring]]:
    out = []
    for part in spec.split(","):
        part = part.strip()
        if part == "ones":
            out.append(("ones", Coloring.all_plus(n)))
        elif part == "alt":
            out.append(("alt", Coloring.alternating(n)))
        elif part == "block":
            out.append(("block", Coloring.block(n)))
        elif part.startswith("random:"):
            count = int(part.split(":", 1)[1])
            for i in range(count):
                out.append((f"random{i}", Coloring.random(n, seed + i)))
        else:
            raise click.BadParameter(f"unknown coloring spec {part!r}")
    return out


@main.command("twonorm")
@click.option("--n", type=int, required=True)
@click.option("--colorings", default="random:10,ones,alt", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", default="-", show_default=True)
def twonorm_cmd(n: int, colorings: str, seed: int, out: str) -> None:
    """Averaging lower bound over the family, one CSV row per coloring."""
    fam = family.build_family(family.FamilyConfig(n=n))
    rows = []
    try:
        for name, chi in _parse_colorings(colorings, n, seed):
            bnd = solver.two_norm_lower(chi, fam)
            ok = (90000 * bnd.total >= n ** 3
                  and 1440000 * bnd.witness_value ** 2 > n)
            rows.append([name, bnd.total, f"{bnd.derived_disc_lb:.9g}",
                         bnd.witness_value, int(ok)])
    except AssertionError as exc:
        _fail("solver", "two-norm-bound", str(exc))
        return
    stream = _open_out(out)
    try:
        writer = csv.writer(stream)
        writer.writerow(["coloring_id", "S", "bound", "max_abs", "ok"])
        writer.writerows(rows)
    finally:
        if stream is not sys.stdout:
            stream.close()


@main.command("spectrum")
@click.option("--d1", type=int, required=True)
@click.option("--l1", type=int, required=True)
@click.option("--d2", type=int, required=True)
@click.option("--l2", type=int, required=True)
@click.option("--grid", type=int, default=256, show_default=True)
@click.option("--out", default="-", show_default=True)
def spectrum_cmd(d1: int, l1: int, d2: int, l2: int, grid: int, out: str) -> None:
    """Magnitudes of one edge's exponential sum on the grid t/m."""
    edge = SumEdge(d1=d1, l1=l1, d2=d2, l2=l2)
    stream = _open_out(out)
    try:
        writer = csv.writer(stream)
        writer.writerow(["alpha_num", "alpha_den", "magnitude"])
        for point in fourier.edge_spectrum(edge, grid):
            writer.writerow([point.alpha.numerator * grid // point.alpha.denominator,
                             grid, f"{abs(point.value):.9g}"])
    finally:
        if stream is not sys.stdout:
            stream.close()


@main.command("verify-lemmas")
@click.option("--n", type=int, required=True)
@click.option("--grid", type=int, default=2000, show_default=True,
              help="sweep grid size for the certification check")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=200, show_default=True,
              help="random edges for the cardinality oracle check")
def verify_lemmas_cmd(n: int, grid: int, seed: int, trials: int) -> None:
    """Run the verification suite and exit 0 only if every check holds."""
    import random as _random

    from .hypergraph import edge_cardinality, edge_elements
    from .fourier import GridSpec, parseval_check

    # family count bounds
    try:
        fam = family.build_family(family.FamilyConfig(n=n))
    except (AssertionError, family.ContainmentViolation) as exc:
        _fail("family", "count-bounds", str(exc))
        return
    c1, c2, c3 = fam.counts
    if not (c3 <= 6 * n and c1 + c2 < n and len(fam) <= 7 * n):
        _fail("family", "count-bounds", f"counts {fam.counts} at n={n}")
        return
    click.echo(f"family counts ok: e1={c1} e2={c2} e3={c3} (<= 7n = {7 * n})")

    # Parseval identity on small instances
    rng = _random.Random(seed)
    for small_n in (8, 16, 32, 64):
        for _ in range(25):
            chi = Coloring.random(small_n, rng.randrange(2 ** 31))
            e = SumEdge(d1=rng.randint(1, 8), l1=rng.randint(1, 6),
                        d2=rng.randint(1, 8), l2=rng.randint(1, 6))
            m = 2 * (small_n + e.span) + 1
            err = parseval_check(chi, e, GridSpec(m=m))
            if err > 1e-8:
                _fail("fourier", "parseval", f"error {err} at n={small_n}")
                return
    click.echo("parseval suite ok (n in {8,16,32,64}, rel err <= 1e-8)")

    # cardinality oracle agreement
    for _ in range(trials):
        e = SumEdge(d1=rng.randint(1, 100), l1=rng.randint(1, 100),
                    d2=rng.randint(1, 100), l2=rng.randint(1, 100))
        card = edge_cardinality(e)
        if card.value != len(set(edge_elements(e))):
            _fail("hypergraph", "cardinality-oracle", f"edge {e}")
            return
    click.echo(f"cardinality oracle ok ({trials} random edges)")

    # certification sweep
    alphas = certifier.sweep_alphas(n, grid, n_random=max(grid // 10, 10),
                                    seed=seed)
    try:
        worst = min(c.measured - (n / 300 - certifier.TOL_SCALE * n)
                    for c in certifier.sweep(n, alphas))
    except certifier.BelowMinN as exc:
        raise click.UsageError(str(exc))
    except certifier.InternalInvariantViolation as exc:
        _fail("certifier", exc.invariant, str(exc))
        return
    click.echo(f"certification sweep ok ({len(alphas)} points, "
               f"min slack {worst:.3f})")
    click.echo("all checks passed")


if __name__ == "__main__":
    main()
