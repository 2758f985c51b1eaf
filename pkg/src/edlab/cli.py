"""Command-line interface.

Exit codes: 0 success, 1 usage errors, 2 contract violations (malformed
inputs, failed verifications), 3 size-cap rejections.  Results go to
stdout; progress and diagnostics go to stderr.
"""

import json
import os
import sys
from fractions import Fraction

import click

from . import bench as bench_mod
from . import hardness, regularity, selfcheck
from .approximate import approximate_edit_density, sample_estimate
from .errors import ContractViolation, SizeLimitExceeded
from .exact import (
    edit_distance_exact,
    hom_edit_distance_exact,
    r_partite_distance_exact,
)
from .families import ForbiddenFamily, family_from_json
from .graphs import (
    format_rational,
    from_edge_list_text,
    from_weighted_text,
    parse_rational,
    to_edge_list_text,
)


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return parse_rational(str(value))
        except ValueError:
            self.fail(f"{value!r} is not a rational (use p/q or an integer)", param, ctx)


class FamilyType(click.ParamType):
    """Family spec: 'odd-cycles', 'clique>=N', '@file.json', or inline JSON."""

    name = "family"

    def convert(self, value, param, ctx):
        if isinstance(value, ForbiddenFamily):
            return value
        text = str(value)
        if text == "odd-cycles":
            return ForbiddenFamily.odd_cycles()
        if text.startswith("clique>="):
            tail = text[len("clique>=") :]
            if not tail.isdigit():
                self.fail(f"bad clique threshold in {text!r}", param, ctx)
            return ForbiddenFamily.clique_at_least(int(tail))
        if text.startswith("@"):
            path = text[1:]
            try:
                with open(path) as fh:
                    return family_from_json(fh.read())
            except OSError as exc:
                self.fail(f"cannot read family file {path!r}: {exc}", param, ctx)
        if text.lstrip().startswith("{"):
            return family_from_json(text)
        self.fail(
            f"{text!r} is not a family spec "
            "(expected 'odd-cycles', 'clique>=N', '@file.json', or inline JSON)",
            param,
            ctx,
        )


RATIONAL = RationalType()
FAMILY = FamilyType()
EXISTING_FILE = click.Path(exists=True, dir_okay=False)


def _load_graph(path):
    with open(path) as fh:
        return from_edge_list_text(fh.read())


def _load_weighted(path):
    with open(path) as fh:
        return from_weighted_text(fh.read())


def _threads_option(value):
    if value is not None:
        return value
    env = os.environ.get("EDLAB_THREADS")
    if env and env.isdigit():
        return int(env)
    return None


@click.group()
def cli():
    """Desk-scale laboratory for edge-deletion distances on graph properties."""


@cli.command("exact")
@click.option("--graph", "graph_path", type=EXISTING_FILE, required=True)
@click.option("--family", "fam", type=FAMILY, default=None)
@click.option("--r-parts", type=int, default=None, help="distance to r-partiteness")
@click.option("--cap", type=int, default=16, show_default=True)
@click.option("--witness", is_flag=True, help="print the deleted pairs")
def exact_cmd(graph_path, fam, r_parts, cap, witness):
    """Exact deletion distance of a graph from a forbidden family."""
    if (fam is None) == (r_parts is None):
        raise click.UsageError("pass exactly one of --family and --r-parts")
    G = _load_graph(graph_path)
    if fam is not None:
        res = edit_distance_exact(G, fam, cap=cap)
    else:
        res = r_partite_distance_exact(G, r_parts)
    click.echo(f"E'={res.raw} E={res.raw}/{G.n * G.n}")
    if witness:
        for u, v in res.witness:
            click.echo(f"{u} {v}")


@cli.command("hom-dist")
@click.option("--weighted", "weighted_path", type=EXISTING_FILE, required=True)
@click.option("--family", "fam", type=FAMILY, required=True)
@click.option("--cap", type=int, default=8, show_default=True)
@click.option("--witness", is_flag=True, help="print the deleted pairs")
def hom_dist_cmd(weighted_path, fam, cap, witness):
    """Exact weighted homomorphism deletion distance."""
    W = _load_weighted(weighted_path)
    res = hom_edit_distance_exact(W, fam, cap=cap)
    click.echo(
        f"H'={format_rational(res.raw)} H={format_rational(res.normalized)}"
    )
    if witness:
        for i, j in res.witness:
            click.echo(f"{i} {j}")


@cli.command("approx")
@click.option("--graph", "graph_path", type=EXISTING_FILE, required=True)
@click.option("--family", "fam", type=FAMILY, required=True)
@click.option("--epsilon", type=RATIONAL, required=True)
@click.option(
    "--schedule",
    "schedule_name",
    type=click.Choice(["strict", "desk"]),
    default="strict",
    show_default=True,
)
@click.option("--m", "m_init", type=int, default=None, help="initial partition order")
@click.option("--snap", is_flag=True, help="snap the estimate to the epsilon grid")
@click.option("--json", "as_json", is_flag=True, help="print the full report as JSON")
def approx_cmd(graph_path, fam, epsilon, schedule_name, m_init, snap, as_json):
    """Additive approximation of the normalized deletion distance."""
    G = _load_graph(graph_path)
    schedule = regularity.schedule_by_name(schedule_name, epsilon=epsilon, m=m_init)
    report = approximate_edit_density(
        G, fam, epsilon, schedule=schedule, snap_to_grid=snap
    )
    if as_json:
        click.echo(json.dumps(report.to_json_dict(), indent=2, sort_keys=True))
        return
    click.echo(
        f"estimate={format_rational(report.estimate)} route={report.route} "
        f"certified={'true' if report.certified else 'false'}"
    )
    for key, value in sorted(report.diagnostics.items()):
        click.echo(f"{key}={value}", err=True)


@cli.command("sample")
@click.option("--graph", "graph_path", type=EXISTING_FILE, required=True)
@click.option("--family", "fam", type=FAMILY, required=True)
@click.option("--d", "d", type=int, required=True, help="induced sample order")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--threads", type=int, default=None)
@click.option("--values", is_flag=True, help="print one line per trial")
def sample_cmd(graph_path, fam, d, trials, seed, threads, values):
    """Sampling estimator: mean normalized distance of induced subgraphs."""
    G = _load_graph(graph_path)
    report = sample_estimate(
        G, fam, d, trials, seed, threads=_threads_option(threads)
    )
    click.echo(f"mean={format_rational(report.mean)}")
    if values:
        for t, val in enumerate(report.values):
            click.echo(f"{t} {format_rational(val)}")


@cli.command("regularity")
@click.option("--graph", "graph_path", type=EXISTING_FILE, required=True)
@click.option(
    "--schedule",
    "schedule_name",
    type=click.Choice(["strict", "desk"]),
    default="strict",
    show_default=True,
)
@click.option("--epsilon", type=RATIONAL, default=Fraction(1, 4), show_default="1/4")
@click.option("--m", "m_init", type=int, default=None, help="initial partition order")
@click.option("--dump", "dump_path", type=click.Path(dir_okay=False), default=None)
def regularity_cmd(graph_path, schedule_name, epsilon, m_init, dump_path):
    """Build a nested pair of partitions meeting the regularity conditions."""
    G = _load_graph(graph_path)
    schedule = regularity.schedule_by_name(schedule_name, epsilon=epsilon, m=m_init)
    ref = regularity.e_regular_pair_of_partitions(G, schedule)
    meta = ref.meta
    reason = meta.get("reason") or "-"
    click.echo(
        f"ok={'true' if meta.get('ok') else 'false'} outer={ref.outer.k} "
        f"inner={ref.inner.k} l={ref.l} iterations={meta.get('iterations')} "
        f"reason={reason}"
    )
    for entry in meta.get("history", []):
        click.echo(
            f"iteration {entry['iteration']}: order={entry['order']} "
            f"gamma={format_rational(entry['gamma'])} "
            f"refine={entry['refine']['done']} check={entry['check'].ok}",
            err=True,
        )
    if dump_path:
        with open(dump_path, "w") as fh:
            fh.write(regularity.to_partition_text(ref))
        click.echo(f"partition written to {dump_path}", err=True)


@cli.command("gen-dgt")
@click.option("--q", type=int, required=True, help="field order (prime power)")
@click.option("--k", type=int, required=True, help="number of directions")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def gen_dgt_cmd(q, k, out_path):
    """Generate the direction graph on GF(q)^2 with k directions."""
    G = hardness.dgt_graph(q, k)
    text = to_edge_list_text(G)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    click.echo(f"n={G.n} d={k * (q - 1)}", err=True)


@cli.command("gen-reduction")
@click.option("--pattern", "pattern_path", type=EXISTING_FILE, required=True)
@click.option("--r", type=int, required=True, help="disjoint pattern copies")
@click.option("--b", type=int, required=True, help="blow-up size")
@click.option("--mu", type=RATIONAL, required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def gen_reduction_cmd(pattern_path, r, b, mu, out_dir):
    """Generate a reduction bundle (host graph + metadata) into a directory."""
    F = _load_graph(pattern_path)
    inst = hardness.build_reduction(F, r, b, mu)
    hardness.write_bundle(out_dir, inst)
    target = r * inst.m * b
    click.echo(
        f"q={inst.q} k={inst.k} mu_eff={format_rational(inst.mu_eff)} "
        f"n={inst.n} window=[{target},{4 * target}]"
    )
    if inst.k_clamped:
        click.echo("note: direction count clamped into [1, q+1]", err=True)


@cli.command("recover")
@click.option("--bundle", "bundle_dir", type=click.Path(file_okay=False, exists=True), required=True)
@click.option("--observed", type=RATIONAL, required=True)
def recover_cmd(bundle_dir, observed):
    """Recover the planted parameter from an observed deletion count."""
    inst = hardness.read_bundle(bundle_dir)
    rec = hardness.recover_ell(inst, observed)
    click.echo(
        f"ell={rec.ell} tie={'true' if rec.tie else 'false'} "
        f"residual={format_rational(rec.residual)}"
    )


@cli.command("verify")
@click.option("--bundle", "bundle_dir", type=click.Path(file_okay=False, exists=True), default=None)
@click.option("--suite", is_flag=True, help="run the cross-module invariant sweep")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=int, default=6, show_default=True)
@click.option("--threads", type=int, default=None)
def verify_cmd(bundle_dir, suite, seed, trials, threads):
    """Verify a reduction bundle, or run the invariant suite."""
    if (bundle_dir is None) == (not suite):
        raise click.UsageError("pass exactly one of --bundle and --suite")
    if bundle_dir is not None:
        report = hardness.verify_bundle(bundle_dir)
        for check in report.checks:
            mark = "ok  " if check["ok"] else "FAIL"
            detail = f" {check['detail']}" if check["detail"] else ""
            click.echo(f"{mark} {check['name']}{detail}")
        if not report.ok:
            raise ContractViolation("bundle verification failed")
        return
    report = selfcheck.run_suite(
        seed=seed, trials=trials, threads=_threads_option(threads)
    )
    for line in report.to_lines():
        click.echo(line)
    if not report.ok:
        raise ContractViolation("invariant suite failed")


@cli.command("bench")
@click.option("--repeats", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
def bench_cmd(repeats, seed):
    """Time the kernels on every available backend."""
    report = bench_mod.run_benchmarks(repeats=repeats, seed=seed)
    click.echo(report.to_text(), nl=False)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except SizeLimitExceeded as exc:
        click.echo(f"error: {exc}", err=True)
        return 3
    except ContractViolation as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
