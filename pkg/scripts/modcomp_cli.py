#!/usr/bin/env python3
"""
modcomp_cli.py: modular companions of planar four-point group actions.

Commands:
    vectors   --group G --signature m1,m2,m3,m4
        Generating vectors, genus and Aut(G) classes with lex-min representatives.

    strata    --group G --signature ...
        Orbits of the signature-preserving braid action on the classes.

    tiling    --group G --signature ... --cut E1..E4 [--class N | --all-classes]
        Crossover sequence, degeneracies and differentiating features.

    cayley    --group G --signature ... --cut E1..E4 [--class N]
        Modified Cayley graph of one class (dot or adjacency json).

    matrix    --group G --signature ... --cut E1..E4 [--orbit K] [--selection random --seed S]
        Partial-isometry matrix between class representatives.

    census    [--include-slow]
        Recompute the published census rows and compare.

Group specifications are preset tokens (sym3, cyclic:n, alt5, psl2_7, sg21_1)
or a JSON file. Status lines go to stderr, the report to stdout or --out.
"""

import logging
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import typer

from modcomp import __version__
from modcomp.braid import format_orbit_sizes
from modcomp.cayley import build_graph, graph_fingerprint, to_adjacency, to_dot
from modcomp.errors import CutSystemError, ModcompError, PatchInputError
from modcomp.genvec import DEFAULT_MAX_VECTORS, Signature, parse_signature
from modcomp.groups import DEFAULT_MAX_ORDER, PRESETS, load_group_spec
from modcomp.patch import Selection, isometry_matrix
from modcomp.pipeline import Pipeline
from modcomp.reference import CENSUS, matrix_diff, published_matrix
from modcomp.reports import OutputFormat, Report, render, report_header
from modcomp.tiling import (
    CUT_IDS,
    crossover_sequence,
    detect_degeneracies,
    differentiating_features,
    make_cut_system,
    polygon_dot,
    validate_spoke_cycles,
)

_NOISY_LOGGERS = (
    "pydot",
    "pydot.core",
    "pydot.dot_parser",
)


def install_logging(verbose: int) -> None:
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    try:
        import coloredlogs

        coloredlogs.install(level=level, stream=sys.stderr)
    except ImportError:
        logging.basicConfig(level=level, stream=sys.stderr)
    for name in _NOISY_LOGGERS:
        logging.getLogger(name).disabled = True


def status(prefix: str, message: str) -> None:
    print(f"{prefix} {message}", file=sys.stderr)


# ══════════════════════════════════════════════════════════════════
# Run configuration
# ══════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class RunConfig:
    group: str
    signature: Signature
    cut: str = "E4"
    selection: Selection = Selection.CAYLEY
    seed: Optional[int] = None
    output: OutputFormat = OutputFormat.TEXT
    max_group_order: int = DEFAULT_MAX_ORDER
    max_vectors: int = DEFAULT_MAX_VECTORS
    threads: int = 1

    def __post_init__(self):
        if self.cut not in CUT_IDS:
            raise CutSystemError(f"Unknown cut system {self.cut!r} (known: {', '.join(CUT_IDS)})")
        if (Selection(self.selection) == Selection.RANDOM) != (self.seed is not None):
            raise PatchInputError("--seed is required with --selection random and only allowed with it")
        if self.max_group_order < 1 or self.max_vectors < 1:
            raise ModcompError("Caps must be positive")
        if self.threads < 1:
            raise ModcompError("--threads must be at least 1")

    def echo(self) -> dict:
        """Everything that determines the report; thread count and format do not."""
        return {
            "group": self.group,
            "signature": self.signature.label,
            "cut": self.cut,
            "selection": Selection(self.selection).value,
            "seed": self.seed,
            "max_group_order": self.max_group_order,
            "max_vectors": self.max_vectors,
        }

    def pipeline(self) -> Pipeline:
        return Pipeline(
            load_group_spec(self.group),
            self.signature,
            max_group_order=self.max_group_order,
            max_vectors=self.max_vectors,
            threads=self.threads,
        )


def make_config(group: str, signature: str, **options) -> RunConfig:
    try:
        return RunConfig(group=group, signature=parse_signature(signature), **options)
    except ModcompError as exc:
        raise typer.BadParameter(str(exc)) from exc


# ══════════════════════════════════════════════════════════════════
# Commands
# ══════════════════════════════════════════════════════════════════


def _vector_words(G, vector) -> list[str]:
    return [G.word_label(c) for c in vector]


def _base_report(command: str, config: RunConfig, pipe: Pipeline) -> Report:
    G = pipe.group
    report = Report(command, report_header(command, config.echo(), G))
    report.add(
        "group",
        name=G.name,
        order=G.order,
        generators=dict(zip(G.generator_names, (G.word_label(g) for g in G.generators))),
        automorphisms=len(pipe.automorphisms),
    )
    report.add("signature", signature=str(config.signature), genus=pipe.genus)
    return report


def _add_classes(report: Report, pipe: Pipeline) -> None:
    G = pipe.group
    report.add("vectors", count=len(pipe.vectors))
    report.add(
        "classes",
        count=len(pipe.classes),
        representatives=[
            {
                "class": cls.class_index,
                "vector": list(cls.representative),
                "words": _vector_words(G, cls.representative),
                "orbit_size": cls.orbit_size,
            }
            for cls in pipe.classes
        ],
    )


def cmd_vectors(config: RunConfig) -> Report:
    pipe = config.pipeline()
    report = _base_report("vectors", config, pipe)
    _add_classes(report, pipe)
    report.add("summary", result=f"{len(pipe.vectors)} vectors, {len(pipe.classes)} classes")
    report.table = [["class", "c1", "c2", "c3", "c4", "orbit_size"]] + [
        [cls.class_index, *_vector_words(pipe.group, cls.representative), cls.orbit_size]
        for cls in pipe.classes
    ]
    return report


def cmd_strata(config: RunConfig) -> Report:
    pipe = config.pipeline()
    G = pipe.group
    report = _base_report("strata", config, pipe)
    _add_classes(report, pipe)
    partition = pipe.strata
    report.add(
        "strata",
        moves=[m.label for m in partition.generator_set],
        count=len(partition.orbits),
        orbit_sizes=format_orbit_sizes(partition.orbit_sizes),
        orbits=[
            {
                "orbit": k,
                "size": len(orbit),
                "classes": list(orbit),
                "representative": _vector_words(G, pipe.classes[orbit[0]].representative),
            }
            for k, orbit in enumerate(partition.orbits)
        ],
    )
    report.table = [["class", "orbit"]] + [
        [cls.class_index, partition.orbit_of(cls.class_index)] for cls in pipe.classes
    ]
    return report


def _pick_class(pipe: Pipeline, class_index: int):
    if not pipe.classes:
        raise ModcompError(f"{pipe.group.name} {pipe.signature} has no generating vectors")
    if not 0 <= class_index < len(pipe.classes):
        raise ModcompError(f"Class {class_index} out of range 0..{len(pipe.classes) - 1}")
    return pipe.classes[class_index]


def _tiling_section(G, cut, cls) -> dict:
    seq = crossover_sequence(G, cut, cls.representative)
    report = detect_degeneracies(G, cut, seq)
    return {
        "class": cls.class_index,
        "words": _vector_words(G, cls.representative),
        "crossovers": [
            {"edge": label, "formula": formula, "tau": G.word_label(tau)}
            for label, formula, tau in zip(cut.boundary_sequence, cut.formulas, seq.taus)
        ],
        "spoke_cycles_valid": validate_spoke_cycles(G, cut, seq),
        "collapsed_edges": [cut.boundary_sequence[p] for p in report.collapsed_edges],
        "multi_edges": [[cut.boundary_sequence[p] for p in group] for group in report.multi_edge_groups],
        "multi_edge_shape": list(report.multi_edge_shape),
        "vertex_collapses": [
            {"vertex": v.label, "collapsed": v.collapsed, "repeat": v.repeat}
            for v in report.vertex_collapses
        ],
    }


def cmd_tiling(config: RunConfig, class_index: int = 0, all_classes: bool = False) -> Report:
    pipe = config.pipeline()
    G = pipe.group
    cut = make_cut_system(config.cut)
    report = _base_report("tiling", config, pipe)
    report.add(
        "cut",
        id=cut.id,
        boundary=list(cut.boundary_sequence),
        formulas=list(cut.formulas),
        vertices=[{"vertex": v.label, "colour": v.colour,
                   "spokes": [cut.boundary_sequence[p] for p in v.spokes]} for v in cut.vertices],
    )
    if not all_classes:
        cls = _pick_class(pipe, class_index)
        report.add("tiling", **_tiling_section(G, cut, cls))
        report.dot = polygon_dot(G, cut, crossover_sequence(G, cut, cls.representative))
        return report

    groups = defaultdict(list)
    rows = []
    for cls in pipe.classes:
        features = differentiating_features(G, cut, crossover_sequence(G, cut, cls.representative))
        groups[features].append(cls.class_index)
        rows.append([cls.class_index, features.collapse_count, list(features.multi_edge_shape),
                     "".join(label for label, flag in features.vertex_collapses if flag)])
    report.add("tilings", classes=[_tiling_section(G, cut, cls) for cls in pipe.classes])
    report.add(
        "features",
        groups=[
            {
                "collapse_count": features.collapse_count,
                "multi_edge_shape": list(features.multi_edge_shape),
                "collapsed_vertices": [label for label, flag in features.vertex_collapses if flag],
                "classes": members,
            }
            for features, members in groups.items()
        ],
    )
    report.table = [["class", "collapse_count", "multi_edge_shape", "collapsed_vertices"]] + rows
    return report


def cmd_cayley(config: RunConfig, class_index: int = 0) -> Report:
    pipe = config.pipeline()
    G = pipe.group
    cut = make_cut_system(config.cut)
    cls = _pick_class(pipe, class_index)
    cay = build_graph(G, cut, crossover_sequence(G, cut, cls.representative))
    fingerprint = graph_fingerprint(cay)
    report = _base_report("cayley", config, pipe)
    report.add(
        "cayley",
        cut=cut.id,
        words=_vector_words(G, cls.representative),
        nodes=cay.graph.number_of_nodes(),
        edges=cay.graph.number_of_edges(),
        multiplicities=list(fingerprint.multiplicities),
        multi_edge_shape=list(fingerprint.multi_edge_shape),
        collapsed_vertices=[label for label, flag in fingerprint.vertex_collapses if flag],
        adjacency=to_adjacency(cay),
    )
    report.dot = to_dot(cay)
    return report


def cmd_matrix(
    config: RunConfig,
    orbit: Optional[int] = None,
    samples: int = 0,
) -> Report:
    pipe = config.pipeline()
    G = pipe.group
    cut = make_cut_system(config.cut)
    classes = pipe.classes
    if not classes:
        raise ModcompError(f"{G.name} {config.signature} has no generating vectors")
    if orbit is not None:
        orbits = pipe.strata.orbits
        if not 0 <= orbit < len(orbits):
            raise ModcompError(f"Orbit {orbit} out of range 0..{len(orbits) - 1}")
        classes = [classes[i] for i in orbits[orbit]]

    matrix = isometry_matrix(G, config.signature, cut, classes, config.selection, config.seed,
                             threads=config.threads, samples=samples)
    report = _base_report("matrix", config, pipe)
    report.add(
        "matrix",
        cut=cut.id,
        orbit=orbit,
        classes=list(matrix.labels),
        rows=[list(row) for row in matrix.entries],
        seed_compatible=[list(row) for row in matrix.compatible],
        flags=list(matrix.flags),
    )
    if matrix.samples:
        report.add(
            "samples",
            seeds=samples,
            entries=[
                {"entry": [i, j], "min": s.minimum, "max": s.maximum,
                 "mean": round(s.mean, 3), "distinct": list(s.distinct)}
                for (i, j), s in sorted(matrix.samples.items())
            ],
        )

    published = None
    if orbit is None and Selection(config.selection) == Selection.CAYLEY and config.group in PRESETS:
        published = published_matrix(config.group, config.signature.periods, cut.id)
    if published is not None and len(published) == len(matrix.entries):
        report.add(
            "reference",
            differences=[list(cell) for cell in matrix_diff(matrix.entries, published)],
        )
    report.table = [["", *matrix.labels]] + [
        [label, *row] for label, row in zip(matrix.labels, matrix.entries)
    ]
    return report


def cmd_census(include_slow: bool, max_vectors: int, threads: int) -> Report:
    report = Report("census", report_header("census", {
        "include_slow": include_slow, "max_vectors": max_vectors,
    }))
    rows = []
    table = [["group", "order", "signature", "genus", "classes", "orbit_sizes", "status"]]
    for row in CENSUS:
        signature = Signature(row.signature)
        entry = {
            "group": row.title,
            "order": row.order,
            "signature": signature.label,
            "expected": {"genus": row.genus, "classes": row.classes,
                         "orbit_sizes": format_orbit_sizes(row.orbit_sizes) if row.orbit_sizes else None},
        }
        if not row.computed:
            entry["status"] = "not computed"
        elif row.slow and not include_slow:
            entry["status"] = "skipped"
        else:
            pipe = Pipeline(row.preset, signature, max_group_order=max(row.order, DEFAULT_MAX_ORDER),
                            max_vectors=max_vectors, threads=threads)
            entry["computed"] = {
                "genus": pipe.genus,
                "classes": len(pipe.classes),
                "orbit_sizes": format_orbit_sizes(pipe.strata.orbit_sizes),
                "fingerprint": pipe.group.fingerprint,
            }
            match = (
                pipe.genus == row.genus
                and len(pipe.classes) == row.classes
                and pipe.strata.orbit_sizes == tuple(sorted(row.orbit_sizes))
            )
            entry["status"] = "match" if match else "mismatch"
        rows.append(entry)
        computed = entry.get("computed", {})
        table.append([row.title, row.order, signature.label, computed.get("genus", row.genus),
                      computed.get("classes", ""), computed.get("orbit_sizes", ""), entry["status"]])
    report.add("census", rows=rows)
    report.table = table
    return report


# ══════════════════════════════════════════════════════════════════
# typer app
# ══════════════════════════════════════════════════════════════════


def emit(report: Report, fmt: OutputFormat, out: Optional[Path]) -> None:
    try:
        text = render(report, fmt)
    except ModcompError as exc:
        status("[-]", str(exc))
        raise typer.Exit(1) from exc
    if out is None:
        sys.stdout.write(text)
        return
    out.write_text(text)
    status("[+]", f"Report written: {out}")


def run_command(fn, *args, **kwargs) -> Report:
    try:
        return fn(*args, **kwargs)
    except (ModcompError, RuntimeError) as exc:
        status("[-]", str(exc))
        raise typer.Exit(1) from exc


def _group_option():
    return typer.Option(..., "--group", "-g", help="Preset token (sym3, cyclic:n, alt5, psl2_7, sg21_1) or JSON file")


def _signature_option():
    return typer.Option(..., "--signature", "-s", help="Periods m1,m2,m3,m4 or (0;m1,m2,m3,m4)")


def _cut_option():
    return typer.Option("E4", "--cut", help="Cut system E1, E2, E3 or E4")


def _format_option():
    return typer.Option(OutputFormat.TEXT, "--format", "-f", help="Report format")


def _out_option():
    return typer.Option(None, "--out", "-o", help="Write the report here instead of stdout",
                        file_okay=True, dir_okay=False)


def _max_group_order_option():
    return typer.Option(DEFAULT_MAX_ORDER, "--max-group-order", envvar="MODCOMP_MAX_GROUP_ORDER",
                        help="Refuse groups larger than this")


def _max_vectors_option():
    return typer.Option(DEFAULT_MAX_VECTORS, "--max-vectors", envvar="MODCOMP_MAX_VECTORS",
                        help="Refuse enumerations with more generating vectors than this")


def _threads_option():
    return typer.Option(1, "--threads", "-j", envvar="MODCOMP_THREADS",
                        help="Worker threads for enumeration, braid action and matrix entries")


def _verbose_option():
    return typer.Option(0, "--verbose", "-v", count=True, help="Increase log verbosity (-v info, -vv debug).")


app = typer.Typer(help=f"modcomp {__version__}: modular companions of planar group actions",
                  pretty_exceptions_enable=False)


@app.command("vectors", help="Generating vectors and Aut(G) classes")
def vectors_command(
    group: str = _group_option(),
    signature: str = _signature_option(),
    fmt: OutputFormat = _format_option(),
    out: Optional[Path] = _out_option(),
    max_group_order: int = _max_group_order_option(),
    max_vectors: int = _max_vectors_option(),
    threads: int = _threads_option(),
    verbose: int = _verbose_option(),
) -> None:
    install_logging(verbose)
    config = make_config(group, signature, output=fmt, max_group_order=max_group_order,
                         max_vectors=max_vectors, threads=threads)
    report = run_command(cmd_vectors, config)
    status("[+]", report.section("summary")["result"])
    emit(report, fmt, out)


@app.command("strata", help="Braid orbits on the Aut(G) classes")
def strata_command(
    group: str = _group_option(),
    signature: str = _signature_option(),
    fmt: OutputFormat = _format_option(),
    out: Optional[Path] = _out_option(),
    max_group_order: int = _max_group_order_option(),
    max_vectors: int = _max_vectors_option(),
    threads: int = _threads_option(),
    verbose: int = _verbose_option(),
) -> None:
    install_logging(verbose)
    config = make_config(group, signature, output=fmt, max_group_order=max_group_order,
                         max_vectors=max_vectors, threads=threads)
    report = run_command(cmd_strata, config)
    status("[+]", f"orbit sizes {report.section('strata')['orbit_sizes']}")
    emit(report, fmt, out)


@app.command("tiling", help="Crossover sequence and tiling degeneracies for a cut system")
def tiling_command(
    group: str = _group_option(),
    signature: str = _signature_option(),
    cut: str = _cut_option(),
    class_index: int = typer.Option(0, "--class", help="Class index (ignored with --all-classes)"),
    all_classes: bool = typer.Option(False, "--all-classes", help="Every class, grouped by features"),
    fmt: OutputFormat = _format_option(),
    out: Optional[Path] = _out_option(),
    max_group_order: int = _max_group_order_option(),
    max_vectors: int = _max_vectors_option(),
    verbose: int = _verbose_option(),
) -> None:
    install_logging(verbose)
    config = make_config(group, signature, cut=cut, output=fmt, max_group_order=max_group_order,
                         max_vectors=max_vectors)
    report = run_command(cmd_tiling, config, class_index=class_index, all_classes=all_classes)
    emit(report, fmt, out)


@app.command("cayley", help="Modified Cayley graph of one class")
def cayley_command(
    group: str = _group_option(),
    signature: str = _signature_option(),
    cut: str = _cut_option(),
    class_index: int = typer.Option(0, "--class", help="Class index"),
    fmt: OutputFormat = _format_option(),
    out: Optional[Path] = _out_option(),
    max_group_order: int = _max_group_order_option(),
    max_vectors: int = _max_vectors_option(),
    verbose: int = _verbose_option(),
) -> None:
    install_logging(verbose)
    config = make_config(group, signature, cut=cut, output=fmt, max_group_order=max_group_order,
                         max_vectors=max_vectors)
    report = run_command(cmd_cayley, config, class_index=class_index)
    emit(report, fmt, out)


@app.command("matrix", help="Partial-isometry matrix between class representatives")
def matrix_command(
    group: str = _group_option(),
    signature: str = _signature_option(),
    cut: str = _cut_option(),
    selection: Selection = typer.Option(Selection.CAYLEY, "--selection", help="Boundary edge selection"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for random selection"),
    orbit: Optional[int] = typer.Option(None, "--orbit", help="Restrict to the classes of one braid orbit"),
    samples: int = typer.Option(0, "--samples", min=0, help="Random-selection runs per entry (seeds 0..N-1)"),
    fmt: OutputFormat = _format_option(),
    out: Optional[Path] = _out_option(),
    max_group_order: int = _max_group_order_option(),
    max_vectors: int = _max_vectors_option(),
    threads: int = _threads_option(),
    verbose: int = _verbose_option(),
) -> None:
    install_logging(verbose)
    config = make_config(group, signature, cut=cut, selection=selection, seed=seed, output=fmt,
                         max_group_order=max_group_order, max_vectors=max_vectors, threads=threads)
    report = run_command(cmd_matrix, config, orbit=orbit, samples=samples)
    for flag in report.section("matrix")["flags"]:
        status("[!]", flag)
    try:
        differences = report.section("reference")["differences"]
    except KeyError:
        differences = None
    if differences == []:
        status("[+]", "matches the published matrix")
    elif differences:
        fingerprint = report.header["fingerprint"]
        for i, j, computed, expected in differences:
            status("[!]", f"entry [{i}][{j}]: computed {computed}, published {expected} "
                          f"(ordering {fingerprint})")
    emit(report, fmt, out)


@app.command("census", help="Recompute the published census rows")
def census_command(
    include_slow: bool = typer.Option(False, "--include-slow", help="Also run the PSL(2,7) rows"),
    fmt: OutputFormat = _format_option(),
    out: Optional[Path] = _out_option(),
    max_vectors: int = _max_vectors_option(),
    threads: int = _threads_option(),
    verbose: int = _verbose_option(),
) -> None:
    install_logging(verbose)
    report = run_command(cmd_census, include_slow, max_vectors, threads)
    for row in report.section("census")["rows"]:
        label = f"{row['group']} {row['signature']}"
        if row["status"] == "match":
            computed = row["computed"]
            status("[+]", f"{label}: genus {computed['genus']}, {computed['classes']} classes, "
                          f"orbits {computed['orbit_sizes']}")
        elif row["status"] == "mismatch":
            status("[-]", f"{label}: computed {row['computed']}, published {row['expected']}")
        else:
            status("[*]", f"{label}: {row['status']}")
    emit(report, fmt, out)


if __name__ == "__main__":
    app(prog_name="modcomp_cli.py")
