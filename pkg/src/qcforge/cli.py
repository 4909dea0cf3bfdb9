"""qcforge command line: generate / analyze / verify / export pipelines.

Configuration comes from a JSON file (--config) overridden by flags; every
parameter has a default, unknown keys are hard errors. Each run writes its
artifacts plus a manifest echoing the resolved configuration, the package
version, and the active kernel backend, so any artifact can be reproduced
byte-for-byte from its manifest. --threads (or QCFORGE_THREADS) caps
worker counts without affecting output bytes, and is therefore not part of
the configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from . import analysis, correspondence, e8qc, grids3d, io, multigrid
from .kernels import BACKEND
from .pointset import PointSet

__all__ = ["JobConfig", "main", "run"]


def _frac(text) -> Fraction:
    return Fraction(str(text))


def _choice(*opts: str) -> Callable[[str], str]:
    def parse(text) -> str:
        if text not in opts:
            raise ValueError(f"expected one of {opts}, got {text!r}")
        return text

    parse.choices = opts  # type: ignore[attr-defined]
    return parse


_AXIS_ALIASES = {
    "5fold": "5-fold",
    "3fold": "3-fold",
    "2fold": "2-fold",
}


def _axis(text) -> str:
    text = _AXIS_ALIASES.get(str(text), str(text))
    if text not in analysis.AXIS_DIRECTIONS:
        raise ValueError(
            f"expected one of {sorted(analysis.AXIS_DIRECTIONS)}, got {text!r}"
        )
    return text


# parameter tables: name -> (parser, default, help); None default = required
_WINDOW_PARAMS = {
    "window": (_choice("ball", "voronoi"), "ball", "perpendicular-space window kind"),
    "radius": (_frac, Fraction(1), "ball window radius (exact rational)"),
    "shell_radius": (int, 4, "8-space search radius"),
}

_LAW_PARAMS = {
    "law": (_choice("periodic", "fibonacci"), "periodic", "plane spacing law"),
    "t_period": (_frac, Fraction(1), "law period T"),
    "gamma": (_frac, Fraction(0), "periodic phase"),
    "alpha": (_frac, Fraction(0), "quasiperiodic phase"),
    "beta": (_frac, Fraction(0), "quasiperiodic centering"),
}

_STRUCTURE_PARAMS = {
    "structure": (
        _choice("fig", "fcc"),
        "fig",
        "built-in input structure (ignored when a file is given)",
    ),
    "extent": (int, 3, "grid extent of the built-in structure"),
}

COMMANDS: Dict[Tuple[str, str], Dict] = {
    ("generate", "penrose"): {
        "prefix": "penrose",
        "params": {
            "index_range": (int, 3, "line indices run over [-n, n]"),
        },
    },
    ("generate", "fib-pentagrid"): {
        "prefix": "fib_pentagrid",
        "params": {
            "index_range": (int, 3, "line indices run over [-n, n]"),
            "t_period": (_frac, Fraction(1), "law period T"),
            "alpha": (_frac, Fraction(0), "quasiperiodic phase"),
            "beta": (_frac, Fraction(0), "quasiperiodic centering"),
        },
    },
    ("generate", "tetragrid"): {
        "prefix": "tetragrid",
        "params": {"extent": (int, 3, "offset indices run over [-n, n]"), **_LAW_PARAMS},
    },
    ("generate", "icosagrid"): {
        "prefix": "icosagrid",
        "params": {"extent": (int, 3, "offset indices run over [-n, n]"), **_LAW_PARAMS},
    },
    ("generate", "fig"): {
        "prefix": "fig",
        "params": {"extent": (int, 3, "offset indices run over [-n, n]")},
    },
    ("generate", "es-qc"): {
        "prefix": "esqc",
        "params": dict(_WINDOW_PARAMS),
    },
    ("generate", "xsection"): {
        "prefix": "xsection",
        "params": {
            "kind": (
                _choice("type1", "type2", "icosahedral"),
                "type1",
                "hyperplane selection",
            ),
            **_WINDOW_PARAMS,
        },
    },
    ("generate", "cqc"): {
        "prefix": "cqc",
        "params": {
            "kind": (_choice("type1", "type2"), "type1", "cross-section kind"),
            "copies": (int, 0, "compound copies; 0 = construction default"),
            **_WINDOW_PARAMS,
        },
    },
    ("analyze", "diffraction"): {
        "prefix": "diffraction",
        "params": {
            **_STRUCTURE_PARAMS,
            "points_file": (str, "", "point-set JSON overriding the structure"),
            "axis": (_axis, "5-fold", "symmetry axis of the k-plane"),
            "k_extent": (float, 12.0, "half-width of the k-grid"),
            "resolution": (int, 256, "samples per k-grid side"),
        },
    },
    ("analyze", "vertex-config"): {
        "prefix": "vertex_config",
        "params": {
            **_STRUCTURE_PARAMS,
            "cells_file": (str, "", "cell-set JSON overriding the structure"),
        },
    },
    ("analyze", "edge-crossings"): {
        "prefix": "edge_crossings",
        "params": {
            "structure": _STRUCTURE_PARAMS["structure"],
            "extent": (int, 2, "grid extent of the built-in structure"),
            "cells_file": (str, "", "cell-set JSON overriding the structure"),
        },
    },
    ("analyze", "plane-classes"): {
        "prefix": "plane_classes",
        "params": {
            **_STRUCTURE_PARAMS,
            "cells_file": (str, "", "cell-set JSON overriding the structure"),
        },
    },
    ("verify", "subset"): {
        "prefix": "subset",
        "params": {
            "inner": (str, None, "candidate-subset artifact (cells or points JSON)"),
            "outer": (str, None, "superset artifact (cells or points JSON)"),
            "margin": (
                float,
                correspondence.UNIT_CELL_MARGIN,
                "window shrink excluding truncation artifacts",
            ),
        },
    },
    ("verify", "enrich"): {
        "prefix": "enrich",
        "params": {
            "cells": (str, None, "compound cell-set JSON with frame provenance"),
            "extent": (int, 6, "extent of the regenerated plane families"),
        },
    },
    ("verify", "sweep"): {
        "prefix": "sweep",
        "params": {
            "angle_steps": (int, 64, "samples from 0 to the golden rotation"),
            "extent": (int, 2, "extent of the seed tetragrid"),
        },
    },
    ("export", "points"): {
        "prefix": "export",
        "params": {
            "points": (str, None, "point-set JSON to re-export"),
            "format": (_choice(*io.POINT_FORMATS), None, "target format"),
            "out": (str, None, "output file name (within --outdir)"),
        },
    },
}


class JobConfig:
    """One resolved pipeline invocation; equal configs give equal bytes."""

    def __init__(self, group: str, what: str, params: dict, outdir: str = "."):
        key = (group, what)
        if key not in COMMANDS:
            raise ValueError(f"unknown command {group} {what}")
        table = COMMANDS[key]["params"]
        unknown = sorted(set(params) - set(table))
        if unknown:
            raise ValueError(
                f"unknown config keys for {group} {what}: {', '.join(unknown)}"
            )
        resolved = {}
        for name, (parse, default, _help) in table.items():
            if name in params and params[name] is not None:
                resolved[name] = parse(params[name])
            elif default is None:
                raise ValueError(f"{group} {what} requires --{name.replace('_', '-')}")
            else:
                resolved[name] = default
        self.group = group
        self.what = what
        self.params = resolved
        self.outdir = outdir

    def echo(self) -> dict:
        safe = {}
        for k, v in self.params.items():
            safe[k] = str(v) if isinstance(v, Fraction) else v
        return {
            "command": f"{self.group} {self.what}",
            "params": safe,
        }


def _law_from(params) -> multigrid.SpacingLaw:
    if params["law"] == "periodic":
        return multigrid.SpacingLaw.periodic(params["t_period"], params["gamma"])
    return multigrid.SpacingLaw.fibonacci(
        params["t_period"], params["alpha"], params["beta"]
    )


def _window_from(params) -> e8qc.ProjectionSpec:
    if params["window"] == "voronoi":
        win = e8qc.voronoi_approx_window()
    else:
        win = e8qc.ball_window(params["radius"])
    return e8qc.projection_spec(win)


def _load_structure(params, key: str):
    """Cells for an analyze command: file if given, else built-in."""
    path = params.get(key, "")
    if path:
        return io.import_cells(path)
    if params["structure"] == "fcc":
        return grids3d.tetragrid_cells(
            multigrid.SpacingLaw.periodic(1, 0), params["extent"]
        )
    return grids3d.fibonacci_icosagrid(params["extent"])


def _load_side(path: str):
    """A subset-check operand: cell set if the JSON holds one, else points."""
    with open(path) as fh:
        head = json.load(fh)
    if head.get("kind") == "cell_set":
        return io.import_cells(path)
    return io.import_points(path)


def run(config: JobConfig, threads: Optional[int] = None) -> Dict[str, str]:
    """Execute one pipeline; returns {logical name: file name} of artifacts."""
    p = config.params
    out = lambda name: os.path.join(config.outdir, name)  # noqa: E731
    prefix = COMMANDS[(config.group, config.what)]["prefix"]
    artifacts: Dict[str, str] = {}

    def emit(logical: str, filename: str, writer) -> None:
        writer(out(filename))
        artifacts[logical] = filename

    key = (config.group, config.what)
    if key == ("generate", "penrose"):
        fams = multigrid.penrose_families((-p["index_range"], p["index_range"]))
        tiling = multigrid.dual_tiling(fams)
        emit("tiling", "penrose_tiling.json", lambda f: io.export_tiling_json(tiling, f))
        emit("drawing", "penrose_tiling.svg", lambda f: io.export_tiling_svg(tiling, f))
    elif key == ("generate", "fib-pentagrid"):
        # one shared phase puts five lines through a point; stagger each
        # family by the same coprime offsets the Penrose patch uses
        laws = [
            multigrid.SpacingLaw.fibonacci(
                p["t_period"], p["alpha"] + g, p["beta"]
            )
            for g in multigrid.PENROSE_GAMMAS
        ]
        fams = multigrid.pentagrid(laws, (-p["index_range"], p["index_range"]))
        tiling = multigrid.dual_tiling(fams)
        emit("tiling", "fib_pentagrid_tiling.json", lambda f: io.export_tiling_json(tiling, f))
        emit("drawing", "fib_pentagrid_tiling.svg", lambda f: io.export_tiling_svg(tiling, f))
    elif key in (("generate", "tetragrid"), ("generate", "icosagrid")):
        law = _law_from(p)
        if key[1] == "tetragrid":
            cells = grids3d.tetragrid_cells(law, p["extent"])
        else:
            cells = grids3d.icosagrid_cells(law, p["extent"])
        emit("cells", f"{prefix}_cells.json", lambda f: io.export_cells(cells, f))
        emit("points", f"{prefix}_points.xyz",
             lambda f: io.export_points(cells.points, "xyz", f))
    elif key == ("generate", "fig"):
        cells = grids3d.fibonacci_icosagrid(p["extent"])
        emit("cells", "fig_cells.json", lambda f: io.export_cells(cells, f))
        emit("points", "fig_points.xyz",
             lambda f: io.export_points(cells.points, "xyz", f))
    elif key == ("generate", "es-qc"):
        qc = e8qc.elser_sloane_points(_window_from(p), p["shell_radius"])
        pts = qc.point_set4()
        emit("points", "esqc_points.json", lambda f: io.export_points(pts, "json", f))
        emit("points_csv", "esqc_points.csv", lambda f: io.export_points(pts, "csv", f))
    elif key == ("generate", "xsection"):
        qc = e8qc.elser_sloane_points(_window_from(p), p["shell_radius"])
        pts, cells = e8qc.cross_section(qc, p["kind"])
        emit("points", "xsection_points.json", lambda f: io.export_points(pts, "json", f))
        emit("cells", "xsection_cells.json", lambda f: io.export_cells(cells, f))
        emit("points_xyz", "xsection_points.xyz",
             lambda f: io.export_points(pts, "xyz", f))
    elif key == ("generate", "cqc"):
        qc = e8qc.elser_sloane_points(_window_from(p), p["shell_radius"])
        cells = e8qc.compound_qc(qc, p["kind"], p["copies"] or None)
        emit("cells", "cqc_cells.json", lambda f: io.export_cells(cells, f))
        emit("points", "cqc_points.xyz",
             lambda f: io.export_points(cells.points, "xyz", f))
    elif key == ("analyze", "diffraction"):
        if p["points_file"]:
            pts = io.import_points(p["points_file"])
        else:
            pts = _load_structure(p, "points_file").points
        image = analysis.diffraction_image(
            pts, p["axis"], p["k_extent"], p["resolution"], threads=threads
        )
        emit("image", "diffraction.pgm",
             lambda f: io.export_diffraction_pgm(image, f))
        emit("grid", "diffraction.csv",
             lambda f: io.export_diffraction_csv(image, f))
        fold = {"5-fold": 72.0, "3-fold": 120.0, "2-fold": 180.0}[p["axis"]]
        rms = analysis.rotational_invariance_rms(pts, image, fold, threads=threads)
        c = image.center_index()
        emit("summary", "diffraction_summary.json", lambda f: io.write_json(f, {
            "kind": "diffraction_summary",
            "axis": p["axis"],
            "n_points": image.n_points,
            "center_intensity": image.intensity[c, c],
            "max_intensity": float(image.intensity.max()),
            "symmetry_angle_degrees": fold,
            "symmetry_rel_rms": rms,
        }))
    elif key == ("analyze", "vertex-config"):
        cells = _load_structure(p, "cells_file")
        census = analysis.vertex_configurations(cells)
        emit("census", "vertex_census.json",
             lambda f: io.export_vertex_census(census, f))
    elif key == ("analyze", "edge-crossings"):
        cells = _load_structure(p, "cells_file")
        census = analysis.edge_crossing_catalog(cells)
        emit("census", "edge_crossings.json",
             lambda f: io.export_crossing_census(census, f))
    elif key == ("analyze", "plane-classes"):
        cells = _load_structure(p, "cells_file")
        census = grids3d.face_plane_classes(cells)
        emit("census", "plane_classes.json",
             lambda f: io.export_plane_classes(census, f))
    elif key == ("verify", "subset"):
        report = correspondence.align_and_subset_check(
            _load_side(p["inner"]), _load_side(p["outer"]), margin=p["margin"]
        )
        emit("report", "subset_report.json",
             lambda f: io.export_alignment_report(report, f))
    elif key == ("verify", "enrich"):
        cells = io.import_cells(p["cells"])
        enriched = correspondence.enrich(cells, extent=p["extent"])
        reference = grids3d.fibonacci_icosagrid(p["extent"])
        frames = sorted({c.grid_id for c in cells.cells})
        emit("cells", "enriched_cells.json",
             lambda f: io.export_cells(enriched, f))
        emit("report", "enrich_report.json", lambda f: io.write_json(f, {
            "kind": "enrich_report",
            "extent": p["extent"],
            "source_frames": frames,
            "source_cells": len(cells),
            "enriched_cells": len(enriched),
            "points_equal_fig": enriched.points == reference.points
            and len(frames) == 5,
        }))
    elif key == ("verify", "sweep"):
        sweep = correspondence.convergence_sweep(p["angle_steps"], extent=p["extent"])
        mets = [m for _, m in sweep]
        emit("sweep", "sweep.csv", lambda f: io.export_sweep_csv(sweep, f))
        emit("report", "sweep_report.json", lambda f: io.write_json(f, {
            "kind": "sweep_report",
            "angle_steps": p["angle_steps"],
            "golden_angle_degrees": correspondence.golden_rotation_degrees(),
            "misfit_at_zero": mets[0],
            "misfit_at_golden": mets[-1],
            "argmin_is_golden": mets.index(min(mets)) == len(mets) - 1,
        }))
    elif key == ("export", "points"):
        pts = io.import_points(p["points"])
        io.export_points(pts, p["format"], out(p["out"]))
        artifacts["points"] = p["out"]
    else:  # pragma: no cover - table and dispatch kept in sync
        raise ValueError(f"unhandled command {key}")

    manifest = {
        **config.echo(),
        "artifacts": artifacts,
        "version": __version__,
        "kernel_backend": BACKEND,
    }
    io.write_json(out(f"{prefix}_manifest.json"), manifest)
    artifacts["manifest"] = f"{prefix}_manifest.json"
    return artifacts


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcforge",
        description="quasicrystal geometry pipelines "
        "(icosagrid, 4D cut-and-project, compounds)",
    )
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)
    by_group: Dict[str, List[str]] = {}
    for g, w in COMMANDS:
        by_group.setdefault(g, []).append(w)
    subs: Dict[str, argparse.ArgumentParser] = {}
    for g, whats in by_group.items():
        gp = groups.add_parser(g, help=f"{g} pipelines")
        whatp = gp.add_subparsers(dest="what", required=True)
        for w in whats:
            sp = whatp.add_parser(w, help=f"{g} {w}")
            sp.add_argument("--config", help="JSON config file; flags override it")
            sp.add_argument("--outdir", default=".", help="artifact directory")
            sp.add_argument(
                "--threads",
                type=int,
                default=None,
                help="worker cap (QCFORGE_THREADS fallback); never changes bytes",
            )
            for name, (parse, default, help_text) in COMMANDS[(g, w)]["params"].items():
                choices = getattr(parse, "choices", None)
                sp.add_argument(
                    "--" + name.replace("_", "-"),
                    dest=name,
                    default=None,
                    help=help_text
                    + (f" (choices: {', '.join(choices)})" if choices else "")
                    + ("" if default is None else f" [default: {default}]"),
                )
            subs[f"{g} {w}"] = sp
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    table = COMMANDS[(args.group, args.what)]["params"]
    try:
        params: Dict[str, object] = {}
        outdir = "."
        if args.config:
            with open(args.config) as fh:
                loaded = json.load(fh)
            extra = sorted(set(loaded) - {"command", "params", "outdir"})
            if extra:
                raise ValueError(f"unknown config file keys: {', '.join(extra)}")
            declared = loaded.get("command")
            if declared and declared != f"{args.group} {args.what}":
                raise ValueError(
                    f"config file is for {declared!r}, "
                    f"invoked as {args.group} {args.what!r}"
                )
            params.update(loaded.get("params", {}))
            outdir = loaded.get("outdir", ".")
        for name in table:
            value = getattr(args, name)
            if value is not None:
                params[name] = value
        if args.outdir != ".":
            outdir = args.outdir
        config = JobConfig(args.group, args.what, params, outdir)
        os.makedirs(config.outdir, exist_ok=True)
        run(config, threads=args.threads)
    except Exception as exc:  # noqa: BLE001 - uniform machine-readable exit
        sys.stderr.write(
            json.dumps(
                {"error": {"type": type(exc).__name__, "message": str(exc)}},
                sort_keys=True,
            )
            + "\n"
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
