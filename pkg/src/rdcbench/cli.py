"""Command line front end.

    rdc-bench ingest  --input raw.csv --codec NAME --complexity 541 --output-dir out
    rdc-bench bd      --input data.json --codec A --codec B --lambda 1 --plane RC
    rdc-bench cost    --input data.json --app-model streaming
    rdc-bench appcalc --app-model model.json --paper-rounding
    rdc-bench appmap  --input data.json --output-dir out --mark-app-point

Reports go to stdout as JSON. Errors are written to stderr as one JSON record
per line and make the exit status non-zero.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from . import appspace, bd, dataset, output, rdccost, svg
from .errors import RdcError

SCALES = {"mse-db": "mse_db", "linear": "linear_mse"}


class CommandFailed(Exception):
    """Raised when a command produced a (partial) report but recorded errors."""

    def __init__(self, report, errors):
        super().__init__("command recorded errors")
        self.report = report
        self.errors = errors


def _lambda_value(text):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    v = float(text)
    if not (v >= 0):
        raise argparse.ArgumentTypeError(f"lambda must be >= 0 or inf, got {text!r}")
    return v


def _nonneg(text):
    v = float(text)
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"expected a finite non-negative number, got {text!r}")
    return v


def _safe(name):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name)


def _load_codecs(path, names=None):
    codecs = dataset.load_dataset(path)
    if not names:
        return codecs
    by_name = {c.name: c for c in codecs}
    missing = [n for n in names if n not in by_name]
    if missing:
        raise RdcError(f"codecs not in dataset: {missing}", {"available": sorted(by_name)})
    return [by_name[n] for n in names]


def _app_model(spec):
    if spec is None or spec == "streaming":
        return appspace.STREAMING_EXAMPLE
    try:
        doc = json.loads(Path(spec).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        from .errors import ParseError

        raise ParseError(f"cannot read application model {spec}: {exc}") from exc
    if not isinstance(doc, dict):
        raise RdcError("application model must be an object")
    return appspace.ApplicationModel.from_dict(doc)


def _app_report(pt):
    return {
        "alpha": {"distortion": pt.alpha[0], "rate": pt.alpha[1], "complexity": pt.alpha[2]},
        "lambda": pt.lam,
        "gamma": pt.gamma,
        "lambda_db": pt.db[0],
        "gamma_db": pt.db[1],
        "details": pt.details,
    }


def _emit(report, args, filename):
    text = output.dumps(report)
    if getattr(args, "output_dir", None):
        output.write_text(Path(args.output_dir) / filename, text)
    sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def cmd_ingest(args):
    codecs = []
    normalizations = []
    raw = [p for p in args.input if Path(p).suffix.lower() == ".csv"]
    docs = [p for p in args.input if Path(p).suffix.lower() != ".csv"]
    for p in docs:
        codecs.extend(dataset.load_dataset(p))
        normalizations.append({"file": str(p), "kind": "dataset", "sorted_curves_by_rate": True})
    if raw:
        if not args.codec or len(args.codec) != 1 or args.complexity is None:
            raise RdcError("raw CSV ingestion needs exactly one --codec and --complexity")
        points = []
        for p in raw:
            ms = dataset.read_raw_csv(p)
            depths = {}
            for m in ms:
                depths.setdefault(str(m.bit_depth), {"rows": 0, "mse_divisor": dataset.mse_scale(m.bit_depth)})
                depths[str(m.bit_depth)]["rows"] += 1
            normalizations.append({
                "file": str(p),
                "kind": "raw_measurements",
                "sequences": len(ms),
                "rate_denormalization": "bits_per_pixel * 1920 * 1080 * 30 / 1e6 (Mb/s)",
                "bit_depth_scaling": depths,
            })
            points.append(dataset.aggregate(ms, args.complexity))
        mode = args.mode
        if mode == "curve":
            points.sort(key=lambda q: q.rate)
        codecs.append(dataset.CodecDataset(args.codec[0], tuple(points), mode))
    names = [c.name for c in codecs]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        from .errors import DuplicateCodec

        raise DuplicateCodec(f"duplicate codec names across inputs: {dupes}")
    report = {"command": "ingest", "codecs": [], "normalizations": normalizations}
    for c in codecs:
        arr = c.as_array()
        report["codecs"].append({
            "name": c.name,
            "mode": c.mode,
            "points": len(c),
            "rate_range": [arr[:, 0].min(), arr[:, 0].max()],
            "mse_range": [arr[:, 1].min(), arr[:, 1].max()],
            "complexity_kmac_per_pixel": sorted(set(arr[:, 2].tolist())),
        })
    if args.output_dir:
        out = Path(args.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        dataset.save_dataset(codecs, out / "dataset.json")
        report["dataset_file"] = str(out / "dataset.json")
    _emit(report, args, "ingest_report.json")


def cmd_bd(args):
    if not args.codec or len(args.codec) != 2:
        raise RdcError("bd needs exactly two --codec names")
    a, b = _load_codecs(args.input, args.codec)
    scale = SCALES[args.distortion_scale]
    errors = []
    results = []

    def run(label, fn, *fargs):
        try:
            res = fn(*fargs)
            d = res.as_dict()
            d["label"] = label
            results.append(d)
        except RdcError as exc:
            rec = exc.to_record()
            rec["label"] = label
            errors.append(rec)
            results.append({"label": label, "error": rec})

    run("dD_R", bd.delta_lambda, a, b, 0.0, scale)
    run("dR_D", bd.delta_lambda, a, b, math.inf, scale)
    for lam in args.lam or []:
        run(f"delta_RD({lam!r})", bd.delta_lambda, a, b, lam, scale)
    for plane in args.plane or []:
        lams = [0.0, math.inf] + [x for x in (args.lam or []) if x not in (0.0, math.inf)]
        for lam in lams:
            key = (plane, lam)
            label = bd.AXIS_METRICS.get(key, f"delta_{plane}({lam!r})")
            run(label, bd.delta_3d, a, b, plane, lam, scale)
    conventional = {}
    try:
        conventional["bd_rate_percent"] = bd.bd_rate_percent(a, b).value
        conventional["bd_psnr_db"] = bd.bd_psnr(a, b)
    except RdcError as exc:
        conventional["error"] = exc.to_record()
    report = {
        "command": "bd",
        "codec_a": a.name,
        "codec_b": b.name,
        "distortion_scale": scale,
        "sign": "A - B; negative means A is better",
        "deltas": results,
        "conventional": conventional,
    }
    _emit(report, args, f"bd_{_safe(a.name)}_vs_{_safe(b.name)}.json")
    if errors:
        raise CommandFailed(report, errors)


def _plane_from_args(args, report):
    if args.lam is not None or args.gamma is not None:
        if args.app_model is not None:
            raise RdcError("give either --lambda/--gamma or --app-model, not both")
        lam = args.lam[0] if args.lam else 0.0
        if len(args.lam or []) > 1 or math.isinf(lam):
            raise RdcError("cost needs one finite --lambda")
        return rdccost.CostPlane(lam, args.gamma if args.gamma is not None else 0.0)
    pt = appspace.app_calculator(_app_model(args.app_model), args.paper_rounding)
    report["application"] = _app_report(pt)
    return rdccost.CostPlane(pt.lam, pt.gamma)


def cmd_cost(args):
    codecs = _load_codecs(args.input, args.codec)
    report = {"command": "cost"}
    plane = _plane_from_args(args, report)
    report.update(lam=plane.lam, gamma=plane.gamma, reducer=args.reducer, codecs=[])
    for c in codecs:
        kind = args.cost_kind or c.mode
        entry = {"name": c.name, "cost_kind": kind}
        if kind == "curve":
            if c.mode != "curve":
                raise RdcError(f"codec {c.name!r} is in cloud mode; curve cost needs curve mode", {"codec": c.name})
            br = rdccost.curve_cost(c, plane)
            entry["J"] = br.total
            entry["per_segment"] = [{"length": l, "mean_distance": z} for l, z in br.per_segment]
        else:
            jm = rdccost.point_costs(c, plane)
            entry["J"] = rdccost.cloud_cost(c, plane, args.reducer)
            entry["per_point"] = jm.tolist()
            entry["min"] = float(jm.min())
            entry["mean"] = float(jm.mean())
        report["codecs"].append(entry)
    order = sorted(range(len(codecs)), key=lambda i: (report["codecs"][i]["J"], i))
    report["ranking"] = [report["codecs"][i]["name"] for i in order]
    _emit(report, args, "cost_report.json")


def cmd_appcalc(args):
    pt = appspace.app_calculator(_app_model(args.app_model), args.paper_rounding)
    report = {"command": "appcalc", **_app_report(pt)}
    _emit(report, args, "appcalc_report.json")


def _grid_doc(grid, kind, values_linear=None, values_db=None, extra=None):
    doc = {
        "kind": kind,
        "reducer": grid.reducer,
        "cost_kind": grid.cost_kind,
        "codec_names": list(grid.codec_names),
        "lambda_db_axis": grid.lambda_db_axis,
        "gamma_db_axis": grid.gamma_db_axis,
        "layout": "values[gamma_index][lambda_index]",
    }
    if extra:
        doc.update(extra)
    if values_linear is not None:
        doc["values_linear"] = values_linear
    if values_db is not None:
        doc["values_db"] = values_db
    return doc


def cmd_appmap(args):
    if not args.output_dir:
        raise RdcError("appmap needs --output-dir")
    codecs = _load_codecs(args.input, args.codec)
    if len(codecs) < 2:
        raise RdcError("appmap needs at least two codecs")
    spec = appspace.GridSpec(appspace.parse_range(args.lambda_db_range), appspace.parse_range(args.gamma_db_range))
    grid = appspace.cost_surface(codecs, spec, args.reducer, args.cost_kind)
    out = Path(args.output_dir)
    point_db = None
    report = {"command": "appmap", "output_dir": str(out), "files": []}
    if args.mark_app_point:
        if args.lam or args.gamma is not None:
            lam = args.lam[0] if args.lam else 0.0
            pt_db = (10 * math.log10(lam) if lam > 0 else -math.inf,
                     10 * math.log10(args.gamma) if args.gamma else -math.inf)
            report["application"] = {"lambda": lam, "gamma": args.gamma or 0.0}
        else:
            pt = appspace.app_calculator(_app_model(args.app_model), args.paper_rounding)
            pt_db = pt.db
            report["application"] = _app_report(pt)
        point_db = pt_db
        report["application"]["point_db"] = list(pt_db)

    def put(name, text):
        output.write_text(out / name, text)
        report["files"].append(name)

    lax, gax = grid.lambda_db_axis, grid.gamma_db_axis
    sdb = grid.surfaces_db()
    for i, name in enumerate(grid.codec_names):
        stem = f"surface_{i:02d}_{_safe(name)}"
        put(stem + ".csv", output.matrix_csv(lax, gax, sdb[i]))
        put(stem + ".json", output.dumps(_grid_doc(grid, "surface", grid.surfaces[i], sdb[i], {"codec": name})))
        put(stem + ".svg", svg.surface_svg(lax, gax, sdb[i], f"{name}: 10 log10 J ({grid.reducer}, {grid.cost_kind})",
                                           point_db))
    if args.reference:
        if args.reference not in grid.codec_names:
            raise RdcError(f"reference codec {args.reference!r} not in selection")
        for name in grid.codec_names:
            if name == args.reference:
                continue
            lin = appspace.grid_difference(grid, name, args.reference, "linear")
            ddb = appspace.grid_difference(grid, name, args.reference, "db")
            stem = f"diff_{_safe(name)}_minus_{_safe(args.reference)}"
            put(stem + ".csv", output.matrix_csv(lax, gax, ddb))
            put(stem + ".linear.csv", output.matrix_csv(lax, gax, lin))
            put(stem + ".json", output.dumps(_grid_doc(grid, "difference", lin, ddb,
                                                       {"codec_a": name, "codec_b": args.reference})))
            put(stem + ".svg", svg.surface_svg(lax, gax, ddb, f"{name} - {args.reference} [dB]", point_db,
                                               symmetric=True))
    bm, winners = appspace.best_map(grid)
    legend = {str(i): n for i, n in enumerate(grid.codec_names)}
    put("best_map.csv", output.matrix_csv(lax, gax, bm))
    put("best_map.json", output.dumps(_grid_doc(grid, "best_map", extra={
        "legend": legend, "winners": [grid.codec_names[i] for i in winners], "values": bm})))
    put("best_map.svg", svg.best_map_svg(lax, gax, bm, grid.codec_names,
                                         f"best codec ({grid.reducer}, {grid.cost_kind})", point_db))
    report["winners"] = [grid.codec_names[i] for i in winners]
    if point_db is not None:
        li = _nearest(lax, point_db[0])
        gi = _nearest(gax, point_db[1])
        if li is not None and gi is not None:
            report["application"]["best_codec"] = grid.codec_names[int(bm[gi, li])]
    _emit(report, args, "appmap_report.json")


def _nearest(axis, v):
    if not math.isfinite(v) or v < axis[0] or v > axis[-1]:
        return None
    return int(abs(axis - v).argmin())


# -- entry point ------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="rdc-bench", description="Rate-distortion-complexity analysis of video codecs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", required=True, help="dataset JSON file")
        sp.add_argument("--output-dir", help="also write results under this directory")

    sp = sub.add_parser("ingest", help="validate and normalize measurement or dataset files")
    sp.add_argument("--input", action="append", required=True, help="dataset JSON or raw-measurement CSV (repeatable)")
    sp.add_argument("--output-dir")
    sp.add_argument("--codec", action="append", help="codec name for raw CSV inputs")
    sp.add_argument("--complexity", type=_nonneg, help="decoder kMAC/pixel for raw CSV inputs")
    sp.add_argument("--mode", choices=dataset.MODES, default="curve")
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("bd", help="Bjontegaard-style deltas between two codecs")
    common(sp)
    sp.add_argument("--codec", action="append", help="give twice: A then B")
    sp.add_argument("--lambda", dest="lam", action="append", type=_lambda_value, help="extra direction (repeatable, inf allowed)")
    sp.add_argument("--plane", action="append", choices=bd.PLANES, help="projection plane (repeatable)")
    sp.add_argument("--distortion-scale", choices=sorted(SCALES), default="mse-db")
    sp.set_defaults(func=cmd_bd)

    def weights(sp):
        sp.add_argument("--lambda", dest="lam", action="append", type=_nonneg)
        sp.add_argument("--gamma", type=_nonneg)
        sp.add_argument("--app-model", help="application-model JSON file, or 'streaming' for the built-in HD streaming model")
        sp.add_argument("--paper-rounding", action="store_true", help="reproduce the hand-rounded calculation")

    sp = sub.add_parser("cost", help="Lagrangian RDC cost of codecs for one application point")
    common(sp)
    sp.add_argument("--codec", action="append")
    weights(sp)
    sp.add_argument("--reducer", choices=rdccost.REDUCERS, default="min")
    sp.add_argument("--cost-kind", choices=appspace.COST_KINDS, help="default: the codec's mode")
    sp.set_defaults(func=cmd_cost)

    sp = sub.add_parser("appcalc", help="map an application model to (lambda, gamma)")
    sp.add_argument("--app-model", help="application-model JSON file or 'streaming' (the default)")
    sp.add_argument("--paper-rounding", action="store_true")
    sp.add_argument("--output-dir")
    sp.set_defaults(func=cmd_appcalc)

    sp = sub.add_parser("appmap", help="cost surfaces and best-codec map over the application space")
    common(sp)
    sp.add_argument("--codec", action="append")
    sp.add_argument("--lambda-db-range", default="-20:40:0.5")
    sp.add_argument("--gamma-db-range", default="-30:30:0.5")
    sp.add_argument("--reducer", choices=rdccost.REDUCERS, default="min")
    sp.add_argument("--cost-kind", choices=appspace.COST_KINDS, default="cloud")
    sp.add_argument("--reference", help="write cost differences of every codec against this one")
    sp.add_argument("--mark-app-point", action="store_true")
    weights(sp)
    sp.set_defaults(func=cmd_appmap)
    return p


def _error_line(rec):
    sys.stderr.write(json.dumps(output.jsonable(rec)) + "\n")


RANGE_FLAGS = ("--lambda-db-range", "--gamma-db-range")


def _attach_ranges(argv):
    # "-20:40:0.5" starts with a dash, so argparse would take it for an option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in RANGE_FLAGS:
            out.append(f"{tok}={next(it, '')}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_ranges(argv))
    try:
        args.func(args)
    except CommandFailed as exc:
        for rec in exc.errors:
            _error_line(rec)
        return 1
    except RdcError as exc:
        _error_line(exc.to_record())
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
