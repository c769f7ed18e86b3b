"""Command-line pipeline: ingest -> fit -> generate -> measure -> analyze.

Subcommands: measure, fit, generate, pipeline, gof, stability, classify.
Every command is deterministic given --seed (omitting it draws one from
entropy and prints it); pipeline jobs derive per-graph seeds from the
graph name, so --jobs never changes the output bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import secrets
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import seeds
from .dataset import DatasetError, DatasetRow, DatasetTable, write_feature_csv
from .fitting import DEFAULT_BUDGET, DEFAULT_REPLICATES, fit_model
from .generators import MODEL_NAMES, generate, params_from_json_obj
from .gof import correlation_matrix, mean_distance_matrix, pca_project
from .graph import EdgeListError, load_edge_list, save_edge_list, serialize_edge_list
from .metrics import feature_vector
from .stability import stability_run

PIPELINE_MODELS = ("WS", "WS_STD", "CBA", "DD", "Com", "2K")
STABILITY_MODELS = ("WS", "CBA", "DD", "Com", "2K")

_UNSET = object()  # distinguishes "flag not given" from an explicit value


def _read_config(path):
    """Parse a `key = value` config file into a defaults dict."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise SystemExit(f"config {path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip().replace("-", "_")
        raw = raw.strip()
        if key in ("seed", "jobs", "replicates", "folds", "budget", "fit_replicates"):
            values[key] = int(raw)
        else:
            values[key] = raw
    return values


def _resolve_seed(args):
    if args.seed is None:
        args.seed = secrets.randbits(48)
        print(f"seed: {args.seed} (chosen from entropy; pass --seed to reproduce)")
    return args.seed


def _write(path, text):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# measure


def cmd_measure(args):
    rows = []
    failures = 0
    for path in args.paths:
        try:
            g = load_edge_list(path)
            rows.append((Path(path).stem, feature_vector(g)))
        except (OSError, ValueError) as exc:
            failures += 1
            print(f"error: {path}: {exc}", file=sys.stderr)
    text = write_feature_csv(rows)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# fit / generate


def cmd_fit(args):
    seed = _resolve_seed(args)
    g = load_edge_list(args.path)
    name = Path(args.path).stem
    models = PIPELINE_MODELS if args.model == "all" else (args.model,)
    out_dir = Path(args.out)
    failures = 0
    for model in models:
        try:
            report = fit_model(
                g,
                model,
                budget=args.budget,
                replicates=args.fit_replicates,
                seed=seeds.derive(seed, name, model, "fit"),
            )
        except (ValueError, RuntimeError) as exc:
            failures += 1
            print(f"error: {model}: {exc}", file=sys.stderr)
            continue
        payload = json.dumps(report.to_json_obj(), indent=2, sort_keys=True)
        _write(out_dir / f"{name}_{model}.json", payload + "\n")
        print(f"{model}: objective {report.objective_value!r} ({report.evaluations} evaluations)")
    return 1 if failures else 0


def cmd_generate(args):
    with open(args.params, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    model, params, file_seed = params_from_json_obj(obj)
    seed = args.seed if args.seed is not None else file_seed
    if seed is None:
        seed = secrets.randbits(48)
        print(f"seed: {seed} (chosen from entropy; pass --seed to reproduce)")
    g = generate(params, seed)
    if args.out:
        save_edge_list(g, args.out)
    else:
        sys.stdout.write(serialize_edge_list(g))
    print(f"{model}: generated n={g.node_count} m={g.edge_count}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# pipeline


def _read_manifest(path):
    base = Path(path).parent
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["name", "path", "domain"]:
            raise SystemExit(f"manifest {path}: header must be name,path,domain")
        for record in reader:
            if not record:
                continue
            name, rel, domain = (field.strip() for field in record)
            entries.append((name, str((base / rel).resolve()), domain))
    names = [e[0] for e in entries]
    if len(set(names)) != len(names):
        raise SystemExit(f"manifest {path}: duplicate names")
    return entries


def _pipeline_one(entry, master_seed, budget, fit_replicates):
    """Fit all models to one real graph and measure every counterpart.

    Returns (rows, artifacts, failures); must stay a plain picklable
    function because pipeline jobs may run in worker processes.
    """
    name, path, domain = entry
    rows = []
    artifacts = {}
    failures = []
    try:
        g = load_edge_list(path)
        rows.append((name, feature_vector(g), domain, "real", "Real"))
    except (OSError, ValueError) as exc:
        return [], {}, [f"{name}: {exc}"]
    for model in PIPELINE_MODELS:
        try:
            report = fit_model(
                g,
                model,
                budget=budget,
                replicates=fit_replicates,
                seed=seeds.derive(master_seed, name, model, "fit"),
            )
            counterpart = generate(report.params, seeds.derive(master_seed, name, model, "gen"))
            rows.append((name, feature_vector(counterpart), domain, "model", model))
            artifacts[f"fits/{name}_{model}.json"] = (
                json.dumps(report.to_json_obj(), indent=2, sort_keys=True) + "\n"
            )
            artifacts[f"graphs/{name}_{model}.txt"] = serialize_edge_list(counterpart)
        except (ValueError, RuntimeError) as exc:
            failures.append(f"{name}/{model}: {exc}")
    return rows, artifacts, failures


def cmd_pipeline(args):
    seed = _resolve_seed(args)
    entries = _read_manifest(args.manifest)
    out_dir = Path(args.out)
    jobs = max(1, args.jobs)
    results = []
    if jobs == 1 or len(entries) <= 1:
        for entry in entries:
            results.append(_pipeline_one(entry, seed, args.budget, args.fit_replicates))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_pipeline_one, entry, seed, args.budget, args.fit_replicates)
                for entry in entries
            ]
            results = [f.result() for f in futures]
    all_rows = []
    all_failures = []
    for rows, artifacts, failures in results:
        for name, fv, domain, category, subcategory in rows:
            all_rows.append(
                DatasetRow(
                    name=name, features=fv, domain=domain, category=category,
                    subcategory=subcategory,
                )
            )
        for rel, text in sorted(artifacts.items()):
            _write(out_dir / rel, text)
        all_failures.extend(failures)
    table = DatasetTable(rows=tuple(all_rows))
    _write(out_dir / "dataset.csv", table.to_csv_text())
    for line in all_failures:
        print(f"error: {line}", file=sys.stderr)
    print(f"pipeline: {len(all_rows)} rows, {len(all_failures)} failures -> {out_dir}")
    return 1 if all_failures else 0


# ---------------------------------------------------------------------------
# gof / stability / classify


def cmd_gof(args):
    table = DatasetTable.from_csv(args.dataset)
    out_dir = Path(args.out)
    distances = mean_distance_matrix(table)
    for domain in table.domains_present():
        _write(out_dir / f"distance_{domain}.csv", distances.to_csv_text(domain))
    real = table.filter(category="real")
    for domain in real.domains_present():
        sub = real.filter(domain=domain)
        if len(sub) >= 3:
            _write(out_dir / f"correlation_{domain}.csv", correlation_matrix(sub).to_csv_text())
    if len(real) >= 3:
        _write(out_dir / "pca.csv", pca_project(real).to_csv_text())
    if distances.unmatched:
        lines = [
            f"{domain},{name},missing:{'|'.join(missing)}"
            for domain, name, missing in distances.unmatched
        ]
        _write(out_dir / "unmatched.txt", "\n".join(lines) + "\n")
        print(f"warning: {len(distances.unmatched)} name(s) lack counterparts", file=sys.stderr)
    print(f"gof: reports written to {out_dir}")
    return 0


def cmd_stability(args):
    seed = _resolve_seed(args)
    g = load_edge_list(args.path)
    name = Path(args.path).stem
    fits = []
    for model in STABILITY_MODELS:
        fits.append(
            fit_model(
                g,
                model,
                budget=args.budget,
                replicates=args.fit_replicates,
                seed=seeds.derive(seed, name, model, "fit"),
            )
        )
    summary = stability_run(g, fits, replicates=args.replicates,
                            seed=seeds.derive(seed, name, "stability"))
    out_dir = Path(args.out)
    _write(out_dir / "stability.csv", summary.to_csv_text())
    print(f"stability: {args.replicates} replicates per model -> {out_dir / 'stability.csv'}")
    return 0


def cmd_classify(args):
    from .classify import run_task

    seed = _resolve_seed(args)
    table = DatasetTable.from_csv(args.dataset)
    out_dir = Path(args.out)
    reports = []
    if args.task == "domain":
        reports.append(run_task(table, "domain", model=args.model, k=args.folds, seed=seed))
    else:
        for domain in table.domains_present():
            reports.append(
                run_task(table, args.task, model=args.model, k=args.folds, seed=seed,
                         domain=domain)
            )
    for report in reports:
        suffix = f"_{report.domain}" if report.domain else ""
        stem = f"eval_{report.task}_{report.model}{suffix}"
        _write(out_dir / f"{stem}.json",
               json.dumps(report.to_json_obj(), indent=2, sort_keys=True) + "\n")
        lines = [",".join([""] + list(report.class_names))]
        for cname, row in zip(report.class_names, report.confusion):
            lines.append(",".join([cname] + [str(v) for v in row]))
        _write(out_dir / f"{stem}_confusion.csv", "\n".join(lines) + "\n")
        headline = (
            f"AUC {report.auc!r}" if report.auc is not None
            else f"accuracy {report.pooled_accuracy!r}"
        )
        print(f"{stem}: {headline}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    """Parser with sentinel defaults so a config file can fill gaps.

    Every overridable option defaults to _UNSET and records its real
    default in the ``resolved`` map; main() applies explicit flag >
    config value > real default.
    """
    parser = argparse.ArgumentParser(
        prog="netfit",
        description="Fit network models to graphs, generate counterparts, "
        "measure, score and classify them.",
    )
    parser.add_argument("--config", help="key = value file overriding defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def opt(p, name, real_default, **kwargs):
        p.add_argument(name, default=_UNSET, **kwargs)
        p._real_defaults[name.lstrip("-").replace("-", "_")] = real_default

    def new_command(name, func, help_text, needs_out=False):
        p = sub.add_parser(name, help=help_text)
        p._real_defaults = {}
        p.set_defaults(func=func, needs_out=needs_out,
                       real_defaults=p._real_defaults)
        return p

    p = new_command("measure", cmd_measure, "feature CSV for edge-list files")
    p.add_argument("paths", nargs="+")
    opt(p, "--out", None, help="output CSV (default stdout)")

    p = new_command("fit", cmd_fit, "fit models to one graph, write JSON reports",
                    needs_out=True)
    p.add_argument("path")
    opt(p, "--model", "all", choices=("all",) + MODEL_NAMES)
    opt(p, "--budget", DEFAULT_BUDGET, type=int)
    opt(p, "--fit-replicates", DEFAULT_REPLICATES, type=int)
    opt(p, "--seed", None, type=int)
    opt(p, "--out", None, help="output directory")

    p = new_command("generate", cmd_generate, "generate a graph from a params JSON")
    p.add_argument("params")
    opt(p, "--seed", None, type=int)
    opt(p, "--out", None, help="output edge list (default stdout)")

    p = new_command("pipeline", cmd_pipeline, "fit+generate+measure a whole manifest",
                    needs_out=True)
    p.add_argument("manifest", help="CSV with header name,path,domain")
    opt(p, "--jobs", 1, type=int)
    opt(p, "--budget", DEFAULT_BUDGET, type=int)
    opt(p, "--fit-replicates", DEFAULT_REPLICATES, type=int)
    opt(p, "--seed", None, type=int)
    opt(p, "--out", None, help="output directory")

    p = new_command("gof", cmd_gof, "distance/correlation/PCA reports from a dataset CSV",
                    needs_out=True)
    p.add_argument("dataset")
    opt(p, "--out", None, help="output directory")

    p = new_command("stability", cmd_stability,
                    "replicate fitted models and summarize metrics", needs_out=True)
    p.add_argument("path")
    opt(p, "--replicates", 30, type=int)
    opt(p, "--budget", DEFAULT_BUDGET, type=int)
    opt(p, "--fit-replicates", DEFAULT_REPLICATES, type=int)
    opt(p, "--seed", None, type=int)
    opt(p, "--out", None, help="output directory")

    p = new_command("classify", cmd_classify, "run a classification task on a dataset CSV",
                    needs_out=True)
    p.add_argument("dataset")
    p.add_argument("--task", required=True, choices=("domain", "category", "subcategory"))
    opt(p, "--model", "forest", choices=("tree", "forest"))
    opt(p, "--folds", 5, type=int)
    opt(p, "--seed", None, type=int)
    opt(p, "--out", None, help="output directory")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _read_config(args.config) if args.config else {}
    for key, real_default in getattr(args, "real_defaults", {}).items():
        if getattr(args, key, None) is _UNSET:
            setattr(args, key, config.get(key, real_default))
    if getattr(args, "needs_out", False) and not args.out:
        parser.error(f"{args.command}: --out is required (flag or config file)")
    try:
        return args.func(args)
    except (DatasetError, EdgeListError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
