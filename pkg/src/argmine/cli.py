"""argmine command line.

Thin client over the service handlers: every subcommand loads its input
files, sends one request through the selected backend (in-process by
default, HTTP with --server), and writes the response. Data outputs go to
--out or standard output; logs go to standard error. Exit codes: 0 success,
1 validation or data error, 2 usage error.

Setting precedence: command-line flags, then the --config file, then
environment variables, then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from argmine import __version__
from argmine.client import HttpBackend, LocalBackend
from argmine.corpus.ops import StatsReport
from argmine.errors import ArgmineError, SchemaError
from argmine.graph import STRATEGIES
from argmine.metrics import report_from_json_dict
from argmine.scoring import fixture_entries
from argmine.zeroshot import curve_csv_text, matrix_from_json_dict

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.2
DEFAULT_SEED = 42
SCORER_URL_ENV = "ARGMINE_SCORER_URL"


def load_config(path: str) -> dict[str, str]:
    """key=value settings, one per line; # starts a comment."""
    settings = {}
    for line_no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SchemaError(f"expected key=value, got {raw!r}", line=line_no)
        key, value = line.split("=", 1)
        settings[key.strip()] = value.strip()
    return settings


def resolve(flag_value, config: dict, key: str, default, convert, env_var: str | None = None):
    if flag_value is not None:
        return flag_value
    if key in config:
        return convert(config[key])
    if env_var is not None and os.environ.get(env_var):
        return convert(os.environ[env_var])
    return default


def read_records(path: str) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON in {path}: {exc}", line=line_no) from exc
    return records


def write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def jsonl_text(records: list[dict]) -> str:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records)


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_meta(out: str, meta: dict) -> None:
    Path(f"{out}.meta.json").write_text(json_text(meta), encoding="utf-8")


def csv_list(value: str) -> list[str]:
    items = [item.strip() for item in value.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _scorer_spec(args, config: dict) -> dict:
    kind = resolve(args.scorer, config, "scorer", "heuristic", str)
    spec: dict = {
        "kind": kind,
        "timeout": resolve(args.timeout, config, "timeout", 30.0, float),
        "max_batch": resolve(args.max_batch, config, "max-batch", 16, int),
        "max_in_flight": resolve(args.max_in_flight, config, "max-in-flight", 4, int),
    }
    if kind == "fixture":
        path = resolve(args.fixture, config, "fixture", None, str)
        if path is None:
            raise UsageError("--fixture PATH is required with the fixture scorer")
        spec["entries"] = fixture_entries(path)
    elif kind == "remote":
        url = resolve(args.scorer_url, config, "scorer-url", None, str, SCORER_URL_ENV)
        if url is None:
            raise UsageError(
                f"remote scorer needs --scorer-url, a config entry, or ${SCORER_URL_ENV}"
            )
        spec["endpoint"] = url
    elif kind != "heuristic":
        raise UsageError(f"unknown scorer kind {kind!r}")
    return spec


class UsageError(Exception):
    pass


def cmd_corpus_validate(args, config, backend) -> int:
    result = backend.call("/v1/corpus/validate", {"documents": read_records(args.input)})
    for error in result["errors"]:
        print(error, file=sys.stderr)
    write_output(
        json_text({"valid": result["valid"], "documents": result["documents"]}), args.out
    )
    return 0 if result["valid"] else 1


def cmd_corpus_stats(args, config, backend) -> int:
    result = backend.call("/v1/corpus/stats", {"documents": read_records(args.input)})
    if args.text:
        write_output(StatsReport(**result).to_text() + "\n", args.out)
    else:
        write_output(json_text(result), args.out)
    return 0


def cmd_corpus_split(args, config, backend) -> int:
    seed = resolve(args.seed, config, "seed", DEFAULT_SEED, int)
    result = backend.call(
        "/v1/corpus/split",
        {
            "documents": read_records(args.input),
            "train": args.train,
            "dev": args.dev,
            "test": args.test,
            "seed": seed,
        },
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts = {}
    for part in ("train", "dev", "test"):
        (out_dir / f"{part}.jsonl").write_text(jsonl_text(result[part]), encoding="utf-8")
        counts[part] = len(result[part])
    write_meta(
        str(out_dir / "split"),
        {
            "command": "corpus split",
            "seed": seed,
            "train": args.train,
            "dev": args.dev,
            "test": args.test,
            "counts": counts,
        },
    )
    sys.stdout.write(json_text(counts))
    return 0


def cmd_corpus_filter_sections(args, config, backend) -> int:
    result = backend.call(
        "/v1/corpus/filter-sections",
        {"documents": read_records(args.input), "keep": args.keep},
    )
    write_output(jsonl_text(result["documents"]), args.out)
    if args.out:
        write_meta(args.out, {"command": "corpus filter-sections", "keep": args.keep})
    return 0


def cmd_corpus_graph_dot(args, config, backend) -> int:
    result = backend.call(
        "/v1/corpus/graph-dot",
        {
            "documents": read_records(args.input),
            "boilerplate": not args.keep_boilerplate,
            "patterns": args.pattern,
        },
    )
    write_output(result["dot"], args.out)
    return 0


def cmd_nli_gen(args, config, backend) -> int:
    seed = resolve(args.seed, config, "seed", DEFAULT_SEED, int)
    payload = {
        "documents": read_records(args.input),
        "strategy": args.strategy,
        "seed": seed,
        "fraction": args.fraction,
        "balance": args.balance,
        "patterns": args.pattern,
    }
    if args.attack_verbs or args.support_verbs:
        if not (args.attack_verbs and args.support_verbs):
            raise UsageError("--attack-verbs and --support-verbs must be given together")
        payload["verbs"] = {"attack": args.attack_verbs, "support": args.support_verbs}
    result = backend.call("/v1/nli/generate", payload)
    write_output(jsonl_text(result["examples"]), args.out)
    if args.out:
        write_meta(args.out, {"command": "nli gen", **result["meta"]})
    return 0


def cmd_nli_subsample(args, config, backend) -> int:
    seed = resolve(args.seed, config, "seed", DEFAULT_SEED, int)
    result = backend.call(
        "/v1/nli/subsample",
        {"examples": read_records(args.input), "fraction": args.fraction, "seed": seed},
    )
    write_output(jsonl_text(result["examples"]), args.out)
    if args.out:
        write_meta(args.out, {"command": "nli subsample", **result["meta"]})
    return 0


def cmd_relations_classify(args, config, backend) -> int:
    scorer = _scorer_spec(args, config)
    threshold = resolve(args.threshold, config, "threshold", DEFAULT_THRESHOLD, float)
    result = backend.call(
        "/v1/relations/classify",
        {
            "documents": read_records(args.input),
            "scorer": scorer,
            "threshold": threshold,
            "pairs": args.pairs,
            "strict_gt": args.strict_gt,
        },
    )
    write_output(jsonl_text(result["predictions"]), args.out)
    if args.out:
        write_meta(
            args.out,
            {
                "command": "relations classify",
                "scorer": scorer["kind"],
                "threshold": threshold,
                "pairs": args.pairs,
                "strict_gt": args.strict_gt,
                "predictions": len(result["predictions"]),
            },
        )
    return 0


def cmd_relations_tune(args, config, backend) -> int:
    scorer = _scorer_spec(args, config)
    result = backend.call(
        "/v1/relations/tune",
        {
            "documents": read_records(args.input),
            "scorer": scorer,
            "strict_gt": args.strict_gt,
        },
    )
    if args.out:
        Path(args.out).write_text(curve_csv_text(result["curve"]), encoding="utf-8")
        write_meta(
            args.out,
            {
                "command": "relations tune",
                "scorer": scorer["kind"],
                "strict_gt": args.strict_gt,
                "best_threshold": result["best_threshold"],
                "best_mean_f1": result["best_mean_f1"],
            },
        )
    sys.stdout.write(
        json_text(
            {
                "best_threshold": result["best_threshold"],
                "best_mean_f1": result["best_mean_f1"],
            }
        )
    )
    return 0


def cmd_relations_verb_matrix(args, config, backend) -> int:
    result = backend.call(
        "/v1/relations/verb-matrix",
        {
            "documents": read_records(args.input),
            "predictions": read_records(args.pred),
        },
    )
    if args.text:
        write_output(matrix_from_json_dict(result).to_text() + "\n", args.out)
    else:
        write_output(json_text(result), args.out)
    return 0


def cmd_eval_entities(args, config, backend) -> int:
    result = backend.call(
        "/v1/eval/entities",
        {
            "gold_documents": read_records(args.gold),
            "pred_documents": read_records(args.pred),
        },
    )
    _write_report(result, args)
    return 0


def cmd_eval_relations(args, config, backend) -> int:
    result = backend.call(
        "/v1/eval/relations",
        {
            "documents": read_records(args.input),
            "predictions": read_records(args.pred),
        },
    )
    _write_report(result, args)
    return 0


def cmd_eval_nli(args, config, backend) -> int:
    gold = read_records(args.gold)
    pred = read_records(args.pred)
    result = backend.call(
        "/v1/eval/nli",
        {
            "gold_labels": [_label_of(r, args.gold, i) for i, r in enumerate(gold, 1)],
            "pred_labels": [_label_of(r, args.pred, i) for i, r in enumerate(pred, 1)],
        },
    )
    _write_report(result, args)
    return 0


def _label_of(record: dict, path: str, line: int) -> str:
    label = record.get("label") if isinstance(record, dict) else None
    if not isinstance(label, str):
        raise SchemaError(f"missing label in {path}", line=line, field="label")
    return label


def _write_report(result: dict, args) -> None:
    if args.text:
        write_output(report_from_json_dict(result).to_text() + "\n", args.out)
    else:
        # pydantic keeps the optional mean fields even when unused; drop the
        # nulls so JSON reports round-trip through report_from_json_dict.
        cleaned = {k: v for k, v in result.items() if v is not None}
        write_output(json_text(cleaned), args.out)


def cmd_eval_curve(args, config, backend) -> int:
    runs = []
    for spec in args.run:
        fraction, sep, path = spec.partition("=")
        if not sep or not fraction or not path:
            raise UsageError(f"--run expects FRACTION=REPORT.json, got {spec!r}")
        with open(path, encoding="utf-8") as handle:
            runs.append({"fraction": fraction, "report": json.load(handle)})
    result = backend.call("/v1/eval/curve", {"runs": runs})
    lines = ["fraction,mean_f1"]
    for row in result["rows"]:
        lines.append(f"{row['fraction']!r},{row['mean_f1']!r}")
    write_output("\n".join(lines) + "\n", args.out)
    return 0


def cmd_serve(args, config, backend) -> int:
    import uvicorn

    from argmine.service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _add_out(parser, help_text="write output here instead of stdout"):
    parser.add_argument("--out", metavar="PATH", help=help_text)


def _add_text(parser):
    parser.add_argument("--text", action="store_true", help="aligned text instead of JSON")


def _add_scorer_flags(parser):
    parser.add_argument(
        "--scorer", choices=("heuristic", "fixture", "remote"), default=None,
        help="entailment scorer (default heuristic)",
    )
    parser.add_argument("--fixture", metavar="PATH", help="fixture JSONL for --scorer fixture")
    parser.add_argument(
        "--scorer-url", metavar="URL",
        help=f"remote scorer endpoint (env {SCORER_URL_ENV})",
    )
    parser.add_argument("--timeout", type=float, default=None, help="remote scorer timeout, seconds")
    parser.add_argument("--max-batch", type=int, default=None, help="hypotheses per scorer request")
    parser.add_argument("--max-in-flight", type=int, default=None, help="concurrent scorer requests")


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="argmine",
        description="Argument mining over clinical case exams: corpus tools, "
        "NLI dataset generation, zero-shot relation classification, evaluation.",
    )
    root.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    root.add_argument("--server", metavar="URL", help="use a running service instead of in-process execution")
    root.add_argument("--config", metavar="PATH", help="key=value settings file")
    root.add_argument("--verbose", action="store_true", help="info-level logs on stderr")
    commands = root.add_subparsers(dest="command", required=True)

    corpus = commands.add_parser("corpus", help="validate, inspect and transform corpora")
    corpus_sub = corpus.add_subparsers(dest="subcommand", required=True)

    p = corpus_sub.add_parser("validate", help="check schema and invariants")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    _add_out(p)
    p.set_defaults(func=cmd_corpus_validate)

    p = corpus_sub.add_parser("stats", help="entity and relation counts")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    _add_out(p)
    _add_text(p)
    p.set_defaults(func=cmd_corpus_stats)

    p = corpus_sub.add_parser("split", help="seeded train/dev/test split")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--out-dir", required=True, metavar="DIR")
    p.add_argument("--train", default="0.7", help="train fraction (default 0.7)")
    p.add_argument("--dev", default="0.1", help="dev fraction (default 0.1)")
    p.add_argument("--test", default="0.2", help="test fraction (default 0.2)")
    p.add_argument("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
    p.set_defaults(func=cmd_corpus_split)

    p = corpus_sub.add_parser("filter-sections", help="keep tokens of selected sections")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--keep", required=True, type=csv_list, metavar="KINDS",
                   help="comma-separated section kinds to keep")
    _add_out(p)
    p.set_defaults(func=cmd_corpus_filter_sections)

    p = corpus_sub.add_parser("graph-dot", help="argument graphs in DOT format")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--keep-boilerplate", action="store_true",
                   help="skip the boilerplate entity filter")
    p.add_argument("--pattern", action="append", metavar="REGEX",
                   help="boilerplate pattern (repeatable; default built-ins)")
    _add_out(p)
    p.set_defaults(func=cmd_corpus_graph_dot)

    nli = commands.add_parser("nli", help="NLI dataset generation")
    nli_sub = nli.add_subparsers(dest="subcommand", required=True)

    p = nli_sub.add_parser("gen", help="generate entailment/contradiction/neutral examples")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--strategy", required=True, choices=STRATEGIES)
    p.add_argument("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
    p.add_argument("--fraction", default="1", help="document-level training fraction (default 1)")
    p.add_argument("--balance", action="store_true",
                   help="match neutral count to entailment count")
    p.add_argument("--attack-verbs", type=csv_list, metavar="VERBS")
    p.add_argument("--support-verbs", type=csv_list, metavar="VERBS")
    p.add_argument("--pattern", action="append", metavar="REGEX",
                   help="boilerplate pattern (repeatable; default built-ins)")
    _add_out(p)
    p.set_defaults(func=cmd_nli_gen)

    p = nli_sub.add_parser("subsample", help="document-level nested subsample of a dataset")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--fraction", required=True)
    p.add_argument("--seed", type=int, default=None, help=f"default {DEFAULT_SEED}")
    _add_out(p)
    p.set_defaults(func=cmd_nli_subsample)

    relations = commands.add_parser("relations", help="zero-shot relation classification")
    relations_sub = relations.add_subparsers(dest="subcommand", required=True)

    p = relations_sub.add_parser("classify", help="predict support/attack/no-relation")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    _add_scorer_flags(p)
    p.add_argument("--threshold", type=float, default=None,
                   help=f"entailment gate (default {DEFAULT_THRESHOLD})")
    p.add_argument("--pairs", choices=("candidates", "all"), default="candidates",
                   help="candidates: unannotated pairs only; all: include annotated pairs")
    p.add_argument("--strict-gt", action="store_true",
                   help="gate with > instead of >=")
    _add_out(p)
    p.set_defaults(func=cmd_relations_classify)

    p = relations_sub.add_parser("tune", help="search the threshold maximizing mean F1")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    _add_scorer_flags(p)
    p.add_argument("--strict-gt", action="store_true", help="gate with > instead of >=")
    _add_out(p, help_text="write the threshold curve CSV here")
    p.set_defaults(func=cmd_relations_tune)

    p = relations_sub.add_parser("verb-matrix", help="verbalization usage against gold labels")
    p.add_argument("--in", dest="input", required=True, metavar="PATH")
    p.add_argument("--pred", required=True, metavar="PATH", help="predictions JSONL")
    _add_out(p)
    _add_text(p)
    p.set_defaults(func=cmd_relations_verb_matrix)

    evaluate = commands.add_parser("eval", help="metrics and reports")
    eval_sub = evaluate.add_subparsers(dest="subcommand", required=True)

    p = eval_sub.add_parser("entities", help="strict span F1 between two corpora")
    p.add_argument("--gold", required=True, metavar="PATH")
    p.add_argument("--pred", required=True, metavar="PATH")
    _add_out(p)
    _add_text(p)
    p.set_defaults(func=cmd_eval_entities)

    p = eval_sub.add_parser("relations", help="relation F1 of predictions against a corpus")
    p.add_argument("--in", dest="input", required=True, metavar="PATH",
                   help="gold corpus JSONL")
    p.add_argument("--pred", required=True, metavar="PATH", help="predictions JSONL")
    _add_out(p)
    _add_text(p)
    p.set_defaults(func=cmd_eval_relations)

    p = eval_sub.add_parser("nli", help="NLI label F1 between two datasets")
    p.add_argument("--gold", required=True, metavar="PATH")
    p.add_argument("--pred", required=True, metavar="PATH")
    _add_out(p)
    _add_text(p)
    p.set_defaults(func=cmd_eval_nli)

    p = eval_sub.add_parser("curve", help="data-scarcity curve from per-fraction reports")
    p.add_argument("--run", action="append", required=True, metavar="FRACTION=REPORT",
                   help="repeatable, e.g. --run 0.05=report_05.json")
    _add_out(p)
    p.set_defaults(func=cmd_eval_curve)

    p = commands.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)

    return root


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(args.config) if args.config else {}
        server = resolve(args.server, config, "server", None, str)
        backend = HttpBackend(server) if server else LocalBackend()
        return args.func(args, config, backend)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArgmineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
