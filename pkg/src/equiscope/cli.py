"""Command-line front door: ingest, analyze, report, synth, serve.

Exit codes: 0 success, 1 configuration or fatal error, 2 evidence validation failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BundleError, ConfigError, EquiscopeError
from .evidence import load_bundle, load_identity_map
from .measures import WeightConfig
from .pipeline import analyze_bundle, report_json
from .provider import get_provider
from .provider.transcript import RecordingProvider, TranscriptStore
from .render import render_report
from .synth import generate, load_profiles

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_VALIDATION = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equiscope",
                                     description="Evidence-driven group-work contribution analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate an evidence bundle directory")
    p_ingest.add_argument("--bundle", required=True, type=Path)
    p_ingest.add_argument("--identities", type=Path, default=None)

    p_analyze = sub.add_parser("analyze", help="run the full analysis pipeline")
    p_analyze.add_argument("--bundle", required=True, type=Path)
    p_analyze.add_argument("--config", type=Path, default=None)
    p_analyze.add_argument("--provider", choices=["mock", "http"], default=None)
    p_analyze.add_argument("--out", type=Path, default=None, help="report destination (default stdout)")
    p_analyze.add_argument("--transcripts", type=Path, default=None, help="provider transcript JSONL path")
    p_analyze.add_argument("--identities", type=Path, default=None)

    p_report = sub.add_parser("report", help="render a report for reading")
    p_report.add_argument("--in", dest="infile", required=True, type=Path)
    p_report.add_argument("--format", choices=["text", "markdown"], default="text")

    p_synth = sub.add_parser("synth", help="generate a labelled synthetic bundle")
    p_synth.add_argument("--profiles", required=True, type=Path)
    p_synth.add_argument("--seed", required=True, type=int)
    p_synth.add_argument("--out", required=True, type=Path)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8040)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--data-dir", type=Path, default=Path("./equiscope-data"))
    p_serve.add_argument("--token", default=None, help="require this shared token on every request")
    return parser


def _cmd_ingest(args) -> int:
    identities = load_identity_map(args.identities) if args.identities else None
    result = load_bundle(args.bundle, identities)
    summary = result.summary()
    print(json.dumps(summary, indent=2, sort_keys=True))
    if result.issues:
        print(f"{len(result.issues)} validation issue(s):", file=sys.stderr)
        for issue in result.issues:
            print(f"  {issue.file}:{issue.line}: {issue.message}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_analyze(args) -> int:
    config = WeightConfig.from_file(args.config) if args.config else WeightConfig()
    identities = load_identity_map(args.identities) if args.identities else None
    result = load_bundle(args.bundle, identities)
    for issue in result.issues:
        print(f"warning: {issue.file}:{issue.line}: {issue.message}", file=sys.stderr)
    provider = get_provider(args.provider or config.provider, seed=config.seed)
    if args.transcripts is not None:
        provider = RecordingProvider(provider, TranscriptStore(args.transcripts))
    report = analyze_bundle(result.bundle, config, provider, load_summary=result.summary())
    payload = report_json(report)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(payload, encoding="utf-8")
        print(f"report written to {args.out}", file=sys.stderr)
    else:
        print(payload)
    return EXIT_OK


def _cmd_report(args) -> int:
    report = json.loads(args.infile.read_text(encoding="utf-8"))
    if "body" in report and "envelope" in report:  # service response form
        report = report["body"]
    print(render_report(report, args.format))
    return EXIT_OK


def _cmd_synth(args) -> int:
    profiles = load_profiles(args.profiles)
    out = generate(profiles, args.seed, args.out)
    print(f"bundle written to {out}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, token=args.token)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "ingest": _cmd_ingest,
        "analyze": _cmd_analyze,
        "report": _cmd_report,
        "synth": _cmd_synth,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except BundleError as exc:
        print(f"bundle error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except EquiscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except FileNotFoundError as exc:
        print(f"file not found: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
