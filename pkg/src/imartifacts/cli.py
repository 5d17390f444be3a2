"""Command line front end.

One subcommand per extraction surface plus `timeline`/`report` to merge
everything into a single event stream and `forge` to synthesize test
evidence.  Diagnostics go to stderr, data to stdout or files.  Exit codes:
0 success, 1 usage error, 2 nothing usable, 3 partial success.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import carver, facebook, forge, locator, pcap, regexport, skype, timeline
from .model import ExtractionError
from .sqliteio import open_immutable, table_names

ENV_OUT = "IMARTIFACTS_OUT"

_SQLITE_MAGIC = b"SQLite format 3\x00"
_PCAP_MAGICS = (
    bytes.fromhex("a1b2c3d4"), bytes.fromhex("d4c3b2a1"),
    bytes.fromhex("a1b23c4d"), bytes.fromhex("4d3cb2a1"),
)
_SKYPE_TABLES = {"accounts", "contacts", "transfers", "calls", "callmembers", "videomessages"}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures map to exit code 1."""

    def error(self, message):
        raise _Usage("%s: %s" % (self.prog, message))


def _err(message: str) -> None:
    print(message, file=sys.stderr)


class _Tally:
    """Per-input success bookkeeping driving the exit code contract."""

    def __init__(self):
        self.ok: list[str] = []
        self.failed: list[str] = []

    def exit_code(self) -> int:
        if self.failed:
            return 3 if self.ok else 2
        return 0


def _default_out(value):
    return value if value is not None else os.environ.get(ENV_OUT)


# ---------------------------------------------------------------------------
# Input sniffing


def _sniff(path: Path) -> str:
    name = path.name
    if name.endswith(locator._SIDECAR_SUFFIXES):
        return "sidecar"
    try:
        head = path.open("rb").read(4096)
    except OSError:
        return "unreadable"
    if head.startswith(_SQLITE_MAGIC):
        return "sqlite"
    if head[:4] in _PCAP_MAGICS:
        return "pcap"
    if head.startswith(b"\xff\xfe") or head.lstrip().startswith((b"Windows Registry", b"REGEDIT4")):
        text = head.decode("utf-16-le" if head.startswith(b"\xff\xfe") else "latin-1",
                           errors="replace").lstrip("﻿ \r\n")
        if text.startswith(("Windows Registry", "REGEDIT4")):
            return "registry"
    if head.lstrip().startswith(b"<?xml"):
        body = path.read_bytes()
        if b"</Lib>" in body:
            return "shared-xml"
        if b"</UI>" in body:
            return "config-xml"
        return "xml"
    if name.lower().endswith(".json"):
        return "json"
    if name.lower().endswith(".csv"):
        try:
            first = head.decode("utf-8-sig", errors="strict").splitlines()[0].casefold()
        except (UnicodeDecodeError, IndexError):
            return "raw"
        if "lsn" in first and "event" in first:
            return "journal-csv"
    return "raw"


def _sqlite_flavor(path: Path) -> str:
    with open_immutable(path) as connection:
        names = {n.casefold() for n in table_names(connection)}
    return "skype" if names & _SKYPE_TABLES else "facebook"


_FACEBOOK_EXTRACTORS = (
    ("analytics_logs", "analytics", facebook.extract_analytics),
    ("friends", "friends", facebook.extract_friends),
    ("messages", "messages", facebook.extract_messages),
    ("users", "users", facebook.extract_users),
    ("notifications", "notifications", facebook.extract_notifications),
)


def _extract_facebook_db(path: Path, warnings) -> dict[str, list]:
    with open_immutable(path) as connection:
        present = {n.casefold() for n in table_names(connection)}
    out = {}
    for table, label, extractor in _FACEBOOK_EXTRACTORS:
        if table in present:
            out[label] = extractor(path, warnings)
    return out


# ---------------------------------------------------------------------------
# The gather pipeline shared by `timeline` and `report`


class _Gather:
    def __init__(self):
        self.records: list = []
        self.flow_groups: list[tuple[str, list]] = []
        self.events: list = []
        self.warnings: list[str] = []
        self.tally = _Tally()

    def ingest(self, path: Path, utc_offset: int = 0) -> None:
        label = str(path)
        try:
            kind = _sniff(path)
            if kind == "unreadable":
                raise OSError("cannot read %s" % path)
            if kind == "sqlite":
                if _sqlite_flavor(path) == "skype":
                    dataset = skype.extract_main_db(path, self.warnings)
                    for group in (dataset.accounts, dataset.contacts, dataset.messages,
                                  dataset.transfers, dataset.calls, dataset.call_members,
                                  dataset.video_messages):
                        self.records += group
                else:
                    for group in _extract_facebook_db(path, self.warnings).values():
                        self.records += group
            elif kind == "pcap":
                capture = pcap.read_pcap(path)
                self.flow_groups.append((label, pcap.assemble_flows(capture.packets)))
            elif kind == "registry":
                self.records += _registry_records(path)
            elif kind == "journal-csv":
                self.events += timeline.ingest_ntfs_csv(
                    path, self.warnings, utc_offset_minutes=utc_offset, evidence_path=label)
            elif kind == "shared-xml":
                skype.parse_shared_xml(path.read_bytes())
            elif kind == "config-xml":
                skype.parse_config_xml(path.read_bytes())
            elif kind == "sidecar":
                locator.read_zone_identifier(path.read_bytes(), sidecar_path=label)
            elif kind in ("json", "xml"):
                self.warnings.append("no extractor for %s, skipped" % label)
                return
            else:
                with path.open("rb") as handle:
                    self.records += facebook.extract_chat_json(handle, evidence_path=label)
        except Exception as error:
            self.tally.failed.append(label)
            _err("error: %s: %s" % (label, error))
            return
        self.tally.ok.append(label)

    def merged(self, *, fb_owner=None, skype_owner=None, catalog=None,
               generated_at=None) -> timeline.Report:
        if fb_owner is None:
            fb_owner = facebook.infer_owner_uid(
                [r for r in self.records if isinstance(r, facebook.FbMessage)])
        if skype_owner is None:
            accounts = [r for r in self.records if isinstance(r, skype.SkypeAccount)]
            skype_owner = accounts[0].skypename if accounts else None
        events = list(self.events)
        events += timeline.normalize(
            self.records, fb_owner_uid=fb_owner, skype_owner=skype_owner,
            catalog=catalog, warnings=self.warnings)
        for capture_path, flows in self.flow_groups:
            events += timeline.normalize(
                flows, capture_path=capture_path, catalog=catalog, warnings=self.warnings)
        return timeline.build_report(events, self.warnings, generated_at=generated_at)


def _registry_records(path: Path) -> list:
    label = str(path)
    export = regexport.parse_reg_export(path.read_bytes())
    records = []
    for key in export.keys:
        segments = key.split("\\")
        if len(segments) < 2:
            continue
        try:
            identity = locator.parse_package_id(segments[-1])
        except ExtractionError:
            continue
        if segments[-2].casefold() != identity.family.casefold():
            continue
        try:
            records.append(regexport.find_install_time(export, segments[-1], evidence_path=label))
        except ExtractionError:
            continue
    records += regexport.find_persisted_items(export, evidence_path=label)
    return records


def _emit_report(report: timeline.Report, format: str, out: str | None) -> None:
    payload = timeline.emit(report, format)
    if out:
        Path(out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def _print_pipeline_diagnostics(report: timeline.Report, verbose: bool) -> None:
    _err("%d events, %d warnings" % (len(report.events), len(report.warnings)))
    if verbose:
        for warning in report.warnings:
            _err("warning: %s" % warning)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_scan(args) -> int:
    warnings: list[str] = []
    try:
        found = locator.scan_tree(args.root, warnings)
    except locator.RootUnreadable as error:
        _err("error: %s" % error)
        return 2
    for warning in warnings:
        _err("warning: %s" % warning)
    for artifact in found:
        extra = ""
        if artifact.package:
            extra += " package=%s" % artifact.package.text
        if artifact.account:
            extra += " account=%s" % artifact.account
        print("%s\t%s%s" % (artifact.role, artifact.path, extra))
    return 0


def _cmd_facebook(args) -> int:
    tally = _Tally()
    for name in args.databases:
        path = Path(name)
        warnings: list[str] = []
        try:
            groups = _extract_facebook_db(path, warnings)
        except Exception as error:
            tally.failed.append(name)
            _err("error: %s: %s" % (name, error))
            continue
        tally.ok.append(name)
        counts = " ".join("%s=%d" % (label, len(rows)) for label, rows in groups.items())
        print("%s: %s" % (name, counts or "no recognized tables"))
        for warning in warnings:
            _err("warning: %s" % warning)
    return tally.exit_code()


def _cmd_skype(args) -> int:
    path = Path(args.path)
    if path.is_dir():
        databases = sorted(path.rglob("main.db"))
        if not databases:
            _err("error: no main.db under %s" % path)
            return 2
    else:
        databases = [path]
    tally = _Tally()
    for database in databases:
        warnings: list[str] = []
        try:
            dataset = skype.extract_main_db(database, warnings)
        except Exception as error:
            tally.failed.append(str(database))
            _err("error: %s: %s" % (database, error))
            continue
        tally.ok.append(str(database))
        print("%s: accounts=%d contacts=%d messages=%d transfers=%d calls=%d "
              "call_members=%d video_messages=%d"
              % (database, len(dataset.accounts), len(dataset.contacts), len(dataset.messages),
                 len(dataset.transfers), len(dataset.calls), len(dataset.call_members),
                 len(dataset.video_messages)))
        for warning in warnings:
            _err("warning: %s" % warning)
    return tally.exit_code()


def _cmd_registry(args) -> int:
    path = Path(args.export)
    try:
        records = _registry_records(path)
    except Exception as error:
        _err("error: %s: %s" % (path, error))
        return 2
    for record in records:
        if isinstance(record, regexport.InstallRecord):
            print("install\t%s\t%s" % (record.package.text, record.install_time.isoformat_ms()))
        else:
            print("persisted\t%s\t%s\t%s"
                  % (record.guid, record.file_path, record.last_updated.isoformat_ms()))
    return 0


def _cmd_carve(args) -> int:
    signatures = carver.builtin_signatures()
    floor = 2 * max(s.max_length for s in signatures)
    if args.chunk_size < floor:
        raise _Usage("carve: --chunk-size must be at least %d" % floor)
    out_dir = _default_out(args.out) or "."
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    tally = _Tally()
    index = []
    for name in args.raw_files:
        try:
            with open(name, "rb") as handle:
                objects = carver.carve(handle, signatures, chunk_size=args.chunk_size)
        except Exception as error:
            tally.failed.append(name)
            _err("error: %s: %s" % (name, error))
            continue
        tally.ok.append(name)
        for item in objects:
            filename = "%s_%d.bin" % (item.signature_name, item.offset)
            (Path(out_dir) / filename).write_bytes(item.payload)
            index.append({
                "source": name, "file": filename, "signature": item.signature_name,
                "offset": item.offset, "length": len(item.payload), "sha256": item.sha256(),
            })
        print("%s: %d objects" % (name, len(objects)))
    index.sort(key=lambda entry: (entry["source"], entry["offset"]))
    (Path(out_dir) / "index.json").write_text(
        json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return tally.exit_code()


def _cmd_pcap(args) -> int:
    catalog = _load_catalog(args.catalog)
    tally = _Tally()
    for name in args.captures:
        try:
            capture = pcap.read_pcap(name)
            flows = pcap.assemble_flows(capture.packets)
        except Exception as error:
            tally.failed.append(name)
            _err("error: %s: %s" % (name, error))
            continue
        tally.ok.append(name)
        for flow in flows:
            label = pcap.label_flow(flow, catalog)
            print("%s\t%s:%d\t%s:%d\t%s\t%d packets\t%d bytes"
                  % (flow.proto, flow.endpoint_a[0], flow.endpoint_a[1],
                     flow.endpoint_b[0], flow.endpoint_b[1], label.label,
                     flow.packets_ab + flow.packets_ba, flow.bytes_ab + flow.bytes_ba))
    return tally.exit_code()


def _cmd_timeline(args) -> int:
    gather = _Gather()
    for name in args.inputs:
        path = Path(name)
        if path.is_dir():
            continue
        if args.ntfs_csv and path == Path(args.ntfs_csv):
            continue  # handled below even if it also appeared as an input
        gather.ingest(path, utc_offset=args.utc_offset)
    if args.ntfs_csv:
        csv_path = Path(args.ntfs_csv)
        try:
            gather.events += timeline.ingest_ntfs_csv(
                csv_path, gather.warnings, utc_offset_minutes=args.utc_offset,
                evidence_path=str(csv_path))
            gather.tally.ok.append(str(csv_path))
        except Exception as error:
            gather.tally.failed.append(str(csv_path))
            _err("error: %s: %s" % (csv_path, error))
    report = gather.merged(fb_owner=args.fb_owner, skype_owner=args.skype_owner,
                           catalog=_load_catalog(args.catalog))
    _emit_report(report, args.format, _default_out(args.out))
    _print_pipeline_diagnostics(report, args.verbose)
    return gather.tally.exit_code()


def _cmd_report(args) -> int:
    root = Path(args.root)
    if not root.is_dir():
        _err("error: not a readable directory: %s" % root)
        return 2
    gather = _Gather()
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        gather.ingest(path, utc_offset=args.utc_offset)
    report = gather.merged(fb_owner=args.fb_owner, skype_owner=args.skype_owner,
                           catalog=_load_catalog(args.catalog))
    report = timeline.Report(
        events=forge.relativize_events(report.events, root),
        counts=report.counts, warnings=report.warnings,
        tool_version=report.tool_version, generated_at=report.generated_at)
    _emit_report(report, args.format, _default_out(args.out))
    _print_pipeline_diagnostics(report, args.verbose)
    return gather.tally.exit_code()


def _cmd_forge(args) -> int:
    out = _default_out(args.out)
    if not out:
        raise _Usage("forge: --out is required (or set %s)" % ENV_OUT)
    try:
        manifest = forge.forge_fixture(args.seed, out)
    except forge.OutputNotEmpty as error:
        _err("error: %s" % error)
        return 2
    print("%s: seed %d, %d expected events"
          % (out, args.seed, len(manifest["expected_timeline"])))
    return 0


def _load_catalog(path):
    return pcap.load_catalog(path) if path else None


# ---------------------------------------------------------------------------
# Parser assembly


def _add_pipeline_flags(parser) -> None:
    parser.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--fb-owner", help="cache owner uid for direction calls")
    parser.add_argument("--skype-owner", help="account name owning the message store")
    parser.add_argument("--catalog", help="endpoint catalog JSON overriding the builtin")
    parser.add_argument("--utc-offset", type=int, default=0,
                        help="journal CSV zone offset in minutes")
    parser.add_argument("-v", "--verbose", action="store_true")


def _build_parser() -> _Parser:
    parser = _Parser(prog="imartifacts", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", metavar="command")

    sub = commands.add_parser("scan", help="list cataloged artifact paths under a tree")
    sub.add_argument("root")
    sub.set_defaults(func=_cmd_scan)

    sub = commands.add_parser("facebook", help="summarize cache databases")
    sub.add_argument("databases", nargs="+")
    sub.set_defaults(func=_cmd_facebook)

    sub = commands.add_parser("skype", help="summarize a message store or state dir")
    sub.add_argument("path")
    sub.set_defaults(func=_cmd_skype)

    sub = commands.add_parser("registry", help="decode install times and persisted items")
    sub.add_argument("export")
    sub.set_defaults(func=_cmd_registry)

    sub = commands.add_parser("carve", help="recover signed documents from raw bytes")
    sub.add_argument("raw_files", nargs="+")
    sub.add_argument("--out", help="directory for carved payloads and index.json")
    sub.add_argument("--chunk-size", type=int, default=carver.DEFAULT_CHUNK_SIZE)
    sub.set_defaults(func=_cmd_carve)

    sub = commands.add_parser("pcap", help="label capture flows")
    sub.add_argument("captures", nargs="+")
    sub.add_argument("--catalog")
    sub.set_defaults(func=_cmd_pcap)

    sub = commands.add_parser("timeline", help="extract, merge and emit events")
    sub.add_argument("inputs", nargs="+")
    sub.add_argument("--ntfs-csv", help="filesystem journal CSV to fold in")
    _add_pipeline_flags(sub)
    sub.set_defaults(func=_cmd_timeline)

    sub = commands.add_parser("report", help="full pipeline over an evidence root")
    sub.add_argument("root")
    _add_pipeline_flags(sub)
    sub.set_defaults(func=_cmd_report)

    sub = commands.add_parser("forge", help="write a synthetic evidence tree")
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--out")
    sub.set_defaults(func=_cmd_forge)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except _Usage as error:
        _err(str(error))
        return 1


if __name__ == "__main__":
    sys.exit(main())
