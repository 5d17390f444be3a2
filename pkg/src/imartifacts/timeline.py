"""Timeline assembly: turn extracted records into one sorted evidence stream.

Every extractor in this package produces typed records; this module maps
them onto TimelineEvents, ingests external NTFS journal CSV exports, merges
and deduplicates the result, and emits machine-readable reports (JSONL and
CSV) that can be parsed back without loss.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
import textwrap
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path

from . import __version__, facebook, pcap, regexport, skype
from .model import (
    App,
    Channel,
    EventKind,
    ExtractionError,
    Provenance,
    Timestamp,
    TimelineEvent,
    ts_from_iso_text,
    ts_from_unix,
)

__all__ = [
    "EMIT_FIELDS",
    "MissingColumns",
    "NotCsv",
    "NtfsJournalRow",
    "Report",
    "UNDETERMINED_MARK",
    "build_report",
    "emit",
    "ingest_ntfs_csv",
    "merge_sort",
    "normalize",
    "parse_jsonl",
    "parse_ntfs_csv",
]


class NotCsv(ExtractionError):
    """The input is not a delimited text file at all."""


class MissingColumns(ExtractionError):
    """The CSV header lacks columns the journal layout requires."""


# Appended to summaries when sent-vs-received cannot be established because
# the dataset owner is unknown; the event is still emitted (as received).
UNDETERMINED_MARK = "(direction undetermined)"


def _short(text: str | None, width: int = 80) -> str:
    if not text:
        return ""
    return textwrap.shorten(text, width=width, placeholder="...")


def _read_text(source) -> str:
    """Accept a stream, Path, bytes, path string or literal text."""
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8-sig", "replace") if isinstance(data, bytes) else data
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8-sig")
    if isinstance(source, bytes):
        return source.decode("utf-8-sig", "replace")
    if isinstance(source, str):
        if "\n" not in source and os.path.exists(source):
            return Path(source).read_text(encoding="utf-8-sig")
        return source
    raise TypeError("expected stream, path or text, got %r" % type(source))


# ---------------------------------------------------------------------------
# NTFS journal CSV ingestion


@dataclass(frozen=True)
class NtfsJournalRow:
    """One row of a journal-tracker CSV export."""

    lsn: int
    event_time: Timestamp | None
    event: str
    file_name: str
    full_path: str
    detail: str | None = None
    create_time: Timestamp | None = None
    modified_time: Timestamp | None = None

    def __post_init__(self) -> None:
        if self.lsn < 0:
            raise ValueError("lsn must be non-negative")


_REQUIRED_COLUMNS = ("lsn", "event", "file name", "full path")
_OPTIONAL_COLUMNS = ("event time", "detail", "create time", "modified time")


def _journal_timestamp(text: str, utc_offset_minutes: int) -> Timestamp:
    parsed = ts_from_iso_text(text)
    if not utc_offset_minutes:
        return parsed
    shifted = parsed.utc_instant - timedelta(minutes=utc_offset_minutes)
    return Timestamp(shifted, "iso_text", parsed.raw)


def parse_ntfs_csv(source, warnings: list[str] | None = None,
                   utc_offset_minutes: int = 0) -> list[NtfsJournalRow]:
    """Parse a journal CSV into rows; unreadable rows are skipped loudly.

    Stored times carry no zone marker; they are read as UTC unless
    utc_offset_minutes says the export machine ran at UTC+offset.
    """
    if warnings is None:
        warnings = []
    text = _read_text(source)
    if "\x00" in text:
        raise NotCsv("binary content, not a CSV export")
    try:
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        body = list(reader)
    except csv.Error as exc:
        raise NotCsv("unreadable as CSV: %s" % exc) from exc
    if header is None:
        raise NotCsv("empty input, no header row")
    if len(header) < 2:
        raise NotCsv("header has no delimited columns")
    positions: dict[str, int] = {}
    for index, name in enumerate(header):
        positions.setdefault(name.strip().casefold(), index)
    missing = [name for name in _REQUIRED_COLUMNS if name not in positions]
    if missing:
        raise MissingColumns("header lacks column(s): %s" % ", ".join(missing))

    def cell(row: list[str], name: str) -> str:
        index = positions.get(name)
        if index is None or index >= len(row):
            return ""
        return row[index].strip()

    def timed(row: list[str], name: str, line: int) -> Timestamp | None:
        raw = cell(row, name)
        if not raw:
            return None
        try:
            return _journal_timestamp(raw, utc_offset_minutes)
        except (ExtractionError, ValueError):
            warnings.append("line %d: unreadable %s %r, treated as blank" % (line, name, raw))
            return None

    rows: list[NtfsJournalRow] = []
    for line, row in enumerate(body, start=2):
        if not any(field.strip() for field in row):
            continue
        try:
            lsn = int(cell(row, "lsn"))
            if lsn < 0:
                raise ValueError(lsn)
        except ValueError:
            warnings.append("line %d: unreadable LSN %r, row skipped" % (line, cell(row, "lsn")))
            continue
        rows.append(NtfsJournalRow(
            lsn=lsn,
            event_time=timed(row, "event time", line),
            event=cell(row, "event"),
            file_name=cell(row, "file name"),
            full_path=cell(row, "full path"),
            detail=cell(row, "detail") or None,
            create_time=timed(row, "create time", line),
            modified_time=timed(row, "modified time", line),
        ))
    return rows


def ingest_ntfs_csv(source, warnings: list[str] | None = None,
                    utc_offset_minutes: int = 0,
                    evidence_path: str | None = None) -> list[TimelineEvent]:
    """One journal event per timed row; blank-time rows inherit the
    preceding timed row's instant and are flagged with a warning."""
    if warnings is None:
        warnings = []
    if evidence_path is None:
        evidence_path = str(source) if isinstance(source, (str, Path)) and "\n" not in str(source) else "<ntfs-csv>"
    if utc_offset_minutes:
        warnings.append("journal times interpreted as UTC%+d minutes per override" % utc_offset_minutes)
    else:
        warnings.append("journal times carry no zone marker, assumed UTC")
    provenance = Provenance(evidence_path, "timeline.ntfs_csv", Channel.INGESTED_CSV)
    events: list[TimelineEvent] = []
    last_timed: Timestamp | None = None
    for row in parse_ntfs_csv(source, warnings, utc_offset_minutes):
        when = row.event_time
        if when is None:
            if last_timed is None:
                warnings.append("LSN %d: blank Event Time with no preceding timed row, skipped" % row.lsn)
                continue
            when = last_timed
            warnings.append("LSN %d: blank Event Time, time-inherited from preceding row" % row.lsn)
        else:
            last_timed = when
        name = row.file_name or row.full_path.replace("\\", "/").rstrip("/").rsplit("/", 1)[-1]
        summary = ("%s %s" % (row.event, name)).strip()
        events.append(TimelineEvent(
            when=when,
            kind=EventKind.FS_JOURNAL,
            app=App.OTHER,
            summary=summary,
            provenance=provenance,
        ))
    return events


# ---------------------------------------------------------------------------
# Record normalization

_ANALYTICS_KINDS = {
    "login": EventKind.LOGIN,
    "file_downloaded": EventKind.FILE_DOWNLOAD,
    "message_sent_attempt": EventKind.MESSAGE_SENT,
    "message_send_state": EventKind.MESSAGE_SENT,
    "chat_turned_on": EventKind.APP_LAUNCH,
}

# Message-like codes share the sent/received split; the rest map directly.
_SKYPE_MESSAGE_LABELS = frozenset({
    "TextSent", "EmoticonSent", "SmsSent", "ContactDetailsSent",
    "VoiceMessageSent", "BirthdayNote", "Unknown",
})
_SKYPE_KIND_BY_LABEL = {
    "FileSent": EventKind.FILE_TRANSFER,
    "Conference": EventKind.CALL_START,
    "VideoSessionStarted": EventKind.CALL_START,
    "VideoSessionEnded": EventKind.CALL_END,
    "ContactAsk": EventKind.CONTACT_ADD,
    "Blocked": EventKind.CONTACT_ADD,
}

_CHATNAME_RE = re.compile(r"#([^/]+)/\$([^;]*)")

# Record types that describe state rather than a dated happening; they are
# skipped with a warning instead of being forced onto the timeline.
_STATE_RECORD_TYPES = (
    facebook.FbFriend,
    facebook.FbUser,
    skype.SkypeAccount,
    skype.SkypeContact,
    skype.CallMember,
)


def _chat_counterpart(chatname: str | None, author: str | None) -> str | None:
    """The other party of a two-sided chat name like #alice/$bob;cafe."""
    if not chatname:
        return None
    match = _CHATNAME_RE.match(chatname)
    if not match:
        return None
    for party in match.groups():
        if party and party != author:
            return party
    return None


def _skype_counterpart(record: skype.SkypeMessage, owner: str | None) -> str | None:
    """The non-owner party: the author, unless the owner authored it."""
    other = _chat_counterpart(record.chatname, record.author)
    if owner is not None and record.author == owner:
        return other
    return record.author or other


def _shift(ts: Timestamp, seconds: int) -> Timestamp:
    """A timestamp the given number of seconds later, raw value included."""
    if ts.encoding == "unix_seconds":
        return ts_from_unix(ts.raw + seconds, "seconds")
    if ts.encoding == "unix_millis":
        return ts_from_unix(ts.raw + 1000 * seconds, "millis")
    instant = ts.utc_instant + timedelta(seconds=seconds)
    epoch = int(instant.timestamp())
    return ts_from_unix(epoch, "seconds")


def _from_fb_analytics(record: facebook.FbAnalyticsEvent) -> list[TimelineEvent]:
    name = (record.name or "").strip()
    kind = _ANALYTICS_KINDS.get(name, EventKind.APP_LAUNCH)
    summary = "analytics %s" % (name or record.log_type or "event")
    return [TimelineEvent(when=record.when, kind=kind, app=App.FACEBOOK,
                          summary=summary, provenance=record.provenance)]


def _fb_direction(record: facebook.FbMessage, owner_uid: str | None) -> str:
    if "sent" in record.tags:
        return "sent"
    if owner_uid is None:
        return "undetermined"
    return "sent" if record.sender_uid == owner_uid else "received"


def _from_fb_message(record: facebook.FbMessage, owner_uid: str | None,
                     warnings: list[str]) -> list[TimelineEvent]:
    direction = _fb_direction(record, owner_uid)
    body = _short(record.body)
    summary = 'message "%s"' % body if body else "message"
    if record.attachments:
        count = len(record.attachments)
        summary += " with %d attachment%s" % (count, "" if count == 1 else "s")
    if direction == "undetermined":
        summary += " " + UNDETERMINED_MARK
        warnings.append("message row %d: owner unknown, direction undetermined" % record.row_id)
    actor = record.sender_name or record.sender_uid
    return [TimelineEvent(
        when=record.when,
        kind=EventKind.MESSAGE_SENT if direction == "sent" else EventKind.MESSAGE_RECEIVED,
        app=App.FACEBOOK,
        summary=summary,
        provenance=record.provenance,
        actor=actor,
        counterpart=None if direction == "sent" else actor,
    )]


def _from_fb_notification(record: facebook.FbNotification,
                          warnings: list[str]) -> list[TimelineEvent]:
    when = record.created or record.updated
    if when is None:
        warnings.append("notification %s: no usable instant, skipped" % (record.notification_id,))
        return []
    title = _short(record.title_text)
    summary = 'notification "%s"' % title if title else "notification"
    return [TimelineEvent(when=when, kind=EventKind.NOTIFICATION, app=App.FACEBOOK,
                          summary=summary, provenance=record.provenance,
                          actor=record.sender_id, counterpart=record.sender_id)]


def _from_chat_fragment(record: facebook.ChatFragment,
                        warnings: list[str]) -> list[TimelineEvent]:
    if not record.parsed or record.time is None:
        warnings.append("chat fragment at offset %d: unparsed or undated, skipped" % record.offset)
        return []
    body = _short(record.message)
    summary = 'chat push "%s"' % body if body else "chat push"
    return [TimelineEvent(when=record.time, kind=EventKind.MESSAGE_RECEIVED,
                          app=App.FACEBOOK, summary=summary,
                          provenance=record.provenance,
                          actor=record.sender_uid, counterpart=record.sender_uid)]


def _file_offer_summary(body_xml: str | None) -> str:
    parsed = skype.parse_body_xml(body_xml or "")
    if isinstance(parsed, skype.FilesBody) and parsed.files:
        names = [item.name for item in parsed.files]
        shown = ", ".join(names[:2])
        if len(names) > 2:
            shown += " (+%d more)" % (len(names) - 2)
        return "file offer %s" % shown
    return "file offer"


def _from_skype_message(record: skype.SkypeMessage, owner: str | None,
                        warnings: list[str]) -> list[TimelineEvent]:
    label = record.kind.label
    counterpart = _skype_counterpart(record, owner)
    if label in _SKYPE_MESSAGE_LABELS:
        if owner is None:
            direction = "undetermined"
        else:
            direction = "sent" if record.author == owner else "received"
        body = _short(record.body_xml)
        summary = '%s "%s"' % (label, body) if body else label
        if direction == "undetermined":
            summary += " " + UNDETERMINED_MARK
            warnings.append("skype message %d: owner unknown, direction undetermined" % record.id)
        kind = EventKind.MESSAGE_SENT if direction == "sent" else EventKind.MESSAGE_RECEIVED
    else:
        kind = _SKYPE_KIND_BY_LABEL[label]
        if label == "FileSent":
            summary = _file_offer_summary(record.body_xml)
        elif label == "Conference":
            summary = "conference call"
        elif label == "VideoSessionStarted":
            summary = "video session started"
        elif label == "VideoSessionEnded":
            summary = "video session ended"
            if record.reason:
                summary += " (%s)" % record.reason
        elif label == "Blocked":
            summary = "contact blocked"
        else:
            summary = "contact request"
    return [TimelineEvent(when=record.when, kind=kind, app=App.SKYPE,
                          summary=summary, provenance=record.provenance,
                          actor=record.author, counterpart=counterpart)]


def _from_skype_transfer(record: skype.SkypeTransfer, owner: str | None,
                         warnings: list[str]) -> list[TimelineEvent]:
    when = record.start or record.finish
    if when is None:
        warnings.append('transfer "%s": no usable instant, skipped' % (record.filename,))
        return []
    name = record.filename or (record.filepath or "?").replace("\\", "/").rsplit("/", 1)[-1]
    summary = 'file transfer "%s"' % name
    if record.filesize is not None:
        summary += " (%d bytes)" % record.filesize
    if record.direction == "receiving":
        kind = EventKind.FILE_DOWNLOAD
        actor = record.partner_handle
    elif record.direction == "transferring":
        kind = EventKind.FILE_TRANSFER
        actor = owner
    else:
        kind = EventKind.FILE_TRANSFER
        actor = None
        summary += " " + UNDETERMINED_MARK
        warnings.append('transfer "%s": direction undetermined' % name)
    return [TimelineEvent(when=when, kind=kind, app=App.SKYPE, summary=summary,
                          provenance=record.provenance, actor=actor,
                          counterpart=record.partner_dispname or record.partner_handle)]


def _from_skype_call(record: skype.SkypeCall) -> list[TimelineEvent]:
    mode = "incoming" if record.is_incoming else "outgoing"
    title = ("%s call %s" % (mode, record.name or "")).strip()
    counterpart = record.host_identity if record.is_incoming else None
    events = [TimelineEvent(when=record.begin, kind=EventKind.CALL_START,
                            app=App.SKYPE, summary=title,
                            provenance=record.provenance,
                            actor=record.host_identity, counterpart=counterpart)]
    # The stored row carries begin and duration; the end instant is derived.
    if record.duration_s is not None:
        events.append(TimelineEvent(
            when=_shift(record.begin, record.duration_s),
            kind=EventKind.CALL_END,
            app=App.SKYPE,
            summary="%s ended after %ds" % (title, record.duration_s),
            provenance=record.provenance,
            actor=record.host_identity,
            counterpart=counterpart,
        ))
    return events


def _from_skype_videomessage(record: skype.SkypeVideoMessage,
                             warnings: list[str]) -> list[TimelineEvent]:
    when = record.reaction_time or record.creation_time
    if when is None:
        warnings.append("video message %s: no usable instant, skipped" % record.sid)
        return []
    return [TimelineEvent(when=when, kind=EventKind.VIDEO_MESSAGE, app=App.SKYPE,
                          summary="video message %s" % record.sid,
                          provenance=record.provenance,
                          actor=record.author, counterpart=record.author)]


def _app_for_name(text: str) -> App:
    lowered = text.casefold()
    if "facebook" in lowered:
        return App.FACEBOOK
    if "skype" in lowered:
        return App.SKYPE
    return App.OTHER


def _from_install(record: regexport.InstallRecord) -> list[TimelineEvent]:
    return [TimelineEvent(when=record.install_time, kind=EventKind.APP_INSTALL,
                          app=_app_for_name(record.package.name),
                          summary="package %s installed" % record.package.text,
                          provenance=record.provenance)]


def _from_persisted(record: regexport.PersistedItem,
                    warnings: list[str]) -> list[TimelineEvent]:
    if record.last_updated is None:
        warnings.append("persisted item %s: no usable instant, skipped" % record.guid)
        return []
    name = record.file_path.replace("\\", "/").rstrip("/").rsplit("/", 1)[-1]
    return [TimelineEvent(when=record.last_updated, kind=EventKind.FILE_TRANSFER,
                          app=_app_for_name(record.key_path),
                          summary="persisted file %s" % name,
                          provenance=record.provenance)]


def _from_flow(record: pcap.Flow, capture_path: str, catalog) -> list[TimelineEvent]:
    label = pcap.label_flow(record, catalog)
    (ip_a, port_a), (ip_b, port_b) = record.endpoint_a, record.endpoint_b
    summary = "%s %s:%d <-> %s:%d %s (%d packets, %d bytes)" % (
        record.proto, ip_a, port_a, ip_b, port_b, label.label,
        record.total_packets, record.total_bytes)
    return [TimelineEvent(
        when=record.first_seen,
        kind=EventKind.NETWORK_SESSION,
        app=App(pcap.LABEL_APPS.get(label.label, "other")),
        summary=summary,
        provenance=Provenance(capture_path, "pcap.flows", Channel.NETWORK),
    )]


def normalize(records, *, fb_owner_uid: str | None = None,
              skype_owner: str | None = None,
              capture_path: str = "<capture>",
              catalog=None,
              warnings: list[str] | None = None) -> list[TimelineEvent]:
    """Map extracted records onto timeline events.

    Every event-bearing record yields exactly one event, except calls with
    a duration, which expand to a start/end pair.  Records that cannot be
    dated and records that describe state rather than a happening are
    skipped with a warning, never silently.
    """
    if warnings is None:
        warnings = []
    events: list[TimelineEvent] = []
    for record in records:
        if isinstance(record, TimelineEvent):
            events.append(record)
        elif isinstance(record, facebook.FbAnalyticsEvent):
            events.extend(_from_fb_analytics(record))
        elif isinstance(record, facebook.FbMessage):
            events.extend(_from_fb_message(record, fb_owner_uid, warnings))
        elif isinstance(record, facebook.FbNotification):
            events.extend(_from_fb_notification(record, warnings))
        elif isinstance(record, facebook.ChatFragment):
            events.extend(_from_chat_fragment(record, warnings))
        elif isinstance(record, skype.SkypeMessage):
            events.extend(_from_skype_message(record, skype_owner, warnings))
        elif isinstance(record, skype.SkypeTransfer):
            events.extend(_from_skype_transfer(record, skype_owner, warnings))
        elif isinstance(record, skype.SkypeCall):
            events.extend(_from_skype_call(record))
        elif isinstance(record, skype.SkypeVideoMessage):
            events.extend(_from_skype_videomessage(record, warnings))
        elif isinstance(record, regexport.InstallRecord):
            events.extend(_from_install(record))
        elif isinstance(record, regexport.PersistedItem):
            events.extend(_from_persisted(record, warnings))
        elif isinstance(record, pcap.Flow):
            events.extend(_from_flow(record, capture_path, catalog))
        elif isinstance(record, _STATE_RECORD_TYPES):
            warnings.append("%s describes state, not a happening, skipped" % type(record).__name__)
        else:
            raise TypeError("cannot place %r on a timeline" % type(record).__name__)
    return events


# ---------------------------------------------------------------------------
# Merging and reporting


def _total_key(event: TimelineEvent) -> tuple:
    # sort_key is the contractual ordering; the rest makes the order total
    # so merge output never depends on input order.
    p = event.provenance
    return event.sort_key() + (
        event.actor or "",
        event.counterpart or "",
        event.when.encoding,
        str(event.when.raw),
        p.extractor,
        p.channel.value,
        -1 if p.byte_offset is None else p.byte_offset,
    )


def merge_sort(events) -> list[TimelineEvent]:
    """Sort ascending and collapse exact duplicates onto a counter."""
    merged: dict[TimelineEvent, int] = {}
    for event in events:
        merged[event] = merged.get(event, 0) + event.duplicates
    out = [event if event.duplicates == count else replace(event, duplicates=count)
           for event, count in merged.items()]
    out.sort(key=_total_key)
    return out


@dataclass
class Report:
    events: list[TimelineEvent]
    counts: dict[str, dict[str, int]]
    warnings: list[str]
    tool_version: str
    generated_at: str


def build_report(events, warnings=(), generated_at: str | None = None) -> Report:
    """Merge events into a report; counts tally emitted events per app."""
    merged = merge_sort(events)
    counts: dict[str, dict[str, int]] = {}
    for event in merged:
        per_app = counts.setdefault(event.app.value, {})
        per_app[event.kind.value] = per_app.get(event.kind.value, 0) + 1
    if generated_at is None:
        now = datetime.now(timezone.utc).replace(microsecond=0)
        generated_at = now.strftime("%Y-%m-%dT%H:%M:%SZ")
    return Report(events=merged, counts=counts, warnings=list(warnings),
                  tool_version=__version__, generated_at=generated_at)


# Contractual column set, plus extractor and duplicates so a parsed report
# reconstructs the exact event list.
EMIT_FIELDS = (
    "when_utc", "when_raw", "encoding", "kind", "app", "actor", "counterpart",
    "summary", "evidence_path", "byte_offset", "channel",
    "extractor", "duplicates",
)


def _event_fields(event: TimelineEvent) -> dict:
    return {
        "when_utc": event.when.isoformat_ms(),
        "when_raw": event.when.raw,
        "encoding": event.when.encoding,
        "kind": event.kind.value,
        "app": event.app.value,
        "actor": event.actor,
        "counterpart": event.counterpart,
        "summary": event.summary,
        "evidence_path": event.provenance.evidence_path,
        "byte_offset": event.provenance.byte_offset,
        "channel": event.provenance.channel.value,
        "extractor": event.provenance.extractor,
        "duplicates": event.duplicates,
    }


def emit(report: Report, format: str = "jsonl") -> bytes:
    """Render the report as JSONL or RFC-4180 CSV bytes."""
    if format == "jsonl":
        out = io.StringIO()
        for event in report.events:
            out.write(json.dumps(_event_fields(event), ensure_ascii=False))
            out.write("\n")
        return out.getvalue().encode("utf-8")
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(EMIT_FIELDS)
        for event in report.events:
            fields = _event_fields(event)
            writer.writerow(["" if fields[name] is None else fields[name]
                             for name in EMIT_FIELDS])
        return out.getvalue().encode("utf-8")
    raise ValueError("unknown report format: %r" % (format,))


def parse_jsonl(data: bytes | str) -> list[TimelineEvent]:
    """Rebuild the event list emit() serialized; emit∘parse is identity."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    events: list[TimelineEvent] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        fields = json.loads(line)
        instant = ts_from_iso_text(fields["when_utc"]).utc_instant
        when = Timestamp(instant, fields["encoding"], fields["when_raw"])
        events.append(TimelineEvent(
            when=when,
            kind=EventKind(fields["kind"]),
            app=App(fields["app"]),
            summary=fields["summary"],
            provenance=Provenance(
                evidence_path=fields["evidence_path"],
                extractor=fields["extractor"],
                channel=Channel(fields["channel"]),
                byte_offset=fields["byte_offset"],
            ),
            actor=fields["actor"],
            counterpart=fields["counterpart"],
            duplicates=fields.get("duplicates", 1),
        ))
    return events
