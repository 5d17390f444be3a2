"""Extract records from the Facebook app's cache databases and memory remnants.

The app keeps per-login SQLite caches (analytics log, friends, messages,
notifications) under its package LocalState.  Message rows embed JSON in
several columns; malformed JSON never aborts extraction, the raw text is
kept and a warning recorded.  Process memory additionally holds chat push
notifications as JSON fragments which can be recovered by marker scanning.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import date, datetime

from . import carver
from .model import Channel, ExtractionError, Provenance, Timestamp, ts_from_iso_text, ts_from_unix
from .sqliteio import MissingTable, open_immutable, row_value, table_names

__all__ = [
    "ChatFragment",
    "FbAnalyticsEvent",
    "FbAttachment",
    "FbFriend",
    "FbMessage",
    "FbNotification",
    "FbUser",
    "KNOWN_ANALYTICS_NAMES",
    "MalformedJson",
    "extract_analytics",
    "extract_chat_json",
    "extract_friends",
    "extract_messages",
    "extract_notifications",
    "extract_users",
    "infer_owner_uid",
    "message_direction",
    "parse_fb_attachments",
]


class MalformedJson(ExtractionError):
    """Embedded JSON did not parse."""


CHAT_MARKER = b"orca_message"
CHAT_WINDOW = 64 * 1024

EXTRACTOR_PREFIX = "facebook"


def _provenance(path: str, what: str) -> Provenance:
    return Provenance(str(path), "%s.%s" % (EXTRACTOR_PREFIX, what), Channel.DATABASE)


def _warn(warnings: list[str] | None, message: str) -> None:
    if warnings is not None:
        warnings.append(message)


# Event names the analytics log is known to use; anything else is kept
# verbatim and treated as generic app activity downstream.
KNOWN_ANALYTICS_NAMES = (
    "login",
    "chat_turned_on",
    "message_sent_attempt",
    "message_send_state",
    "file_downloaded",
)


@dataclass(frozen=True)
class FbAnalyticsEvent:
    """One analytics log row: an app usage event."""

    row_id: int
    when: Timestamp  # epoch milliseconds
    log_type: str | None
    name: str | None
    module: str | None
    extra: str | None
    provenance: Provenance


@dataclass(frozen=True)
class FbFriend:
    uid: str
    name: str | None
    first_name: str | None
    middle_name: str | None
    last_name: str | None
    contact_email: str | None
    phones: str | None  # raw JSON text as stored
    profile_url: str | None
    communication_rank: float | None
    birthday: date | None
    provenance: Provenance


@dataclass(frozen=True)
class FbAttachment:
    """One attachment descriptor from a message row."""

    name: str | None
    size: int | None
    id: str | None
    mime: str | None
    type_code: int | None
    url: str | None
    preview_url: str | None
    width: int | None = None
    height: int | None = None


@dataclass(frozen=True)
class FbMessage:
    row_id: int
    mid: str | None
    thread_id: str | None
    body: str | None
    when: Timestamp  # epoch milliseconds
    sender_uid: str | None
    sender_name: str | None
    sender_email: str | None
    sender_raw: str | None
    tags: tuple[str, ...]
    attachments: tuple[FbAttachment, ...]
    attachments_raw: str | None
    provenance: Provenance


@dataclass(frozen=True)
class FbUser:
    id: str
    name: str | None
    email: str | None
    last_active: Timestamp | None  # epoch seconds
    provenance: Provenance


@dataclass(frozen=True)
class FbNotification:
    notification_id: str | None
    sender_id: str | None
    title_text: str | None
    href: str | None
    unread_flag: int
    created: Timestamp | None
    updated: Timestamp | None
    provenance: Provenance

    def flag_readings(self) -> dict[str, str]:
        """Both defensible readings of the flag, for the examiner to weigh.

        The column name suggests 1 means unread, but app behavior has been
        observed matching the opposite; report both, never guess.
        """
        return {
            "column_name_reading": "unread" if self.unread_flag else "read",
            "observed_behavior_reading": "read" if self.unread_flag else "unread",
        }


def _require_table(connection, wanted: str, path: str):
    names = table_names(connection)
    actual = names.get(wanted.casefold())
    if actual is None:
        raise MissingTable("table %s absent from %s" % (wanted, path))
    return actual


def _rows(connection, table: str):
    return connection.execute('SELECT rowid AS rowid_, * FROM "%s" ORDER BY rowid_' % table)


def _as_text(value):
    if value is None:
        return None
    if isinstance(value, bytes):
        return value.decode("utf-8", errors="replace")
    return str(value)


def _as_int(value):
    try:
        return int(value)
    except (TypeError, ValueError):
        return None


def extract_analytics(path, warnings: list[str] | None = None) -> list[FbAnalyticsEvent]:
    """Read the analytics log: one event per row in row order."""
    with open_immutable(path, warnings) as connection:
        table = _require_table(connection, "analytics_logs", str(path))
        events = []
        for row in _rows(connection, table):
            raw_time = row_value(row, "time", "timestamp")
            millis = _as_int(raw_time)
            if millis is None:
                _warn(warnings, "analytics row %s has no usable time" % row["rowid_"])
                continue
            events.append(
                FbAnalyticsEvent(
                    row_id=row["rowid_"],
                    when=ts_from_unix(millis, "millis"),
                    log_type=_as_text(row_value(row, "log_type", "type")),
                    name=_as_text(row_value(row, "name", "event_name")),
                    module=_as_text(row_value(row, "module")),
                    extra=_as_text(row_value(row, "extra", "extra_json")),
                    provenance=_provenance(path, "analytics"),
                )
            )
    return events


def _parse_birthday(value, warnings, context):
    if value in (None, ""):
        return None
    text = _as_text(value)
    try:
        return datetime.strptime(text[:10], "%Y-%m-%d").date()
    except ValueError:
        _warn(warnings, "unparsed birthday %r in %s" % (text, context))
        return None


def extract_friends(path, warnings: list[str] | None = None) -> list[FbFriend]:
    """Read the friends cache: profile fields for every friend row."""
    with open_immutable(path, warnings) as connection:
        table = _require_table(connection, "friends", str(path))
        friends = []
        for row in _rows(connection, table):
            uid = _as_text(row_value(row, "uid", "user_id", "id"))
            if uid is None:
                _warn(warnings, "friend row %s lacks a uid" % row["rowid_"])
                continue
            first = _as_text(row_value(row, "first_name"))
            middle = _as_text(row_value(row, "middle_name"))
            last = _as_text(row_value(row, "last_name"))
            name = _as_text(row_value(row, "name"))
            if name is None:
                name = (" ".join(part for part in (first, middle, last) if part)) or None
            rank = row_value(row, "communication_rank", "rank")
            friends.append(
                FbFriend(
                    uid=uid,
                    name=name,
                    first_name=first,
                    middle_name=middle,
                    last_name=last,
                    contact_email=_as_text(row_value(row, "contact_email", "email")),
                    phones=_as_text(row_value(row, "phones")),
                    profile_url=_as_text(row_value(row, "profile_url", "url")),
                    communication_rank=float(rank) if rank is not None else None,
                    birthday=_parse_birthday(
                        row_value(row, "birthday", "birthday_date"), warnings, "friends row %s" % row["rowid_"]
                    ),
                    provenance=_provenance(path, "friends"),
                )
            )
    return friends


def parse_fb_attachments(text: str) -> list[FbAttachment]:
    """Parse the attachments column JSON into attachment descriptors.

    The stored value is a JSON array, sometimes wrapped in one extra list
    level.  Raises MalformedJson when the text is not JSON at all.
    """
    try:
        loaded = json.loads(text)
    except (TypeError, ValueError) as exc:
        raise MalformedJson("attachments column did not parse: %s" % exc) from exc
    if not isinstance(loaded, list):
        raise MalformedJson("attachments JSON is not a list")
    items: list = []
    for element in loaded:
        if isinstance(element, list):
            items.extend(element)
        else:
            items.append(element)
    attachments = []
    for item in items:
        if not isinstance(item, dict):
            continue
        attachments.append(
            FbAttachment(
                name=_as_text(item.get("name")),
                size=_as_int(item.get("size")),
                id=_as_text(item.get("id") or item.get("attach_id")),
                mime=_as_text(item.get("mime") or item.get("mime_type")),
                type_code=_as_int(item.get("type")),
                url=_as_text(item.get("url")),
                preview_url=_as_text(item.get("preview_url") or item.get("preview")),
                width=_as_int(item.get("width")),
                height=_as_int(item.get("height")),
            )
        )
    return attachments


def _parse_tags(raw, warnings, context) -> tuple[str, ...]:
    if raw in (None, ""):
        return ()
    text = _as_text(raw)
    try:
        loaded = json.loads(text)
        if isinstance(loaded, list):
            return tuple(str(tag) for tag in loaded)
    except ValueError:
        pass
    # Cache exports sometimes use a set-like spelling; salvage the quoted
    # strings rather than dropping the row.
    scraped = re.findall(r'"([^"]*)"', text)
    if scraped:
        _warn(warnings, "tags salvaged from non-JSON text in %s" % context)
        return tuple(scraped)
    _warn(warnings, "tags unparsed in %s" % context)
    return ()


def _parse_sender(raw, warnings, context):
    if raw in (None, ""):
        return None, None, None
    text = _as_text(raw)
    try:
        loaded = json.loads(text)
    except ValueError:
        _warn(warnings, "sender JSON unparsed in %s" % context)
        return None, None, None
    if not isinstance(loaded, dict):
        _warn(warnings, "sender JSON has unexpected shape in %s" % context)
        return None, None, None
    uid = loaded.get("user_id") or loaded.get("uid") or loaded.get("id")
    return (
        _as_text(uid),
        _as_text(loaded.get("name")),
        _as_text(loaded.get("email")),
    )


def extract_messages(path, warnings: list[str] | None = None) -> list[FbMessage]:
    """Read cached chat messages in row order."""
    with open_immutable(path, warnings) as connection:
        table = _require_table(connection, "messages", str(path))
        messages = []
        for row in _rows(connection, table):
            context = "messages row %s" % row["rowid_"]
            millis = _as_int(row_value(row, "timestamp", "timestamp_ms", "time"))
            if millis is None:
                _warn(warnings, "%s has no usable timestamp" % context)
                continue
            sender_raw = _as_text(row_value(row, "sender"))
            sender_uid, sender_name, sender_email = _parse_sender(sender_raw, warnings, context)
            attachments_raw = _as_text(row_value(row, "attachments"))
            attachments: tuple[FbAttachment, ...] = ()
            if attachments_raw not in (None, "", "[]"):
                try:
                    attachments = tuple(parse_fb_attachments(attachments_raw))
                except MalformedJson:
                    _warn(warnings, "attachments unparsed in %s" % context)
            messages.append(
                FbMessage(
                    row_id=row["rowid_"],
                    mid=_as_text(row_value(row, "mid", "message_id")),
                    thread_id=_as_text(row_value(row, "tid", "thread_id")),
                    body=_as_text(row_value(row, "body", "text")),
                    when=ts_from_unix(millis, "millis"),
                    sender_uid=sender_uid,
                    sender_name=sender_name,
                    sender_email=sender_email,
                    sender_raw=sender_raw,
                    tags=_parse_tags(row_value(row, "tags"), warnings, context),
                    attachments=attachments,
                    attachments_raw=attachments_raw,
                    provenance=_provenance(path, "messages"),
                )
            )
    return messages


def extract_users(path, warnings: list[str] | None = None) -> list[FbUser]:
    """Read the users table kept alongside cached messages."""
    with open_immutable(path, warnings) as connection:
        table = _require_table(connection, "users", str(path))
        users = []
        for row in _rows(connection, table):
            uid = _as_text(row_value(row, "uid", "user_id", "id"))
            if uid is None:
                _warn(warnings, "users row %s lacks a uid" % row["rowid_"])
                continue
            seconds = _as_int(row_value(row, "last_active", "last_active_time", "last_active_timestamp"))
            users.append(
                FbUser(
                    id=uid,
                    name=_as_text(row_value(row, "name")),
                    email=_as_text(row_value(row, "email")),
                    last_active=ts_from_unix(seconds, "seconds") if seconds is not None else None,
                    provenance=_provenance(path, "users"),
                )
            )
    return users


def _parse_iso_column(value, warnings, context):
    if value in (None, ""):
        return None
    try:
        return ts_from_iso_text(_as_text(value))
    except Exception:
        _warn(warnings, "unparsed time %r in %s" % (value, context))
        return None


def extract_notifications(path, warnings: list[str] | None = None) -> list[FbNotification]:
    """Read cached notifications; times are stored as date-time text."""
    with open_immutable(path, warnings) as connection:
        table = _require_table(connection, "notifications", str(path))
        notifications = []
        for row in _rows(connection, table):
            context = "notifications row %s" % row["rowid_"]
            flag = _as_int(row_value(row, "unread", "unread_flag"))
            notifications.append(
                FbNotification(
                    notification_id=_as_text(row_value(row, "notification_id", "id")),
                    sender_id=_as_text(row_value(row, "sender_id", "sender")),
                    title_text=_as_text(row_value(row, "title_text", "title")),
                    href=_as_text(row_value(row, "href", "url")),
                    unread_flag=flag if flag is not None else 0,
                    created=_parse_iso_column(row_value(row, "created", "created_time"), warnings, context),
                    updated=_parse_iso_column(row_value(row, "updated", "updated_time"), warnings, context),
                    provenance=_provenance(path, "notifications"),
                )
            )
    return notifications


def message_direction(message: FbMessage, owner_uid: str | None = None) -> str:
    """Classify a cached message as "sent" or "received" from the owner's view.

    The "sent" tag is authoritative; without it the sender uid is compared
    to the owner when known, and anything else reads as received.
    """
    if "sent" in message.tags:
        return "sent"
    if owner_uid is not None and message.sender_uid == owner_uid:
        return "sent"
    return "received"


def infer_owner_uid(messages: list[FbMessage]) -> str | None:
    """Guess the cache owner: the uid that authored "sent"-tagged messages."""
    counts: dict[str, int] = {}
    for message in messages:
        if "sent" in message.tags and message.sender_uid:
            counts[message.sender_uid] = counts.get(message.sender_uid, 0) + 1
    if not counts:
        return None
    return max(counts.items(), key=lambda pair: (pair[1], pair[0]))[0]


@dataclass(frozen=True)
class ChatFragment:
    """A chat push notification recovered from raw memory."""

    offset: int  # stream offset of the JSON region start
    parsed: bool
    raw: bytes
    provenance: Provenance
    message: str | None = None
    time_raw: int | None = None
    time: Timestamp | None = None
    target_uid: str | None = None
    sender_uid: str | None = None
    recipient_uid: str | None = None
    thread_id: str | None = None
    extra: dict = field(default_factory=dict, compare=False)


def _balanced_end(data: bytes, start: int) -> int | None:
    """Index just past the brace closing data[start], honoring JSON strings."""
    depth = 0
    in_string = False
    i = start
    n = len(data)
    while i < n:
        b = data[i]
        if in_string:
            if b == 0x5C:  # backslash escape
                i += 2
                continue
            if b == 0x22:
                in_string = False
        elif b == 0x22:
            in_string = True
        elif b == 0x7B:
            depth += 1
        elif b == 0x7D:
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return None


def _fragment_fields(obj: dict) -> dict:
    params = obj.get("params") if isinstance(obj.get("params"), dict) else {}
    time_raw = obj.get("time")
    time_raw = time_raw if isinstance(time_raw, int) else None
    return dict(
        message=_as_text(obj.get("message")),
        time_raw=time_raw,
        time=ts_from_unix(time_raw, "auto") if time_raw is not None and time_raw >= 0 else None,
        target_uid=_as_text(obj.get("target_uid")),
        sender_uid=_as_text(params.get("a")),
        recipient_uid=_as_text(params.get("u")),
        thread_id=_as_text(params.get("tid")),
    )


def _fragment_from_region(region: bytes, marker_rel: int, abs_base: int, marker: bytes, evidence_path: str):
    marker_end = marker_rel + len(marker)

    def provenance_at(off):
        return Provenance(evidence_path, "%s.chat_json" % EXTRACTOR_PREFIX, Channel.CARVED, byte_offset=off)

    position = marker_rel
    outermost = None
    while True:
        candidate = region.rfind(b"{", 0, position)
        if candidate == -1:
            break
        outermost = candidate
        end = _balanced_end(region, candidate)
        if end is not None and end >= marker_end:
            blob = bytes(region[candidate:end])
            offset = abs_base + candidate
            try:
                obj = json.loads(blob.decode("utf-8", errors="replace"))
            except ValueError:
                return ChatFragment(offset=offset, parsed=False, raw=blob, provenance=provenance_at(offset))
            if not isinstance(obj, dict):
                return ChatFragment(offset=offset, parsed=False, raw=blob, provenance=provenance_at(offset))
            return ChatFragment(
                offset=offset,
                parsed=True,
                raw=blob,
                provenance=provenance_at(offset),
                extra={k: v for k, v in obj.items() if k not in ("message", "time", "target_uid", "params")},
                **_fragment_fields(obj),
            )
        position = candidate
    start = outermost if outermost is not None else marker_rel
    offset = abs_base + start
    return ChatFragment(
        offset=offset, parsed=False, raw=bytes(region[start:]), provenance=provenance_at(offset)
    )


def extract_chat_json(
    stream,
    evidence_path: str = "<stream>",
    marker: bytes = CHAT_MARKER,
    window: int = CHAT_WINDOW,
    chunk_size: int = carver.DEFAULT_CHUNK_SIZE,
) -> list[ChatFragment]:
    """Recover chat push JSON fragments around each marker occurrence.

    For every marker hit the smallest brace-balanced region containing it
    (within a bounded window) is parsed; fragments that do not parse are
    still reported with their raw bytes so nothing silently disappears.
    """
    fragments: list[ChatFragment] = []

    def emit(buf, base, rel, index, eof):
        lo = max(rel - window, 0)
        hi = min(rel + window, len(buf))
        fragments.append(
            _fragment_from_region(buf[lo:hi], rel - lo, base + lo, marker, evidence_path)
        )

    carver.scan_stream(stream, [marker], window, window, emit, chunk_size)
    return fragments
