"""Facebook cache extraction against known-good sample rows."""

import hashlib
import io
import json
import random
import sqlite3
from datetime import date

import pytest

from imartifacts import facebook, sampledata as sd
from imartifacts.facebook import (
    ChatFragment,
    MalformedJson,
    extract_analytics,
    extract_chat_json,
    extract_friends,
    extract_messages,
    extract_notifications,
    extract_users,
    infer_owner_uid,
    message_direction,
    parse_fb_attachments,
)
from imartifacts.model import Channel
from imartifacts.sqliteio import MissingTable, NotSqlite


def _make_db(path, schema, table, rows):
    connection = sqlite3.connect(path)
    try:
        connection.execute(schema)
        if rows:
            columns = list(rows[0])
            placeholders = ", ".join("?" for _ in columns)
            connection.executemany(
                'INSERT INTO "%s" (%s) VALUES (%s)' % (table, ", ".join(columns), placeholders),
                [tuple(row[c] for c in columns) for row in rows],
            )
        connection.commit()
    finally:
        connection.close()
    return path


@pytest.fixture
def analytics_db(tmp_path):
    rows = (sd.ANALYTICS_LOGIN_ROW,) + sd.ANALYTICS_EXTRA_ROWS
    return _make_db(
        tmp_path / "Analytics.sqlite",
        "CREATE TABLE analytics_logs (id INTEGER PRIMARY KEY, time INTEGER, log_type TEXT, name TEXT, module TEXT, extra TEXT)",
        "analytics_logs",
        rows,
    )


@pytest.fixture
def friends_db(tmp_path):
    row = {
        "uid": sd.FRIEND_ROW["uid"],
        "first_name": sd.FRIEND_ROW["first_name"],
        "middle_name": None,
        "last_name": sd.FRIEND_ROW["last_name"],
        "name": sd.FRIEND_ROW["name"],
        "contact_email": sd.FRIEND_ROW["email"],
        "phones": "[]",
        "profile_url": sd.FRIEND_ROW["profile_url"],
        "communication_rank": sd.FRIEND_ROW["communication_rank"],
        "birthday": sd.FRIEND_ROW["birthday"],
    }
    bare = {
        "uid": sd.CORRESPONDENT_UID,
        "first_name": "Jack",
        "middle_name": None,
        "last_name": "Jeffrey",
        "name": None,
        "contact_email": None,
        "phones": None,
        "profile_url": None,
        "communication_rank": None,
        "birthday": None,
    }
    return _make_db(
        tmp_path / "Friends.sqlite",
        "CREATE TABLE friends (uid TEXT, first_name TEXT, middle_name TEXT, last_name TEXT,"
        " name TEXT, contact_email TEXT, phones TEXT, profile_url TEXT,"
        " communication_rank REAL, birthday TEXT)",
        "friends",
        (row, bare),
    )


def _messages_db(tmp_path, message_rows=None, users_rows=None):
    path = tmp_path / "Messages.sqlite"
    connection = sqlite3.connect(path)
    try:
        connection.execute(
            "CREATE TABLE messages (rowid_seed INTEGER, mid TEXT, tid TEXT, body TEXT,"
            " sender TEXT, timestamp INTEGER, tags TEXT, attachments TEXT)"
        )
        connection.execute("CREATE TABLE users (id TEXT, name TEXT, email TEXT, last_active INTEGER)")
        for row in message_rows if message_rows is not None else sd.MESSAGE_ROWS:
            connection.execute(
                "INSERT INTO messages (rowid, mid, tid, body, sender, timestamp, tags, attachments)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (
                    row["rowid"], row["mid"], row["tid"], row["body"],
                    row["sender"], row["timestamp"], row["tags"], row["attachments"],
                ),
            )
        for row in users_rows if users_rows is not None else sd.USERS_ROWS:
            connection.execute(
                "INSERT INTO users (id, name, email, last_active) VALUES (?, ?, ?, ?)",
                (row["id"], row["name"], row["email"], row["last_active"]),
            )
        connection.commit()
    finally:
        connection.close()
    return path


@pytest.fixture
def messages_db(tmp_path):
    return _messages_db(tmp_path)


@pytest.fixture
def notifications_db(tmp_path):
    return _make_db(
        tmp_path / "Notifications.sqlite",
        "CREATE TABLE notifications (notification_id TEXT, sender_id TEXT, title_text TEXT,"
        " href TEXT, unread INTEGER, created TEXT, updated TEXT)",
        "notifications",
        sd.NOTIFICATION_ROWS,
    )


class TestAnalytics:
    def test_login_row(self, analytics_db):
        events = extract_analytics(analytics_db)
        first = events[0]
        assert first.row_id == 1
        assert first.when.isoformat_ms() == "2015-01-22T03:45:14.666Z"
        assert first.log_type == "client_event"
        assert first.name == "login"
        assert first.module == "login_events"
        assert first.extra == "{}"
        assert first.provenance.channel is Channel.DATABASE

    def test_all_known_names_present(self, analytics_db):
        names = [event.name for event in extract_analytics(analytics_db)]
        assert names == list(facebook.KNOWN_ANALYTICS_NAMES)

    def test_row_without_time_skipped_with_warning(self, tmp_path):
        rows = (
            dict(sd.ANALYTICS_LOGIN_ROW),
            {"id": 2, "time": None, "log_type": "client_event", "name": "x", "module": "m", "extra": None},
        )
        path = _make_db(
            tmp_path / "a.sqlite",
            "CREATE TABLE analytics_logs (id INTEGER PRIMARY KEY, time INTEGER, log_type TEXT, name TEXT, module TEXT, extra TEXT)",
            "analytics_logs",
            rows,
        )
        warnings = []
        events = extract_analytics(path, warnings)
        assert len(events) == 1
        assert any("no usable time" in w for w in warnings)

    def test_missing_table(self, tmp_path):
        path = _make_db(tmp_path / "b.sqlite", "CREATE TABLE other (x)", "other", ())
        with pytest.raises(MissingTable):
            extract_analytics(path)


class TestFriends:
    def test_profile_row(self, friends_db):
        friends = extract_friends(friends_db)
        row = friends[0]
        assert row.uid == "100004911219827"
        assert row.name == "Kelvin Sky"
        assert row.first_name == "Kelvin"
        assert row.last_name == "Sky"
        assert row.contact_email == "fbccester@gmail.com"
        assert row.profile_url == "https://www.facebook.com/kelvin.sky.52"
        assert row.communication_rank == pytest.approx(0.000848054885864)
        assert row.birthday == date(1990, 1, 1)

    def test_name_assembled_when_absent(self, friends_db):
        friends = extract_friends(friends_db)
        assert friends[1].name == "Jack Jeffrey"
        assert friends[1].birthday is None

    def test_bad_birthday_warns(self, tmp_path):
        path = _make_db(
            tmp_path / "f.sqlite",
            "CREATE TABLE friends (uid TEXT, name TEXT, birthday TEXT)",
            "friends",
            ({"uid": "1", "name": "N", "birthday": "not-a-date"},),
        )
        warnings = []
        friends = extract_friends(path, warnings)
        assert friends[0].birthday is None
        assert any("birthday" in w for w in warnings)


class TestAttachments:
    def test_double_bracketed_array(self):
        attachments = parse_fb_attachments(sd.ATTACHMENTS_JSON)
        assert len(attachments) == 2
        image, pdf = attachments
        assert image.name == sd.ATTACHMENT_IMAGE["name"]
        assert (image.type_code, image.width, image.height) == (4, 742, 960)
        assert image.size == 0
        assert (pdf.name, pdf.size, pdf.id, pdf.mime, pdf.type_code) == (
            "VictimToSuspect.pdf", 31747, "391924720981232", "application/pdf", 7,
        )
        assert pdf.url.startswith("https://cdn.fbsbx.com/")

    def test_empty_array(self):
        assert parse_fb_attachments("[]") == []

    def test_flat_array_also_accepted(self):
        flat = json.dumps([{"name": "a.txt", "size": 3, "type": 7}])
        (one,) = parse_fb_attachments(flat)
        assert (one.name, one.size, one.type_code) == ("a.txt", 3, 7)

    @pytest.mark.parametrize("text", ["not json", '{"name": "x"}', "42"])
    def test_malformed_raises(self, text):
        with pytest.raises(MalformedJson):
            parse_fb_attachments(text)


class TestMessages:
    def test_rows_in_row_order(self, messages_db):
        messages = extract_messages(messages_db)
        assert [m.row_id for m in messages] == [15, 16, 18, 19, 20]

    def test_third_row_values(self, messages_db):
        third = extract_messages(messages_db)[2]
        assert third.row_id == 18
        assert third.body == "Hello Victim"
        assert third.sender_name == "Jack Jeffrey"
        assert third.sender_uid == "100004935817781"
        assert third.when.isoformat_ms() == "2015-01-19T05:19:04.425Z"
        assert third.thread_id == sd.MESSAGE_THREAD_ID
        assert third.attachments == ()

    def test_attachment_row(self, messages_db):
        with_files = extract_messages(messages_db)[3]
        assert with_files.body == "Here are some files for you SUSPECT"
        assert len(with_files.attachments) == 2
        assert with_files.attachments[1].name == "VictimToSuspect.pdf"
        assert with_files.attachments_raw == sd.ATTACHMENTS_JSON

    def test_direction_from_sent_tag(self, messages_db):
        messages = extract_messages(messages_db)
        directions = [message_direction(m) for m in messages]
        assert directions == ["sent", "received", "received", "sent", "received"]

    def test_direction_owner_fallback(self, messages_db):
        messages = extract_messages(messages_db)
        stripped = [
            facebook.FbMessage(
                **{**m.__dict__, "tags": tuple(t for t in m.tags if t != "sent")}
            )
            for m in messages
        ]
        assert message_direction(stripped[0], sd.OWNER_UID) == "sent"
        assert message_direction(stripped[0]) == "received"
        assert message_direction(stripped[1], sd.OWNER_UID) == "received"

    def test_infer_owner(self, messages_db):
        assert infer_owner_uid(extract_messages(messages_db)) == sd.OWNER_UID
        assert infer_owner_uid([]) is None

    def test_malformed_columns_kept_with_warnings(self, tmp_path):
        rows = [dict(sd.MESSAGE_ROWS[0])]
        rows[0]["sender"] = "{broken"
        rows[0]["tags"] = '{"inbox", "sent"}'
        rows[0]["attachments"] = "[[broken"
        path = _messages_db(tmp_path, message_rows=rows, users_rows=())
        warnings = []
        (message,) = extract_messages(path, warnings)
        assert message.sender_uid is None
        assert message.sender_raw == "{broken"
        assert message.tags == ("inbox", "sent")
        assert message.attachments == ()
        assert message.attachments_raw == "[[broken"
        assert any("sender" in w for w in warnings)
        assert any("salvaged" in w for w in warnings)
        assert any("attachments" in w for w in warnings)

    def test_database_bytes_untouched(self, messages_db):
        before = hashlib.sha256(messages_db.read_bytes()).hexdigest()
        extract_messages(messages_db)
        extract_users(messages_db)
        after = hashlib.sha256(messages_db.read_bytes()).hexdigest()
        assert before == after

    def test_not_sqlite(self, tmp_path):
        path = tmp_path / "plain.txt"
        path.write_bytes(b"just text, no database here")
        with pytest.raises(NotSqlite):
            extract_messages(path)


class TestUsers:
    def test_rows(self, messages_db):
        users = extract_users(messages_db)
        assert [(u.id, u.name) for u in users] == [
            ("100004911219827", "Kelvin Sky"),
            ("100004935817781", "Jack Jeffry"),
        ]
        assert users[0].last_active.isoformat_ms() == "2015-02-12T18:34:14.000Z"
        assert users[1].last_active.isoformat_ms() == "2015-02-12T18:34:03.000Z"

    def test_null_last_active(self, tmp_path):
        path = _messages_db(tmp_path, message_rows=(), users_rows=(
            {"id": "7", "name": "N", "email": "", "last_active": None},
        ))
        (user,) = extract_users(path)
        assert user.last_active is None


class TestNotifications:
    def test_rows_and_flag_readings(self, notifications_db):
        notes = extract_notifications(notifications_db)
        assert len(notes) == 2
        first, second = notes
        assert first.sender_id == "100004935817781"
        assert first.unread_flag == 1
        assert first.flag_readings() == {
            "column_name_reading": "unread",
            "observed_behavior_reading": "read",
        }
        assert second.unread_flag == 0
        assert second.flag_readings() == {
            "column_name_reading": "read",
            "observed_behavior_reading": "unread",
        }
        assert first.created.isoformat_ms() == "2015-02-12T17:50:03.000Z"
        assert second.updated.isoformat_ms() == "2015-02-12T17:53:01.000Z"
        assert first.href.endswith("id=100004935817781")

    def test_unparsed_time_warns(self, tmp_path):
        path = _make_db(
            tmp_path / "n.sqlite",
            "CREATE TABLE notifications (notification_id TEXT, unread INTEGER, created TEXT)",
            "notifications",
            ({"notification_id": "n1", "unread": 1, "created": "whenever"},),
        )
        warnings = []
        (note,) = extract_notifications(path, warnings)
        assert note.created is None
        assert any("unparsed time" in w for w in warnings)


def _noise(rng, length):
    return bytes(rng.randrange(256) for _ in range(length))


class TestChatJson:
    def test_fragment_fields(self):
        rng = random.Random(11)
        payload = sd.CHAT_PUSH_JSON.encode("utf-8")
        data = _noise(rng, 700) + payload + _noise(rng, 900)
        (fragment,) = extract_chat_json(data, "memdump.bin")
        assert fragment.parsed
        assert fragment.offset == 700
        assert fragment.message == sd.CHAT_PUSH_MESSAGE
        assert fragment.time_raw == sd.CHAT_PUSH_TIME
        assert fragment.time.isoformat_ms() == "2015-01-19T16:36:23.000Z"
        assert fragment.target_uid == "100004935817781"
        assert fragment.sender_uid == "100004911219827"
        assert fragment.recipient_uid == "100004935817781"
        assert fragment.thread_id == "439758492746659"
        assert fragment.raw == payload
        assert fragment.provenance.channel is Channel.CARVED
        assert fragment.provenance.byte_offset == 700
        assert fragment.extra.get("type") == "orca_message"

    def test_nested_region_picks_smallest_balanced(self):
        inner = sd.CHAT_PUSH_JSON
        outer = '{"envelope": 1, "payload": %s, "z": 2}' % inner
        data = b"x" * 64 + outer.encode() + b"y" * 64
        (fragment,) = extract_chat_json(data)
        assert fragment.parsed
        # Marker sits inside the inner object, so that is the region kept.
        assert fragment.raw == inner.encode()

    def test_truncated_tail_reported_unparsed(self):
        payload = sd.CHAT_PUSH_JSON.encode("utf-8")
        data = b"n" * 100 + payload[: len(payload) - 10]
        (fragment,) = extract_chat_json(data)
        assert not fragment.parsed
        assert fragment.raw.startswith(b"{")
        assert b"orca_message" in fragment.raw

    def test_no_marker_no_fragments(self):
        assert extract_chat_json(b"nothing interesting here " * 100) == []

    def test_string_escapes_do_not_break_balance(self):
        doc = '{"type": "orca_message", "message": "brace \\" } in string", "time": 5}'
        (fragment,) = extract_chat_json(doc.encode())
        assert fragment.parsed
        assert fragment.message == 'brace " } in string'

    def test_chunked_matches_whole(self):
        rng = random.Random(23)
        pieces = []
        expected_offsets = []
        cursor = 0
        for _ in range(5):
            gap = _noise(rng, rng.randrange(2000, 9000))
            pieces.append(gap)
            cursor += len(gap)
            expected_offsets.append(cursor)
            payload = sd.CHAT_PUSH_JSON.encode("utf-8")
            pieces.append(payload)
            cursor += len(payload)
        data = b"".join(pieces)
        whole = extract_chat_json(data)
        chunked = extract_chat_json(io.BytesIO(data), chunk_size=1024)
        assert whole == chunked
        assert [f.offset for f in whole] == expected_offsets
        assert all(f.parsed for f in whole)

    def test_marker_without_any_brace(self):
        data = b"plain orca_message text with no json at all"
        (fragment,) = extract_chat_json(data)
        assert not fragment.parsed
        assert b"orca_message" in fragment.raw
