"""Known-good sample records observed in real app caches.

These constants reproduce field values recovered from actual Facebook and
Skype Store-app artifacts during controlled-scenario examinations.  The
fixture forge plants them and the test suite asserts extraction recovers
them exactly, so they live in one module as the single source of truth.
"""

from __future__ import annotations

# ---------------------------------------------------------------------------
# Facebook analytics log (Analytics.sqlite, table analytics_logs)

ANALYTICS_LOGIN_ROW = {
    "id": 1,
    "time": 1421898314666,  # epoch ms; 2015-01-22T03:45:14.666Z
    "log_type": "client_event",
    "name": "login",
    "module": "login_events",
    "extra": "{}",
}

ANALYTICS_EXTRA_ROWS = (
    {"id": 2, "time": 1421898401138, "log_type": "client_event", "name": "chat_turned_on", "module": "chat", "extra": "{}"},
    {"id": 3, "time": 1421898455207, "log_type": "client_event", "name": "message_sent_attempt", "module": "chat", "extra": "{}"},
    {"id": 4, "time": 1421898455900, "log_type": "client_event", "name": "message_send_state", "module": "chat", "extra": "{}"},
    {"id": 5, "time": 1421899103452, "log_type": "client_event", "name": "file_downloaded", "module": "attachments", "extra": "{}"},
)

# ---------------------------------------------------------------------------
# Facebook friends cache (Friends.sqlite, table friends)

FRIEND_ROW = {
    "uid": "100004911219827",
    "first_name": "Kelvin",
    "last_name": "Sky",
    "name": "Kelvin Sky",
    "email": "fbccester@gmail.com",
    "profile_url": "https://www.facebook.com/kelvin.sky.52",
    "communication_rank": 0.000848054885864,
    "birthday": "1990-01-01 00:00:00",
}

# Facebook account identities seen across the caches.  The cache owner is
# the victim-role account; the correspondent is the suspect-role account.
OWNER_UID = "100004911219827"
OWNER_NAME = "Kelvin Sky"
CORRESPONDENT_UID = "100004935817781"
CORRESPONDENT_NAME = "Jack Jeffrey"
# The users table spells the correspondent differently; preserved as seen.
CORRESPONDENT_NAME_USERS_TABLE = "Jack Jeffry"

# ---------------------------------------------------------------------------
# Facebook attachments column (Messages.sqlite messages.attachments), with
# the double-bracketed JSON array exactly as stored.

ATTACHMENT_IMAGE = {
    "name": "10934517_391924760981228_2133990913_n.jpg",
    "size": 0,
    "id": "391924760981228",
    "mime": "image/jpeg",
    "type_code": 4,
    "width": 742,
    "height": 960,
}

ATTACHMENT_PDF = {
    "name": "VictimToSuspect.pdf",
    "size": 31747,
    "id": "391924720981232",
    "mime": "application/pdf",
    "type_code": 7,
}

ATTACHMENTS_JSON = (
    '[[{"id": "391924760981228", "name": "10934517_391924760981228_2133990913_n.jpg", '
    '"size": 0, "mime": "image/jpeg", "type": 4, "width": 742, "height": 960, '
    '"url": "https://scontent-a.xx.fbcdn.net/hphotos-xpf1/t34.0-12/10934517_391924760981228_2133990913_n.jpg", '
    '"preview": "https://scontent-a.xx.fbcdn.net/hphotos-xpf1/t34.0-12/p280x280/10934517_391924760981228_2133990913_n.jpg"}, '
    '{"id": "391924720981232", "name": "VictimToSuspect.pdf", "size": 31747, '
    '"mime": "application/pdf", "type": 7, '
    '"url": "https://cdn.fbsbx.com/hphotos-xpa1/t59.2708-21/10956742_391924720981232_1940047432_n.pdf/VictimToSuspect.pdf"}]]'
)

# ---------------------------------------------------------------------------
# Facebook messages cache (Messages.sqlite, tables messages and users).
# Five rows; the third carries the known body/sender/instant anchor.

MESSAGE_THREAD_ID = "439758492746659"

MESSAGE_ROWS = (
    {
        "rowid": 15,
        "mid": "mid.1421644700125:7c11da24ab6dd2a511",
        "tid": MESSAGE_THREAD_ID,
        "body": "Hi Jack, are you there?",
        "sender": '{"email": "fbccester@gmail.com", "user_id": "100004911219827", "name": "Kelvin Sky"}',
        "timestamp": 1421644700125,
        "tags": '["inbox", "read", "sent", "source:chat"]',
        "attachments": "[]",
    },
    {
        "rowid": 16,
        "mid": "mid.1421644720457:0a61c4e9be34f08790",
        "tid": MESSAGE_THREAD_ID,
        "body": "Yes, I am here",
        "sender": '{"email": "", "user_id": "100004935817781", "name": "Jack Jeffrey"}',
        "timestamp": 1421644720457,
        "tags": '["inbox", "read", "source:chat"]',
        "attachments": "[]",
    },
    {
        "rowid": 18,
        "mid": "mid.1421644744425:59bdfb549cbd21fc27",
        "tid": MESSAGE_THREAD_ID,
        "body": "Hello Victim",
        "sender": '{"email": "", "user_id": "100004935817781", "name": "Jack Jeffrey"}',
        "timestamp": 1421644744425,  # 2015-01-19T05:19:04.425Z
        "tags": '["inbox", "read", "source:chat"]',
        "attachments": "[]",
    },
    {
        "rowid": 19,
        "mid": "mid.1421685383342:b1a2c3d4e5f6071829",
        "tid": MESSAGE_THREAD_ID,
        "body": "Here are some files for you SUSPECT",
        "sender": '{"email": "fbccester@gmail.com", "user_id": "100004911219827", "name": "Kelvin Sky"}',
        "timestamp": 1421685383342,
        "tags": '["inbox", "read", "sent", "source:chat"]',
        "attachments": ATTACHMENTS_JSON,
    },
    {
        "rowid": 20,
        "mid": "mid.1421685401275:90ffa0b1c2d3e4f516",
        "tid": MESSAGE_THREAD_ID,
        "body": "Thanks, got them",
        "sender": '{"email": "", "user_id": "100004935817781", "name": "Jack Jeffrey"}',
        "timestamp": 1421685401275,
        "tags": '["inbox", "read", "source:chat"]',
        "attachments": "[]",
    },
)

USERS_ROWS = (
    {"id": "100004911219827", "name": "Kelvin Sky", "email": "fbccester@gmail.com", "last_active": 1423766054},
    {"id": "100004935817781", "name": "Jack Jeffry", "email": "", "last_active": 1423766043},
)

# ---------------------------------------------------------------------------
# Facebook notifications cache (Notifications.sqlite, table notifications);
# times are stored as date-time text, not epoch integers.

NOTIFICATION_ROWS = (
    {
        "notification_id": "notif_100004911219827_1108",
        "sender_id": "100004935817781",
        "title_text": "Jack Jeffrey accepted your friend request.",
        "href": "https://www.facebook.com/profile.php?id=100004935817781",
        "unread": 1,
        "created": "2015-02-12 17:50:03",
        "updated": "2015-02-12 17:50:03",
    },
    {
        "notification_id": "notif_100004911219827_1109",
        "sender_id": "100004935817781",
        "title_text": "Jack Jeffrey commented on your photo.",
        "href": "https://www.facebook.com/photo.php?fbid=391924760981228",
        "unread": 0,
        "created": "2015-02-12 17:52:47",
        "updated": "2015-02-12 17:53:01",
    },
)

# ---------------------------------------------------------------------------
# Cache database DDL shared by the fixture forge and the tests; one entry
# per database file of the app's LocalState/<uid>/DB directory.

FACEBOOK_DB_SCHEMA = {
    "Analytics.sqlite": {
        "analytics_logs": (
            "CREATE TABLE analytics_logs (id INTEGER PRIMARY KEY, time INTEGER,"
            " log_type TEXT, name TEXT, module TEXT, extra TEXT)"
        ),
    },
    "Friends.sqlite": {
        "friends": (
            "CREATE TABLE friends (uid TEXT, first_name TEXT, middle_name TEXT,"
            " last_name TEXT, name TEXT, contact_email TEXT, phones TEXT,"
            " profile_url TEXT, communication_rank REAL, birthday TEXT)"
        ),
    },
    "FriendRequests.sqlite": {
        "friend_requests": "CREATE TABLE friend_requests (uid TEXT, name TEXT, time INTEGER)",
    },
    "Messages.sqlite": {
        "messages": (
            "CREATE TABLE messages (mid TEXT, tid TEXT, body TEXT, sender TEXT,"
            " timestamp INTEGER, tags TEXT, attachments TEXT)"
        ),
        "users": "CREATE TABLE users (id TEXT, name TEXT, email TEXT, last_active INTEGER)",
    },
    "Notifications.sqlite": {
        "notifications": (
            "CREATE TABLE notifications (notification_id TEXT, sender_id TEXT,"
            " title_text TEXT, href TEXT, unread INTEGER, created TEXT, updated TEXT)"
        ),
    },
    "Stories.sqlite": {
        "stories": "CREATE TABLE stories (story_id TEXT, author_uid TEXT, body TEXT, time INTEGER)",
    },
}

# ---------------------------------------------------------------------------
# Chat push notification JSON as found in process memory around the
# "orca_message" marker.

CHAT_PUSH_MESSAGE = "Kelvin Sky: Here are some files for you SUSPECT"
CHAT_PUSH_TIME = 1421685383  # epoch s; 2015-01-19T16:36:23Z
CHAT_PUSH_JSON = (
    '{"time": 1421685383, "type": "orca_message", '
    '"message": "Kelvin Sky: Here are some files for you SUSPECT", '
    '"unread_count": 1, "target_uid": 100004935817781, '
    '"params": {"a": "100004911219827", "u": "100004935817781", "tid": "439758492746659"}, '
    '"from_mobile": false}'
)

# ---------------------------------------------------------------------------
# In-memory chat payload header fragment (plain text remnant).

PAYLOAD_HEADER_TEXT = (
    "Messaging: 2.0\r\n"
    "To: <sip:8:adam.thomson84>\r\n"
    "From: <sip:8:harold.cornwall34>;epid={d806}\r\n"
    "IM-Display-Name: Harold Cornwall\r\n"
)

# ---------------------------------------------------------------------------
# Skype main.db sample rows.  The database owner is the suspect-role
# account; the correspondent is the victim-role account.

SKYPE_OWNER = "harold.cornwall1"
SKYPE_OWNER_FULLNAME = "Harold Cornwall"
SKYPE_PARTNER = "adam.thomson11"
SKYPE_PARTNER_FULLNAME = "Adam Thomson"

SKYPE_ACCOUNT_ROW = {
    "skypename": "harold.cornwall1",
    "liveid_membername": "harold.cornwall@hotmail.com",
    "fullname": "Harold Cornwall",
    "birthday": 19900202,
    "gender": 1,
    "country": "my",
    "province": "",
    "city": "Malacca",
    "emails": "harold.cornwall@hotmail.com",
    "mood_text": "",
    "registration_timestamp": 1421596800,
}

SKYPE_CONTACT_ECHO = {
    "skypename": "echo123",
    "fullname": "Echo / Sound Test Service",
    "displayname": "Echo / Sound Test Service",
    "languages": "en",
    "birthday": None,
    "gender": None,
    "country": None,
    "city": None,
    "phone_mobile": None,
    "emails": None,
    "lastonline_timestamp": None,
    "lastused_timestamp": None,
}

# Profile-rich contact row; birthday is stored as an integer YYYYMMDD.
SKYPE_CONTACT_PROFILE = {
    "skypename": "harold.cornwall1",
    "fullname": "Harold Cornwall",
    "displayname": "Harold Cornwall",
    "languages": "en",
    "birthday": 19900202,
    "gender": 1,
    "country": "my",
    "city": "Malacca",
    "phone_mobile": "+600156688796",
    "emails": "harold.cornwall@hotmail.com",
    "lastonline_timestamp": 1421686251,
    "lastused_timestamp": 1421686251,
}

SKYPE_CONTACT_PARTNER = {
    "skypename": "adam.thomson11",
    "fullname": "Adam Thomson",
    "displayname": "Adam Thomson",
    "languages": "en",
    "birthday": 19881130,
    "gender": 1,
    "country": "my",
    "city": "Kuala Lumpur",
    "phone_mobile": "+600122334455",
    "emails": "adam.thomson@hotmail.com",
    "lastonline_timestamp": 1421686150,
    "lastused_timestamp": 1421686150,
}

# Six outgoing transfers of the SuspectToVictim.* file set.
SKYPE_TRANSFER_FILES = (
    ("SuspectToVictim.docx", 78080),
    ("SuspectToVictim.jpg", 287937),
    ("SuspectToVictim.pdf", 31747),
    ("SuspectToVictim.rtf", 43360),
    ("SuspectToVictim.txt", 2734),
    ("SuspectToVictim.zip", 30967),
)

SKYPE_TRANSFER_ROWS = tuple(
    {
        "type": 2,  # transferring (outgoing)
        "partner_handle": "adam.thomson11",
        "partner_dispname": "Adam Thomson",
        "status": 2,
        "failurereason": None,
        "starttime": 1421685822 + 2 * index,  # first row 2015-01-19T16:43:42Z
        "finishtime": 0,
        "filepath": "C:\\Users\\anonymous\\Documents\\" + name,
        "filename": name,
        "filesize": str(size),
        "bytestransferred": str(size),
    }
    for index, (name, size) in enumerate(SKYPE_TRANSFER_FILES)
)

# body_xml of the file-send message offering all six files.
FILES_BODY_XML = (
    '<files alt="">'
    '<file size="78080" index="0" tid="1335338368">SuspectToVictim.docx</file>'
    '<file size="287937" index="1" tid="358042097">SuspectToVictim.jpg</file>'
    '<file size="31747" index="2" tid="3482891630">SuspectToVictim.pdf</file>'
    '<file size="43360" index="3" tid="3018727815">SuspectToVictim.rtf</file>'
    '<file size="2734" index="4" tid="1324086924">SuspectToVictim.txt</file>'
    '<file size="30967" index="5" tid="621137037">SuspectToVictim.zip</file>'
    "</files>"
)

FILES_BODY_EXPECTED = (
    ("SuspectToVictim.docx", 78080, 0, "1335338368"),
    ("SuspectToVictim.jpg", 287937, 1, "358042097"),
    ("SuspectToVictim.pdf", 31747, 2, "3482891630"),
    ("SuspectToVictim.rtf", 43360, 3, "3018727815"),
    ("SuspectToVictim.txt", 2734, 4, "1324086924"),
    ("SuspectToVictim.zip", 30967, 5, "621137037"),
)

SINGLE_FILE_BODY_XML = (
    '<files alt=""><file size="30967" index="0" tid="621137037">SuspectToVictim.zip</file></files>'
)

VIDEOMESSAGE_SID = "90699566cef64bd97b99704588c41609"
VIDEOMESSAGE_LINK = "https://vm.skype.com/mail/adam.thomson11/90699566cef64bd97b99704588c41609"
VIDEOMESSAGE_BODY_XML = (
    '<videomessage sid="90699566cef64bd97b99704588c41609" '
    'publiclink="https://vm.skype.com/mail/adam.thomson11/90699566cef64bd97b99704588c41609">'
    "I present to you this video message, please copy this secret code 1400 and enter it on the website"
    "</videomessage>"
)

PARTLIST_BODY_XML = (
    '<partlist type="started" alt="">'
    '<part identity="adam.thomson11"><name>Adam Thomson</name></part>'
    '<part identity="harold.cornwall1"><name>Harold Cornwall</name></part>'
    "</partlist>"
)

PARTLIST_ENDED_BODY_XML = PARTLIST_BODY_XML.replace('type="started"', 'type="ended"')

# Messages table rows; type codes follow the documented meaning table.
SKYPE_MESSAGE_ROWS = (
    {"id": 201, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421679180, "type": 50, "chatmsg_type": 18, "chatmsg_status": 2, "body_xml": "", "participant_count": 2, "reason": None},
    {"id": 202, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421679245, "type": 61, "chatmsg_type": 3, "chatmsg_status": 2, "body_xml": "hello SUSPECT", "participant_count": 2, "reason": None},
    {"id": 203, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421679302, "type": 30, "chatmsg_type": 18, "chatmsg_status": 2, "body_xml": PARTLIST_BODY_XML, "participant_count": 2, "reason": None},
    {"id": 204, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421679358, "type": 39, "chatmsg_type": 18, "chatmsg_status": 2, "body_xml": PARTLIST_ENDED_BODY_XML, "participant_count": 2, "reason": "no_answer"},
    {"id": 205, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "harold.cornwall1", "from_dispname": "Harold Cornwall", "timestamp": 1421682004, "type": 61, "chatmsg_type": 3, "chatmsg_status": 2, "body_xml": "hi victim, I am sending the documents now", "participant_count": 2, "reason": None},
    {"id": 206, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "harold.cornwall1", "from_dispname": "Harold Cornwall", "timestamp": 1421685822, "type": 68, "chatmsg_type": 7, "chatmsg_status": 2, "body_xml": FILES_BODY_XML, "participant_count": 2, "reason": None},
    {"id": 207, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421685901, "type": 61, "chatmsg_type": 3, "chatmsg_status": 2, "body_xml": "got them, thanks", "participant_count": 2, "reason": None},
    {"id": 208, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "harold.cornwall1", "from_dispname": "Harold Cornwall", "timestamp": 1421685940, "type": 68, "chatmsg_type": 7, "chatmsg_status": 2, "body_xml": SINGLE_FILE_BODY_XML, "participant_count": 2, "reason": None},
    {"id": 209, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421685999, "type": 30, "chatmsg_type": 18, "chatmsg_status": 2, "body_xml": PARTLIST_BODY_XML, "participant_count": 2, "reason": None},
    {"id": 210, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421686013, "type": 39, "chatmsg_type": 18, "chatmsg_status": 2, "body_xml": PARTLIST_ENDED_BODY_XML, "participant_count": 2, "reason": "busy"},
    {"id": 211, "convo_id": 130, "chatname": "#adam.thomson11/$harold.cornwall1;f1d2cafe09", "author": "adam.thomson11", "from_dispname": "Adam Thomson", "timestamp": 1421686068, "type": 30, "chatmsg_type": 18, "chatmsg_status": 2, "body_xml": PARTLIST_BODY_XML, "participant_count": 2, "reason": "recording_failed"},
)

SKYPE_CALL_ROWS = (
    {"begin_timestamp": 1421685999, "host_identity": "adam.thomson11", "duration": 14, "is_incoming": 1, "name": "8-1421685999", "is_unseen_missed": 0},
    {"begin_timestamp": 1421686068, "host_identity": "adam.thomson11", "duration": None, "is_incoming": 1, "name": "8-1421686068", "is_unseen_missed": 1},
    {"begin_timestamp": 1421686088, "host_identity": "adam.thomson11", "duration": 11, "is_incoming": 1, "name": "8-1421686088", "is_unseen_missed": 0},
    {"begin_timestamp": 1421686142, "host_identity": "adam.thomson11", "duration": None, "is_incoming": 1, "name": "8-1421686142", "is_unseen_missed": 1},
)

SKYPE_CALLMEMBER_ROWS = (
    {"identity": "adam.thomson11", "dispname": "Adam Thomson", "guid": "adam.thomson11-harold.cornwall1-8-1421685999", "call_duration": 14, "ip_address": "192.168.220.130"},
    {"identity": "harold.cornwall1", "dispname": "Harold Cornwall", "guid": "adam.thomson11-harold.cornwall1-8-1421685999", "call_duration": 14, "ip_address": "192.168.220.176"},
)

SKYPE_VIDEOMESSAGE_ROW = {
    "sharing_id": VIDEOMESSAGE_SID,
    "status": 3,
    "vod_status": 3,
    "vod_path": "https://vm-dl.skype.com/3f2a/90699566cef64bd97b99704588c41609.mp4",
    "local_path": (
        "C:\\Users\\anonymous\\AppData\\Local\\Packages\\Microsoft.SkypeApp_kzf8qxf38zg5c\\"
        "LocalState\\harold.cornwall1\\media_messaging\\videomessage\\90699566cef64bd97b99704588c41609.mp4"
    ),
    "public_link": VIDEOMESSAGE_LINK,
    "progress": 100,
    "author": "adam.thomson11",
    "creation_timestamp": 1422254000,
    "reaction_timestamp": 1422254107,
}

# DDL for forging message-store databases with the column layout the
# extractor expects; shared by unit fixtures and the evidence forge.
MAIN_DB_SCHEMA = {
    "Accounts": (
        "CREATE TABLE Accounts (skypename TEXT, liveid_membername TEXT, fullname TEXT,"
        " birthday INTEGER, gender INTEGER, country TEXT, province TEXT, city TEXT,"
        " emails TEXT, mood_text TEXT, registration_timestamp INTEGER)"
    ),
    "Contacts": (
        "CREATE TABLE Contacts (skypename TEXT, fullname TEXT, displayname TEXT,"
        " birthday INTEGER, gender INTEGER, languages TEXT, country TEXT, city TEXT,"
        " phone_mobile TEXT, emails TEXT, lastonline_timestamp INTEGER, lastused_timestamp INTEGER)"
    ),
    "Messages": (
        "CREATE TABLE Messages (id INTEGER PRIMARY KEY, convo_id INTEGER, chatname TEXT,"
        " author TEXT, from_dispname TEXT, timestamp INTEGER, type INTEGER,"
        " chatmsg_type INTEGER, chatmsg_status INTEGER, body_xml TEXT,"
        " participant_count INTEGER, reason TEXT)"
    ),
    "Transfers": (
        "CREATE TABLE Transfers (type INTEGER, partner_handle TEXT, partner_dispname TEXT,"
        " status INTEGER, failurereason INTEGER, starttime INTEGER, finishtime INTEGER,"
        " filepath TEXT, filename TEXT, filesize TEXT, bytestransferred TEXT)"
    ),
    "Calls": (
        "CREATE TABLE Calls (begin_timestamp INTEGER, host_identity TEXT, duration INTEGER,"
        " is_incoming INTEGER, name TEXT, is_unseen_missed INTEGER)"
    ),
    "CallMembers": (
        "CREATE TABLE CallMembers (identity TEXT, dispname TEXT, guid TEXT,"
        " call_duration INTEGER, ip_address TEXT)"
    ),
    "VideoMessages": (
        "CREATE TABLE VideoMessages (sharing_id TEXT, status INTEGER, vod_status INTEGER,"
        " vod_path TEXT, local_path TEXT, public_link TEXT, progress INTEGER,"
        " author TEXT, creation_timestamp INTEGER, reaction_timestamp INTEGER)"
    ),
}

# ---------------------------------------------------------------------------
# shared.xml network state.  LastIP decodes big-endian to 115.164.92.172;
# the supernode hex entries decode via the prefixed 12-hex-char scheme.

HOSTCACHE_PREFIX = "0400050041050200"
HOSTCACHE_ENTRY_MSLOGIN = "4137DF188109"  # 65.55.223.24 : 33033
HOSTCACHE_ENTRY_SUPERNODE = "6FDD4D9E9C56"  # 111.221.77.158 : 40022
HOSTCACHE_SINGLE_ENTRY_HEX = HOSTCACHE_PREFIX + HOSTCACHE_ENTRY_MSLOGIN

SHARED_LAST_IP_DECIMAL = 1940151468  # 115.164.92.172
SHARED_LISTENING_PORT = 37439
SHARED_SUPERNODE = "111.221.77.148:40028"
SHARED_NODE_ID = "su4l3c9eb27m51kq"

SHARED_HOSTCACHE_HEX = (
    HOSTCACHE_PREFIX + HOSTCACHE_ENTRY_SUPERNODE
    + "0001040002B188F4A5050003B188F4A50500"
    + HOSTCACHE_PREFIX + HOSTCACHE_ENTRY_MSLOGIN
    + "D001040002B6D499A"  # trailing partial material, not an entry
)

SHARED_XML_DOC = (
    '<?xml version="1.0"?>\r\n'
    '<config version="1.0" serial="28" timestamp="1421686251.63">\r\n'
    "  <Lib>\r\n"
    "    <Account>\r\n"
    "      <Default>harold.cornwall1</Default>\r\n"
    "      <NodeID>" + SHARED_NODE_ID + "</NodeID>\r\n"
    "    </Account>\r\n"
    "    <Connection>\r\n"
    "      <HostCache>\r\n"
    "        <Entries>" + SHARED_HOSTCACHE_HEX + "</Entries>\r\n"
    "      </HostCache>\r\n"
    "      <LastIP>1940151468</LastIP>\r\n"
    "      <ListeningPort>37439</ListeningPort>\r\n"
    "      <Supernode>111.221.77.148:40028</Supernode>\r\n"
    "    </Connection>\r\n"
    "  </Lib>\r\n"
    "</config>\r\n"
).encode("ascii")

# config.xml with the per-account contact list under <u>; dots in contact
# names are stored as the ".2E" escape.
CONFIG_LAST_USED = 1421679670  # 2015-01-19T15:01:10Z
CONFIG_SERIAL = 78
CONFIG_XML_DOC = (
    '<?xml version="1.0"?>\r\n'
    '<config version="1.0" serial="78" timestamp="1421686251.63">\r\n'
    "  <UI>\r\n"
    "    <General>\r\n"
    "      <LastUsed>1421679670</LastUsed>\r\n"
    "    </General>\r\n"
    "    <Contacts>\r\n"
    "      <u>\r\n"
    "        <echo123>9db4df93:2</echo123>\r\n"
    "        <harold.2Ecornwall1>4857bb98:2</harold.2Ecornwall1>\r\n"
    "      </u>\r\n"
    "    </Contacts>\r\n"
    "  </UI>\r\n"
    "</config>\r\n"
).encode("ascii")

CONFIG_CONTACTS = ("echo123", "harold.cornwall1")

# ---------------------------------------------------------------------------
# Package identities and registry branches.

FACEBOOK_PACKAGE_FULL = "Facebook.Facebook_1.4.0.9_x64__8xx8rvfyw5nnt"
FACEBOOK_PACKAGE_FAMILY = "Facebook.Facebook_8xx8rvfyw5nnt"
SKYPE_PACKAGE_FULL = "Microsoft.SkypeApp_2.0.0.5011_x86_kzf8qxf38zg5c"
SKYPE_PACKAGE_FAMILY = "Microsoft.SkypeApp_kzf8qxf38zg5c"
COMMS_PACKAGE_FAMILY = "microsoft.windowscommunicationsapps_8wekyb3d8bbwe"

REGISTRY_SID = "S-1-5-21-2615175061-3401115538-3683998271-1001"
REPOSITORY_BRANCH = (
    "HKEY_USERS\\" + REGISTRY_SID
    + "\\Software\\Classes\\Local Settings\\Software\\Microsoft\\Windows"
    + "\\CurrentVersion\\AppModel\\Repository\\Families"
)
PERSISTED_BRANCH = (
    "HKEY_USERS\\" + REGISTRY_SID
    + "\\Software\\Classes\\Local Settings\\Software\\Microsoft\\Windows"
    + "\\CurrentVersion\\AppModel\\SystemAppData\\" + SKYPE_PACKAGE_FAMILY
    + "\\PersistedStorageItemTable\\ManagedByApp"
)

# FILETIME of 2015-01-19T16:28:08Z, the moment the app install completed.
INSTALL_TIME_TICKS = 130661584880000000
INSTALL_TIME_HEX_BIG = "01D03404E88FDC00"

# FILETIME of 2015-01-18T09:15:40Z, one day before the messaging session.
FACEBOOK_INSTALL_TICKS = 130660461400000000

PERSISTED_ITEMS = (
    {
        "guid": "{B2E34A15-6C11-4E5A-9D07-9A33C3E10001}",
        "file_path": "C:\\Users\\anonymous\\Documents\\SuspectToVictim.docx",
        "last_updated_ticks": 130661756220000000,
    },
    {
        "guid": "{B2E34A15-6C11-4E5A-9D07-9A33C3E10002}",
        "file_path": "C:\\Users\\anonymous\\Documents\\SuspectToVictim.zip",
        "last_updated_ticks": 130661756340000000,
    },
)

# ---------------------------------------------------------------------------
# NTFS journal tracker CSV rows (layout: LSN, Event Time, Event, Detail,
# File Name, Full Path); deletion rows carry blank Event Time.

NTFS_CSV_HEADER = ("LSN", "Event Time", "Event", "Detail", "File Name", "Full Path")
NTFS_CSV_ROWS = (
    ("274599978", "2015-01-22 11:46:02", "File Creation", "", "VictimToSuspect.txt", "Users\\anonymous\\Downloads\\VictimToSuspect.txt"),
    ("274600411", "2015-01-22 11:46:02", "File Creation", "", "VictimToSuspect.txt:Zone.Identifier", "Users\\anonymous\\Downloads\\VictimToSuspect.txt:Zone.Identifier"),
    ("274608180", "2015-01-22 11:52:18", "Moving After", "Renaming", "VictimToSuspect (2).txt", "Users\\anonymous\\Downloads\\VictimToSuspect (2).txt"),
    ("274611021", "", "File Deletion", "", "VictimToSuspect (2).txt", "Users\\anonymous\\Downloads\\VictimToSuspect (2).txt"),
    ("274611037", "", "File Deletion", "", "VictimToSuspect (2).txt:Zone.Identifier", "Users\\anonymous\\Downloads\\VictimToSuspect (2).txt:Zone.Identifier"),
)

# ---------------------------------------------------------------------------
# Network endpoints used by the apps, for capture fixtures.

FACEBOOK_CHAT_IP = "31.13.76.102"
FACEBOOK_CHAT_HOST = "5-edge-chat.facebook.com"
LOCAL_CLIENT_IP = "192.168.220.176"
SUPERNODE_LOOKUP_PORT = 33033
