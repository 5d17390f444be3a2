import json

import pytest

from imartifacts import forge, timeline
from imartifacts.cli import ENV_OUT, main


@pytest.fixture(scope="module")
def forged(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli") / "evidence"
    manifest = forge.forge_fixture(3, root)
    return root, manifest


def fb_db(root, name):
    return str(root / forge.FACEBOOK_DB_DIR / name)


class TestForgeCommand:
    def test_writes_tree_and_reports_seed(self, tmp_path, capfd):
        assert main(["forge", "--seed", "9", "--out", str(tmp_path / "E")]) == 0
        out = capfd.readouterr().out
        assert "seed 9" in out
        assert (tmp_path / "E" / "manifest.json").is_file()

    def test_nonempty_output_is_input_error(self, tmp_path, capfd):
        target = tmp_path / "E"
        assert main(["forge", "--seed", "1", "--out", str(target)]) == 0
        assert main(["forge", "--seed", "1", "--out", str(target)]) == 2
        assert "not empty" in capfd.readouterr().err

    def test_missing_out_is_usage_error(self, monkeypatch, capfd):
        monkeypatch.delenv(ENV_OUT, raising=False)
        assert main(["forge", "--seed", "1"]) == 1

    def test_out_defaults_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(ENV_OUT, str(tmp_path / "envtree"))
        assert main(["forge", "--seed", "2"]) == 0
        assert (tmp_path / "envtree" / "manifest.json").is_file()


class TestScan:
    def test_lists_cataloged_artifacts(self, forged, capfd):
        root, _ = forged
        assert main(["scan", str(root)]) == 0
        lines = capfd.readouterr().out.splitlines()
        roles = {line.split("\t")[0] for line in lines}
        assert {"CacheDb", "MainDb", "SharedXml", "ConfigXml", "ZoneIdentifierSidecar"} <= roles

    def test_missing_root(self, capfd):
        assert main(["scan", "/no/such/root"]) == 2
        assert "error" in capfd.readouterr().err


class TestSummaries:
    def test_skype_counts_per_table(self, forged, capfd):
        root, manifest = forged
        assert main(["skype", str(root / forge.SKYPE_ACCOUNT_DIR / "main.db")]) == 0
        out = capfd.readouterr().out
        n = len(manifest["skype"]["tables"]["Messages"])
        assert "accounts=1" in out and "messages=%d" % n in out
        assert "transfers=6" in out and "calls=4" in out

    def test_skype_accepts_state_directory(self, forged, capfd):
        root, _ = forged
        assert main(["skype", str(root / forge.SKYPE_STATE_DIR)]) == 0
        assert "main.db" in capfd.readouterr().out

    def test_skype_dir_without_db(self, tmp_path, capfd):
        assert main(["skype", str(tmp_path)]) == 2

    def test_facebook_counts(self, forged, capfd):
        root, _ = forged
        assert main(["facebook", fb_db(root, "Messages.sqlite"),
                     fb_db(root, "Analytics.sqlite")]) == 0
        out = capfd.readouterr().out
        assert "messages=5 users=2" in out
        assert "analytics=5" in out

    def test_facebook_partial_failure(self, forged, capfd):
        root, _ = forged
        code = main(["facebook", str(root / "capture.pcap"), fb_db(root, "Messages.sqlite")])
        captured = capfd.readouterr()
        assert code == 3
        assert "error" in captured.err
        assert "messages=5" in captured.out

    def test_facebook_total_failure(self, capfd):
        assert main(["facebook", "/no/such.db"]) == 2

    def test_registry_lines(self, forged, capfd):
        root, _ = forged
        assert main(["registry", str(root / "registry_export.reg")]) == 0
        lines = capfd.readouterr().out.splitlines()
        installs = [l for l in lines if l.startswith("install\t")]
        persisted = [l for l in lines if l.startswith("persisted\t")]
        assert len(installs) == 2 and len(persisted) == 2
        assert any("2015-01-19T16:28:08.000Z" in l for l in installs)

    def test_pcap_labels(self, forged, capfd):
        root, _ = forged
        assert main(["pcap", str(root / "capture.pcap")]) == 0
        out = capfd.readouterr().out
        assert "FacebookChat" in out and "SkypeSupernodeLookup" in out


class TestCarveCommand:
    def test_writes_payloads_and_index(self, forged, tmp_path, capfd):
        root, manifest = forged
        out = tmp_path / "carved"
        assert main(["carve", str(root / "memory.bin"), "--out", str(out)]) == 0
        index = json.loads((out / "index.json").read_text())
        plants = [p for p in manifest["memory"]["plants"]
                  if p["kind"] in ("config-xml", "shared-xml")]
        assert len(index) == len(plants)
        for entry in index:
            payload = (out / entry["file"]).read_bytes()
            assert len(payload) == entry["length"]
            assert entry["file"] == "%s_%d.bin" % (entry["signature"], entry["offset"])

    def test_chunk_size_floor_is_usage_error(self, forged, tmp_path, capfd):
        root, _ = forged
        assert main(["carve", str(root / "memory.bin"), "--out", str(tmp_path),
                     "--chunk-size", "4096"]) == 1
        assert "chunk-size" in capfd.readouterr().err


class TestPipelineCommands:
    def test_report_matches_manifest_expectations(self, forged, tmp_path, capfd):
        root, manifest = forged
        out = tmp_path / "report.jsonl"
        assert main(["report", str(root), "--format", "jsonl", "--out", str(out)]) == 0
        got = [json.loads(line) for line in out.read_text().splitlines() if line]
        assert got == manifest["expected_timeline"]

    def test_timeline_over_every_file(self, forged, tmp_path, capfd):
        root, manifest = forged
        inputs = sorted(str(p) for p in root.rglob("*") if p.is_file())
        out = tmp_path / "tl.jsonl"
        assert main(["timeline", *inputs, "--out", str(out)]) == 0
        events = forge.relativize_events(timeline.parse_jsonl(out.read_text()), root)
        assert events == forge.expected_events(manifest)

    def test_timeline_csv_header(self, forged, capfd):
        root, _ = forged
        assert main(["timeline", str(root / "ntfs_journal.csv"), "--format", "csv"]) == 0
        first = capfd.readouterr().out.splitlines()[0]
        assert first.split(",") == list(timeline.EMIT_FIELDS)

    def test_ntfs_flag_forces_csv_ingest(self, forged, tmp_path, capfd):
        root, _ = forged
        renamed = tmp_path / "journal.dat"
        renamed.write_bytes((root / "ntfs_journal.csv").read_bytes())
        assert main(["timeline", str(root / "capture.pcap"), "--ntfs-csv", str(renamed)]) == 0
        out = capfd.readouterr().out
        assert "FsJournal" in out

    def test_partial_failure_keeps_good_events(self, forged, tmp_path, capfd):
        root, _ = forged
        broken = tmp_path / "broken.db"
        broken.write_bytes(b"SQLite format 3\x00" + b"\x00" * 64)
        code = main(["timeline", str(broken), str(root / "ntfs_journal.csv")])
        captured = capfd.readouterr()
        assert code == 3
        assert "error" in captured.err
        assert "FsJournal" in captured.out

    def test_verbose_prints_warnings(self, forged, capfd):
        root, _ = forged
        assert main(["timeline", str(root / "ntfs_journal.csv"), "-v"]) == 0
        assert "warning:" in capfd.readouterr().err


class TestUsage:
    def test_no_command(self, capfd):
        assert main([]) == 1

    def test_unknown_command(self, capfd):
        assert main(["frobnicate"]) == 1
        assert "frobnicate" in capfd.readouterr().err
