"""CLI tests: prove/check exit codes, env overrides, extra system dirs, serve."""

import json
import os
import socket
import subprocess
import sys
import time
import urllib.request

import pytest

from graphprover.cli import main

MINI_SYS = """
system tiny
style backward

operator -> 2 infix

rule close := Rule(
    args = ["hypothesis" =: Hypotheses() where Both(Identity(), Arg("goal"))],
    closesAs = hypothesis)

rule impI := Rule(
    args = ["implication" =: Identity(operator = ->)],
    branches = [NewBranch(goal = SubOf(operand = 2),
                          newHypotheses = [SubOf(operand = 1)])])

strategy auto full := Many(AndThen(
    Many(Atomic(close)),
    Try(Atomic(impI, avoidCycles = true))))
"""


class TestProve:
    def test_success_exit_zero(self, capsys):
        rc = main(["prove", "--system", "nd-minimal", "--goal", "(-> A A)"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "outcome:  success" in out
        assert "steps:    2" in out

    def test_unprovable_goal_exit_one(self, capsys):
        rc = main(
            ["prove", "--system", "nd-intuitionistic", "--goal", "(-> (not (not A)) A)"]
        )
        assert rc == 1
        assert "failure" in capsys.readouterr().out

    def test_engine_error_exit_two(self, capsys):
        rc = main(["prove", "--system", "nd-minimal", "--goal", "(-> A"])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_system_exit_two(self, capsys):
        rc = main(["prove", "--system", "nope", "--goal", "(-> A A)"])
        assert rc == 2

    def test_fuel_env_override_limits_run(self, capsys, monkeypatch):
        monkeypatch.setenv("GRAPHPROVER_FUEL", "1")
        rc = main(
            ["prove", "--system", "nd-minimal", "--goal", "(-> A (-> B A))"]
        )
        assert rc == 1

    def test_systems_dir_flag_loads_extra_systems(self, tmp_path, capsys):
        (tmp_path / "tiny.sys").write_text(MINI_SYS)
        rc = main(
            [
                "prove",
                "--system",
                "tiny",
                "--goal",
                "(-> A (-> B A))",
                "--systems-dir",
                str(tmp_path),
            ]
        )
        assert rc == 0
        assert "success" in capsys.readouterr().out


class TestCheck:
    def prove_to(self, tmp_path, goal, system="nd-classical"):
        path = tmp_path / "proof.json"
        main(["prove", "--system", system, "--goal", goal, "--export", str(path)])
        return path

    def test_valid_complete_document(self, tmp_path, capsys):
        path = self.prove_to(tmp_path, "(-> (-> (-> A B) A) A)")
        rc = main(["check", str(path)])
        assert rc == 0
        assert "valid: complete proof of" in capsys.readouterr().out

    def test_incomplete_document_fails(self, tmp_path, capsys):
        path = self.prove_to(tmp_path, "(-> A B)", system="nd-minimal")
        rc = main(["check", str(path)])
        assert rc == 1
        assert "open goal" in capsys.readouterr().out

    def test_garbage_file_exits_two(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{not json")
        assert main(["check", str(path)]) == 2

    def test_tampered_document_fails(self, tmp_path, capsys):
        path = self.prove_to(tmp_path, "(-> (-> (-> A B) A) A)")
        doc = json.loads(path.read_text())
        victim = next(
            v for v in doc["vertices"] if v["props"].get("status") == "regular"
        )
        victim["props"]["status"] = "goal"
        del victim["props"]["rule"]
        path.write_text(json.dumps(doc))
        assert main(["check", str(path)]) != 0


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def wait_for(url: str, timeout: float = 15.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        try:
            with urllib.request.urlopen(url, timeout=1) as r:
                return json.loads(r.read())
        except OSError:
            time.sleep(0.1)
    raise RuntimeError(f"server at {url} never came up")


class TestServe:
    def test_serve_round_trip(self, tmp_path):
        port = free_port()
        proc = subprocess.Popen(
            [
                sys.executable,
                "-m",
                "graphprover.cli",
                "serve",
                "--port",
                str(port),
                "--data-dir",
                str(tmp_path / "data"),
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            env={**os.environ, "PYTHONUNBUFFERED": "1"},
        )
        try:
            base = f"http://127.0.0.1:{port}/api/v1"
            catalog = wait_for(base + "/systems")
            assert any(s["name"] == "nd-minimal" for s in catalog["systems"])

            req = urllib.request.Request(
                base + "/sessions",
                data=json.dumps(
                    {"system": "nd-minimal", "goal": "(-> A A)"}
                ).encode(),
                headers={"Content-Type": "application/json"},
            )
            with urllib.request.urlopen(req) as r:
                body = json.loads(r.read())
            sid = body["sessionId"]
            assert (tmp_path / "data" / f"session-{sid}.json").exists()

            req = urllib.request.Request(
                base + f"/sessions/{sid}/tactic",
                data=json.dumps({"version": 0, "strategy": "auto"}).encode(),
                headers={"Content-Type": "application/json"},
            )
            with urllib.request.urlopen(req) as r:
                body = json.loads(r.read())
            assert body["outcome"] == "success"
            assert body["state"]["complete"] is True
        finally:
            proc.terminate()
            proc.wait(timeout=10)
