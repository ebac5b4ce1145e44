"""Runs the softprove CLI and checks JSON output against schemas/ and exit codes."""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile
import unittest

import jsonschema
from referencing import Registry, Resource

CLI = ""
ROOT = pathlib.Path()


def run(*args, env=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=env, timeout=120)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        schemas = {}
        for path in (ROOT / "schemas").glob("*.schema.json"):
            doc = json.loads(path.read_text())
            schemas[path.name.removesuffix(".schema.json")] = doc
        cls.registry = Registry().with_resources(
            (doc["$id"], Resource.from_contents(doc)) for doc in schemas.values()
        )
        cls.schemas = schemas
        cls.data = ROOT / "data"
        cls.emb = ["--embeddings", cls.data / "embeddings" / "fixture-64d.txt"]
        cls.tmp = tempfile.TemporaryDirectory()
        cls.tmpdir = pathlib.Path(cls.tmp.name)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def validated(self, name, proc, code=0):
        self.assertEqual(proc.returncode, code, proc.stderr)
        doc = json.loads(proc.stdout)
        schema = self.schemas[name]
        jsonschema.Draft202012Validator(schema, registry=self.registry).validate(doc)
        return doc

    def test_parse(self):
        doc = self.validated("parse", run("parse", self.data / "kb" / "prison_proof.pl", "--json"))
        self.assertEqual(len(doc["rules"]), 7)
        self.validated("parse", run("parse", self.data / "principles.pl", "--json"))

    def test_prove(self):
        doc = self.validated("prove", run("prove", self.data / "kb" / "prison_proof.pl", *self.emb, "--json"))
        self.assertTrue(doc["proved"])
        self.assertEqual(doc["proof"]["violation"], "authority")
        self.assertTrue(doc["proof"]["rendered"].startswith("0.37383 violate_authority\n"))

    def test_prove_without_proof_exits_3(self):
        doc = self.validated("prove", run("prove", self.data / "kb" / "prison_proof.pl", "--json"), code=3)
        self.assertIsNone(doc["proof"])

    def test_verify(self):
        doc = self.validated("verify", run("verify", "--case", self.data / "cases" / "frog.case.json", *self.emb, "--json"))
        self.assertEqual(doc["outcome"], "ValidNonRedundant")

    def test_refine_replay_is_deterministic(self):
        args = ["refine", "--case", self.data / "cases" / "prison.case.json",
                "--mock", self.data / "transcripts" / "prison.transcript.json", *self.emb, "--json"]
        first = self.validated("refine", run(*args))
        second = run(*args)
        self.assertEqual(json.dumps(first, sort_keys=True), json.dumps(json.loads(second.stdout), sort_keys=True))
        kinds = [it["outcome"]["outcome"] for it in first["iterations"]]
        self.assertEqual(kinds, ["InvalidNoProof", "ValidRedundant", "ValidNonRedundant"])

    def test_corpus(self):
        manifest = self.tmpdir / "manifest.json"
        manifest.write_text(json.dumps({"cases": [
            {"path": str(self.data / "cases" / "frog.case.json"), "split": "easy"},
            {"path": str(self.data / "cases" / "prison.case.json"), "split": "hard"},
        ]}))
        doc = self.validated("corpus", run("corpus", "verify", "--manifest", manifest, *self.emb, "--jobs", 2, "--json"))
        self.assertEqual(doc["overall"]["overall"]["n"], 6)

    def test_bench(self):
        doc = self.validated("bench", run("bench", "--rules", 200, "--runs", 2, "--json"))
        self.assertEqual(len(doc["seconds"]), 2)

    def test_embeddings_cache(self):
        out = self.tmpdir / "fixture.spemb"
        doc = self.validated("embeddings", run("embeddings", "cache", self.data / "embeddings" / "fixture-64d.txt",
                                               "--out", out, "--json"))
        self.assertTrue(out.exists())
        self.assertEqual(doc["dimension"], 64)

    def test_input_errors_exit_1(self):
        bad = self.tmpdir / "bad.pl"
        bad.write_text("a(X) :- b(X)")
        proc = run("parse", bad)
        self.assertEqual(proc.returncode, 1)
        self.assertEqual(proc.stderr.strip(), f"{bad}:1:13: syntax error, expected ',' or '.'")
        bad_case = self.tmpdir / "bad.case.json"
        bad_case.write_text("{}")
        self.assertEqual(run("verify", "--case", bad_case).returncode, 1)

    def test_config_errors_exit_2(self):
        kb = self.data / "kb" / "prison_proof.pl"
        self.assertEqual(run("prove", kb, "--max-depth", 0).returncode, 2)
        self.assertEqual(run("prove", kb, "--no-such-flag").returncode, 2)
        self.assertEqual(run("prove", kb, "--config", self.tmpdir / "missing.conf").returncode, 2)
        self.assertEqual(run("refine", "--case", self.data / "cases" / "prison.case.json").returncode, 2)

    def test_client_errors_exit_4(self):
        transcript = self.tmpdir / "short.transcript.json"
        transcript.write_text(json.dumps([{"role": "semantic", "match": "", "response": "no format here"}]))
        proc = run("refine", "--case", self.data / "cases" / "prison.case.json", "--mock", transcript, *self.emb)
        self.assertEqual(proc.returncode, 4, proc.stderr)
        env = {"PATH": "/usr/bin:/bin", "SOFTPROVE_LLM_URL": "http://127.0.0.1:9/v1/chat/completions",
               "SOFTPROVE_TIMEOUT_MS": "2000"}
        proc = run("refine", "--case", self.data / "cases" / "prison.case.json", "--live", *self.emb, env=env)
        self.assertEqual(proc.returncode, 4, proc.stderr)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--root", required=True)
    args, rest = parser.parse_known_args()
    CLI = args.cli
    ROOT = pathlib.Path(args.root).resolve()
    unittest.main(argv=[sys.argv[0], *rest], verbosity=2)
