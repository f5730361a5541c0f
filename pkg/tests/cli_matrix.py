"""Runs the command matrix of the acceptance drivers and prints every output.

Usage: ``python cli_matrix.py WORKDIR``. Prints one JSON object mapping a
command label to ``[exit code, stdout]``.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from clirun import run  # noqa: E402
from kql import serialize as ser  # noqa: E402
from kql.corpus import descent_pairs, stability_corpus  # noqa: E402

GROUPS = ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "E6", "E7", "E8"]


def matrix(workdir: Path) -> dict:
    out = {}

    def go(label, argv, stdin=""):
        code, text, _ = run(argv, stdin)
        out[label] = [code, text]
        return text

    for g in GROUPS:
        go(f"mckay {g}", ["mckay", "--group", g])
    go("mckay A3 framed", ["mckay", "--group", "A3", "--r", "2"])
    witnesses = {}
    for g in ("A2", "A3"):
        for n in (1, 2, 3):
            for r in (1, 2):
                argv = ["witness", "--group", g, "--n", str(n), "--r", str(r), "--seed", str(10 * n + r)]
                witnesses[(g, n, r)] = go(" ".join(argv), argv)
                go(f"check-module {g} {n} {r}", ["check-module"], witnesses[(g, n, r)])
                go(f"tangent-dim {g} {n} {r}", ["tangent-dim"], witnesses[(g, n, r)])
    for k, mod in enumerate(stability_corpus(count=12, seed=4)):
        text = ser.dumps(ser.module_json(mod))
        for theta in ("zero", "cplus", "I=0"):
            verdict = go(f"stability {k} {theta}", ["stability", "--theta", theta], text)
            if theta == "zero" and json.loads(verdict)["semistable"]:
                go(f"concentrate {k}", ["concentrate"], text)
        go(f"monad-check {k}", ["monad-check", "--seed", "3", "--samples", "40", "--infinity-samples", "8"], text)
    simple = json.dumps({"schema": "kql/1", "kind": "adhm", "group": "A3", "weights": [1, 2], "r": 0,
                         "B1": [["0", "0"], ["0", "0"]], "B2": [["0", "0"], ["0", "0"]], "i": [[], []], "j": []})
    go("monad-check simples", ["monad-check", "--samples", "50"], simple)
    for g, gens in (("A1", "x^2,x*y,y^3"), ("A2", "x^2,y"), ("A3", "x^3,x*y,y^3")):
        text = go(f"ideal2adhm {g}", ["ideal2adhm", "--group", g, "--generators", gens])
        go(f"adhm2ideal {g}", ["adhm2ideal"], text)
        go(f"support {g}", ["support"], text)
        go(f"descend {g}", ["descend", "--group", g, "--generators", gens])
    for k, (a, b) in enumerate(descent_pairs(count=4, seed=2)):
        pa, pb = workdir / f"a{k}.json", workdir / f"b{k}.json"
        pa.write_text(ser.dumps(ser.module_json(a)))
        pb.write_text(ser.dumps(ser.module_json(b)))
        go(f"requiv {k}", ["requiv", "--input", str(pa), "--input", str(pb), "--seed", "1"])
        go(f"descend pair {k}", ["descend", "--input", str(pb)])
        go(f"support pair {k}", ["support", "--input", str(pa)])
    return out


if __name__ == "__main__":
    sys.stdout.write(json.dumps(matrix(Path(sys.argv[1])), sort_keys=True))
