"""Regenerate the golden scoring requests and responses.

The requests reuse the bundled reference document (g5) so the strings look
exactly like what the relation classifier sends: a multi-section premise and
"X verb Y" hypotheses. The response triples are hand-picked dyadic floats,
so each one sums to exactly 1.0 and survives JSON round trips bit-for-bit.

Run from the repository root:

    python3 protocol/golden/make_golden.py
"""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

PREMISE = (
    "The cervical spine seems to be undamaged. The airbag deployed correctly."
    " The passenger walked away unaided. The collar can be removed safely."
    " We will sit him on the stretcher to be able to explore the cervical spine."
    "\nWhich immediate action is appropriate?"
    "\nField assessment found no midline tenderness and full rotation."
)

X_COLLAR = "The collar can be removed safely."
X_SPINE = "The cervical spine seems to be undamaged."
Y_MOBILISE = "Proceed with gentle mobilisation."
Y_IMMOBILISE = "Keep full spinal immobilisation until imaging."

ALL_VERBS = (
    "attack", "challenge", "contradict", "dispute", "refute",
    "support", "confirm", "corroborate", "endorse", "validate",
)


def hypothesis(x: str, verb: str, y: str) -> str:
    return f"{x} {verb} {y}"


def triple(entailment: float, neutral: float, contradiction: float) -> dict:
    total = entailment + neutral + contradiction
    assert total == 1.0, f"triple must sum to exactly 1, got {total!r}"
    return {"entailment": entailment, "neutral": neutral, "contradiction": contradiction}


BATCHES = {
    "batch01": {
        "hypotheses": [hypothesis(X_COLLAR, "support", Y_IMMOBILISE)],
        "scores": [triple(0.5, 0.25, 0.25)],
    },
    "batch02": {
        "hypotheses": [
            hypothesis(X_SPINE, "endorse", Y_MOBILISE),
            hypothesis(X_SPINE, "challenge", Y_IMMOBILISE),
        ],
        "scores": [triple(0.75, 0.125, 0.125), triple(0.0625, 0.4375, 0.5)],
    },
    "batch16": {
        # All ten verbalizations of one pair plus six of another; the score
        # triples are all distinct so order scrambling cannot go unnoticed.
        "hypotheses": [hypothesis(X_COLLAR, v, Y_IMMOBILISE) for v in ALL_VERBS]
        + [hypothesis(X_SPINE, v, Y_MOBILISE) for v in ALL_VERBS[:6]],
        "scores": [
            triple(k / 32, (32 - k) / 64, (32 - k) / 64) for k in range(1, 17)
        ],
    },
}


def main() -> None:
    for name, batch in BATCHES.items():
        assert len(batch["hypotheses"]) == len(batch["scores"])
        request = {"premise": PREMISE, "hypotheses": batch["hypotheses"]}
        response = {"scores": batch["scores"]}
        for kind, payload in (("request", request), ("response", response)):
            path = HERE / f"{kind}_{name}.json"
            path.write_text(
                json.dumps(payload, ensure_ascii=False, indent=2) + "\n",
                encoding="utf-8",
            )
            print(f"wrote {path.name}")


if __name__ == "__main__":
    main()
