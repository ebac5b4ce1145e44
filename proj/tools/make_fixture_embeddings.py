#!/usr/bin/env python3
"""Generate the synthetic word-vector fixture used by the test suites.

The fixture is NOT GloVe. Each token is its own random direction plus a
weighted sum of shared concept directions, which gives a small, fully
reproducible vocabulary whose similarity structure is controlled. Tests that
need real GloVe vectors look for them separately.

Usage: make_fixture_embeddings.py [out_path] [--check]
"""

import sys

import numpy as np

DIM = 64
SEED = 20240617
PRIVATE_WEIGHT = 0.45

CONCEPTS = [
    "harm", "physical", "force", "press", "motion", "break", "animal",
    "amphibian", "human", "emotion", "authority", "defiance", "institution",
    "prison", "movement", "rules", "justice", "crime", "security", "procedure",
    "fairness", "group", "sanctity", "coercion", "power", "nature", "colour",
    "function", "violation", "family", "education", "law",
]

# token -> {concept: weight}; every token also gets a private random direction.
TOKENS = {
    # frog scenario
    "physical": {"physical": 1.5, "force": 0.4, "harm": 0.5},
    "harm": {"harm": 1.6, "physical": 0.5, "emotion": 0.2},
    "pushing": {"motion": 0.6, "force": 1.0, "physical": 0.9, "harm": 0.7},
    "force": {"force": 1.0, "physical": 0.9, "harm": 0.9},
    "compression": {"press": 0.9, "force": 0.7, "physical": 1.0, "harm": 0.8},
    "crush": {"press": 1.0, "break": 0.8, "harm": 1.1, "physical": 0.6},
    "frog": {"amphibian": 1.5, "animal": 1.2, "nature": 0.3},
    "animal": {"animal": 1.6, "nature": 0.3},
    "human": {"human": 1.6, "animal": 0.4},
    "emotional": {"emotion": 1.6, "human": 0.3},
    "sky": {"nature": 1.2, "colour": 0.3},
    "blue": {"colour": 1.4, "nature": 0.2},
    "is": {"function": 1.5},
    "the": {"function": 1.5},
    "i": {"function": 0.8, "human": 0.3},
    # principle library
    "violate": {"violation": 1.4, "rules": 0.3},
    "care": {"harm": 0.4, "emotion": 0.5, "human": 0.3},
    "fairness": {"fairness": 1.5},
    "cheating": {"fairness": 1.0, "crime": 0.4},
    "free": {"movement": 0.3, "fairness": 0.2},
    "riding": {"motion": 0.6, "fairness": 0.4},
    "reducing": {"force": 0.1, "fairness": 0.3},
    "equality": {"fairness": 1.3},
    "loyalty": {"group": 1.2, "family": 0.3},
    "threaten": {"harm": 0.4, "group": 0.4},
    "group": {"group": 1.5},
    "reputation": {"group": 0.8},
    "support": {"group": 0.4, "human": 0.2},
    "out": {"function": 0.6, "movement": 0.3},
    "member": {"group": 1.0},
    "family": {"family": 1.5, "group": 0.5},
    "country": {"group": 0.8, "law": 0.2},
    "sports": {"group": 0.6, "motion": 0.4},
    "team": {"group": 1.1},
    "school": {"education": 1.2, "group": 0.4, "institution": 0.3},
    "company": {"group": 0.7, "institution": 0.3},
    "authority": {"authority": 1.6, "power": 0.5},
    "disobedience": {"defiance": 1.6, "rules": 0.4},
    "disrespect": {"defiance": 1.2, "emotion": 0.4},
    "figure": {"human": 0.6, "authority": 0.2},
    "institution": {"institution": 1.6, "authority": 0.3},
    "boss": {"authority": 0.9, "power": 0.6, "human": 0.3},
    "judge": {"authority": 0.7, "justice": 0.9, "law": 0.5},
    "teacher": {"education": 1.2, "authority": 0.5},
    "parent": {"family": 1.2, "authority": 0.4},
    "courthouse": {"justice": 0.9, "law": 0.8, "institution": 0.6},
    "government": {"institution": 0.8, "authority": 0.8, "law": 0.4},
    "sanctity": {"sanctity": 1.5},
    "sexually": {"sanctity": 1.0},
    "deviant": {"sanctity": 0.8, "defiance": 0.2},
    "act": {"function": 0.5, "motion": 0.2},
    "degrading": {"sanctity": 1.0, "harm": 0.2},
    "disgusting": {"sanctity": 1.1},
    "liberty": {"coercion": 0.6, "movement": 0.6},
    "coercive": {"coercion": 1.5, "power": 0.4},
    "reduce": {"force": 0.1, "coercion": 0.3},
    "freedom": {"coercion": 0.7, "power": 0.5, "movement": 0.25},
    "control": {"coercion": 0.9, "power": 0.7},
    "person": {"human": 1.2},
    "in": {"function": 1.2},
    "power": {"power": 1.5, "authority": 0.4},
    "husband": {"family": 1.1, "human": 0.5},
    "social": {"group": 0.7, "human": 0.4},
    "leader": {"power": 0.9, "authority": 0.6},
    # prison scenario
    "leave": {"movement": 1.5, "motion": 0.5},
    "prison": {"prison": 1.7, "crime": 0.6, "security": 0.4},
    "checking": {"procedure": 0.9, "function": 0.3},
    "checkout": {"procedure": 1.3, "movement": 0.3},
    "safety": {"security": 1.3},
    "procedure": {"procedure": 1.6},
    "breach": {"defiance": 0.9, "rules": 0.8},
    "rules": {"rules": 1.6},
    "rehabilitate": {"crime": 0.5, "human": 0.5},
    "criminals": {"crime": 1.5},
    "detain": {"prison": 0.6, "coercion": 0.6},
    "inmates": {"prison": 0.9, "crime": 0.6, "human": 0.4},
    "authorities": {"authority": 1.3, "power": 0.3},
    "security": {"security": 1.5},
    "risk": {"security": 0.7, "harm": 0.4},
    "skip": {"movement": 0.4, "function": 0.3},
    "legal": {"law": 1.4},
    "consequences": {"law": 0.6, "harm": 0.3},
    "justice": {"justice": 1.5, "law": 0.7, "prison": 1.0},
    "system": {"institution": 0.7, "prison": 0.6, "function": 0.3},
}


def build():
    rng = np.random.default_rng(SEED)
    basis, _ = np.linalg.qr(rng.standard_normal((DIM, len(CONCEPTS))))
    concept_dirs = {c: basis[:, i] for i, c in enumerate(CONCEPTS)}
    vectors = {}
    for token in sorted(TOKENS):
        v = PRIVATE_WEIGHT * rng.standard_normal(DIM) / np.sqrt(DIM)
        for concept, weight in TOKENS[token].items():
            v = v + weight * concept_dirs[concept]
        vectors[token] = v.astype(np.float32)
    return vectors


def symbol(vectors, name):
    parts = [vectors[t].astype(np.float64) for t in name.split("_") if t in vectors]
    return np.mean(parts, axis=0) if parts else None


def cos(vectors, a, b):
    x, y = symbol(vectors, a), symbol(vectors, b)
    if x is None or y is None:
        return 0.0
    return max(0.0, float(x @ y / (np.linalg.norm(x) * np.linalg.norm(y))))


def check(vectors):
    pairs = [
        ("physical_harm", "pushing_force"),
        ("physical_harm", "compression"),
        ("physical_harm", "crush"),
        ("animal", "frog"),
        ("animal", "human"),
        ("leave_prison", "leave"),
        ("justice_system", "prison"),
        ("courthouse", "prison"),
        ("government", "prison"),
        ("disobedience", "breach_prison_rules"),
        ("disobedience", "leave"),
        ("disobedience", "authority_institution"),
        ("authority_institution", "justice_system"),
        ("violate_authority", "violate_liberty"),
        ("violate_care_physical", "violate_care_physical_human"),
        ("reduce_freedom", "leave"),
    ]
    for a, b in pairs:
        print(f"{a:28s} {b:28s} {cos(vectors, a, b):.4f}")


def main(argv):
    vectors = build()
    if "--check" in argv:
        check(vectors)
        return 0
    out = argv[1] if len(argv) > 1 else "data/embeddings/fixture-64d.txt"
    with open(out, "w", encoding="utf-8") as fh:
        for token, v in vectors.items():
            fh.write(token + " " + " ".join(f"{x:.6f}" for x in v) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
